//! Text formats: the convergence table (CSV) and the debugging mesh dump.

use std::io::{self, Write};

use dbc_core::{ConvergenceRecord, FeFunction, Mesh};

use crate::experiments::Rates;

pub const CSV_HEADER: &str = "level,num_elements,mesh_size,err_h1_sq,err_l2_sq,err_l2_boundary_sq";

/// 16 significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.15e}")
}

/// Writes the convergence table followed by the rate footer.
pub fn write_csv<W: Write>(mut w: W, records: &[ConvergenceRecord], rates: &Rates) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.level,
            r.num_elements,
            format_float(r.mesh_size),
            format_float(r.err_h1_sq),
            format_float(r.err_l2_sq),
            format_float(r.err_l2_boundary_sq)
        )?;
    }
    writeln!(
        w,
        "# rate_h1_sq={} rate_l2_sq={} rate_l2_boundary_sq={}",
        format_float(rates.h1_sq),
        format_float(rates.l2_sq),
        format_float(rates.l2_boundary_sq)
    )
}

/// Parses a table written by [`write_csv`]. Returns the records and the rate footer.
pub fn read_csv(text: &str) -> Result<(Vec<ConvergenceRecord>, Rates), String> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err("missing header".into());
    }
    let mut records = Vec::new();
    let mut rates = None;
    for line in lines {
        if let Some(footer) = line.strip_prefix("# ") {
            let mut values = [f64::NAN; 3];
            for (slot, (part, key)) in
                values.iter_mut().zip(footer.split(' ').zip(["rate_h1_sq", "rate_l2_sq", "rate_l2_boundary_sq"]))
            {
                let v = part.strip_prefix(key).and_then(|p| p.strip_prefix('=')).ok_or("malformed footer")?;
                *slot = v.parse().map_err(|e| format!("{e}"))?;
            }
            rates = Some(Rates { h1_sq: values[0], l2_sq: values[1], l2_boundary_sq: values[2] });
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(format!("expected 6 fields in {line:?}"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{e} in {s:?}"));
        records.push(ConvergenceRecord {
            level: f[0].parse().map_err(|e| format!("{e}"))?,
            num_elements: f[1].parse().map_err(|e| format!("{e}"))?,
            mesh_size: num(f[2])?,
            err_h1_sq: num(f[3])?,
            err_l2_sq: num(f[4])?,
            err_l2_boundary_sq: num(f[5])?,
        });
    }
    Ok((records, rates.ok_or("missing rate footer")?))
}

/// Plain mesh dump: `V T`, then `x y` per vertex, then `i j k` per triangle.
pub fn write_mesh<W: Write>(mut w: W, mesh: &Mesh) -> io::Result<()> {
    writeln!(w, "{} {}", mesh.num_vertices(), mesh.num_triangles())?;
    for [x, y] in mesh.vertices() {
        writeln!(w, "{} {}", format_float(*x), format_float(*y))?;
    }
    for [i, j, k] in mesh.triangles() {
        writeln!(w, "{i} {j} {k}")?;
    }
    Ok(())
}

/// Mesh dump with one extra column of nodal values on every vertex line.
pub fn write_mesh_with_values<W: Write>(mut w: W, u: &FeFunction<'_>) -> io::Result<()> {
    let mesh = u.mesh();
    writeln!(w, "{} {}", mesh.num_vertices(), mesh.num_triangles())?;
    for ([x, y], v) in mesh.vertices().iter().zip(u.coefficients()) {
        writeln!(w, "{} {} {}", format_float(*x), format_float(*y), format_float(*v))?;
    }
    for [i, j, k] in mesh.triangles() {
        writeln!(w, "{i} {j} {k}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use dbc_core::mesh::unit_square_mesh;

    #[test]
    fn sixteen_significant_digits() {
        assert_eq!(format_float(0.1), "1.000000000000000e-1");
        assert_eq!(format_float(1.0 / 3.0), "3.333333333333333e-1");
        assert_eq!(format_float(1234.5), "1.234500000000000e3");
    }

    #[test]
    fn mesh_dump_layout() {
        let mesh = unit_square_mesh(1).unwrap();
        let mut out = Vec::new();
        write_mesh(&mut out, &mesh).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 4 + 2);
        assert_eq!(lines[0], "4 2");
        assert_eq!(lines[5], "0 1 3");
        assert!(!text.contains('\r'));
    }
}
