//! Error norms on nested meshes and convergence rate fits.

use alloc::vec::Vec;

use crate::assembly::{assemble_boundary_mass, FeFunction};
use crate::control::Operators;
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::mesh::Mesh;

/// Squared errors below this are treated as exact zeros and left out of
/// rate fits.
pub const ZERO_ERROR_SQ: f64 = 1e-28;

/// Interpolates a coarse P1 function onto a finer mesh of the same hierarchy.
/// Parent vertices keep their values, midpoints take the mean of their edge.
pub fn prolongate<'f>(coarse: &FeFunction<'_>, fine: &'f Mesh) -> Result<FeFunction<'f>> {
    let coarse_mesh = coarse.mesh();
    if !fine.refines(coarse_mesh) {
        return Err(Error::NotNested);
    }
    let mut values = Vec::with_capacity(fine.num_vertices());
    values.extend_from_slice(coarse.coefficients());
    for v in coarse_mesh.num_vertices()..fine.num_vertices() {
        let [a, b] = fine.midpoint_parents(v).ok_or(Error::NotNested)?;
        values.push(0.5 * (values[a] + values[b]));
    }
    FeFunction::new(fine, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorNorms {
    pub l2_sq: f64,
    /// Full norm: `‖e‖²_{L₂(Ω)} + ‖∇e‖²_{L₂(Ω)}`.
    pub h1_sq: f64,
    pub l2_boundary_sq: f64,
}

/// Mass, stiffness and boundary mass of one mesh, for repeated error evaluation.
#[derive(Debug, Clone)]
pub struct NormMatrices {
    pub mass: SparseMatrix,
    pub stiffness: SparseMatrix,
    pub boundary_mass: SparseMatrix,
}

impl NormMatrices {
    pub fn new(mesh: &Mesh) -> Self {
        let Operators { mass, stiffness } = Operators::new(mesh);
        Self { mass, stiffness, boundary_mass: assemble_boundary_mass(mesh) }
    }

    pub fn norms(&self, e: &[f64]) -> ErrorNorms {
        let l2_sq = self.mass.quadratic_form(e);
        ErrorNorms {
            l2_sq,
            h1_sq: l2_sq + self.stiffness.quadratic_form(e),
            l2_boundary_sq: self.boundary_mass.quadratic_form(e),
        }
    }

    pub fn errors(&self, u_ref: &FeFunction<'_>, u: &FeFunction<'_>) -> Result<ErrorNorms> {
        if u_ref.mesh() != u.mesh() {
            return Err(Error::MeshMismatch);
        }
        let e: Vec<f64> = u_ref.coefficients().iter().zip(u.coefficients()).map(|(a, b)| a - b).collect();
        Ok(self.norms(&e))
    }
}

/// Squared `L₂(Ω)`, `H¹(Ω)` and `L₂(Γ)` norms of `u_ref − u`. Both functions
/// must live on the same mesh.
pub fn energy_errors(u_ref: &FeFunction<'_>, u: &FeFunction<'_>) -> Result<ErrorNorms> {
    if u_ref.mesh() != u.mesh() {
        return Err(Error::MeshMismatch);
    }
    NormMatrices::new(u.mesh()).errors(u_ref, u)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub level: usize,
    pub num_elements: usize,
    pub mesh_size: f64,
    pub err_h1_sq: f64,
    pub err_l2_sq: f64,
    pub err_l2_boundary_sq: f64,
}

impl ConvergenceRecord {
    pub fn new(mesh: &Mesh, errors: ErrorNorms) -> Self {
        Self {
            level: mesh.level(),
            num_elements: mesh.num_triangles(),
            mesh_size: mesh.mesh_size(),
            err_h1_sq: errors.h1_sq,
            err_l2_sq: errors.l2_sq,
            err_l2_boundary_sq: errors.l2_boundary_sq,
        }
    }

    pub fn get(&self, field: RateField) -> f64 {
        match field {
            RateField::H1 => self.err_h1_sq,
            RateField::L2 => self.err_l2_sq,
            RateField::L2Boundary => self.err_l2_boundary_sq,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateField {
    H1,
    L2,
    L2Boundary,
}

impl RateField {
    pub const ALL: [RateField; 3] = [RateField::H1, RateField::L2, RateField::L2Boundary];
}

/// Number of trailing levels used by [`fit_rate`].
pub const RATE_WINDOW: usize = 3;

/// Least-squares slope of `log(err²)` against `log(N)` over the last three
/// records with nonzero error.
pub fn fit_rate(records: &[ConvergenceRecord], field: RateField) -> Result<f64> {
    if records.windows(2).any(|w| w[1].num_elements <= w[0].num_elements) {
        return Err(Error::InvalidProblem("records must have strictly increasing element counts"));
    }
    let usable: Vec<&ConvergenceRecord> = records.iter().filter(|r| r.get(field) > ZERO_ERROR_SQ).collect();
    let skipped = records.len() - usable.len();
    if skipped > 0 {
        log::warn!("{skipped} record(s) with zero {field:?} error left out of the rate fit");
    }
    if usable.len() < RATE_WINDOW {
        return Err(Error::TooFewRecords { needed: RATE_WINDOW, found: usable.len() });
    }
    let tail = &usable[usable.len() - RATE_WINDOW..];
    let xs: Vec<f64> = tail.iter().map(|r| libm::log(r.num_elements as f64)).collect();
    let ys: Vec<f64> = tail.iter().map(|r| libm::log(r.get(field))).collect();
    Ok(least_squares_slope(&xs, &ys))
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{hierarchy, unit_square_mesh};

    fn synthetic(power: f64) -> Vec<ConvergenceRecord> {
        (0..5)
            .map(|l| {
                let n = 8usize << (2 * l);
                let e = 3.7 * libm::pow(n as f64, -power);
                ConvergenceRecord {
                    level: l,
                    num_elements: n,
                    mesh_size: 1.0,
                    err_h1_sq: e,
                    err_l2_sq: e * e,
                    err_l2_boundary_sq: e,
                }
            })
            .collect()
    }

    #[test]
    fn exact_power_laws() {
        let records = synthetic(1.0);
        assert!((fit_rate(&records, RateField::H1).unwrap() + 1.0).abs() < 1e-12);
        assert!((fit_rate(&records, RateField::L2).unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_errors_are_skipped() {
        let mut records = synthetic(1.5);
        records[4].err_h1_sq = 0.0;
        assert!((fit_rate(&records, RateField::H1).unwrap() + 1.5).abs() < 1e-12);
        records[3].err_h1_sq = 0.0;
        records[2].err_h1_sq = 0.0;
        assert_eq!(fit_rate(&records, RateField::H1), Err(Error::TooFewRecords { needed: 3, found: 2 }));
    }

    #[test]
    fn too_few_records() {
        let records = synthetic(1.0);
        assert!(fit_rate(&records[..2], RateField::L2).is_err());
        let mut swapped = records.clone();
        swapped.swap(0, 1);
        assert!(fit_rate(&swapped, RateField::L2).is_err());
    }

    #[test]
    fn constant_prolongs_to_constant() {
        let meshes = hierarchy(2, 2).unwrap();
        let c = FeFunction::constant(&meshes[0], 0.7);
        let p = prolongate(&c, &meshes[2]).unwrap();
        assert!(p.coefficients().iter().all(|&v| v == 0.7));
    }

    #[test]
    fn non_nested_pair_rejected() {
        let meshes = hierarchy(2, 1).unwrap();
        let other = unit_square_mesh(3).unwrap();
        let f = FeFunction::zero(&other);
        assert_eq!(prolongate(&f, &meshes[1]), Err(Error::NotNested));
        let fine = FeFunction::zero(&meshes[1]);
        assert_eq!(prolongate(&fine, &meshes[0]), Err(Error::NotNested));
    }

    #[test]
    fn norms_of_constant_one() {
        let mesh = unit_square_mesh(3).unwrap();
        let one = FeFunction::constant(&mesh, 1.0);
        let zero = FeFunction::zero(&mesh);
        let e = energy_errors(&one, &zero).unwrap();
        assert!((e.l2_sq - 1.0).abs() < 1e-13);
        assert!((e.h1_sq - 1.0).abs() < 1e-13);
        assert!((e.l2_boundary_sq - 4.0).abs() < 1e-13);
        assert_eq!(energy_errors(&zero, &zero).unwrap(), ErrorNorms::default());
        let other = unit_square_mesh(2).unwrap();
        assert_eq!(energy_errors(&one, &FeFunction::zero(&other)), Err(Error::MeshMismatch));
    }
}
