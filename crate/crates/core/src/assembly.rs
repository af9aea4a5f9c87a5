//! P1 element matrices, global assembly and load vectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{assemble_from_triplets, SparseMatrix, TripletBuffer};
use crate::mesh::{signed_area, Mesh, Point};

/// Quadrature on a triangle in barycentric coordinates. Weights are
/// normalized to sum to one; they are scaled by the element area on use.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    points: Vec<([f64; 3], f64)>,
    degree: usize,
}

impl QuadratureRule {
    /// Edge-midpoint rule, exact for quadratics.
    pub fn edge_midpoints() -> Self {
        let w = 1.0 / 3.0;
        Self { points: vec![([0.5, 0.5, 0.0], w), ([0.0, 0.5, 0.5], w), ([0.5, 0.0, 0.5], w)], degree: 2 }
    }

    /// Seven-point Radon rule, exact for polynomials of degree five.
    pub fn radon7() -> Self {
        let s15 = libm::sqrt(15.0);
        let a1 = (6.0 - s15) / 21.0;
        let b1 = (9.0 + 2.0 * s15) / 21.0;
        let w1 = (155.0 - s15) / 1200.0;
        let a2 = (6.0 + s15) / 21.0;
        let b2 = (9.0 - 2.0 * s15) / 21.0;
        let w2 = (155.0 + s15) / 1200.0;
        let third = 1.0 / 3.0;
        Self {
            points: vec![
                ([third, third, third], 9.0 / 40.0),
                ([b1, a1, a1], w1),
                ([a1, b1, a1], w1),
                ([a1, a1, b1], w1),
                ([b2, a2, a2], w2),
                ([a2, b2, a2], w2),
                ([a2, a2, b2], w2),
            ],
            degree: 5,
        }
    }

    /// The rule for a supported exactness degree (2 or 5).
    pub fn with_degree(degree: usize) -> Result<Self> {
        match degree {
            2 => Ok(Self::edge_midpoints()),
            5 => Ok(Self::radon7()),
            _ => Err(Error::InvalidProblem("quadrature degree must be 2 or 5")),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn points(&self) -> &[([f64; 3], f64)] {
        &self.points
    }

    /// `∫_K f` over the triangle with the given corners.
    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, corners: [Point; 3], f: F) -> f64 {
        let area = signed_area(corners[0], corners[1], corners[2]).abs();
        area * self
            .points
            .iter()
            .map(|&(l, w)| {
                let [x, y] = barycentric_to_point(corners, l);
                w * f(x, y)
            })
            .sum::<f64>()
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::edge_midpoints()
    }
}

fn barycentric_to_point(c: [Point; 3], l: [f64; 3]) -> Point {
    [l[0] * c[0][0] + l[1] * c[1][0] + l[2] * c[2][0], l[0] * c[0][1] + l[1] * c[1][1] + l[2] * c[2][1]]
}

fn checked_area(v0: Point, v1: Point, v2: Point) -> Result<f64> {
    let area = signed_area(v0, v1, v2);
    let scale = [v0, v1, v2].iter().flat_map(|p| p.iter()).fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
    if area > 1e-14 * scale * scale {
        Ok(area)
    } else {
        Err(Error::DegenerateTriangle { area })
    }
}

/// Gradients of the barycentric coordinates times `2|K|`.
fn scaled_gradients(v: [Point; 3]) -> [[f64; 2]; 3] {
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        g[i] = [v[j][1] - v[k][1], v[k][0] - v[j][0]];
    }
    g
}

/// `∫_K ∇λ_i · ∇λ_j` for the three barycentric basis functions.
pub fn element_stiffness(v0: Point, v1: Point, v2: Point) -> Result<[[f64; 3]; 3]> {
    let area = checked_area(v0, v1, v2)?;
    Ok(stiffness_unchecked([v0, v1, v2], area))
}

fn stiffness_unchecked(v: [Point; 3], area: f64) -> [[f64; 3]; 3] {
    let g = scaled_gradients(v);
    let scale = 1.0 / (4.0 * area);
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = scale * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
        }
    }
    k
}

/// `∫_K λ_i λ_j = |K|/12 (1 + δ_ij)`.
pub fn element_mass(v0: Point, v1: Point, v2: Point) -> Result<[[f64; 3]; 3]> {
    let area = checked_area(v0, v1, v2)?;
    Ok(mass_unchecked(area))
}

fn mass_unchecked(area: f64) -> [[f64; 3]; 3] {
    let off = area / 12.0;
    let on = area / 6.0;
    [[on, off, off], [off, on, off], [off, off, on]]
}

fn scatter<F: Fn(usize) -> [[f64; 3]; 3]>(mesh: &Mesh, element: F) -> SparseMatrix {
    let mut buf = TripletBuffer::with_capacity(9 * mesh.num_triangles());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let local = element(t);
        for a in 0..3 {
            for b in 0..3 {
                buf.push(tri[a], tri[b], local[a][b]);
            }
        }
    }
    let n = mesh.num_vertices();
    assemble_from_triplets(&buf, n, n).expect("mesh indices in range")
}

/// Global stiffness matrix `K_ij = ⟨∇φ_j, ∇φ_i⟩_Ω`.
pub fn assemble_stiffness(mesh: &Mesh) -> SparseMatrix {
    scatter(mesh, |t| stiffness_unchecked(mesh.triangle_points(t), mesh.triangle_area(t)))
}

/// Global mass matrix `M_ij = ⟨φ_j, φ_i⟩_Ω`.
pub fn assemble_mass(mesh: &Mesh) -> SparseMatrix {
    scatter(mesh, |t| mass_unchecked(mesh.triangle_area(t)))
}

/// Load vector `b_i ≈ ∫_Ω g φ_i`, integrated triangle by triangle with `rule`.
pub fn assemble_load<F: Fn(f64, f64) -> f64>(mesh: &Mesh, g: F, rule: &QuadratureRule) -> Vec<f64> {
    let mut b = vec![0.0; mesh.num_vertices()];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let corners = mesh.triangle_points(t);
        let area = mesh.triangle_area(t);
        for &(l, w) in rule.points() {
            let [x, y] = barycentric_to_point(corners, l);
            let gw = area * w * g(x, y);
            for a in 0..3 {
                b[tri[a]] += gw * l[a];
            }
        }
    }
    b
}

/// 1D P1 mass matrix on the boundary edges, `(|E|/6) [[2, 1], [1, 2]]` per edge.
pub fn assemble_boundary_mass(mesh: &Mesh) -> SparseMatrix {
    let mut buf = TripletBuffer::with_capacity(4 * mesh.boundary_edges().len());
    for &[a, b] in mesh.boundary_edges() {
        let (pa, pb) = (mesh.vertices()[a], mesh.vertices()[b]);
        let len = libm::hypot(pb[0] - pa[0], pb[1] - pa[1]);
        buf.extend([(a, a, len / 3.0), (b, b, len / 3.0), (a, b, len / 6.0), (b, a, len / 6.0)]);
    }
    let n = mesh.num_vertices();
    assemble_from_triplets(&buf, n, n).expect("mesh indices in range")
}

/// A member of `S¹(T_h)`: one nodal value per vertex of `mesh`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeFunction<'m> {
    mesh: &'m Mesh,
    coefficients: Vec<f64>,
}

impl<'m> FeFunction<'m> {
    pub fn new(mesh: &'m Mesh, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != mesh.num_vertices() {
            return Err(Error::DimensionMismatch { expected: mesh.num_vertices(), found: coefficients.len() });
        }
        Ok(Self { mesh, coefficients })
    }

    pub fn zero(mesh: &'m Mesh) -> Self {
        Self::constant(mesh, 0.0)
    }

    pub fn constant(mesh: &'m Mesh, c: f64) -> Self {
        Self { mesh, coefficients: vec![c; mesh.num_vertices()] }
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate<F: Fn(f64, f64) -> f64>(mesh: &'m Mesh, f: F) -> Self {
        let coefficients = mesh.vertices().iter().map(|p| f(p[0], p[1])).collect();
        Self { mesh, coefficients }
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.coefficients
    }

    /// Boundary values ordered like `mesh.boundary_nodes()`.
    pub fn boundary_values(&self) -> Vec<f64> {
        self.mesh.boundary_nodes().iter().map(|&i| self.coefficients[i]).collect()
    }

    /// Point evaluation; `None` outside the mesh. Scans all triangles.
    pub fn evaluate(&self, x: f64, y: f64) -> Option<f64> {
        const SLACK: f64 = 1e-12;
        for (t, tri) in self.mesh.triangles().iter().enumerate() {
            let [a, b, c] = self.mesh.triangle_points(t);
            let area = signed_area(a, b, c);
            let l0 = signed_area([x, y], b, c) / area;
            let l1 = signed_area(a, [x, y], c) / area;
            let l2 = 1.0 - l0 - l1;
            if l0 >= -SLACK && l1 >= -SLACK && l2 >= -SLACK {
                let u = &self.coefficients;
                return Some(l0 * u[tri[0]] + l1 * u[tri[1]] + l2 * u[tri[2]]);
            }
        }
        None
    }

    pub fn min_value(&self) -> f64 {
        self.coefficients.iter().copied().fold(f64::INFINITY, f64::min)
    }
}
