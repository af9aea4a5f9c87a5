//! Discrete harmonic extension of boundary data.
//!
//! `E_h q` keeps the boundary coefficients `q` and chooses the interior
//! coefficients so that `⟨∇E_h q, ∇v⟩ = 0` for every `v` in `S¹₀`, i.e.
//! `K_II u_I = −K_IB q`.

use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::{assemble_stiffness, FeFunction};
use crate::error::{Error, Result};
use crate::linalg::{solve_spd, SparseMatrix};
use crate::mesh::Mesh;

/// Boundary nodal values, ordered like `mesh.boundary_nodes()`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceVector<'m> {
    mesh: &'m Mesh,
    values: Vec<f64>,
}

impl<'m> TraceVector<'m> {
    pub fn new(mesh: &'m Mesh, values: Vec<f64>) -> Result<Self> {
        let expected = mesh.boundary_nodes().len();
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: values.len() });
        }
        Ok(Self { mesh, values })
    }

    pub fn from_function<F: Fn(f64, f64) -> f64>(mesh: &'m Mesh, g: F) -> Self {
        let values = mesh
            .boundary_nodes()
            .iter()
            .map(|&i| {
                let [x, y] = mesh.vertices()[i];
                g(x, y)
            })
            .collect();
        Self { mesh, values }
    }

    /// The trace `γ u_h` of a finite element function.
    pub fn of(u: &FeFunction<'m>) -> Self {
        Self { mesh: u.mesh(), values: u.boundary_values() }
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Reusable `E_h` for one mesh: holds the `K_II` and `K_IB` blocks.
#[derive(Debug, Clone)]
pub struct HarmonicExtension<'m> {
    mesh: &'m Mesh,
    k_ii: SparseMatrix,
    k_ib: SparseMatrix,
}

impl<'m> HarmonicExtension<'m> {
    pub fn new(mesh: &'m Mesh) -> Self {
        Self::with_stiffness(mesh, &assemble_stiffness(mesh))
    }

    pub fn with_stiffness(mesh: &'m Mesh, stiffness: &SparseMatrix) -> Self {
        let k_ii = stiffness.submatrix(mesh.interior_nodes(), mesh.interior_nodes());
        let k_ib = stiffness.submatrix(mesh.interior_nodes(), mesh.boundary_nodes());
        Self { mesh, k_ii, k_ib }
    }

    pub fn extend(&self, q: &TraceVector<'_>) -> Result<FeFunction<'m>> {
        if !core::ptr::eq(q.mesh, self.mesh) && q.mesh != self.mesh {
            return Err(Error::MeshMismatch);
        }
        self.extend_values(q.values())
    }

    /// Extension of raw boundary values (ordered like `boundary_nodes()`).
    pub fn extend_values(&self, q: &[f64]) -> Result<FeFunction<'m>> {
        let mesh = self.mesh;
        if q.len() != mesh.boundary_nodes().len() {
            return Err(Error::DimensionMismatch { expected: mesh.boundary_nodes().len(), found: q.len() });
        }
        let mut coefficients = vec![0.0; mesh.num_vertices()];
        for (&i, &v) in mesh.boundary_nodes().iter().zip(q) {
            coefficients[i] = v;
        }
        if !mesh.interior_nodes().is_empty() {
            let rhs: Vec<f64> = self.k_ib.mul_vec(q).into_iter().map(|v| -v).collect();
            let interior =
                if rhs.iter().all(|&v| v == 0.0) { vec![0.0; rhs.len()] } else { solve_spd(&self.k_ii, &rhs)? };
            for (&i, v) in mesh.interior_nodes().iter().zip(interior) {
                coefficients[i] = v;
            }
        }
        FeFunction::new(mesh, coefficients)
    }
}

/// `E_h q`: the discrete harmonic function with boundary values `q`.
pub fn discrete_harmonic_extension<'m>(mesh: &'m Mesh, q: &TraceVector<'_>) -> Result<FeFunction<'m>> {
    HarmonicExtension::new(mesh).extend(q)
}

/// Largest `|(K u)_i|` over interior nodes `i`: zero for discrete harmonic `u`.
pub fn harmonicity_residual(stiffness: &SparseMatrix, mesh: &Mesh, u: &[f64]) -> f64 {
    mesh.interior_nodes()
        .iter()
        .map(|&i| stiffness.row(i).map(|(j, v)| v * u[j]).sum::<f64>().abs())
        .fold(0.0, f64::max)
}
