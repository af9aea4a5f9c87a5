//! The unconstrained discrete control problem.
//!
//! Find `(u_h, φ_h) ∈ S¹ × S¹₀` with
//!
//! ```text
//! (λ+1)⟨u_h, v⟩ + λ⟨∇u_h, ∇v⟩ + ⟨∇φ_h, ∇v⟩ = ⟨u_d, v⟩   for all v ∈ S¹
//!                                ⟨∇u_h, ∇ψ⟩ = 0          for all ψ ∈ S¹₀
//! ```
//!
//! In matrix form, with `A = (λ+1) M + λ K` and `B = K[interior, :]`, this is
//! the symmetric indefinite system `[[A, Bᵀ], [B, 0]] [u; φ_I] = [b; 0]`.
//! Only interior multiplier rows appear, so the system has `n + n_I` unknowns.
//!
//! [`solve_reduced`] solves the same problem over the span of the discrete
//! harmonic extensions of the boundary hat functions. It is dense in the
//! number of boundary nodes and serves as an independent check.

use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::{assemble_load, assemble_mass, assemble_stiffness, FeFunction, QuadratureRule};
use crate::error::{Error, Result};
use crate::harmonic::{harmonicity_residual, HarmonicExtension};
use crate::linalg::{
    assemble_from_triplets, relative_residual, solve_spd, solve_symmetric_indefinite, DenseCholesky, SparseMatrix,
    TripletBuffer,
};
use crate::mesh::Mesh;

#[derive(Debug, Clone, PartialEq)]
pub struct ControlProblem<'m> {
    mesh: &'m Mesh,
    lambda: f64,
    /// `⟨u_d, φ_i⟩` for every vertex.
    load: Vec<f64>,
    lower: Option<f64>,
    upper: Option<f64>,
}

impl<'m> ControlProblem<'m> {
    pub fn new(mesh: &'m Mesh, lambda: f64, load: Vec<f64>) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidProblem("regularization weight must be positive and finite"));
        }
        if load.len() != mesh.num_vertices() {
            return Err(Error::DimensionMismatch { expected: mesh.num_vertices(), found: load.len() });
        }
        Ok(Self { mesh, lambda, load, lower: None, upper: None })
    }

    /// Problem with desired state `u_d`, integrated with `rule`.
    pub fn from_desired_state<F: Fn(f64, f64) -> f64>(
        mesh: &'m Mesh,
        lambda: f64,
        u_d: F,
        rule: &QuadratureRule,
    ) -> Result<Self> {
        Self::new(mesh, lambda, assemble_load(mesh, u_d, rule))
    }

    /// Adds control bounds `lower ≤ g ≤ upper` (nodewise on Γ).
    pub fn with_bounds(mut self, lower: Option<f64>, upper: Option<f64>) -> Result<Self> {
        if lower.is_some_and(f64::is_nan) || upper.is_some_and(f64::is_nan) {
            return Err(Error::InvalidProblem("bounds must not be NaN"));
        }
        if let (Some(a), Some(b)) = (lower, upper) {
            if a > b {
                return Err(Error::InvalidProblem("lower bound exceeds upper bound"));
            }
        }
        self.lower = lower;
        self.upper = upper;
        Ok(self)
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn load(&self) -> &[f64] {
        &self.load
    }

    pub fn lower(&self) -> Option<f64> {
        self.lower
    }

    pub fn upper(&self) -> Option<f64> {
        self.upper
    }

    pub fn is_constrained(&self) -> bool {
        self.lower.is_some() || self.upper.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveDiagnostics {
    /// Relative residual of the last saddle-point solve.
    pub relative_residual: f64,
    /// Largest interior row of `K u_h`.
    pub harmonicity_residual: f64,
    /// Number of saddle-point systems solved.
    pub linear_solves: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlSolution<'m> {
    /// The state `u_h`; its trace is the control.
    pub state: FeFunction<'m>,
    /// The multiplier `φ_h ∈ S¹₀`.
    pub multiplier: FeFunction<'m>,
    pub diagnostics: SolveDiagnostics,
}

impl ControlSolution<'_> {
    pub fn control(&self) -> Vec<f64> {
        self.state.boundary_values()
    }
}

/// Mass and stiffness matrices of one mesh.
#[derive(Debug, Clone)]
pub struct Operators {
    pub mass: SparseMatrix,
    pub stiffness: SparseMatrix,
}

impl Operators {
    pub fn new(mesh: &Mesh) -> Self {
        Self { mass: assemble_mass(mesh), stiffness: assemble_stiffness(mesh) }
    }

    /// `A = (λ+1) M + λ K`.
    pub fn energy(&self, lambda: f64) -> SparseMatrix {
        self.mass.linear_combination(lambda + 1.0, &self.stiffness, lambda)
    }
}

/// Saddle-point solver for one problem, optionally with some boundary
/// coefficients pinned to prescribed values.
#[derive(Debug, Clone)]
pub struct SaddleSolver<'p, 'm> {
    problem: &'p ControlProblem<'m>,
    operators: Operators,
    energy: SparseMatrix,
}

impl<'p, 'm> SaddleSolver<'p, 'm> {
    pub fn new(problem: &'p ControlProblem<'m>) -> Self {
        Self::with_operators(problem, Operators::new(problem.mesh))
    }

    pub fn with_operators(problem: &'p ControlProblem<'m>, operators: Operators) -> Self {
        let energy = operators.energy(problem.lambda);
        Self { problem, operators, energy }
    }

    pub fn operators(&self) -> &Operators {
        &self.operators
    }

    pub fn energy(&self) -> &SparseMatrix {
        &self.energy
    }

    /// Solves the saddle-point system with `u[v] = value` for each `(v, value)`
    /// in `pinned` and the corresponding test functions removed.
    pub fn solve(&self, pinned: &[(usize, f64)]) -> Result<ControlSolution<'m>> {
        let mesh = self.problem.mesh;
        let n = mesh.num_vertices();
        let interior = mesh.interior_nodes();
        let k = &self.operators.stiffness;

        let mut fixed: Vec<Option<f64>> = vec![None; n];
        for &(v, value) in pinned {
            fixed[v] = Some(value);
        }
        let mut free_index = vec![usize::MAX; n];
        let mut free = Vec::with_capacity(n);
        for v in 0..n {
            if fixed[v].is_none() {
                free_index[v] = free.len();
                free.push(v);
            }
        }
        let nf = free.len();
        let dim = nf + interior.len();

        let mut buf = TripletBuffer::with_capacity(self.energy.nnz() + 2 * k.nnz());
        let mut rhs = vec![0.0; dim];
        for (r, &v) in free.iter().enumerate() {
            rhs[r] = self.problem.load[v];
            for (w, a) in self.energy.row(v) {
                match fixed[w] {
                    None => buf.push(r, free_index[w], a),
                    Some(g) => rhs[r] -= a * g,
                }
            }
        }
        for (m, &i) in interior.iter().enumerate() {
            let row = nf + m;
            for (w, kv) in k.row(i) {
                match fixed[w] {
                    None => {
                        buf.push(row, free_index[w], kv);
                        buf.push(free_index[w], row, kv);
                    }
                    Some(g) => rhs[row] -= kv * g,
                }
            }
        }
        let system = assemble_from_triplets(&buf, dim, dim)?;
        let x = if rhs.iter().all(|&v| v == 0.0) { vec![0.0; dim] } else { solve_symmetric_indefinite(&system, &rhs)? };

        let mut u = vec![0.0; n];
        for v in 0..n {
            u[v] = match fixed[v] {
                Some(g) => g,
                None => x[free_index[v]],
            };
        }
        let mut phi = vec![0.0; n];
        for (m, &i) in interior.iter().enumerate() {
            phi[i] = x[nf + m];
        }
        let diagnostics = SolveDiagnostics {
            relative_residual: relative_residual(&system, &x, &rhs),
            harmonicity_residual: harmonicity_residual(k, mesh, &u),
            linear_solves: 1,
        };
        Ok(ControlSolution { state: FeFunction::new(mesh, u)?, multiplier: FeFunction::new(mesh, phi)?, diagnostics })
    }

    /// `A u + K φ − b`, the gradient of the first block row.
    pub fn stationarity(&self, u: &[f64], phi: &[f64]) -> Vec<f64> {
        let au = self.energy.mul_vec(u);
        let kphi = self.operators.stiffness.mul_vec(phi);
        au.iter().zip(&kphi).zip(&self.problem.load).map(|((a, k), b)| a + k - b).collect()
    }
}

/// Solves the saddle-point system of an unconstrained problem.
pub fn solve_unconstrained<'m>(problem: &ControlProblem<'m>) -> Result<ControlSolution<'m>> {
    if problem.is_constrained() {
        return Err(Error::InvalidProblem("bounded problems need the active set solver"));
    }
    SaddleSolver::new(problem).solve(&[])
}

/// Solves `b(u, ψ) = ⟨u_d, ψ⟩` over the discrete harmonic functions by
/// assembling the dense reduced operator `Eᵀ A E` in the basis of harmonic
/// extensions of boundary hat functions.
pub fn solve_reduced<'m>(problem: &ControlProblem<'m>) -> Result<FeFunction<'m>> {
    let mesh = problem.mesh;
    let operators = Operators::new(mesh);
    let energy = operators.energy(problem.lambda);
    let (reduced, rhs, _) = reduced_system(mesh, &operators, &energy, &problem.load)?;
    let nb = rhs.len();
    let g = DenseCholesky::factor(&reduced, nb)?.solve(&rhs);
    HarmonicExtension::with_stiffness(mesh, &operators.stiffness).extend_values(&g)
}

/// Dense reduced operator (row-major), reduced right-hand side and basis columns.
pub type ReducedSystem = (Vec<f64>, Vec<f64>, Vec<Vec<f64>>);

/// The dense reduced operator `Eᵀ A E` (row-major, boundary-node sized), the
/// reduced right-hand side `Eᵀ b`, and the basis columns `E e_j`.
pub fn reduced_system(
    mesh: &Mesh,
    operators: &Operators,
    energy: &SparseMatrix,
    load: &[f64],
) -> Result<ReducedSystem> {
    let ext = HarmonicExtension::with_stiffness(mesh, &operators.stiffness);
    let nb = mesh.boundary_nodes().len();
    let mut basis = Vec::with_capacity(nb);
    let mut unit = vec![0.0; nb];
    for j in 0..nb {
        unit[j] = 1.0;
        basis.push(ext.extend_values(&unit)?.into_coefficients());
        unit[j] = 0.0;
    }
    let applied: Vec<Vec<f64>> = basis.iter().map(|e| energy.mul_vec(e)).collect();
    let mut reduced = vec![0.0; nb * nb];
    for i in 0..nb {
        for j in 0..nb {
            reduced[i * nb + j] = crate::linalg::dot(&basis[i], &applied[j]);
        }
    }
    let rhs = basis.iter().map(|e| crate::linalg::dot(e, load)).collect();
    Ok((reduced, rhs, basis))
}

/// Returns the load vector of `ũ_d − u_f`, where `u_f ∈ S¹₀` is the discrete
/// solution of `−Δu_f = f` with homogeneous Dirichlet data.
pub fn homogenize<F, G>(mesh: &Mesh, f: F, u_d_tilde: G, rule: &QuadratureRule) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> f64,
    G: Fn(f64, f64) -> f64,
{
    let u_f = particular_solution(mesh, &assemble_load(mesh, f, rule))?;
    let mass = assemble_mass(mesh);
    let m_uf = mass.mul_vec(&u_f);
    let load = assemble_load(mesh, u_d_tilde, rule);
    Ok(load.iter().zip(&m_uf).map(|(b, m)| b - m).collect())
}

/// Coefficients of `u_f ∈ S¹₀` with `⟨∇u_f, ∇v⟩ = ⟨f_load, v⟩` for all `v ∈ S¹₀`.
pub fn particular_solution(mesh: &Mesh, f_load: &[f64]) -> Result<Vec<f64>> {
    let n = mesh.num_vertices();
    if f_load.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f_load.len() });
    }
    let mut u = vec![0.0; n];
    let interior = mesh.interior_nodes();
    if interior.is_empty() {
        return Ok(u);
    }
    let rhs: Vec<f64> = interior.iter().map(|&i| f_load[i]).collect();
    if rhs.iter().all(|&v| v == 0.0) {
        return Ok(u);
    }
    let k_ii = assemble_stiffness(mesh).submatrix(interior, interior);
    for (&i, v) in interior.iter().zip(solve_spd(&k_ii, &rhs)?) {
        u[i] = v;
    }
    Ok(u)
}

/// `½ wᵀ A w − bᵀ w`: the cost `½‖w − u_d‖² + (λ/2)‖w‖²_{H¹}` up to the
/// constant `½‖u_d‖²`.
pub fn cost(energy: &SparseMatrix, load: &[f64], w: &[f64]) -> f64 {
    0.5 * energy.quadratic_form(w) - crate::linalg::dot(load, w)
}
