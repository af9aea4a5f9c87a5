//! Primal-dual active set iteration for box constraints on the control.
//!
//! Bounds act nodewise on the boundary coefficients. For constant bounds
//! and P1 traces this is the same as the bound almost everywhere on Γ.
//!
//! Sign convention: the multiplier `μ` of a boundary node is the residual
//! `(A u + K φ − b)_i` of its stationarity row. At a solution `μ ≥ 0` where
//! the lower bound is active, `μ ≤ 0` where the upper bound is active and
//! `μ = 0` elsewhere.

use alloc::vec;
use alloc::vec::Vec;

use crate::control::{ControlProblem, ControlSolution, Operators, SaddleSolver};
use crate::error::{Error, Result};

/// Weight of the primal term in the active set prediction.
pub const COMPLEMENTARITY_SCALE: f64 = 1.0;
pub const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeStatus {
    Inactive,
    /// Pinned to the lower bound.
    Lower,
    /// Pinned to the upper bound.
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSetState {
    /// Status per boundary node, ordered like `mesh.boundary_nodes()`.
    pub status: Vec<NodeStatus>,
    /// Multiplier per boundary node.
    pub multiplier: Vec<f64>,
    pub iterations: usize,
}

impl ActiveSetState {
    pub fn inactive(num_boundary_nodes: usize) -> Self {
        Self {
            status: vec![NodeStatus::Inactive; num_boundary_nodes],
            multiplier: vec![0.0; num_boundary_nodes],
            iterations: 0,
        }
    }

    pub fn count(&self, which: NodeStatus) -> usize {
        self.status.iter().filter(|&&s| s == which).count()
    }
}

/// Max-norm violations of the discrete KKT conditions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KktResidual {
    /// `A u + K φ − b − μ` over all vertices together with `K u` over interior nodes.
    pub stationarity: f64,
    /// `|μ_i| · |u_i − bound_i|` on active nodes and `|μ_i|` on inactive ones.
    pub complementarity: f64,
    /// Distance of the boundary values to the admissible interval.
    pub feasibility: f64,
    /// Multipliers with the wrong sign for their active set.
    pub sign: f64,
}

impl KktResidual {
    pub fn max(&self) -> f64 {
        self.stationarity.max(self.complementarity).max(self.feasibility).max(self.sign)
    }
}

/// Solves the control-constrained problem starting from an empty active set.
pub fn solve_constrained<'m>(problem: &ControlProblem<'m>) -> Result<(ControlSolution<'m>, ActiveSetState)> {
    solve_constrained_from(problem, None)
}

/// Solves the control-constrained problem from an initial guess of the
/// active sets (ordered like `mesh.boundary_nodes()`).
pub fn solve_constrained_from<'m>(
    problem: &ControlProblem<'m>,
    initial: Option<&[NodeStatus]>,
) -> Result<(ControlSolution<'m>, ActiveSetState)> {
    let mesh = problem.mesh();
    let solver = SaddleSolver::with_operators(problem, Operators::new(mesh));
    let boundary = mesh.boundary_nodes();
    let nb = boundary.len();
    if let Some(init) = initial {
        if init.len() != nb {
            return Err(Error::DimensionMismatch { expected: nb, found: init.len() });
        }
    }
    let mut status: Vec<NodeStatus> = match initial {
        Some(init) => init.to_vec(),
        None => vec![NodeStatus::Inactive; nb],
    };
    // drop guesses for bounds the problem does not have
    for s in status.iter_mut() {
        if (*s == NodeStatus::Lower && problem.lower().is_none())
            || (*s == NodeStatus::Upper && problem.upper().is_none())
        {
            *s = NodeStatus::Inactive;
        }
    }
    let (lower, upper) = (problem.lower(), problem.upper());
    let c = COMPLEMENTARITY_SCALE;

    for iteration in 1..=MAX_ITERATIONS {
        let pinned: Vec<(usize, f64)> = boundary
            .iter()
            .zip(&status)
            .filter_map(|(&v, s)| match s {
                NodeStatus::Inactive => None,
                NodeStatus::Lower => Some((v, lower.unwrap())),
                NodeStatus::Upper => Some((v, upper.unwrap())),
            })
            .collect();
        let mut solution = solver.solve(&pinned)?;
        solution.diagnostics.linear_solves = iteration;

        let gradient = solver.stationarity(solution.state.coefficients(), solution.multiplier.coefficients());
        let multiplier: Vec<f64> = boundary
            .iter()
            .zip(&status)
            .map(|(&v, s)| if *s == NodeStatus::Inactive { 0.0 } else { gradient[v] })
            .collect();

        let u = solution.state.coefficients();
        let next: Vec<NodeStatus> = boundary
            .iter()
            .zip(&multiplier)
            .map(|(&v, &mu)| {
                if lower.is_some_and(|a| mu + c * (a - u[v]) > 0.0) {
                    NodeStatus::Lower
                } else if upper.is_some_and(|b| -mu + c * (u[v] - b) > 0.0) {
                    NodeStatus::Upper
                } else {
                    NodeStatus::Inactive
                }
            })
            .collect();

        if next == status {
            let state = ActiveSetState { status, multiplier, iterations: iteration };
            return Ok((solution, state));
        }
        log::debug!(
            "active set iteration {iteration}: {} lower, {} upper",
            next.iter().filter(|&&s| s == NodeStatus::Lower).count(),
            next.iter().filter(|&&s| s == NodeStatus::Upper).count()
        );
        if iteration == MAX_ITERATIONS {
            let state = ActiveSetState { status, multiplier, iterations: iteration };
            let kkt = kkt_residual(problem, &solution, &state)?;
            return Err(Error::IterationCap {
                iterations: MAX_ITERATIONS,
                stationarity: kkt.stationarity,
                feasibility: kkt.feasibility,
            });
        }
        status = next;
    }
    unreachable!("loop returns on its last iteration")
}

/// Evaluates the discrete KKT conditions of `solution` with multipliers and
/// active sets from `state`.
pub fn kkt_residual(
    problem: &ControlProblem<'_>,
    solution: &ControlSolution<'_>,
    state: &ActiveSetState,
) -> Result<KktResidual> {
    let mesh = problem.mesh();
    let n = mesh.num_vertices();
    let boundary = mesh.boundary_nodes();
    let u = solution.state.coefficients();
    let phi = solution.multiplier.coefficients();
    if u.len() != n || phi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u.len().min(phi.len()) });
    }
    if state.status.len() != boundary.len() || state.multiplier.len() != boundary.len() {
        return Err(Error::DimensionMismatch { expected: boundary.len(), found: state.status.len() });
    }

    let solver = SaddleSolver::new(problem);
    let mut gradient = solver.stationarity(u, phi);
    for (&v, &mu) in boundary.iter().zip(&state.multiplier) {
        gradient[v] -= mu;
    }
    let mut stationarity = gradient.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    // φ_h must vanish on Γ and u_h must be discrete harmonic
    for &v in boundary {
        stationarity = stationarity.max(phi[v].abs());
    }
    let ku = solver.operators().stiffness.mul_vec(u);
    for &i in mesh.interior_nodes() {
        stationarity = stationarity.max(ku[i].abs());
    }

    let (lower, upper) = (problem.lower(), problem.upper());
    let mut feasibility = 0.0f64;
    let mut complementarity = 0.0f64;
    let mut sign = 0.0f64;
    for ((&v, &s), &mu) in boundary.iter().zip(&state.status).zip(&state.multiplier) {
        let value = u[v];
        if let Some(a) = lower {
            feasibility = feasibility.max(a - value);
        }
        if let Some(b) = upper {
            feasibility = feasibility.max(value - b);
        }
        match s {
            NodeStatus::Inactive => {
                complementarity = complementarity.max(mu.abs());
                sign = sign.max(mu.abs());
            }
            NodeStatus::Lower => {
                let gap = lower.map_or(f64::INFINITY, |a| (value - a).abs());
                complementarity = complementarity.max(mu.abs() * gap);
                sign = sign.max(-mu);
            }
            NodeStatus::Upper => {
                let gap = upper.map_or(f64::INFINITY, |b| (b - value).abs());
                complementarity = complementarity.max(mu.abs() * gap);
                sign = sign.max(mu);
            }
        }
    }
    Ok(KktResidual { stationarity, complementarity, feasibility: feasibility.max(0.0), sign: sign.max(0.0) })
}
