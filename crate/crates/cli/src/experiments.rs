//! Convergence studies on a uniformly refined hierarchy of the unit square.
//!
//! Experiments 1 and 2 have no closed-form solution: every level is
//! compared against the finest level after prolongation. Experiment 3 has
//! the exact solution `u = 0`, so every level is measured directly.

use std::fmt;

use dbc_core::control::{solve_unconstrained, ControlProblem, ControlSolution};
use dbc_core::convergence::{fit_rate, prolongate, ConvergenceRecord, NormMatrices, RateField};
use dbc_core::mesh::{hierarchy, Mesh};
use dbc_core::pdas::{kkt_residual, solve_constrained_from, ActiveSetState, KktResidual, NodeStatus};
use dbc_core::{FeFunction, QuadratureRule};
use thiserror::Error;

use crate::data::{bilinear_target, trigonometric_target};

pub const MIN_LEVELS: usize = 3;
pub const MAX_LEVELS: usize = 8;
pub const COARSE_SUBDIVISIONS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentId {
    /// Bilinear target, no constraints.
    Unconstrained = 1,
    /// Bilinear target with a lower bound on the control.
    Constrained = 2,
    /// Trigonometric target with exact solution zero.
    ExactZero = 3,
}

impl ExperimentId {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Self::Unconstrained),
            2 => Some(Self::Constrained),
            3 => Some(Self::ExactZero),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "experiment {}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    /// Number of uniform refinements of the coarsest mesh.
    pub levels: usize,
    pub lambda: f64,
    pub quad_degree: usize,
    /// Lower control bound; experiment 2 defaults to 0.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentId) -> Self {
        Self { experiment, levels: 6, lambda: 1.0, quad_degree: 2, lower: None, upper: None }
    }

    pub fn with_levels(mut self, levels: usize) -> Self {
        self.levels = levels;
        self
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let invalid = |msg: String| Err(ExperimentError::InvalidConfig(msg));
        if !(MIN_LEVELS..=MAX_LEVELS).contains(&self.levels) {
            return invalid(format!("levels must lie in {MIN_LEVELS}..={MAX_LEVELS}, got {}", self.levels));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return invalid(format!("lambda must be positive and finite, got {}", self.lambda));
        }
        if self.quad_degree != 2 && self.quad_degree != 5 {
            return invalid(format!("quadrature degree must be 2 or 5, got {}", self.quad_degree));
        }
        if self.experiment != ExperimentId::Constrained && (self.lower.is_some() || self.upper.is_some()) {
            return invalid(format!("bounds are only accepted by experiment 2, not {}", self.experiment));
        }
        if self.lower.is_some_and(|a| !a.is_finite()) || self.upper.is_some_and(|b| !b.is_finite()) {
            return invalid("bounds must be finite".into());
        }
        if let (Some(a), Some(b)) = self.bounds() {
            if a > b {
                return invalid(format!("lower bound {a} exceeds upper bound {b}"));
            }
        }
        Ok(())
    }

    /// Bounds actually imposed.
    pub fn bounds(&self) -> (Option<f64>, Option<f64>) {
        match self.experiment {
            ExperimentId::Constrained => (Some(self.lower.unwrap_or(0.0)), self.upper),
            _ => (None, None),
        }
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("solver failed on level {level}: {source}")]
    Solver {
        level: usize,
        #[source]
        source: dbc_core::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ExperimentError {
    /// Process exit code: 2 for bad configurations, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::InvalidConfig(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub h1_sq: f64,
    pub l2_sq: f64,
    pub l2_boundary_sq: f64,
}

impl Rates {
    pub fn get(&self, field: RateField) -> f64 {
        match field {
            RateField::H1 => self.h1_sq,
            RateField::L2 => self.l2_sq,
            RateField::L2Boundary => self.l2_boundary_sq,
        }
    }
}

/// Per-level solver facts that are not part of the CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelReport {
    pub level: usize,
    pub num_elements: usize,
    pub min_boundary_value: f64,
    pub min_interior_value: f64,
    pub harmonicity_residual: f64,
    pub active_set_iterations: Option<usize>,
    pub active_nodes: Option<usize>,
    pub kkt: Option<KktResidual>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub records: Vec<ConvergenceRecord>,
    /// Fitted slopes; NaN where too few nonzero errors were available.
    pub rates: Rates,
    pub levels: Vec<LevelReport>,
}

/// Runs one convergence study.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    config.validate()?;
    let rule = QuadratureRule::with_degree(config.quad_degree).expect("validated");
    let meshes =
        hierarchy(COARSE_SUBDIVISIONS, config.levels).map_err(|source| ExperimentError::Solver { level: 0, source })?;
    let (lower, upper) = config.bounds();
    let target: fn(f64, f64) -> f64 = match config.experiment {
        ExperimentId::ExactZero => trigonometric_target,
        _ => bilinear_target,
    };

    let mut solutions: Vec<FeFunction<'_>> = Vec::with_capacity(meshes.len());
    let mut levels = Vec::with_capacity(meshes.len());
    let mut previous_state: Option<ActiveSetState> = None;
    for (level, mesh) in meshes.iter().enumerate() {
        let fail = |source| ExperimentError::Solver { level, source };
        let problem = ControlProblem::from_desired_state(mesh, config.lambda, target, &rule)
            .and_then(|p| p.with_bounds(lower, upper))
            .map_err(fail)?;

        let (solution, pdas) = if problem.is_constrained() {
            let guess = previous_state.as_ref().map(|s| prolongate_active_set(&meshes[level - 1], s, mesh));
            let (sol, state) = solve_constrained_from(&problem, guess.as_deref()).map_err(fail)?;
            let kkt = kkt_residual(&problem, &sol, &state).map_err(fail)?;
            (sol, Some((state, kkt)))
        } else {
            (solve_unconstrained(&problem).map_err(fail)?, None)
        };

        levels.push(level_report(mesh, &solution, pdas.as_ref()));
        log::info!(
            "level {level}: {} triangles, {} vertices{}",
            mesh.num_triangles(),
            mesh.num_vertices(),
            pdas.as_ref().map(|(s, _)| format!(", {} active set iterations", s.iterations)).unwrap_or_default()
        );
        previous_state = pdas.map(|(s, _)| s);
        solutions.push(solution.state);
    }

    let finest = meshes.last().unwrap();
    let norms = NormMatrices::new(finest);
    let reference = match config.experiment {
        ExperimentId::ExactZero => FeFunction::zero(finest),
        _ => solutions.last().unwrap().clone(),
    };
    let measured = match config.experiment {
        ExperimentId::ExactZero => solutions.len(),
        _ => solutions.len() - 1,
    };
    let mut records = Vec::with_capacity(measured);
    for (level, solution) in solutions.iter().take(measured).enumerate() {
        let fail = |source| ExperimentError::Solver { level, source };
        let fine = prolongate(solution, finest).map_err(fail)?;
        let errors = norms.errors(&reference, &fine).map_err(fail)?;
        records.push(ConvergenceRecord::new(&meshes[level], errors));
    }

    let rate = |field| match fit_rate(&records, field) {
        Ok(r) => r,
        Err(e) => {
            log::warn!("no {field:?} rate: {e}");
            f64::NAN
        }
    };
    let rates =
        Rates { h1_sq: rate(RateField::H1), l2_sq: rate(RateField::L2), l2_boundary_sq: rate(RateField::L2Boundary) };
    Ok(ExperimentReport { config: config.clone(), records, rates, levels })
}

fn level_report(
    mesh: &Mesh,
    solution: &ControlSolution<'_>,
    pdas: Option<&(ActiveSetState, KktResidual)>,
) -> LevelReport {
    let u = solution.state.coefficients();
    let min_over = |nodes: &[usize]| nodes.iter().map(|&i| u[i]).fold(f64::INFINITY, f64::min);
    LevelReport {
        level: mesh.level(),
        num_elements: mesh.num_triangles(),
        min_boundary_value: min_over(mesh.boundary_nodes()),
        min_interior_value: min_over(mesh.interior_nodes()),
        harmonicity_residual: solution.diagnostics.harmonicity_residual,
        active_set_iterations: pdas.map(|(s, _)| s.iterations),
        active_nodes: pdas.map(|(s, _)| s.status.len() - s.count(NodeStatus::Inactive)),
        kkt: pdas.map(|(_, k)| *k),
    }
}

/// Initial active sets on `fine` from a converged state on `coarse`: a parent
/// vertex keeps its status, a new boundary midpoint is active when both
/// endpoints of its edge share the same active status.
pub fn prolongate_active_set(coarse: &Mesh, state: &ActiveSetState, fine: &Mesh) -> Vec<NodeStatus> {
    let mut status_of = vec![NodeStatus::Inactive; fine.num_vertices()];
    for (&v, &s) in coarse.boundary_nodes().iter().zip(&state.status) {
        status_of[v] = s;
    }
    for v in coarse.num_vertices()..fine.num_vertices() {
        if let Some([a, b]) = fine.midpoint_parents(v) {
            if status_of[a] == status_of[b] {
                status_of[v] = status_of[a];
            }
        }
    }
    fine.boundary_nodes().iter().map(|&v| status_of[v]).collect()
}
