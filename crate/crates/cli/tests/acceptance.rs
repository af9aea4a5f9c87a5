//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line and then
//! asserts it; tolerances are fixed here and must not be relaxed.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::time::{Duration, Instant};

use dbc::data::bilinear_target;
use dbc::experiments::ExperimentReport;
use dbc::{run_experiment, ExperimentConfig, ExperimentId};
use dbc_core::assembly::{assemble_mass, assemble_stiffness, FeFunction, QuadratureRule};
use dbc_core::control::{solve_reduced, solve_unconstrained, ControlProblem};
use dbc_core::convergence::{prolongate, NormMatrices};
use dbc_core::harmonic::{harmonicity_residual, HarmonicExtension};
use dbc_core::mesh::hierarchy;

const H1_WINDOW: (f64, f64) = (-1.15, -0.85);
const L2_WINDOW: (f64, f64) = (-2.25, -1.75);
const BOUNDARY_WINDOW: (f64, f64) = (-1.8, -1.2);
const EXACT_ZERO_WINDOW: (f64, f64) = (-2.4, -1.6);
const MAX_RUNTIME: Duration = Duration::from_secs(60);
const BOUNDARY_FLOOR: f64 = -1e-12;
const INTERIOR_FLOOR: f64 = -1e-10;
const MAX_PDAS_ITERATIONS: usize = 30;
const KKT_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-8;
const ANALYTIC_TOL: f64 = 1e-10;
const ZERO_TOL: f64 = 1e-12;
const KERNEL_TOL: f64 = 1e-13;
const MASS_SUM_TOL: f64 = 1e-13;
const GALERKIN_TOL: f64 = 1e-10;
const PROLONGATION_TOL: f64 = 1e-12;
const CONSISTENCY_TOL: f64 = 1e-9;

fn verdict(criterion: u32, pass: bool, detail: String) {
    println!("criterion {criterion}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn within(v: f64, (lo, hi): (f64, f64)) -> bool {
    (lo..=hi).contains(&v)
}

fn run(config: ExperimentConfig) -> ExperimentReport {
    run_experiment(&config).expect("experiment runs")
}

#[test]
fn criterion_1_unconstrained_rates() {
    let start = Instant::now();
    let report = run(ExperimentConfig::new(ExperimentId::Unconstrained));
    let elapsed = start.elapsed();
    let r = report.rates;
    let pass = within(r.h1_sq, H1_WINDOW) && within(r.l2_sq, L2_WINDOW) && elapsed <= MAX_RUNTIME;
    verdict(1, pass, format!("h1 slope {:.4}, l2 slope {:.4}, runtime {:.2?}", r.h1_sq, r.l2_sq, elapsed));
}

#[test]
fn criterion_2_unconstrained_boundary_rate() {
    let report = run(ExperimentConfig::new(ExperimentId::Unconstrained));
    let s = report.rates.l2_boundary_sq;
    verdict(2, within(s, BOUNDARY_WINDOW), format!("boundary slope {s:.4}, window {BOUNDARY_WINDOW:?}"));
}

#[test]
fn criterion_3_constrained_rates_and_feasibility() {
    let report = run(ExperimentConfig::new(ExperimentId::Constrained));
    let r = report.rates;
    let min_boundary = report.levels.iter().map(|l| l.min_boundary_value).fold(f64::INFINITY, f64::min);
    let min_interior = report.levels.iter().map(|l| l.min_interior_value).fold(f64::INFINITY, f64::min);
    let max_iterations = report.levels.iter().filter_map(|l| l.active_set_iterations).max().unwrap_or(usize::MAX);
    let max_kkt = report.levels.iter().map(|l| l.kkt.map_or(f64::INFINITY, |k| k.max())).fold(0.0, f64::max);
    let pass = within(r.h1_sq, H1_WINDOW)
        && within(r.l2_sq, L2_WINDOW)
        && min_boundary >= BOUNDARY_FLOOR
        && min_interior >= INTERIOR_FLOOR
        && max_iterations <= MAX_PDAS_ITERATIONS
        && max_kkt <= KKT_TOL;
    verdict(
        3,
        pass,
        format!(
            "h1 slope {:.4}, l2 slope {:.4}, min boundary {min_boundary:.3e}, min interior {min_interior:.3e}, \
             max PDAS iterations {max_iterations}, max KKT {max_kkt:.3e}",
            r.h1_sq, r.l2_sq
        ),
    );
}

#[test]
fn criterion_4_exact_zero_rates_and_quadrature() {
    let low = run(ExperimentConfig::new(ExperimentId::ExactZero));
    let mut config = ExperimentConfig::new(ExperimentId::ExactZero);
    config.quad_degree = 5;
    let high = run(config);
    let r = low.rates;
    let no_worse = low.records.iter().zip(&high.records).all(|(a, b)| {
        b.err_h1_sq <= a.err_h1_sq && b.err_l2_sq <= a.err_l2_sq && b.err_l2_boundary_sq <= a.err_l2_boundary_sq
    });
    let pass = within(r.h1_sq, EXACT_ZERO_WINDOW) && within(r.l2_sq, EXACT_ZERO_WINDOW) && no_worse;
    verdict(
        4,
        pass,
        format!(
            "h1 slope {:.4}, l2 slope {:.4}, degree-5 errors no larger at every level: {no_worse}",
            r.h1_sq, r.l2_sq
        ),
    );
}

#[test]
fn criterion_5_saddle_matches_reduced_oracle() {
    let meshes = hierarchy(2, 3).unwrap();
    let rule = QuadratureRule::default();
    let targets: [fn(f64, f64) -> f64; 3] = [|_, _| 0.0, |_, _| 0.8, bilinear_target];
    let mut worst: f64 = 0.0;
    for mesh in &meshes {
        let norms = NormMatrices::new(mesh);
        for ud in targets {
            let p = ControlProblem::from_desired_state(mesh, 1.0, ud, &rule).unwrap();
            let saddle = solve_unconstrained(&p).unwrap().state;
            let reduced = solve_reduced(&p).unwrap();
            let diff = norms.errors(&saddle, &reduced).unwrap().h1_sq.sqrt();
            let size = norms.norms(saddle.coefficients()).h1_sq.sqrt();
            worst = worst.max(diff / (1.0 + size));
        }
    }
    let sizes: Vec<usize> = meshes.iter().map(|m| m.num_triangles()).collect();
    verdict(5, worst <= ORACLE_TOL, format!("triangles {sizes:?}, worst scaled H1 difference {worst:.3e}"));
}

#[test]
fn criterion_6_analytic_cases() {
    let mesh = &hierarchy(2, 3).unwrap()[3];
    let rule = QuadratureRule::default();
    let mut worst: f64 = 0.0;
    for c in [-2.0, 0.5, 3.0] {
        for lambda in [0.1, 1.0, 10.0] {
            let p = ControlProblem::from_desired_state(mesh, lambda, |_, _| c, &rule).unwrap();
            let u = solve_unconstrained(&p).unwrap().state;
            let err = u.coefficients().iter().fold(0.0f64, |m, v| m.max((v - c / (lambda + 1.0)).abs()));
            worst = worst.max(err);
        }
    }
    let p = ControlProblem::from_desired_state(mesh, 1.0, |_, _| 0.0, &rule).unwrap();
    let zero_load = p.load().iter().all(|&b| b == 0.0);
    let u = solve_unconstrained(&p).unwrap().state;
    let size = u.coefficients().iter().map(|v| v * v).sum::<f64>().sqrt();
    let pass = worst <= ANALYTIC_TOL && zero_load && size <= ZERO_TOL;
    verdict(6, pass, format!("max nodal error {worst:.3e}, zero load {zero_load}, |u| for zero data {size:.3e}"));
}

#[test]
fn criterion_7_structural_invariants() {
    let meshes = hierarchy(2, 3).unwrap();
    let mut kernel: f64 = 0.0;
    let mut mass_sum: f64 = 0.0;
    let mut ranks_ok = true;
    for mesh in &meshes {
        let ones = vec![1.0; mesh.num_vertices()];
        kernel = kernel.max(assemble_stiffness(mesh).mul_vec(&ones).iter().fold(0.0, |m, v| f64::max(m, v.abs())));
        mass_sum = mass_sum.max((assemble_mass(mesh).quadratic_form(&ones) - 1.0).abs());
        if mesh.num_triangles() <= 128 {
            let ev = common::symmetric_eigenvalues(&common::dense_stiffness(mesh));
            let scale = ev.last().unwrap().abs();
            ranks_ok &= ev.iter().filter(|v| v.abs() < 1e-10 * scale).count() == 1;
        }
    }

    let mesh = &meshes[3];
    let k = assemble_stiffness(mesh);
    let q: Vec<f64> = mesh.boundary_nodes().iter().map(|&v| (7.0 * v as f64).sin()).collect();
    let u = HarmonicExtension::with_stiffness(mesh, &k).extend_values(&q).unwrap();
    let trace_exact = u.boundary_values() == q;
    let scale = u.coefficients().iter().map(|v| v * v).sum::<f64>().sqrt();
    let galerkin = harmonicity_residual(&k, mesh, u.coefficients()) / scale;

    let coarse = FeFunction::interpolate(&meshes[1], |x, y| (3.0 * x).cos() * y);
    let (fine_norms, coarse_norms) = (NormMatrices::new(&meshes[3]), NormMatrices::new(&meshes[1]));
    let a = coarse_norms.norms(coarse.coefficients());
    let b = fine_norms.norms(prolongate(&coarse, &meshes[3]).unwrap().coefficients());
    let prolongation =
        (a.h1_sq - b.h1_sq).abs().max((a.l2_sq - b.l2_sq).abs()).max((a.l2_boundary_sq - b.l2_boundary_sq).abs());

    let pass = kernel <= KERNEL_TOL
        && ranks_ok
        && mass_sum <= MASS_SUM_TOL
        && trace_exact
        && galerkin <= GALERKIN_TOL
        && prolongation <= PROLONGATION_TOL;
    verdict(
        7,
        pass,
        format!(
            "|K1| {kernel:.3e}, rank n-1 {ranks_ok}, mass sum deviation {mass_sum:.3e}, exact trace {trace_exact}, \
             Galerkin residual {galerkin:.3e}, prolongation norm deviation {prolongation:.3e}"
        ),
    );
}

#[test]
fn criterion_8_vacuous_bounds_reproduce_unconstrained() {
    let free = run(ExperimentConfig::new(ExperimentId::Unconstrained));
    let mut config = ExperimentConfig::new(ExperimentId::Constrained);
    config.lower = Some(-1e6);
    let bounded = run(config);
    let mut worst: f64 = 0.0;
    let same_shape = free.records.len() == bounded.records.len();
    for (a, b) in free.records.iter().zip(&bounded.records) {
        for (x, y) in [
            (a.mesh_size, b.mesh_size),
            (a.err_h1_sq, b.err_h1_sq),
            (a.err_l2_sq, b.err_l2_sq),
            (a.err_l2_boundary_sq, b.err_l2_boundary_sq),
        ] {
            worst = worst.max((x - y).abs());
        }
    }
    let pass = same_shape && worst <= CONSISTENCY_TOL;
    verdict(8, pass, format!("{} records, max componentwise difference {worst:.3e}", bounded.records.len()));
}
