//! Desired states used by the experiments.

use std::f64::consts::PI;

/// `u_d(x, y) = x (1 − y) − 0.35`; no closed-form solution is known.
pub fn bilinear_target(x: f64, y: f64) -> f64 {
    x * (1.0 - y) - 0.35
}

/// `u_d = Δψ` for `ψ = sin²(πx) sin²(πy)`. Since `ψ` and its normal
/// derivative vanish on the boundary, `u = 0` with multiplier `φ = −ψ` solves
/// the continuous problem for every `λ`.
pub fn trigonometric_target(x: f64, y: f64) -> f64 {
    let (sx, sy) = ((PI * x).sin(), (PI * y).sin());
    2.0 * PI * PI * ((2.0 * PI * x).cos() * sy * sy + sx * sx * (2.0 * PI * y).cos())
}
