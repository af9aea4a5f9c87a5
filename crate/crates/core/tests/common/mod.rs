//! Independent dense oracles shared by the integration tests.
#![allow(dead_code)]

use dbc_core::mesh::Mesh;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub n: usize,
    pub m: usize,
    pub a: Vec<f64>,
}

impl Dense {
    pub fn zeros(n: usize, m: usize) -> Self {
        Self { n, m, a: vec![0.0; n * m] }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.m + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.a[i * self.m + j]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| (0..self.m).map(|j| self.at(i, j) * x[j]).sum()).collect()
    }
}

fn area(p: [[f64; 2]; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]))
}

/// `∫_K ∇λ_i·∇λ_j` from the explicit inverse Jacobian of the affine map
/// from the reference triangle.
pub fn stiffness_via_jacobian(p: [[f64; 2]; 3]) -> [[f64; 3]; 3] {
    let j = [[p[1][0] - p[0][0], p[2][0] - p[0][0]], [p[1][1] - p[0][1], p[2][1] - p[0][1]]];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let inv_t = [[j[1][1] / det, -j[1][0] / det], [-j[0][1] / det, j[0][0] / det]];
    let ref_grads = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
    let grads: Vec<[f64; 2]> = ref_grads
        .iter()
        .map(|g| [inv_t[0][0] * g[0] + inv_t[0][1] * g[1], inv_t[1][0] * g[0] + inv_t[1][1] * g[1]])
        .collect();
    let a = det.abs() / 2.0;
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for jj in 0..3 {
            k[i][jj] = a * (grads[i][0] * grads[jj][0] + grads[i][1] * grads[jj][1]);
        }
    }
    k
}

pub fn dense_stiffness(mesh: &Mesh) -> Dense {
    let n = mesh.num_vertices();
    let mut d = Dense::zeros(n, n);
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let k = stiffness_via_jacobian(mesh.triangle_points(t));
        for a in 0..3 {
            for b in 0..3 {
                *d.at_mut(tri[a], tri[b]) += k[a][b];
            }
        }
    }
    d
}

pub fn dense_mass(mesh: &Mesh) -> Dense {
    let n = mesh.num_vertices();
    let mut d = Dense::zeros(n, n);
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let a = area(mesh.triangle_points(t));
        for i in 0..3 {
            for j in 0..3 {
                *d.at_mut(tri[i], tri[j]) += if i == j { a / 6.0 } else { a / 12.0 };
            }
        }
    }
    d
}

/// Gaussian elimination with partial pivoting.
pub fn dense_solve(a: &Dense, b: &[f64]) -> Vec<f64> {
    let n = a.n;
    assert_eq!(a.m, n);
    let mut m = a.a.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i * n + k].abs().total_cmp(&m[j * n + k].abs())).unwrap();
        if p != k {
            for c in 0..n {
                m.swap(k * n + c, p * n + c);
            }
            x.swap(k, p);
        }
        let pivot = m[k * n + k];
        assert!(pivot.abs() > 1e-300, "singular oracle system");
        for i in k + 1..n {
            let f = m[i * n + k] / pivot;
            if f != 0.0 {
                for c in k..n {
                    m[i * n + c] -= f * m[k * n + c];
                }
                x[i] -= f * x[k];
            }
        }
    }
    for i in (0..n).rev() {
        for c in i + 1..n {
            x[i] -= m[i * n + c] * x[c];
        }
        x[i] /= m[i * n + i];
    }
    x
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(a: &Dense) -> Vec<f64> {
    let n = a.n;
    let mut m = a.a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j].powi(2))
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `∫_K |∇u|²` and `∫_K u²` of a P1 function with nodal values `u` on `p`,
/// using exact formulas independent of the assembled matrices.
pub fn exact_element_norms(p: [[f64; 2]; 3], u: [f64; 3]) -> (f64, f64) {
    let a = area(p);
    // gradient of the linear interpolant from a 2x2 solve
    let (dx1, dy1) = (p[1][0] - p[0][0], p[1][1] - p[0][1]);
    let (dx2, dy2) = (p[2][0] - p[0][0], p[2][1] - p[0][1]);
    let (du1, du2) = (u[1] - u[0], u[2] - u[0]);
    let det = dx1 * dy2 - dx2 * dy1;
    let gx = (du1 * dy2 - du2 * dy1) / det;
    let gy = (dx1 * du2 - dx2 * du1) / det;
    let grad_sq = a * (gx * gx + gy * gy);
    // ∫ u² = |K|/6 (Σ u_i² + Σ_{i<j} u_i u_j)
    let sq = u.iter().map(|v| v * v).sum::<f64>() + u[0] * u[1] + u[1] * u[2] + u[2] * u[0];
    (grad_sq, a / 6.0 * sq)
}

pub fn exact_norms(mesh: &Mesh, u: &[f64]) -> (f64, f64) {
    let mut grad = 0.0;
    let mut l2 = 0.0;
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let (g, l) = exact_element_norms(mesh.triangle_points(t), [u[tri[0]], u[tri[1]], u[tri[2]]]);
        grad += g;
        l2 += l;
    }
    (grad, l2)
}
