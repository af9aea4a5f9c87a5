//! Just enough sparse linear algebra for the P1 systems in this crate.
//!
//! `solve_spd` runs Jacobi-preconditioned conjugate gradients.
//! `solve_symmetric_indefinite` factors `P A Pᵀ = L D Lᵀ` in profile
//! (skyline) storage after a reverse Cuthill-McKee ordering, refines the
//! result iteratively, and falls back to MINRES if a pivot vanishes.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Relative residual reached by [`solve_spd`].
pub const SPD_TOL: f64 = 1e-12;
/// Relative residual reached by [`solve_symmetric_indefinite`].
pub const INDEFINITE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Default)]
pub struct TripletBuffer {
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Self { entries: Vec::with_capacity(capacity) }
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        self.entries.push((row, col, value));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Extend<(usize, usize, f64)> for TripletBuffer {
    fn extend<I: IntoIterator<Item = (usize, usize, f64)>>(&mut self, iter: I) {
        self.entries.extend(iter);
    }
}

impl FromIterator<(usize, usize, f64)> for TripletBuffer {
    fn from_iter<I: IntoIterator<Item = (usize, usize, f64)>>(iter: I) -> Self {
        Self { entries: iter.into_iter().collect() }
    }
}

/// Compressed sparse row matrix. Column indices are sorted and unique per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

/// Compresses `buf` into an `nrows x ncols` matrix, summing duplicate entries.
///
/// The summation order of duplicates follows their order in the buffer, so the
/// result is deterministic.
pub fn assemble_from_triplets(buf: &TripletBuffer, nrows: usize, ncols: usize) -> Result<SparseMatrix> {
    let mut row_counts = vec![0usize; nrows + 1];
    for &(row, col, _) in &buf.entries {
        if row >= nrows || col >= ncols {
            return Err(Error::IndexOutOfBounds { row, col, nrows, ncols });
        }
        row_counts[row + 1] += 1;
    }
    for i in 0..nrows {
        row_counts[i + 1] += row_counts[i];
    }
    // bucket by row, stable in buffer order
    let mut next = row_counts.clone();
    let mut bucket = vec![(0usize, 0.0f64); buf.entries.len()];
    for &(row, col, value) in &buf.entries {
        bucket[next[row]] = (col, value);
        next[row] += 1;
    }

    let mut row_offsets = Vec::with_capacity(nrows + 1);
    let mut col_indices = Vec::with_capacity(buf.entries.len());
    let mut values = Vec::with_capacity(buf.entries.len());
    row_offsets.push(0);
    for i in 0..nrows {
        let row = &mut bucket[row_counts[i]..row_counts[i + 1]];
        row.sort_by_key(|&(col, _)| col);
        for &(col, value) in row.iter() {
            if col_indices.len() > row_offsets[i] && *col_indices.last().unwrap() == col {
                *values.last_mut().unwrap() += value;
            } else {
                col_indices.push(col);
                values.push(value);
            }
        }
        row_offsets.push(col_indices.len());
    }
    Ok(SparseMatrix { nrows, ncols, row_offsets, col_indices, values })
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, row_offsets: vec![0; nrows + 1], col_indices: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self { nrows: n, ncols: n, row_offsets: (0..=n).collect(), col_indices: (0..n).collect(), values: vec![1.0; n] }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::identity(diag.len());
        m.values.copy_from_slice(diag);
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        self.col_indices[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.col_indices[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nrows);
        (0..self.nrows).map(|i| x[i] * self.row(i).map(|(j, v)| v * y[j]).sum::<f64>()).sum()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.nrows == self.ncols && (0..self.nrows).all(|i| self.row(i).all(|(j, v)| (v - self.get(j, i)).abs() <= tol))
    }

    /// `alpha * self + beta * other` for matrices of equal shape.
    pub fn linear_combination(&self, alpha: f64, other: &SparseMatrix, beta: f64) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut buf = TripletBuffer::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.nrows {
            buf.extend(self.row(i).map(|(j, v)| (i, j, alpha * v)));
            buf.extend(other.row(i).map(|(j, v)| (i, j, beta * v)));
        }
        assemble_from_triplets(&buf, self.nrows, self.ncols).expect("indices in range")
    }

    /// The submatrix `A[rows, cols]`; `rows` and `cols` list original indices
    /// in the order they should appear.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut col_map = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            col_map[c] = k;
        }
        let buf: TripletBuffer = rows
            .iter()
            .enumerate()
            .flat_map(|(r, &i)| {
                let col_map = &col_map;
                self.row(i).filter(|&(j, _)| col_map[j] != usize::MAX).map(move |(j, v)| (r, col_map[j], v))
            })
            .collect();
        assemble_from_triplets(&buf, rows.len(), cols.len()).expect("indices in range")
    }

    /// Dense row-major copy; intended for small matrices.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.nrows * self.ncols];
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                dense[i * self.ncols + j] = v;
            }
        }
        dense
    }
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    libm::sqrt(dot(x, x))
}

pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `‖A x − b‖ / ‖b‖`, or the absolute residual when `b = 0`.
pub fn relative_residual(a: &SparseMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    let r: f64 = libm::sqrt(ax.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum());
    let nb = norm2(b);
    if nb > 0.0 {
        r / nb
    } else {
        r
    }
}

fn check_square(a: &SparseMatrix, b: &[f64]) -> Result<()> {
    if a.nrows != a.ncols {
        return Err(Error::DimensionMismatch { expected: a.nrows, found: a.ncols });
    }
    if b.len() != a.nrows {
        return Err(Error::DimensionMismatch { expected: a.nrows, found: b.len() });
    }
    Ok(())
}

/// Solves `A x = b` for symmetric positive definite `A` to relative residual [`SPD_TOL`].
pub fn solve_spd(a: &SparseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    check_square(a, b)?;
    let max_iter = 10 * a.nrows + 100;
    conjugate_gradient(a, b, SPD_TOL, max_iter).map(|(x, _)| x)
}

/// Jacobi-preconditioned CG from a zero initial guess. Returns the solution
/// and the number of iterations.
pub fn conjugate_gradient(a: &SparseMatrix, b: &[f64], tol: f64, max_iter: usize) -> Result<(Vec<f64>, usize)> {
    check_square(a, b)?;
    let n = a.nrows;
    let mut x = vec![0.0; n];
    let nb = norm2(b);
    if nb == 0.0 {
        return Ok((x, 0));
    }
    let mut inv_diag = Vec::with_capacity(n);
    for (i, d) in a.diagonal().into_iter().enumerate() {
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { pivot: i });
        }
        inv_diag.push(1.0 / d);
    }

    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for it in 0..max_iter {
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::NotPositiveDefinite { pivot: it });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if norm2(&r) <= tol * nb {
            // confirm with a fresh product; the recursive residual can drift
            let true_res = relative_residual(a, &x, b);
            if true_res <= tol {
                return Ok((x, it + 1));
            }
            r = b.iter().zip(a.mul_vec(&x)).map(|(b, ax)| b - ax).collect();
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NotConverged { iterations: max_iter, relative_residual: relative_residual(a, &x, b) })
}

/// Unpreconditioned MINRES (Paige-Saunders) for symmetric, possibly
/// indefinite `A`, started from `x0`. Returns the iterate and iteration count.
pub fn minres(a: &SparseMatrix, b: &[f64], x0: &[f64], tol: f64, max_iter: usize) -> Result<(Vec<f64>, usize)> {
    check_square(a, b)?;
    let n = a.nrows;
    let mut x = x0.to_vec();
    let nb = norm2(b);
    let r0: Vec<f64> = b.iter().zip(a.mul_vec(&x)).map(|(b, ax)| b - ax).collect();
    let mut beta = norm2(&r0);
    if nb == 0.0 && beta == 0.0 {
        return Ok((x, 0));
    }
    let scale = if nb > 0.0 { nb } else { 1.0 };
    if beta <= tol * scale {
        return Ok((x, 0));
    }

    let mut v_prev = vec![0.0; n];
    let mut v: Vec<f64> = r0.iter().map(|r| r / beta).collect();
    let mut w_prev = vec![0.0; n];
    let mut w_prev2 = vec![0.0; n];
    let (mut c_prev, mut s_prev) = (1.0, 0.0);
    let (mut c_prev2, mut s_prev2) = (1.0, 0.0);
    let mut eta = beta;
    let mut av = vec![0.0; n];

    for it in 0..max_iter {
        a.mul_vec_into(&v, &mut av);
        let alpha = dot(&v, &av);
        let mut v_next: Vec<f64> = (0..n).map(|i| av[i] - alpha * v[i] - beta * v_prev[i]).collect();
        let beta_next = norm2(&v_next);

        // apply the two previous rotations to the new tridiagonal column
        let delta = c_prev * alpha - c_prev2 * s_prev * beta;
        let rho2 = s_prev * alpha + c_prev2 * c_prev * beta;
        let rho3 = s_prev2 * beta;
        let rho1 = libm::hypot(delta, beta_next);
        if rho1 == 0.0 {
            break;
        }
        let c = delta / rho1;
        let s = beta_next / rho1;

        let w: Vec<f64> = (0..n).map(|i| (v[i] - rho3 * w_prev2[i] - rho2 * w_prev[i]) / rho1).collect();
        for i in 0..n {
            x[i] += c * eta * w[i];
        }
        eta *= -s;

        if eta.abs() <= tol * scale {
            let true_res = relative_residual(a, &x, b);
            if true_res <= tol {
                return Ok((x, it + 1));
            }
        }
        if beta_next == 0.0 {
            break;
        }
        for vi in v_next.iter_mut() {
            *vi /= beta_next;
        }
        v_prev = core::mem::replace(&mut v, v_next);
        w_prev2 = core::mem::replace(&mut w_prev, w);
        c_prev2 = c_prev;
        s_prev2 = s_prev;
        c_prev = c;
        s_prev = s;
        beta = beta_next;
    }
    let res = relative_residual(a, &x, b);
    if res <= tol {
        Ok((x, max_iter))
    } else {
        Err(Error::NotConverged { iterations: max_iter, relative_residual: res })
    }
}

/// Solves `A x = b` for symmetric nonsingular `A` to relative residual
/// [`INDEFINITE_TOL`].
///
/// Rows with a zero diagonal (multiplier rows of a saddle-point system) are
/// ordered directly after their most strongly coupled row with a nonzero
/// diagonal, which keeps the leading blocks of saddle-point matrices with a
/// full-rank constraint block nonsingular.
pub fn solve_symmetric_indefinite(a: &SparseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    check_square(a, b)?;
    let perm = saddle_ordering(a);
    match ProfileLdl::factor(a, &perm) {
        Ok(ldl) => {
            let mut x = ldl.solve(b);
            // two steps of iterative refinement are plenty for these systems
            for _ in 0..2 {
                let r: Vec<f64> = b.iter().zip(a.mul_vec(&x)).map(|(b, ax)| b - ax).collect();
                let dx = ldl.solve(&r);
                for (xi, d) in x.iter_mut().zip(dx) {
                    *xi += d;
                }
            }
            let res = relative_residual(a, &x, b);
            if res <= INDEFINITE_TOL {
                return Ok(x);
            }
            log::warn!("LDL^T residual {res:e} above tolerance, continuing with MINRES");
            minres(a, b, &x, INDEFINITE_TOL, 20 * a.nrows + 100).map(|(x, _)| x)
        }
        Err(Error::Singular { pivot, .. }) => {
            log::warn!("zero pivot {pivot} in LDL^T, falling back to MINRES");
            let zero = vec![0.0; a.nrows];
            minres(a, b, &zero, INDEFINITE_TOL, 20 * a.nrows + 100).map(|(x, _)| x)
        }
        Err(e) => Err(e),
    }
}

/// Reverse Cuthill-McKee ordering of the adjacency graph of `a`; returns
/// `perm` with `perm[k]` the original index placed at position `k`.
pub fn reverse_cuthill_mckee(a: &SparseMatrix) -> Vec<usize> {
    let n = a.nrows;
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).filter(|&(j, _)| j != i).count()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    let mut neighbors = Vec::new();

    while order.len() < n {
        let seed = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| (degree[i], i)).unwrap();
        let start = pseudo_peripheral(a, seed, &degree);
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            neighbors.clear();
            neighbors.extend(a.row(v).map(|(j, _)| j).filter(|&j| !visited[j]));
            neighbors.sort_by_key(|&j| (degree[j], j));
            for &j in &neighbors {
                visited[j] = true;
                queue.push_back(j);
            }
        }
    }
    order.reverse();
    order
}

/// George-Liu search for a vertex of (nearly) maximal eccentricity within the
/// component of `seed`.
fn pseudo_peripheral(a: &SparseMatrix, seed: usize, degree: &[usize]) -> usize {
    let mut current = seed;
    let mut ecc = 0;
    loop {
        let levels = bfs_levels(a, current);
        let depth = *levels.iter().filter(|&&l| l != usize::MAX).max().unwrap();
        if depth <= ecc && current != seed {
            return current;
        }
        let candidate = (0..a.nrows).filter(|&i| levels[i] == depth).min_by_key(|&i| (degree[i], i)).unwrap();
        if depth <= ecc {
            return current;
        }
        ecc = depth;
        current = candidate;
    }
}

fn bfs_levels(a: &SparseMatrix, start: usize) -> Vec<usize> {
    let mut level = vec![usize::MAX; a.nrows];
    let mut queue = VecDeque::new();
    level[start] = 0;
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        for (j, _) in a.row(v) {
            if level[j] == usize::MAX {
                level[j] = level[v] + 1;
                queue.push_back(j);
            }
        }
    }
    level
}

/// RCM ordering in which each zero-diagonal row follows its anchor: the
/// neighbor with nonzero diagonal and the largest coupling magnitude.
pub fn saddle_ordering(a: &SparseMatrix) -> Vec<usize> {
    let n = a.nrows;
    let diag = a.diagonal();
    let rcm = reverse_cuthill_mckee(a);
    let mut followers: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut orphan = vec![false; n];
    for i in 0..n {
        if diag[i] != 0.0 {
            continue;
        }
        let anchor = a.row(i).filter(|&(j, v)| j != i && diag[j] != 0.0 && v != 0.0).fold(
            None,
            |best: Option<(usize, f64)>, (j, v)| match best {
                Some((_, bv)) if bv >= v.abs() => best,
                _ => Some((j, v.abs())),
            },
        );
        match anchor {
            Some((j, _)) => followers[j].push(i),
            None => orphan[i] = true,
        }
    }
    let mut perm = Vec::with_capacity(n);
    for &v in &rcm {
        if diag[v] != 0.0 || orphan[v] {
            perm.push(v);
            perm.extend_from_slice(&followers[v]);
        }
    }
    debug_assert_eq!(perm.len(), n);
    perm
}

/// `L D Lᵀ` factorization of a symmetrically permuted matrix in profile storage.
#[derive(Debug, Clone)]
pub struct ProfileLdl {
    perm: Vec<usize>,
    /// First stored column of each (permuted) row.
    first: Vec<usize>,
    /// Offset of each row's strictly-lower entries in `lower`.
    offsets: Vec<usize>,
    lower: Vec<f64>,
    diag: Vec<f64>,
}

impl ProfileLdl {
    /// Factors `P A Pᵀ` with `perm[k]` the original index of row `k`. Only
    /// the lower triangle of the permuted matrix is read.
    pub fn factor(a: &SparseMatrix, perm: &[usize]) -> Result<Self> {
        let n = a.nrows;
        assert_eq!(perm.len(), n);
        let mut inv = vec![0usize; n];
        for (k, &p) in perm.iter().enumerate() {
            inv[p] = k;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (k, &p) in perm.iter().enumerate() {
            for (j, v) in a.row(p) {
                if v != 0.0 {
                    first[k] = first[k].min(inv[j]);
                }
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for k in 0..n {
            offsets.push(offsets[k] + (k - first[k]));
        }
        let mut lower = vec![0.0; offsets[n]];
        let mut diag = vec![0.0; n];
        for (k, &p) in perm.iter().enumerate() {
            for (j, v) in a.row(p) {
                let c = inv[j];
                if c < k {
                    lower[offsets[k] + c - first[k]] = v;
                } else if c == k {
                    diag[k] = v;
                }
            }
        }

        let scale =
            diag.iter().fold(0.0f64, |m, d| m.max(d.abs())).max(lower.iter().fold(0.0f64, |m, d| m.max(d.abs())));
        let pivot_tol = 1e-14 * scale;

        // Crout: row i holds u_ij = L_ij d_j while it is being formed
        for i in 0..n {
            let fi = first[i];
            let (done, rest) = lower.split_at_mut(offsets[i]);
            let row_i = &mut rest[..i - fi];
            for j in fi..i {
                let fj = first[j];
                let start = fi.max(fj);
                let row_j = &done[offsets[j]..offsets[j] + (j - fj)];
                let s: f64 = row_i[start - fi..j - fi].iter().zip(&row_j[start - fj..j - fj]).map(|(u, l)| u * l).sum();
                row_i[j - fi] -= s;
            }
            let mut d = diag[i];
            for j in fi..i {
                let u = row_i[j - fi];
                let l = u / diag[j];
                d -= u * l;
                row_i[j - fi] = l;
            }
            if !(d.abs() > pivot_tol) {
                return Err(Error::Singular { pivot: perm[i], relative_residual: f64::NAN });
            }
            diag[i] = d;
        }
        Ok(Self { perm: perm.to_vec(), first, offsets, lower, diag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Stored entries of the strictly lower profile.
    pub fn profile_size(&self) -> usize {
        self.lower.len()
    }

    /// Number of negative pivots, i.e. the number of negative eigenvalues.
    pub fn negative_pivots(&self) -> usize {
        self.diag.iter().filter(|&&d| d < 0.0).count()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.lower[self.offsets[i]..self.offsets[i + 1]];
            let s: f64 = row.iter().zip(&y[fi..i]).map(|(l, y)| l * y).sum();
            y[i] -= s;
        }
        for (yi, d) in y.iter_mut().zip(&self.diag) {
            *yi /= d;
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let yi = y[i];
            let row = &self.lower[self.offsets[i]..self.offsets[i + 1]];
            for (k, l) in row.iter().enumerate() {
                y[fi + k] -= l * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }
}

/// Dense Cholesky factorization `A = L Lᵀ` of a row-major `n x n` matrix.
#[derive(Debug, Clone)]
pub struct DenseCholesky {
    n: usize,
    factor: Vec<f64>,
}

impl DenseCholesky {
    pub fn factor(a: &[f64], n: usize) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: a.len() });
        }
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite { pivot: j });
            }
            let d = libm::sqrt(d);
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        Ok(Self { n, factor: l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let l = &self.factor;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= l[i * n + k] * y[k];
            }
            y[i] /= l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= l[k * n + i] * y[k];
            }
            y[i] /= l[i * n + i];
        }
        y
    }
}
