//! Dense symmetric eigenvalues.
//!
//! Householder reduction to tridiagonal form followed by implicit-shift QR
//! iterations with the Wilkinson shift. Only eigenvalues are computed.

use crate::graph::LaplacianMatrix;
use crate::{Error, Result};

/// Maximum QR sweeps spent on any single eigenvalue before giving up.
pub const MAX_SWEEPS_PER_EIGENVALUE: usize = 50;

/// Eigenvalues in descending order together with their prefix sums.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    prefix_sums: Vec<f64>,
}

impl Spectrum {
    /// Sorts `values` descending and accumulates prefix sums.
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        let prefix_sums = values
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect();
        Self {
            eigenvalues: values,
            prefix_sums,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `λ_1 ≥ … ≥ λ_n`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `prefix_sums()[k - 1]` is `S_k`, the sum of the `k` largest eigenvalues.
    pub fn prefix_sums(&self) -> &[f64] {
        &self.prefix_sums
    }

    /// `S_k` for `1 ≤ k ≤ n`.
    pub fn partial_sum(&self, k: usize) -> f64 {
        self.prefix_sums[k - 1]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Absolute accuracy budget for the trace identity and Gershgorin
/// containment: `1e-9 * n * (1 + max|entry|)`.
pub fn eigen_tolerance(m: &LaplacianMatrix) -> f64 {
    1e-9 * m.n() as f64 * (1.0 + m.max_abs_entry())
}

/// Orthogonal reduction to symmetric tridiagonal form.
///
/// Returns `(diag, offdiag)` with `offdiag.len() == n - 1` (empty for
/// `n <= 1`). Columns that are already reduced are left untouched, so
/// tridiagonal input comes back unchanged.
pub fn tridiagonalize(m: &LaplacianMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.n();
    let mut a = m.as_slice().to_vec();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(1) {
        diag[k] = a[k * n + k];
        let lo = k + 1;
        let len = n - lo;
        // x = A[lo.., k]; read from row k (symmetric storage).
        let x0 = a[k * n + lo];
        let tail: f64 = a[k * n + lo + 1..k * n + n].iter().map(|x| x * x).sum();
        if tail == 0.0 {
            off[k] = x0;
            continue;
        }
        let norm = (x0 * x0 + tail).sqrt();
        let alpha = if x0 > 0.0 { -norm } else { norm };
        off[k] = alpha;

        let v = &mut v[..len];
        v.copy_from_slice(&a[k * n + lo..k * n + n]);
        v[0] = x0 - alpha;
        let vtv = v[0] * v[0] + tail;
        let beta = 2.0 / vtv;

        // p = beta * A22 v
        let p = &mut p[..len];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &a[(lo + i) * n + lo..(lo + i) * n + n];
            *pi = beta * dot(row, v);
        }
        // w = p - (beta/2)(p.v) v, stored back into p
        let kappa = 0.5 * beta * dot(p, v);
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi -= kappa * vi;
        }
        // A22 -= v w^T + w v^T
        for i in 0..len {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a[(lo + i) * n + lo..(lo + i) * n + n];
            for ((r, &vj), &wj) in row.iter_mut().zip(v.iter()).zip(p.iter()) {
                *r -= vi * wj + wi * vj;
            }
        }
    }
    if n > 0 {
        diag[n - 1] = a[n * n - 1];
    }
    (diag, off)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Eigenvalues of a symmetric tridiagonal matrix, unsorted.
pub fn tridiagonal_eigenvalues(mut diag: Vec<f64>, mut off: Vec<f64>) -> Result<Vec<f64>> {
    let n = diag.len();
    assert_eq!(off.len(), n.saturating_sub(1), "off-diagonal length");
    if n <= 1 {
        return Ok(diag);
    }
    let mut end = n - 1;
    let mut sweeps = 0;
    loop {
        for i in 0..n - 1 {
            if off[i] != 0.0
                && (off[i].abs() <= f64::EPSILON * (diag[i].abs() + diag[i + 1].abs())
                    || off[i].abs() < f64::MIN_POSITIVE)
            {
                off[i] = 0.0;
            }
        }
        while end > 0 && off[end - 1] == 0.0 {
            end -= 1;
            sweeps = 0;
        }
        if end == 0 {
            return Ok(diag);
        }
        let mut start = end - 1;
        while start > 0 && off[start - 1] != 0.0 {
            start -= 1;
        }
        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::NoConvergence {
                index: end,
                sweeps: MAX_SWEEPS_PER_EIGENVALUE,
            });
        }
        qr_step(&mut diag[start..=end], &mut off[start..end]);
    }
}

/// One implicit symmetric QR step with Wilkinson shift on an unreduced block.
fn qr_step(d: &mut [f64], e: &mut [f64]) {
    let m = d.len() - 1;
    let t = 0.5 * (d[m - 1] - d[m]);
    let b = e[m - 1];
    let sign = if t >= 0.0 { 1.0 } else { -1.0 };
    let shift = d[m] - b * b / (t + sign * t.hypot(b));

    let mut x = d[0] - shift;
    let mut z = e[0];
    for k in 0..m {
        let r = x.hypot(z);
        let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (x / r, z / r) };
        if k > 0 {
            e[k - 1] = r;
        }
        let (dk, dk1, ek) = (d[k], d[k + 1], e[k]);
        d[k] = c * c * dk + 2.0 * c * s * ek + s * s * dk1;
        d[k + 1] = s * s * dk - 2.0 * c * s * ek + c * c * dk1;
        e[k] = c * s * (dk1 - dk) + (c * c - s * s) * ek;
        if k + 1 < m {
            x = e[k];
            z = s * e[k + 1];
            e[k + 1] *= c;
        }
    }
}

/// All eigenvalues of a symmetric matrix, sorted descending.
pub fn eigenvalues_sym(m: &LaplacianMatrix) -> Result<Spectrum> {
    let (diag, off) = tridiagonalize(m);
    Ok(Spectrum::from_unsorted(tridiagonal_eigenvalues(diag, off)?))
}

/// Largest eigenvalue.
pub fn lambda_max(m: &LaplacianMatrix) -> Result<f64> {
    Ok(eigenvalues_sym(m)?.max())
}
