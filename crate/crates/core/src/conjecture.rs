//! Brouwer's inequality `S_k ≤ e(G) + C(k+1, 2)` checked for every `k`.

use serde::{Deserialize, Serialize};

use crate::graph::WeightedGraph;
use crate::spectral::{eigen_tolerance, eigenvalues_sym, Spectrum};
use crate::{choose2, Result};

/// Per-`k` margins `m_k = e(G) + C(k+1,2) - S_k` for `k = 1..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrouwerReport {
    pub n: usize,
    #[serde(rename = "e")]
    pub e_g: f64,
    pub margins: Vec<f64>,
    pub holds: bool,
    pub violating_k: Vec<usize>,
    pub equality_k: Vec<usize>,
    #[serde(rename = "tol")]
    pub tolerance: f64,
    /// Eigensolver accuracy budget of the underlying Laplacian.
    #[serde(skip)]
    pub eigen_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Within `100 * τ_eig` of zero: plausibly rounding.
    Numerical,
    Confirmed,
}

/// `1e-7 * n * (1 + max_k |S_k|)`.
pub fn default_tolerance(spectrum: &Spectrum) -> f64 {
    let smax = spectrum.prefix_sums().iter().fold(0.0_f64, |m, s| m.max(s.abs()));
    1e-7 * spectrum.len() as f64 * (1.0 + smax)
}

impl BrouwerReport {
    pub fn from_spectrum(e_g: f64, spectrum: &Spectrum, tol: f64, eigen_tol: f64) -> Self {
        let n = spectrum.len();
        let margins: Vec<f64> = spectrum
            .prefix_sums()
            .iter()
            .enumerate()
            .map(|(i, s)| e_g + choose2(i as u64 + 2) as f64 - s)
            .collect();
        let violating_k: Vec<usize> = (1..=n).filter(|&k| margins[k - 1] < -tol).collect();
        let equality_k = (1..=n).filter(|&k| margins[k - 1].abs() <= tol).collect();
        Self {
            n,
            e_g,
            holds: violating_k.is_empty(),
            margins,
            violating_k,
            equality_k,
            tolerance: tol,
            eigen_tol,
        }
    }

    /// `m_k` for `1 ≤ k ≤ n`.
    pub fn margin(&self, k: usize) -> f64 {
        self.margins[k - 1]
    }

    /// Smallest margin and its `k` (the smallest such `k` on ties).
    pub fn worst(&self) -> (usize, f64) {
        let mut best = (1, self.margins[0]);
        for (i, &m) in self.margins.iter().enumerate().skip(1) {
            if m < best.1 {
                best = (i + 1, m);
            }
        }
        best
    }

    /// Splits reported violations into those too close to zero to trust and
    /// those that clear `100 * τ_eig`.
    pub fn classify_violations(&self) -> Vec<(usize, ViolationKind)> {
        self.violating_k
            .iter()
            .map(|&k| {
                let kind = if self.margin(k).abs() > 100.0 * self.eigen_tol {
                    ViolationKind::Confirmed
                } else {
                    ViolationKind::Numerical
                };
                (k, kind)
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }
}

/// Margins of `g` with an explicit tolerance.
pub fn brouwer_margins(g: &WeightedGraph, tol: f64) -> Result<BrouwerReport> {
    let l = g.laplacian();
    let spectrum = eigenvalues_sym(&l)?;
    Ok(BrouwerReport::from_spectrum(
        g.total_weight(),
        &spectrum,
        tol,
        eigen_tolerance(&l),
    ))
}

/// Margins of `g` with the default tolerance.
pub fn brouwer_report(g: &WeightedGraph) -> Result<BrouwerReport> {
    let l = g.laplacian();
    let spectrum = eigenvalues_sym(&l)?;
    let tol = default_tolerance(&spectrum);
    Ok(BrouwerReport::from_spectrum(
        g.total_weight(),
        &spectrum,
        tol,
        eigen_tolerance(&l),
    ))
}

pub fn holds(g: &WeightedGraph, tol: f64) -> Result<bool> {
    Ok(brouwer_margins(g, tol)?.holds)
}

pub fn worst_margin(g: &WeightedGraph) -> Result<(usize, f64)> {
    Ok(brouwer_report(g)?.worst())
}
