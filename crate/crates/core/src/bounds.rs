//! Closed-form bound machinery for random weighted graphs.
//!
//! Two quadratics in `k` carry the argument:
//!
//! - large-mean regime: `f(k) = μ(1-δ)C(n,2) + k(k+1)/2 - k(1+ε)μn`, with
//!   discriminant `Δ = n²μ(δ - 1 + μ(ε+1)²) - nμ(δ+ε) + 1/4`;
//! - small-mean regime: `f(k) = k²/2 - k(2+ε)σ√(n ln n) + cμ(1-δ)n²`, with
//!   discriminant `Δ = (2+ε)²σ²n ln n - 2cμ(1-δ)n²`.
//!
//! Both have leading coefficient `1/2`, so `min_k f(k) = -Δ/2` and `Δ < 0`
//! certifies `f > 0` for every real `k`.
//!
//! Constants are kept apart: `b` is the almost-sure bound on `|ξ|` used in the
//! Hoeffding step, `c` is the constant with `C(n,2) ≥ c n²`.

use serde::Serialize;

use crate::{choose2, Error, Result};

/// `c` such that `C(n,2) ≥ c n²` for all `n ≥ 10`.
pub const DEFAULT_BINOMIAL_RATIO: f64 = 0.45;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WhichLemma {
    Lemma3,
    Lemma5,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeParams {
    pub gamma: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub n0: usize,
    pub which_lemma: WhichLemma,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscriminantReport {
    pub n: usize,
    pub value: f64,
    pub negative: bool,
}

impl DiscriminantReport {
    fn new(n: usize, value: f64) -> Self {
        Self {
            n,
            value,
            negative: value < 0.0,
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("gamma = {gamma} must lie in (0, 1)")))
    }
}

fn check_mean(gamma: f64, mu: f64) -> Result<()> {
    check_gamma(gamma)?;
    // 1 - gamma is itself rounded; accept mu equal to it up to one ulp.
    if mu > 0.0 && mu <= (1.0 - gamma) * (1.0 + f64::EPSILON) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "mu = {mu} must lie in (0, 1 - gamma] = (0, {}]",
            1.0 - gamma
        )))
    }
}

/// `δ = γ²/2` and `ε = √(1+γ) - 1`, so that `(ε+1)² = 1+γ`.
///
/// `n0` is the threshold at the largest admissible mean `μ = 1 - γ`; use
/// [`lemma3_params_at`] for a specific mean.
pub fn lemma3_params(gamma: f64) -> Result<RegimeParams> {
    lemma3_params_at(gamma, 1.0 - gamma)
}

/// As [`lemma3_params`], with `n0` computed for mean `mu`.
pub fn lemma3_params_at(gamma: f64, mu: f64) -> Result<RegimeParams> {
    check_mean(gamma, mu)?;
    let (epsilon, delta) = lemma3_epsilon_delta(gamma);
    Ok(RegimeParams {
        gamma,
        epsilon,
        delta,
        n0: lemma3_n0(gamma, mu)?,
        which_lemma: WhichLemma::Lemma3,
    })
}

fn lemma3_epsilon_delta(gamma: f64) -> (f64, f64) {
    ((1.0 + gamma).sqrt() - 1.0, 0.5 * gamma * gamma)
}

fn lemma3_delta_value(n: f64, mu: f64, epsilon: f64, delta: f64) -> f64 {
    let e1 = epsilon + 1.0;
    n * n * mu * (delta - 1.0 + mu * e1 * e1) - n * mu * (delta + epsilon) + 0.25
}

pub fn lemma3_discriminant(n: usize, mu: f64, epsilon: f64, delta: f64) -> DiscriminantReport {
    DiscriminantReport::new(n, lemma3_delta_value(n as f64, mu, epsilon, delta))
}

/// `μ(1-δ)C(n,2) + k(k+1)/2 - k(1+ε)μn` for real `k`.
pub fn lemma3_f(k: f64, n: usize, mu: f64, epsilon: f64, delta: f64) -> f64 {
    let nf = n as f64;
    mu * (1.0 - delta) * choose2(n as u64) as f64 + 0.5 * k * (k + 1.0) - k * (1.0 + epsilon) * mu * nf
}

/// Minimiser `(1+ε)μn - 1/2` of [`lemma3_f`].
pub fn lemma3_vertex(n: usize, mu: f64, epsilon: f64) -> f64 {
    (1.0 + epsilon) * mu * n as f64 - 0.5
}

/// Smallest `n0 ≥ 1` with `Δ(n) < 0` for every `n ≥ n0` at mean `mu_upper`.
///
/// Under `μ ≤ 1 - γ` the leading coefficient of `Δ` in `n` is at most
/// `-μγ²/2 < 0` and the linear one is negative, so `Δ` is decreasing on
/// `n ≥ 0` and the first negative value settles the question. The closed-form
/// root only seeds the search; the answer is fixed by direct evaluation.
pub fn lemma3_n0(gamma: f64, mu_upper: f64) -> Result<usize> {
    check_mean(gamma, mu_upper)?;
    let (epsilon, delta) = lemma3_epsilon_delta(gamma);
    let mu = mu_upper;
    let e1 = epsilon + 1.0;
    let a = mu * (delta - 1.0 + mu * e1 * e1);
    let b = -mu * (delta + epsilon);
    debug_assert!(a < 0.0 && b < 0.0);
    let root = (-b - (b * b - a).sqrt()) / (2.0 * a);
    let neg = |n: usize| lemma3_delta_value(n as f64, mu, epsilon, delta) < 0.0;
    let mut n0 = (root.floor().max(0.0) as usize + 1).max(1);
    while n0 > 1 && neg(n0 - 1) {
        n0 -= 1;
    }
    while !neg(n0) {
        n0 += 1;
    }
    Ok(n0)
}

/// `(2+ε)²σ²n ln n - 2cμ(1-δ)n²`.
pub fn lemma5_discriminant(
    n: usize,
    mu: f64,
    sigma: f64,
    epsilon: f64,
    delta: f64,
    c: f64,
) -> Result<DiscriminantReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("small-mean discriminant needs n >= 2, got {n}")));
    }
    if c <= 0.0 {
        return Err(Error::InvalidParameter(format!("c = {c} must be positive")));
    }
    let nf = n as f64;
    let two_eps = 2.0 + epsilon;
    let value = two_eps * two_eps * sigma * sigma * nf * nf.ln() - 2.0 * c * mu * (1.0 - delta) * nf * nf;
    Ok(DiscriminantReport::new(n, value))
}

/// `k²/2 - k(2+ε)σ√(n ln n) + cμ(1-δ)n²`.
pub fn lemma5_f(k: f64, n: usize, mu: f64, sigma: f64, epsilon: f64, delta: f64, c: f64) -> f64 {
    let nf = n as f64;
    0.5 * k * k - k * (2.0 + epsilon) * sigma * (nf * nf.ln()).sqrt() + c * mu * (1.0 - delta) * nf * nf
}

/// Minimiser `(2+ε)σ√(n ln n)` of [`lemma5_f`].
pub fn lemma5_vertex(n: usize, sigma: f64, epsilon: f64) -> f64 {
    let nf = n as f64;
    (2.0 + epsilon) * sigma * (nf * nf.ln()).sqrt()
}

/// `σ² ln n / (μ n)` and the threshold `2c(1-δ)/(2+ε)²` it must stay below
/// for the small-mean discriminant to be negative.
pub fn lemma5_criterion(n: usize, mu: f64, sigma: f64, epsilon: f64, delta: f64, c: f64) -> (f64, f64) {
    let nf = n as f64;
    (
        sigma * sigma * nf.ln() / (mu * nf),
        2.0 * c * (1.0 - delta) / ((2.0 + epsilon) * (2.0 + epsilon)),
    )
}

fn check_hoeffding(n: usize, mu: f64, delta: f64, b: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "hoeffding bound needs n >= 2, got {n}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} must lie in (0, 1)")));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("mu = {mu} must be positive")));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("b = {b} must be positive")));
    }
    Ok(())
}

/// `δ²μ²C(n,2)/b²`, the exponent of [`hoeffding_tail_bound`].
pub fn hoeffding_exponent(n: usize, mu: f64, delta: f64, b: f64) -> Result<f64> {
    check_hoeffding(n, mu, delta, b)?;
    Ok(delta * delta * mu * mu * choose2(n as u64) as f64 / (b * b))
}

/// Upper bound `exp(-δ²μ²C(n,2)/b²)` on `P[e(G) ≤ (1-δ)μC(n,2)]`.
pub fn hoeffding_tail_bound(n: usize, mu: f64, delta: f64, b: f64) -> Result<f64> {
    Ok((-hoeffding_exponent(n, mu, delta, b)?).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremBound {
    pub n0: usize,
    /// `δ²μ²C(n,2)/b²`; the bound is `1 - exp(-exponent)`.
    pub exponent: f64,
    pub value: f64,
}

/// Lower bound `1 - exp(-δ²μ²C(n,2)/b²)` on the probability that Brouwer's
/// inequality holds for every `k`, with `δ = γ²/2`.
///
/// Valid only once `n ≥ n0` (and `n ≥ 2`); below that the error carries `n0`.
pub fn theorem_lower_bound(n: usize, mu: f64, gamma: f64, b: f64) -> Result<TheoremBound> {
    let params = lemma3_params_at(gamma, mu)?;
    let n0 = params.n0.max(2);
    if n < n0 {
        return Err(Error::BelowThreshold { n, n0 });
    }
    let exponent = hoeffding_exponent(n, mu, params.delta, b)?;
    Ok(TheoremBound {
        n0,
        exponent,
        value: -(-exponent).exp_m1(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS_HALF: f64 = 0.224_744_871_391_589;

    #[test]
    fn lemma3_params_examples() {
        let p = lemma3_params(0.5).unwrap();
        assert_eq!(p.delta, 0.125);
        assert!((p.epsilon - EPS_HALF).abs() < 1e-14);
        assert!(((p.epsilon + 1.0).powi(2) - 1.5).abs() < 1e-15);
        let p = lemma3_params(0.999).unwrap();
        assert!((p.delta - 0.499_000_5).abs() < 1e-15);
        assert!((p.epsilon - 0.413_859_964_777_276).abs() < 1e-12);
        assert!(lemma3_params(0.0).is_err());
        assert!(lemma3_params(1.0).is_err());
    }

    #[test]
    fn lemma3_discriminant_examples() {
        let d = lemma3_discriminant(2, 0.5, EPS_HALF, 0.125);
        assert!((d.value + 0.349_744_871_391_589).abs() < 1e-12);
        assert!(d.negative);
        let d = lemma3_discriminant(1, 0.5, EPS_HALF, 0.125);
        assert!((d.value - 0.012_627_564_304_205).abs() < 1e-12);
        assert!(!d.negative);
        let d = lemma3_discriminant(1000, 1e-300, EPS_HALF, 0.125);
        assert!((d.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn lemma3_n0_examples() {
        assert_eq!(lemma3_n0(0.5, 0.5).unwrap(), 2);
        // exact discriminant crosses zero between n = 6 and n = 7
        assert_eq!(lemma3_n0(0.99, 0.01).unwrap(), 7);
        assert!(lemma3_n0(0.5, 0.6).is_err());
        assert!(lemma3_n0(0.5, 0.0).is_err());
    }

    #[test]
    fn lemma3_vertex_positive_at_n0() {
        for &(gamma, mu) in &[(0.5, 0.5), (0.99, 0.01), (0.1, 0.3), (0.3, 0.7)] {
            let p = lemma3_params_at(gamma, mu).unwrap();
            let k = lemma3_vertex(p.n0, mu, p.epsilon);
            assert!(lemma3_f(k, p.n0, mu, p.epsilon, p.delta) > 0.0, "{gamma} {mu}");
        }
    }

    #[test]
    fn lemma3_f_examples() {
        let c = 0.5 * 0.875 * 1.0;
        assert_eq!(lemma3_f(0.0, 2, 0.5, EPS_HALF, 0.125), c);
        for k in -10..=10 {
            assert!(lemma3_f(k as f64, 2, 0.5, EPS_HALF, 0.125) > 0.0, "k = {k}");
        }
        // min f = -Δ/2
        let d = lemma3_discriminant(2, 0.5, EPS_HALF, 0.125).value;
        let fmin = lemma3_f(lemma3_vertex(2, 0.5, EPS_HALF), 2, 0.5, EPS_HALF, 0.125);
        assert!((fmin + d / 2.0).abs() < 1e-12);
    }

    #[test]
    fn lemma5_examples() {
        let n = 10_000;
        let mu = (n as f64).powf(-0.9);
        let sigma = (1.0 - mu * mu).sqrt();
        let d = lemma5_discriminant(n, mu, sigma, 0.1, 0.1, 0.4).unwrap();
        assert!((d.value - 388_090.402_469_307).abs() < 1e-6, "{}", d.value);
        assert!(!d.negative);
        let (lhs, rhs) = lemma5_criterion(n, mu, sigma, 0.1, 0.1, 0.4);
        assert!((rhs - 0.163_265_306_122_449).abs() < 1e-14);
        assert!((lhs - 3.666_702_313_968_794).abs() < 1e-10);
        assert_eq!(d.negative, lhs < rhs);

        let d = lemma5_discriminant(50, 0.3, 0.0, 0.1, 0.2, 0.45).unwrap();
        assert!((d.value + 2.0 * 0.45 * 0.3 * 0.8 * 2500.0).abs() < 1e-9);
        assert!(d.negative);
        assert!(lemma5_discriminant(1, 0.3, 0.1, 0.1, 0.1, 0.45).is_err());
        assert!(lemma5_discriminant(5, 0.3, 0.1, 0.1, 0.1, 0.0).is_err());
    }

    #[test]
    fn hoeffding_examples() {
        let v = hoeffding_tail_bound(3, 0.5, 0.5, 1.0).unwrap();
        assert!((v - 0.829_029_118_180_400).abs() < 1e-12);
        assert!(hoeffding_tail_bound(100, 0.5, 1e-9, 1.0).unwrap() > 1.0 - 1e-12);
        let mut prev = 1.0;
        for n in [2, 4, 8, 16, 32] {
            let v = hoeffding_tail_bound(n, 0.3, 0.2, 1.0).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(hoeffding_tail_bound(1, 0.5, 0.5, 1.0).is_err());
        assert!(hoeffding_tail_bound(3, 0.5, 1.0, 1.0).is_err());
        assert!(hoeffding_tail_bound(3, 0.5, 0.5, 0.0).is_err());
    }

    #[test]
    fn theorem_bound_examples() {
        let t = theorem_lower_bound(100, 0.5, 0.5, 1.0).unwrap();
        assert!((t.exponent - 19.335_937_5).abs() < 1e-12);
        assert!((t.value - 0.999_999_995_995_862).abs() < 1e-14);
        assert!(t.value > 0.0 && t.value < 1.0);
        let mut prev = 0.0;
        for n in 2..60 {
            let v = theorem_lower_bound(n, 0.5, 0.5, 1.0).unwrap().value;
            assert!(v >= prev && v > 0.0 && v < 1.0);
            prev = v;
        }
        assert_eq!(
            theorem_lower_bound(1, 0.5, 0.5, 1.0),
            Err(Error::BelowThreshold { n: 1, n0: 2 })
        );
        assert!(matches!(
            theorem_lower_bound(5, 0.01, 0.99, 1.0),
            Err(Error::BelowThreshold { n0: 7, .. })
        ));
    }
}
