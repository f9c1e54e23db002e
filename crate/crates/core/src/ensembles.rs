//! Bounded random weighted graph families with reproducible seeding.
//!
//! Every unordered pair `{i, j}` receives exactly one independent draw, in
//! lexicographic order `(0,1), (0,2), …, (n-2,n-1)`, from a per-trial
//! substream. The substream seed depends only on `(master_seed, trial_index)`,
//! so a trial samples the same graph regardless of which worker runs it.
//!
//! Bit-exact recipe (see [`RNG_INFO`]):
//!
//! 1. `s = splitmix64_mix(master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15)`
//!    with wrapping arithmetic, where `splitmix64_mix(z)` is
//!    `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;`
//!    `z = (z ^ (z >> 27)) * 0x94D049BB133111EB;`
//!    `z ^ (z >> 31)`.
//! 2. The generator is xoshiro256++ seeded with `seed_from_u64(s)`, which
//!    fills its 256-bit state with four consecutive SplitMix64 outputs.
//! 3. A uniform `u ∈ [0, 1)` is `(next_u64() >> 11) * 2^-53`.
//! 4. Weights: bernoulli(p) is `1` if `u < p` else `0`; uniform(a, b) is
//!    `a + (b - a) * u`; shifted_rademacher(μ) is `+1` if `u < (1 + μ) / 2`
//!    else `-1`.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::graph::WeightedGraph;
use crate::{choose2, Error, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
pub fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator description echoed into experiment metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RngInfo {
    pub generator: &'static str,
    pub seeding: &'static str,
    pub substream: &'static str,
    pub uniform: &'static str,
}

pub const RNG_INFO: RngInfo = RngInfo {
    generator: "xoshiro256++",
    seeding: "seed_from_u64: state = 4 consecutive SplitMix64 outputs",
    substream: "splitmix64_mix(master + (t+1)*0x9E3779B97F4A7C15), mix constants 0xBF58476D1CE4E5B9, 0x94D049BB133111EB, shifts 30/27/31",
    uniform: "(next_u64 >> 11) * 2^-53; pairs drawn in lexicographic (i<j) order",
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Self {
            master_seed,
            trial_index,
        }
    }

    pub fn substream_seed(&self) -> u64 {
        splitmix64_mix(
            self.master_seed
                .wrapping_add(self.trial_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)),
        )
    }

    pub fn rng(&self) -> Xoshiro256PlusPlus {
        Xoshiro256PlusPlus::seed_from_u64(self.substream_seed())
    }
}

/// Uniform draw on `[0, 1)` with 53 random bits.
pub fn uniform01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Distribution of a single off-diagonal weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Family {
    Bernoulli { p: f64 },
    Uniform { a: f64, b: f64 },
    ShiftedRademacher { mu: f64 },
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidEnsemble(msg));
        match *self {
            Family::Bernoulli { p } if !(0.0..=1.0).contains(&p) => bad(format!("bernoulli p = {p} outside [0, 1]")),
            Family::Uniform { a, b } if !(a.is_finite() && b.is_finite() && a < b) => {
                bad(format!("uniform needs finite a < b, got ({a}, {b})"))
            }
            Family::ShiftedRademacher { mu } if !(-1.0..=1.0).contains(&mu) => {
                bad(format!("shifted_rademacher mu = {mu} outside [-1, 1]"))
            }
            _ => Ok(()),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Family::Bernoulli { p } => p,
            Family::Uniform { a, b } => 0.5 * (a + b),
            Family::ShiftedRademacher { mu } => mu,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Family::Bernoulli { p } => p * (1.0 - p),
            Family::Uniform { a, b } => (b - a) * (b - a) / 12.0,
            Family::ShiftedRademacher { mu } => 1.0 - mu * mu,
        }
    }

    /// Almost-sure bound on `|ξ|`.
    pub fn bound(&self) -> f64 {
        match *self {
            Family::Bernoulli { .. } | Family::ShiftedRademacher { .. } => 1.0,
            Family::Uniform { a, b } => a.abs().max(b.abs()),
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = uniform01(rng);
        match *self {
            Family::Bernoulli { p } => {
                if u < p {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Uniform { a, b } => a + (b - a) * u,
            Family::ShiftedRademacher { mu } => {
                if u < 0.5 * (1.0 + mu) {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Bernoulli { .. } => "bernoulli",
            Family::Uniform { .. } => "uniform",
            Family::ShiftedRademacher { .. } => "shifted_rademacher",
        }
    }
}

/// A weight family at a fixed graph size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
}

impl EnsembleSpec {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        family.validate()?;
        if n == 0 {
            return Err(Error::InvalidEnsemble("n must be at least 1".into()));
        }
        Ok(Self { family, n })
    }

    pub fn mu(&self) -> f64 {
        self.family.mean()
    }

    pub fn sigma(&self) -> f64 {
        self.family.variance().sqrt()
    }

    pub fn bound(&self) -> f64 {
        self.family.bound()
    }

    /// `μ C(n, 2)`.
    pub fn expected_total_weight(&self) -> f64 {
        self.mu() * choose2(self.n as u64) as f64
    }

    /// `(μ/σ · sqrt(n / ln n), σ² ln n / (μ n))`: the first diverging places
    /// the sequence in the `λ_max ≈ nμ` regime, the second vanishing is the
    /// hypothesis of the small-mean regime.
    ///
    /// A degenerate `σ = 0` gives `(±∞, 0)`.
    pub fn regime_indicators(&self) -> Result<(f64, f64)> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!(
                "regime indicators need n >= 2, got {}",
                self.n
            )));
        }
        let (mu, sigma) = (self.mu(), self.sigma());
        if mu == 0.0 {
            return Err(Error::InvalidParameter("regime indicators need mu != 0".into()));
        }
        let n = self.n as f64;
        let ln = n.ln();
        let r1 = if sigma == 0.0 {
            mu.signum() * f64::INFINITY
        } else {
            mu / sigma * (n / ln).sqrt()
        };
        let r2 = sigma * sigma * ln / (mu * n);
        Ok((r1, r2))
    }

    /// One graph, with a single draw per unordered pair in lexicographic order.
    pub fn sample_graph(&self, seed: SeedSpec) -> WeightedGraph {
        let mut rng = seed.rng();
        let n = self.n;
        let mut edges = Vec::with_capacity(choose2(n as u64) as usize);
        for i in 0..n {
            for j in i + 1..n {
                let w = self.family.draw(&mut rng);
                if w != 0.0 {
                    edges.push((i, j, w));
                }
            }
        }
        WeightedGraph::new(n, edges).expect("sampled edges are canonical and finite")
    }
}

pub fn sample_graph(spec: &EnsembleSpec, seed: SeedSpec) -> WeightedGraph {
    spec.sample_graph(seed)
}

pub fn expected_total_weight(spec: &EnsembleSpec) -> f64 {
    spec.expected_total_weight()
}

pub fn regime_indicators(spec: &EnsembleSpec) -> Result<(f64, f64)> {
    spec.regime_indicators()
}
