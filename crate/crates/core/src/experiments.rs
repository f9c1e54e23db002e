//! Monte Carlo trials, exhaustive enumeration and concentration studies.
//!
//! Work is split into independent units (trials, bitmask ranges) that run on
//! a rayon pool of the requested size. Results are gathered per chunk and
//! emitted in index order, so every output is identical for any worker count.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{hoeffding_tail_bound, theorem_lower_bound};
use crate::conjecture::{default_tolerance, BrouwerReport};
use crate::ensembles::{splitmix64_mix, EnsembleSpec, Family, RngInfo, SeedSpec, RNG_INFO};
use crate::graph::WeightedGraph;
use crate::spectral::{eigen_tolerance, eigenvalues_sym};
use crate::{choose2, Error, Result};

/// Trials handed to the pool at a time.
const TRIAL_CHUNK: usize = 256;
/// Default largest `n` accepted by [`enumerate_graphs`].
pub const DEFAULT_ENUMERATION_CAP: usize = 6;
/// `n = 8` would mean 2^28 graphs.
pub const HARD_ENUMERATION_CAP: usize = 7;
/// Masks per enumeration chunk; one checkpoint per chunk.
pub const ENUMERATION_CHUNK: u64 = 1 << 12;

/// Runs `f` on a pool with `workers` threads (`None`: rayon's default).
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::InvalidParameter("worker count must be positive".into()));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Outcome of one sampled graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub t: u64,
    pub spec: EnsembleSpec,
    /// Substream seed derived from `(master_seed, t)`.
    pub seed: u64,
    #[serde(rename = "e")]
    pub e_g: f64,
    #[serde(rename = "lmax")]
    pub lambda_max: f64,
    pub min_margin: f64,
    #[serde(rename = "k")]
    pub min_margin_k: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialFailure {
    pub t: u64,
    pub error: String,
}

/// Quartiles `(q25, median, q75)` with linear interpolation between order
/// statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quartiles {
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
}

impl Quartiles {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Self {
            q25: quantile_sorted(&v, 0.25),
            median: quantile_sorted(&v, 0.5),
            q75: quantile_sorted(&v, 0.75),
        })
    }
}

fn quantile_sorted(v: &[f64], q: f64) -> f64 {
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
}

/// `λ_max / (nμ)`, or `None` when `μ = 0`.
pub fn ratio_mean_scale(lambda_max: f64, spec: &EnsembleSpec) -> Option<f64> {
    let mu = spec.mu();
    (mu != 0.0).then(|| lambda_max / (spec.n as f64 * mu))
}

/// `λ_max / (σ √(n ln n))`, or `None` when `σ = 0` or `n < 2`.
pub fn ratio_sigma_scale(lambda_max: f64, spec: &EnsembleSpec) -> Option<f64> {
    let sigma = spec.sigma();
    let n = spec.n as f64;
    (sigma > 0.0 && spec.n >= 2).then(|| lambda_max / (sigma * (n * n.ln()).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioStats {
    pub ratio1: Option<Quartiles>,
    pub ratio2: Option<Quartiles>,
}

impl RatioStats {
    fn from_records(spec: &EnsembleSpec, records: &[TrialRecord]) -> Self {
        let collect = |f: fn(f64, &EnsembleSpec) -> Option<f64>| -> Option<Quartiles> {
            let v: Option<Vec<f64>> = records.iter().map(|r| f(r.lambda_max, spec)).collect();
            v.and_then(|v| Quartiles::of(&v))
        };
        Self {
            ratio1: collect(ratio_mean_scale),
            ratio2: collect(ratio_sigma_scale),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub spec: EnsembleSpec,
    pub master_seed: u64,
    pub requested: u64,
    /// Trials whose spectrum was computed; failures are excluded.
    pub trials: u64,
    pub violations: u64,
    pub failures: Vec<TrialFailure>,
    pub empirical_prob: f64,
    /// `1 - exp(-δ²μ²C(n,2)/b²)` with `γ = 1 - μ`, when its hypotheses hold.
    pub analytic_lower_bound: Option<f64>,
    pub ratios: RatioStats,
    pub rng: RngInfo,
}

/// Samples one trial and evaluates Brouwer's inequality on it.
pub fn run_trial(spec: &EnsembleSpec, seed: SeedSpec) -> Result<TrialRecord> {
    let g = spec.sample_graph(seed);
    let l = g.laplacian();
    let spectrum = eigenvalues_sym(&l)?;
    let report = BrouwerReport::from_spectrum(
        g.total_weight(),
        &spectrum,
        default_tolerance(&spectrum),
        eigen_tolerance(&l),
    );
    let (k, m) = report.worst();
    Ok(TrialRecord {
        t: seed.trial_index,
        spec: *spec,
        seed: seed.substream_seed(),
        e_g: report.e_g,
        lambda_max: spectrum.max(),
        min_margin: m,
        min_margin_k: k,
        holds: report.holds,
    })
}

fn analytic_bound_for(spec: &EnsembleSpec) -> Option<f64> {
    let mu = spec.mu();
    if !(mu > 0.0 && mu < 1.0) {
        return None;
    }
    theorem_lower_bound(spec.n, mu, 1.0 - mu, spec.bound())
        .ok()
        .map(|b| b.value)
}

/// Runs `trials` seeded trials, passing each record to `sink` in trial order.
pub fn run_trials_with<F>(
    spec: &EnsembleSpec,
    trials: u64,
    master_seed: u64,
    workers: Option<usize>,
    mut sink: F,
) -> Result<(ExperimentSummary, Vec<TrialRecord>)>
where
    F: FnMut(&TrialRecord) -> Result<()>,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    spec.family.validate()?;
    let mut records = Vec::with_capacity(trials as usize);
    let mut failures = Vec::new();
    let mut start = 0u64;
    while start < trials {
        let end = (start + TRIAL_CHUNK as u64).min(trials);
        let chunk: Vec<Result<TrialRecord>> = with_workers(workers, || {
            (start..end)
                .into_par_iter()
                .map(|t| run_trial(spec, SeedSpec::new(master_seed, t)))
                .collect()
        })?;
        for (t, outcome) in (start..end).zip(chunk) {
            match outcome {
                Ok(r) => {
                    sink(&r)?;
                    records.push(r);
                }
                Err(e) => failures.push(TrialFailure {
                    t,
                    error: e.to_string(),
                }),
            }
        }
        start = end;
    }
    let completed = records.len() as u64;
    let violations = records.iter().filter(|r| !r.holds).count() as u64;
    let empirical_prob = if completed == 0 {
        0.0
    } else {
        (completed - violations) as f64 / completed as f64
    };
    let summary = ExperimentSummary {
        spec: *spec,
        master_seed,
        requested: trials,
        trials: completed,
        violations,
        failures,
        empirical_prob,
        analytic_lower_bound: analytic_bound_for(spec),
        ratios: RatioStats::from_records(spec, &records),
        rng: RNG_INFO,
    };
    Ok((summary, records))
}

pub fn run_trials(
    spec: &EnsembleSpec,
    trials: u64,
    master_seed: u64,
    workers: Option<usize>,
) -> Result<(ExperimentSummary, Vec<TrialRecord>)> {
    run_trials_with(spec, trials, master_seed, workers, |_| Ok(()))
}

/// Appends one JSON object per line.
pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

/// The `b`-th pair in lexicographic order, for all pairs of `0..n`.
pub fn lexicographic_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Unweighted graph whose edge set is the bits of `mask`.
pub fn graph_from_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> WeightedGraph {
    let edges = pairs
        .iter()
        .enumerate()
        .filter(|(b, _)| mask >> b & 1 == 1)
        .map(|(_, &(u, v))| (u, v, 1.0));
    WeightedGraph::new(n, edges).expect("mask edges are canonical")
}

/// Running totals of an enumeration; doubles as the checkpoint payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationState {
    pub n: usize,
    /// First mask not yet examined.
    #[serde(skip)]
    pub next_mask: u64,
    pub violations: u64,
    pub failures: u64,
    pub min_margin: f64,
    pub witness_mask: u64,
    pub witness_k: usize,
}

#[derive(Serialize, Deserialize)]
struct CheckpointJson {
    last_mask: String,
    n: usize,
    violations: u64,
    #[serde(default)]
    failures: u64,
    min_margin: f64,
    witness_mask: u64,
    witness_k: usize,
}

impl EnumerationState {
    fn fresh(n: usize) -> Self {
        Self {
            n,
            next_mask: 0,
            violations: 0,
            failures: 0,
            min_margin: f64::INFINITY,
            witness_mask: 0,
            witness_k: 0,
        }
    }

    /// `2^C(n,2)`.
    pub fn total(&self) -> u64 {
        1u64 << choose2(self.n as u64)
    }

    pub fn is_complete(&self) -> bool {
        self.next_mask == self.total()
    }

    /// `{"last_mask": "<int>", "n": …, "violations": …, …}`; `None` before the
    /// first mask is done.
    pub fn to_checkpoint_json(&self) -> Option<String> {
        let last = self.next_mask.checked_sub(1)?;
        let cp = CheckpointJson {
            last_mask: last.to_string(),
            n: self.n,
            violations: self.violations,
            failures: self.failures,
            min_margin: self.min_margin,
            witness_mask: self.witness_mask,
            witness_k: self.witness_k,
        };
        Some(serde_json::to_string(&cp).expect("checkpoint serialization is infallible"))
    }

    pub fn from_checkpoint_json(text: &str) -> Result<Self> {
        let cp: CheckpointJson = serde_json::from_str(text)?;
        let last: u64 = cp
            .last_mask
            .parse()
            .map_err(|_| Error::Checkpoint(format!("last_mask `{}` is not an integer", cp.last_mask)))?;
        let state = Self {
            n: cp.n,
            next_mask: last + 1,
            violations: cp.violations,
            failures: cp.failures,
            min_margin: cp.min_margin,
            witness_mask: cp.witness_mask,
            witness_k: cp.witness_k,
        };
        if cp.n > HARD_ENUMERATION_CAP || state.next_mask > state.total() {
            return Err(Error::Checkpoint(format!(
                "last_mask {last} out of range for n = {}",
                cp.n
            )));
        }
        Ok(state)
    }

    fn absorb(&mut self, part: &ChunkTally) {
        self.violations += part.violations;
        self.failures += part.failures;
        if let Some((m, mask, k)) = part.worst {
            if (m, mask) < (self.min_margin, self.witness_mask) || self.min_margin.is_infinite() {
                self.min_margin = m;
                self.witness_mask = mask;
                self.witness_k = k;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ChunkTally {
    violations: u64,
    failures: u64,
    /// `(margin, mask, k)` of the smallest margin, smallest mask on ties.
    worst: Option<(f64, u64, usize)>,
}

impl ChunkTally {
    fn merge(self, other: Self) -> Self {
        let worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => Some(if (b.0, b.1) < (a.0, a.1) { b } else { a }),
            (a, b) => a.or(b),
        };
        Self {
            violations: self.violations + other.violations,
            failures: self.failures + other.failures,
            worst,
        }
    }

    fn of_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> Self {
        let g = graph_from_mask(n, pairs, mask);
        let l = g.laplacian();
        match eigenvalues_sym(&l) {
            Ok(spectrum) => {
                let r = BrouwerReport::from_spectrum(
                    g.total_weight(),
                    &spectrum,
                    default_tolerance(&spectrum),
                    eigen_tolerance(&l),
                );
                let (k, m) = r.worst();
                Self {
                    violations: u64::from(!r.holds),
                    failures: 0,
                    worst: Some((m, mask, k)),
                }
            }
            Err(_) => Self {
                failures: 1,
                ..Self::default()
            },
        }
    }
}

/// Options for [`enumerate_graphs_with`].
#[derive(Debug, Clone, Default)]
pub struct EnumerationOptions {
    /// Largest accepted `n`; defaults to [`DEFAULT_ENUMERATION_CAP`] and may not
    /// exceed [`HARD_ENUMERATION_CAP`].
    pub cap: Option<usize>,
    /// Continue from this state instead of mask 0.
    pub resume: Option<EnumerationState>,
    /// Stop (incomplete) after roughly this many masks, rounded up to a chunk.
    pub limit: Option<u64>,
    pub workers: Option<usize>,
}

/// Walks every labeled graph on `n` vertices, mask `0..2^C(n,2)` with bit `b`
/// standing for the `b`-th lexicographic pair. `on_chunk` sees the state after
/// each completed chunk (for checkpointing).
pub fn enumerate_graphs_with<F>(n: usize, opts: &EnumerationOptions, mut on_chunk: F) -> Result<EnumerationState>
where
    F: FnMut(&EnumerationState) -> Result<()>,
{
    let cap = opts.cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    if cap > HARD_ENUMERATION_CAP {
        return Err(Error::AboveCap {
            n: cap,
            cap: HARD_ENUMERATION_CAP,
        });
    }
    if n > cap {
        return Err(Error::AboveCap { n, cap });
    }
    if n == 0 {
        return Err(Error::NoVertices);
    }
    let mut state = match &opts.resume {
        Some(s) if s.n != n => return Err(Error::Checkpoint(format!("checkpoint is for n = {}, not {n}", s.n))),
        Some(s) => s.clone(),
        None => EnumerationState::fresh(n),
    };
    let pairs = lexicographic_pairs(n);
    let total = state.total();
    let stop = opts
        .limit
        .map_or(total, |l| state.next_mask.saturating_add(l).min(total));
    while state.next_mask < stop {
        let lo = state.next_mask;
        let hi = (lo + ENUMERATION_CHUNK).min(total);
        let tally = with_workers(opts.workers, || {
            (lo..hi)
                .into_par_iter()
                .map(|mask| ChunkTally::of_mask(n, &pairs, mask))
                .reduce(ChunkTally::default, ChunkTally::merge)
        })?;
        state.absorb(&tally);
        state.next_mask = hi;
        on_chunk(&state)?;
    }
    Ok(state)
}

/// Full enumeration with default options.
pub fn enumerate_graphs(n: usize) -> Result<EnumerationState> {
    enumerate_graphs_with(n, &EnumerationOptions::default(), |_| Ok(()))
}

// ---------------------------------------------------------------------------
// Concentration of λ_max

/// Weight family as a function of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilySchedule {
    Fixed(Family),
    /// Shifted Rademacher with mean `n^(-exponent)`.
    ShiftedRademacherPower {
        exponent: f64,
    },
}

impl FamilySchedule {
    pub fn at(&self, n: usize) -> Family {
        match *self {
            FamilySchedule::Fixed(f) => f,
            FamilySchedule::ShiftedRademacherPower { exponent } => Family::ShiftedRademacher {
                mu: (n as f64).powf(-exponent),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationRow {
    pub n: usize,
    pub mu: f64,
    pub sigma: f64,
    pub trials: u64,
    pub violations: u64,
    pub ratio1: Option<Quartiles>,
    pub ratio2: Option<Quartiles>,
}

pub const CONCENTRATION_CSV_HEADER: &str = "n,q25_ratio1,median_ratio1,q75_ratio1,q25_ratio2,median_ratio2,q75_ratio2";

impl ConcentrationRow {
    /// Undefined ratios (`μ = 0` or `σ = 0`) are left empty.
    pub fn csv_line(&self) -> String {
        let cells = |q: Option<Quartiles>| match q {
            Some(q) => format!("{},{},{}", q.q25, q.median, q.q75),
            None => ",,".to_string(),
        };
        format!("{},{},{}", self.n, cells(self.ratio1), cells(self.ratio2))
    }
}

/// Master seed used for size `n` within a study, so that different sizes do
/// not share their leading draws.
pub fn per_size_seed(master_seed: u64, n: usize) -> u64 {
    splitmix64_mix(master_seed ^ n as u64)
}

/// For each `n`, tabulates quartiles of `λ_max/(nμ)` and
/// `λ_max/(σ√(n ln n))`. Records of every trial are returned in `(n, t)` order.
pub fn concentration_study(
    schedule: FamilySchedule,
    n_grid: &[usize],
    trials_per_n: u64,
    master_seed: u64,
    workers: Option<usize>,
) -> Result<(Vec<ConcentrationRow>, Vec<TrialRecord>)> {
    let mut rows = Vec::with_capacity(n_grid.len());
    let mut all = Vec::new();
    for &n in n_grid {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("concentration needs n >= 2, got {n}")));
        }
        let spec = EnsembleSpec::new(schedule.at(n), n)?;
        let (summary, records) = run_trials(&spec, trials_per_n, per_size_seed(master_seed, n), workers)?;
        rows.push(ConcentrationRow {
            n,
            mu: spec.mu(),
            sigma: spec.sigma(),
            trials: summary.trials,
            violations: summary.violations,
            ratio1: summary.ratios.ratio1,
            ratio2: summary.ratios.ratio2,
        });
        all.extend(records);
    }
    Ok((rows, all))
}

pub fn write_concentration_csv(path: &Path, rows: &[ConcentrationRow]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{CONCENTRATION_CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Edge-weight lower tail

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailStudy {
    pub spec: EnsembleSpec,
    pub delta: f64,
    pub trials: u64,
    /// `(1-δ)μC(n,2)`.
    pub threshold: f64,
    pub hits: u64,
    pub empirical_tail: f64,
    pub analytic_bound: f64,
}

impl TailStudy {
    /// `analytic_bound + z * sqrt(bound (1 - bound) / trials)`.
    pub fn slack(&self, z: f64) -> f64 {
        let b = self.analytic_bound;
        b + z * (b * (1.0 - b) / self.trials as f64).sqrt()
    }
}

/// Frequency of `e(G) ≤ (1-δ)μC(n,2)` next to the Hoeffding bound.
pub fn edge_weight_tail_study(
    spec: &EnsembleSpec,
    delta: f64,
    trials: u64,
    master_seed: u64,
    workers: Option<usize>,
) -> Result<TailStudy> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let analytic_bound = hoeffding_tail_bound(spec.n, spec.mu(), delta, spec.bound())?;
    let threshold = (1.0 - delta) * spec.expected_total_weight();
    let hits = with_workers(workers, || {
        (0..trials)
            .into_par_iter()
            .filter(|&t| spec.sample_graph(SeedSpec::new(master_seed, t)).total_weight() <= threshold)
            .count() as u64
    })?;
    Ok(TailStudy {
        spec: *spec,
        delta,
        trials,
        threshold,
        hits,
        empirical_tail: hits as f64 / trials as f64,
        analytic_bound,
    })
}
