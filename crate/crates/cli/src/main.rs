//! `brouwer`: check Brouwer's inequality on graph files, run Monte Carlo and
//! exhaustive experiments, and evaluate the regime bounds.
//!
//! stdout carries one JSON document per run (the resolved configuration under
//! `"config"` plus the payload); diagnostics go to stderr. Exit codes: 0 on
//! success, 1 when a violation was found, 2 on usage, input or runtime errors.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use brouwer_core::bounds::{
    hoeffding_exponent, lemma3_discriminant, lemma3_f, lemma3_params_at, lemma3_vertex, lemma5_criterion,
    lemma5_discriminant, lemma5_f, lemma5_vertex, theorem_lower_bound, DEFAULT_BINOMIAL_RATIO,
};
use brouwer_core::conjecture::{brouwer_margins, brouwer_report, BrouwerReport};
use brouwer_core::ensembles::{EnsembleSpec, Family};
use brouwer_core::experiments::{
    concentration_study, enumerate_graphs_with, run_trials, write_concentration_csv, write_jsonl, EnumerationOptions,
    EnumerationState, FamilySchedule,
};
use brouwer_core::graph::WeightedGraph;
use brouwer_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "brouwer",
    version,
    about = "Brouwer's Laplacian eigenvalue conjecture: checks and experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every margin of a graph file.
    Check(CheckArgs),
    /// Monte Carlo trials on a random weighted graph ensemble.
    Sample(SampleArgs),
    /// Exhaustively check every labeled simple graph on n vertices.
    Enumerate(EnumerateArgs),
    /// Quartiles of the normalized largest eigenvalue over a grid of sizes.
    Concentration(ConcentrationArgs),
    /// Derived regime parameters, discriminants and probability bounds.
    Bounds(BoundsArgs),
}

#[derive(Args, Serialize)]
struct CheckArgs {
    /// JSON file `{"n": …, "edges": [[u, v, w], …]}`.
    graph_file: PathBuf,
    /// Override the default check tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum FamilyName {
    Bernoulli,
    Uniform,
    ShiftedRademacher,
}

#[derive(Args, Serialize)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    /// Edge probability (bernoulli).
    #[arg(long)]
    p: Option<f64>,
    /// Lower end of the support (uniform).
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Upper end of the support (uniform).
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Mean (shifted-rademacher).
    #[arg(long, conflicts_with = "mu_exp", allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Mean n^(-mu_exp) (shifted-rademacher).
    #[arg(long)]
    mu_exp: Option<f64>,
}

fn required(v: Option<f64>, flag: &str, family: &str) -> Result<f64, Error> {
    v.ok_or_else(|| Error::InvalidEnsemble(format!("--{flag} is required for {family}")))
}

impl FamilyArgs {
    fn schedule(&self) -> Result<FamilySchedule, Error> {
        let fixed = match self.family {
            FamilyName::Bernoulli => Family::Bernoulli {
                p: required(self.p, "p", "bernoulli")?,
            },
            FamilyName::Uniform => Family::Uniform {
                a: required(self.a, "a", "uniform")?,
                b: required(self.b, "b", "uniform")?,
            },
            FamilyName::ShiftedRademacher => match (self.mu, self.mu_exp) {
                (_, Some(exponent)) => {
                    if !exponent.is_finite() || exponent < 0.0 {
                        return Err(Error::InvalidEnsemble(format!("--mu-exp {exponent} must be >= 0")));
                    }
                    return Ok(FamilySchedule::ShiftedRademacherPower { exponent });
                }
                (Some(mu), None) => Family::ShiftedRademacher { mu },
                (None, None) => {
                    return Err(Error::InvalidEnsemble(
                        "--mu or --mu-exp is required for shifted-rademacher".into(),
                    ))
                }
            },
        };
        fixed.validate()?;
        Ok(FamilySchedule::Fixed(fixed))
    }
}

#[derive(Args, Serialize)]
struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write one JSON record per trial here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, env = "BROUWER_WORKERS")]
    workers: Option<usize>,
}

#[derive(Args, Serialize)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    /// Largest n accepted (at most 7).
    #[arg(long)]
    cap: Option<usize>,
    /// Write progress here after every chunk.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from a checkpoint file (and keep updating it unless
    /// --checkpoint names another file).
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Stop after roughly this many more graphs.
    #[arg(long)]
    stop_after: Option<u64>,
    #[arg(long, env = "BROUWER_WORKERS")]
    workers: Option<usize>,
}

#[derive(Args, Serialize)]
struct ConcentrationArgs {
    #[command(flatten)]
    #[serde(flatten)]
    family: FamilyArgs,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    trials_per_n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the quartile table here as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write every trial record here as JSONL.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "BROUWER_WORKERS")]
    workers: Option<usize>,
}

#[derive(Args, Serialize)]
struct BoundsArgs {
    #[arg(long)]
    gamma: f64,
    /// Mean weight (default 1 - gamma).
    #[arg(long)]
    mu: Option<f64>,
    /// Weight standard deviation; enables the small-mean discriminant.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    n: usize,
    /// Almost-sure bound on |weight|.
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Relative deficit of e(G) (default gamma^2/2).
    #[arg(long)]
    delta: Option<f64>,
    /// Slack of the small-mean eigenvalue scale (default sqrt(1+gamma) - 1).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Constant with C(n,2) >= c n^2.
    #[arg(long, default_value_t = DEFAULT_BINOMIAL_RATIO)]
    c: f64,
}

/// Payload plus exit code.
struct Outcome {
    payload: Value,
    violation: bool,
}

fn with_config<C: Serialize>(command: &str, config: &C, payload: Value) -> Value {
    let mut config = serde_json::to_value(config).expect("config serializes");
    config["subcommand"] = json!(command);
    let mut out = json!({ "config": config });
    if let (Value::Object(out), Value::Object(fields)) = (&mut out, payload) {
        out.extend(fields);
    }
    out
}

fn cmd_check(args: &CheckArgs) -> Result<Outcome, Error> {
    let text =
        fs::read_to_string(&args.graph_file).map_err(|e| Error::Io(format!("{}: {e}", args.graph_file.display())))?;
    let g = WeightedGraph::from_json(&text)?;
    let report: BrouwerReport = match args.tol {
        Some(tol) => brouwer_margins(&g, tol)?,
        None => brouwer_report(&g)?,
    };
    let payload = json!({ "report": report });
    Ok(Outcome {
        payload: with_config("check", args, payload),
        violation: !report.holds,
    })
}

fn cmd_sample(args: &SampleArgs) -> Result<Outcome, Error> {
    let family = args.family.schedule()?.at(args.n);
    let spec = EnsembleSpec::new(family, args.n)?;
    let (summary, records) = run_trials(&spec, args.trials, args.seed, args.workers)?;
    if let Some(path) = &args.out {
        write_jsonl(path, &records)?;
    }
    for f in &summary.failures {
        eprintln!("trial {} failed: {}", f.t, f.error);
    }
    Ok(Outcome {
        payload: with_config("sample", args, json!({ "summary": summary })),
        violation: summary.violations > 0,
    })
}

fn write_atomically(path: &Path, text: &str) -> Result<(), Error> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<Outcome, Error> {
    let resume = match &args.resume {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Some(EnumerationState::from_checkpoint_json(&text)?)
        }
        None => None,
    };
    let checkpoint = args.checkpoint.as_ref().or(args.resume.as_ref());
    let opts = EnumerationOptions {
        cap: args.cap,
        resume,
        limit: args.stop_after,
        workers: args.workers,
    };
    let state = enumerate_graphs_with(args.n, &opts, |s| match (checkpoint, s.to_checkpoint_json()) {
        (Some(path), Some(text)) => write_atomically(path, &text),
        _ => Ok(()),
    })?;
    let complete = state.is_complete();
    if !complete {
        eprintln!("stopped after {} of {} graphs", state.next_mask, state.total());
    }
    let min_margin = state.min_margin.is_finite().then_some(state.min_margin);
    let payload = json!({
        "n": state.n,
        "total": state.total(),
        "examined": state.next_mask,
        "complete": complete,
        "violations": state.violations,
        "failures": state.failures,
        "min_margin": min_margin,
        "witness_mask": min_margin.map(|_| state.witness_mask),
        "witness_k": min_margin.map(|_| state.witness_k),
    });
    Ok(Outcome {
        payload: with_config("enumerate", args, payload),
        violation: state.violations > 0,
    })
}

fn cmd_concentration(args: &ConcentrationArgs) -> Result<Outcome, Error> {
    let schedule = args.family.schedule()?;
    let (rows, records) = concentration_study(schedule, &args.n_grid, args.trials_per_n, args.seed, args.workers)?;
    if let Some(path) = &args.csv {
        write_concentration_csv(path, &rows)?;
    }
    if let Some(path) = &args.out {
        write_jsonl(path, &records)?;
    }
    let violation = rows.iter().any(|r| r.violations > 0);
    Ok(Outcome {
        payload: with_config("concentration", args, json!({ "rows": rows })),
        violation,
    })
}

fn cmd_bounds(args: &BoundsArgs) -> Result<Outcome, Error> {
    let mu = args.mu.unwrap_or(1.0 - args.gamma);
    let params = lemma3_params_at(args.gamma, mu)?;
    let n = args.n;
    if n == 0 {
        return Err(Error::InvalidParameter("--n must be at least 1".into()));
    }
    let disc = lemma3_discriminant(n, mu, params.epsilon, params.delta);
    let vertex = lemma3_vertex(n, mu, params.epsilon);
    let lemma3 = json!({
        "gamma": params.gamma,
        "mu": mu,
        "delta": params.delta,
        "epsilon": params.epsilon,
        "n0": params.n0,
        "discriminant": disc,
        "vertex": vertex,
        "f_at_vertex": lemma3_f(vertex, n, mu, params.epsilon, params.delta),
    });

    let delta = args.delta.unwrap_or(params.delta);
    let hoeffding = match hoeffding_exponent(n, mu, delta, args.b) {
        Ok(x) => json!({ "delta": delta, "exponent": x, "bound": (-x).exp() }),
        Err(e) => json!({ "delta": delta, "error": e.to_string() }),
    };

    let theorem = match theorem_lower_bound(n, mu, args.gamma, args.b) {
        Ok(t) => json!({ "status": "valid", "n0": t.n0, "exponent": t.exponent, "value": t.value }),
        Err(Error::BelowThreshold { n0, .. }) => json!({ "status": "not yet valid", "n0": n0 }),
        Err(e) => return Err(e),
    };

    let lemma5 = match args.sigma {
        None => Value::Null,
        Some(sigma) => {
            if !(sigma >= 0.0 && sigma.is_finite()) {
                return Err(Error::InvalidParameter(format!("--sigma {sigma} must be >= 0")));
            }
            let epsilon = args.epsilon.unwrap_or(params.epsilon);
            match lemma5_discriminant(n, mu, sigma, epsilon, delta, args.c) {
                Ok(d) => {
                    let (lhs, threshold) = lemma5_criterion(n, mu, sigma, epsilon, delta, args.c);
                    let k = lemma5_vertex(n, sigma, epsilon);
                    json!({
                        "sigma": sigma,
                        "epsilon": epsilon,
                        "delta": delta,
                        "c": args.c,
                        "discriminant": d,
                        "vertex": k,
                        "f_at_vertex": lemma5_f(k, n, mu, sigma, epsilon, delta, args.c),
                        "criterion": { "lhs": lhs, "threshold": threshold },
                    })
                }
                Err(e) => json!({ "error": e.to_string() }),
            }
        }
    };

    let payload = json!({
        "lemma3": lemma3,
        "hoeffding": hoeffding,
        "theorem": theorem,
        "lemma5": lemma5,
    });
    Ok(Outcome {
        payload: with_config("bounds", args, payload),
        violation: false,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Concentration(a) => cmd_concentration(a),
        Command::Bounds(a) => cmd_bounds(a),
    };
    match result {
        Ok(outcome) => {
            let mut stdout = BufWriter::new(std::io::stdout().lock());
            let written = serde_json::to_writer_pretty(&mut stdout, &outcome.payload)
                .map_err(std::io::Error::from)
                .and_then(|_| writeln!(stdout))
                .and_then(|_| stdout.flush());
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.violation {
                eprintln!("violation found");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
