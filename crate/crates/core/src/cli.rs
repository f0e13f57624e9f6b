//! The `chaoscope` command line.
//!
//! Exit codes: 0 analyzed, 1 error, 2 hypothesis not met (not turbulent,
//! base map fails the lift hypothesis, orbit not Štefan).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::builtins::square_root;
use crate::coding::SymbolicCoding;
use crate::error::Error;
use crate::mapfile::{load_map, map_to_json};
use crate::orbits::{stefan_analyze, stefan_turbulence, PeriodicOrbit};
use crate::plmap::{PLMap, DEFAULT_NODE_BUDGET};
use crate::rational::{approx, fmt_rat, int, parse_rat, Rational};
use crate::report::{AnalysisReport, PairAnalysis, StefanReport, Verdict};
use crate::scramble::{
    build_invariant_sample, certify_pair, default_tol, lift_certificates, CertPoint, SampleOptions,
};
use crate::sigma2::{
    metric_bounds, occurrence_offset, sigma_scrambled_check, tau_density_check, tau_prefix,
};
use crate::stream::{BinaryStream, SymbolWord};
use crate::turbulence::{canonical_quadruple, find_turbulence};

pub const BUDGET_ENV: &str = "CHAOSCOPE_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "chaoscope",
    version,
    about = "Exact Li-Yorke chaos analysis of piecewise-linear interval maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Turbulence, canonical quadruple, scrambled sample and certificates.
    Analyze(AnalyzeArgs),
    /// Dump an exact orbit as CSV.
    Orbit(OrbitArgs),
    /// Štefan-orbit analysis and the turbulence it forces.
    Stefan(StefanArgs),
    /// Computations on the full shift on two symbols.
    #[command(subcommand)]
    Sigma2(Sigma2Command),
    /// Write the square-root extension of a self-map of [0, 1].
    Sqroot(SqrootArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Builtin name (tent, remark1, stefan:<i>) or a JSON map file.
    #[arg(long)]
    pub map: String,
    /// Analyze f^power and lift certificates back to f.
    #[arg(long, default_value_t = 1)]
    pub power: usize,
    /// Comma-separated stream descriptors.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "const:0,const:1,periodic:01"
    )]
    pub betas: Vec<String>,
    #[arg(long, default_value_t = 40)]
    pub depth: usize,
    #[arg(long, default_value_t = 500)]
    pub horizon: u64,
    /// Number of forward images of each sample point (0..shifts).
    #[arg(long, default_value_t = 3)]
    pub shifts: u64,
    /// Separation threshold; defaults to |b - z|.
    #[arg(long)]
    pub delta: Option<String>,
    /// Slack for events; defaults to 2^-20.
    #[arg(long)]
    pub tol: Option<String>,
    /// Certify a single pair of exact points instead of the sample.
    #[arg(long, num_args = 2, value_names = ["X", "Y"])]
    pub pair: Option<Vec<String>>,
    /// Worker threads for pair certificates.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long)]
    pub map: String,
    /// Starting point, "p/q".
    #[arg(long)]
    pub x: String,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Add a decimal approximation column with this many digits.
    #[arg(long)]
    pub decimal: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StefanArgs {
    #[arg(long)]
    pub map: String,
    #[arg(long)]
    pub point: String,
    #[arg(long)]
    pub period: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Sigma2Command {
    /// Separation and proximity events for σ^i τ_βA vs σ^j τ_βB.
    Scramble {
        #[arg(long = "betaA", alias = "beta-a")]
        beta_a: String,
        #[arg(long = "betaB", alias = "beta-b")]
        beta_b: String,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1_000_000)]
        horizon: u64,
        #[arg(long = "shiftA", alias = "shift-a", default_value_t = 0)]
        shift_a: u64,
        #[arg(long = "shiftB", alias = "shift-b", default_value_t = 0)]
        shift_b: u64,
    },
    /// Bracket the metric distance of two streams.
    Metric {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        precision: u32,
    },
    /// Blocks 1..=m of τ_β.
    Tau {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        blocks: u64,
    },
    /// Prefix of the transitive seed, or the slot of a word in it.
    Seed {
        #[arg(long, default_value_t = 32)]
        len: u64,
        #[arg(long)]
        word: Option<String>,
    },
    /// Check that every short word begins some shift of τ_β.
    Density {
        #[arg(long)]
        beta: String,
        #[arg(long = "max-len", default_value_t = 8)]
        max_len: u32,
    },
}

#[derive(Debug, Args)]
pub struct SqrootArgs {
    #[arg(long)]
    pub map: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// An error tagged with the pipeline stage that raised it.
#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub error: Error,
}

impl std::fmt::Display for StageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.stage, self.error)
    }
}

type CliResult<T> = std::result::Result<T, StageError>;

trait Stage<T> {
    fn at(self, stage: &'static str) -> CliResult<T>;
}

impl<T> Stage<T> for crate::error::Result<T> {
    fn at(self, stage: &'static str) -> CliResult<T> {
        self.map_err(|error| StageError { stage, error })
    }
}

/// Node budget from `CHAOSCOPE_BUDGET`, else the default.
pub fn node_budget() -> CliResult<usize> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| StageError {
            stage: "environment",
            error: Error::BadParam(format!(
                "{BUDGET_ENV} must be a positive integer, got `{v}`"
            )),
        }),
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
    }
}

fn rational_arg(text: &str, stage: &'static str) -> CliResult<Rational> {
    parse_rat(text).at(stage)
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| StageError {
            stage: "output",
            error: Error::BadParam(format!("cannot write {}: {e}", path.display())),
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("results always serialize")
}

/// Runs the analysis pipeline and returns the report.
pub fn analyze(args: &AnalyzeArgs) -> CliResult<AnalysisReport> {
    let cap = node_budget()?;
    let (f, identity) = load_map(&args.map).at("load map")?;
    let tol = match &args.tol {
        Some(t) => rational_arg(t, "parse --tol")?,
        None => default_tol(),
    };
    let delta = args
        .delta
        .as_deref()
        .map(|d| rational_arg(d, "parse --delta"))
        .transpose()?;

    if let Some(pair) = &args.pair {
        let x = rational_arg(&pair[0], "parse --pair")?;
        let y = rational_arg(&pair[1], "parse --pair")?;
        let delta = delta.unwrap_or_else(|| int(1));
        let cert = certify_pair(
            &f,
            None,
            &CertPoint::Exact { x },
            &CertPoint::Exact { x: y },
            args.horizon,
            &delta,
            &tol,
        )
        .at("pair certificate")?;
        let summary = if cert.proximities.is_empty() {
            format!(
                "gap >= {} at every step up to {}; no proximity events, so this pair shows no Li-Yorke behaviour within the horizon",
                fmt_rat(&cert.min_gap),
                args.horizon
            )
        } else {
            format!(
                "{} separation and {} proximity events up to {}",
                cert.separations.len(),
                cert.proximities.len(),
                args.horizon
            )
        };
        let mut report = AnalysisReport::new(identity, 1, Verdict::PairOnly);
        report.pair = Some(PairAnalysis {
            certificate: cert,
            summary,
        });
        return Ok(report);
    }

    let g: PLMap = if args.power > 1 {
        f.power(args.power, cap).at("power")?
    } else if args.power == 1 {
        f.clone()
    } else {
        return Err(StageError {
            stage: "parse --power",
            error: Error::BadParam("--power must be at least 1".into()),
        });
    };
    let mut report = AnalysisReport::new(identity, args.power, Verdict::Turbulent);
    let Some(witness) = find_turbulence(&g) else {
        report.verdict = Verdict::NotTurbulent;
        if args.power == 1 {
            report.hint = Some("try --power 2".into());
        }
        return Ok(report);
    };
    let quad = canonical_quadruple(&g, &witness.j0, &witness.j1).at("canonical quadruple")?;
    report.witness = Some(witness);
    report.quadruple = Some(quad.clone());
    let coding = SymbolicCoding::new(g, quad);
    let betas = args
        .betas
        .iter()
        .map(|b| BinaryStream::parse(b))
        .collect::<crate::error::Result<Vec<_>>>()
        .at("parse --betas")?;
    let opts = SampleOptions {
        horizon: args.horizon,
        delta,
        tol: Some(tol),
    };
    let sample = build_invariant_sample(&coding, &betas, args.depth, args.shifts, &opts)
        .at("invariant sample")?;
    if args.power > 1 {
        match lift_certificates(&f, args.power, &coding, &sample, args.horizon) {
            Ok(lifted) => report.lifted = Some(lifted),
            Err(Error::Hypothesis(why)) => {
                report.verdict = Verdict::HypothesisNotMet;
                report.hint = Some(why);
            }
            Err(e) => return Err(e).at("lift"),
        }
    }
    report.sample = Some(sample);
    Ok(report)
}

pub fn orbit_csv(args: &OrbitArgs) -> CliResult<String> {
    let (f, _) = load_map(&args.map).at("load map")?;
    let x = rational_arg(&args.x, "parse --x")?;
    let orbit = f.iterate(&x, args.n).at("iterate")?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| StageError {
        stage: "csv",
        error: Error::BadParam(e.to_string()),
    };
    match args.decimal {
        Some(_) => w.write_record(["n", "x", "x_decimal_approx"]).map_err(io)?,
        None => w.write_record(["n", "x"]).map_err(io)?,
    }
    for (n, v) in orbit.iter().enumerate() {
        let mut row = vec![n.to_string(), fmt_rat(v)];
        if let Some(digits) = args.decimal {
            row.push(approx(v, digits));
        }
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| StageError {
        stage: "csv",
        error: Error::BadParam(e.to_string()),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn stefan_report(args: &StefanArgs) -> CliResult<AnalysisReport> {
    let cap = node_budget()?;
    let (f, identity) = load_map(&args.map).at("load map")?;
    let x = rational_arg(&args.point, "parse --point")?;
    let orbit = PeriodicOrbit::from_point(&f, &x, args.period).at("orbit")?;
    let analysis = stefan_analyze(&f, &orbit).at("Štefan analysis")?;
    let turbulence = if analysis.is_stefan {
        Some(stefan_turbulence(&f, &analysis, cap).at("Štefan turbulence")?)
    } else {
        None
    };
    let verdict = if analysis.is_stefan {
        Verdict::Stefan
    } else {
        Verdict::NotStefan
    };
    let mut report = AnalysisReport::new(identity, 1, verdict);
    report.stefan = Some(StefanReport {
        analysis,
        turbulence,
    });
    Ok(report)
}

fn stream_arg(text: &str, stage: &'static str) -> CliResult<BinaryStream> {
    BinaryStream::parse(text).at(stage)
}

#[derive(Serialize)]
struct MetricOut {
    lower: String,
    upper: String,
}

#[derive(Serialize)]
struct TauOut {
    blocks: u64,
    length: usize,
    prefix: String,
}

#[derive(Serialize)]
struct SeedOut {
    prefix: Option<String>,
    word: Option<String>,
    offset: Option<u64>,
}

#[derive(Serialize)]
struct DensityOut {
    words_checked: usize,
    max_offset: u64,
}

pub fn sigma2_json(cmd: &Sigma2Command) -> CliResult<String> {
    match cmd {
        Sigma2Command::Scramble {
            beta_a,
            beta_b,
            m,
            horizon,
            shift_a,
            shift_b,
        } => {
            let a = stream_arg(beta_a, "parse --betaA")?;
            let b = stream_arg(beta_b, "parse --betaB")?;
            let r = sigma_scrambled_check(&a, &b, (*shift_a, *shift_b), *m, *horizon)
                .at("scrambling check")?;
            Ok(to_json(&r))
        }
        Sigma2Command::Metric { a, b, precision } => {
            let (lo, hi) = metric_bounds(
                &stream_arg(a, "parse --a")?,
                &stream_arg(b, "parse --b")?,
                *precision,
            );
            Ok(to_json(&MetricOut {
                lower: fmt_rat(&lo),
                upper: fmt_rat(&hi),
            }))
        }
        Sigma2Command::Tau { beta, blocks } => {
            let p = tau_prefix(&stream_arg(beta, "parse --beta")?, *blocks).at("tau")?;
            Ok(to_json(&TauOut {
                blocks: *blocks,
                length: p.len(),
                prefix: p.to_string(),
            }))
        }
        Sigma2Command::Seed { len, word } => {
            let out = match word {
                Some(w) => {
                    let w = SymbolWord::parse(w).at("parse --word")?;
                    SeedOut {
                        prefix: None,
                        offset: Some(occurrence_offset(&w).at("seed slot")?),
                        word: Some(w.to_string()),
                    }
                }
                None => SeedOut {
                    prefix: Some(BinaryStream::seed().prefix(*len).at("seed")?.to_string()),
                    word: None,
                    offset: None,
                },
            };
            Ok(to_json(&out))
        }
        Sigma2Command::Density { beta, max_len } => {
            let hits =
                tau_density_check(&stream_arg(beta, "parse --beta")?, *max_len).at("density")?;
            Ok(to_json(&DensityOut {
                words_checked: hits.len(),
                max_offset: hits.iter().map(|h| h.offset).max().unwrap_or(0),
            }))
        }
    }
}

pub fn sqroot_json(args: &SqrootArgs) -> CliResult<String> {
    let (f, _) = load_map(&args.map).at("load map")?;
    let big = square_root(&f).at("square root")?;
    Ok(map_to_json(&big))
}

fn run_command(cli: &Cli) -> CliResult<i32> {
    match &cli.command {
        Command::Analyze(args) => {
            let report = match args.jobs {
                Some(n) => {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(n.max(1))
                        .build()
                        .map_err(|e| StageError {
                            stage: "thread pool",
                            error: Error::BadParam(e.to_string()),
                        })?;
                    pool.install(|| analyze(args))?
                }
                None => analyze(args)?,
            };
            emit(&report.to_json(), args.out.as_ref())?;
            if let Some(hint) = &report.hint {
                eprintln!("verdict: {:?}; {hint}", report.verdict);
            }
            Ok(report.verdict.exit_code())
        }
        Command::Orbit(args) => {
            print!("{}", orbit_csv(args)?);
            std::io::stdout().flush().ok();
            Ok(0)
        }
        Command::Stefan(args) => {
            let report = stefan_report(args)?;
            emit(&report.to_json(), args.out.as_ref())?;
            Ok(report.verdict.exit_code())
        }
        Command::Sigma2(cmd) => {
            emit(&sigma2_json(cmd)?, None)?;
            Ok(0)
        }
        Command::Sqroot(args) => {
            emit(sqroot_json(args)?.trim_end(), args.out.as_ref())?;
            Ok(0)
        }
    }
}

/// Parses `args` and runs; the return value is the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            e.print().ok();
            return code;
        }
    };
    match run_command(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
