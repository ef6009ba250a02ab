//! Command-line front end.
//!
//! Four subcommands cover the whole workflow: `analyze` derives the exact
//! model and limit laws for a seed, `simulate` grows one trajectory,
//! `verify` tests replicated simulations against the exact laws, and
//! `examples` writes a bundled seed with its expected-value manifest.
//!
//! Exit codes: 0 success, 1 statistical-tolerance failure from `verify`,
//! 2 input or usage error, 3 structural refusal (a seed whose urn model
//! carries no growth).

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::profile::DegreeProfile;
use crate::report::{self, Analysis, Format, RunDocument, VerifyDocument};
use crate::seed::SeedSpec;
use crate::sim::Mode;
use crate::stats::ReplicatePolicy;
use crate::urn::UrnModel;
use crate::{Error, Result};

/// Environment variable consulted when `--rng-seed` is absent.
const RNG_SEED_ENV: &str = "HOOKNET_RNG_SEED";

#[derive(Parser)]
#[command(
    name = "hooknet",
    version,
    about = "Exact degree laws and coupled simulation for m-ary hooking networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the urn model, spectrum, and exact limit laws for a seed
    Analyze(AnalyzeArgs),
    /// Grow one network trajectory and report its degree counts
    Simulate(SimulateArgs),
    /// Run replicated simulations and test them against the exact laws
    Verify(VerifyArgs),
    /// Write a bundled example seed and its expected-value manifest
    Examples(ExamplesArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Seed document (JSON)
    seed: PathBuf,
    /// Latchings allowed per vertex
    #[arg(short = 'm', long)]
    arity: u32,
    /// Output format: json, csv, or table
    #[arg(long, default_value = "table")]
    format: String,
    /// Also print the unscaled active-class limit variant
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Seed document (JSON)
    seed: PathBuf,
    /// Latchings allowed per vertex
    #[arg(short = 'm', long)]
    arity: u32,
    /// Growth steps to run
    #[arg(short = 'n', long)]
    steps: u64,
    /// RNG seed; HOOKNET_RNG_SEED is the fallback, then 0
    #[arg(long)]
    rng_seed: Option<u64>,
    /// What to evolve: urn, graph, or coupled
    #[arg(long, default_value = "urn")]
    mode: String,
    /// Snapshot steps: a comma list like "100,1000", or geometric[:count]
    #[arg(long)]
    checkpoints: Option<String>,
    /// Output format: json, csv, or table
    #[arg(long, default_value = "table")]
    format: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed document (JSON)
    seed: PathBuf,
    /// Latchings allowed per vertex
    #[arg(short = 'm', long)]
    arity: u32,
    /// Growth steps per replicate
    #[arg(short = 'n', long, default_value_t = 20000)]
    steps: u64,
    /// Independent replicates
    #[arg(short = 'R', long, default_value_t = 2000)]
    replicates: u32,
    /// RNG seed; HOOKNET_RNG_SEED is the fallback, then 0
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Absolute tolerance on each mean component
    #[arg(long)]
    mean_tol: Option<f64>,
    /// Frobenius-relative tolerance on the covariance
    #[arg(long)]
    cov_tol: Option<f64>,
    /// Worker thread cap (the verdict is identical at any setting)
    #[arg(long)]
    jobs: Option<usize>,
    /// Output format: json, csv, or table
    #[arg(long, default_value = "table")]
    format: String,
}

#[derive(Args)]
struct ExamplesArgs {
    /// Example name: unary-5.2, degenerate-5.3, binary-5.4, or ternary-3
    name: String,
    /// Directory to write the seed and manifest into
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

/// Parses arguments, runs the selected subcommand, and exits with the
/// documented code.
pub fn main() {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Structural(_) => 3,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}

/// Returns whether the command's statistical verdict (if any) passed.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Analyze(args) => analyze(args).map(|()| true),
        Command::Simulate(args) => simulate(args).map(|()| true),
        Command::Verify(args) => verify(args),
        Command::Examples(args) => examples(args).map(|()| true),
    }
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    let format = Format::from_str(&args.format)?;
    let seed = SeedSpec::load(&args.seed)?;
    let analysis = Analysis::derive(&seed, args.arity)?;
    print!("{}", report::render_analysis(&analysis, format, args.verbose));
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let format = Format::from_str(&args.format)?;
    let mode = Mode::from_str(&args.mode)?;
    let seed = SeedSpec::load(&args.seed)?;
    let profile = DegreeProfile::new(&seed, args.arity)?;
    let model = UrnModel::build(&profile);
    let marks = parse_checkpoints(args.checkpoints.as_deref(), args.steps)?;
    let mut rng = ChaCha12Rng::seed_from_u64(resolve_rng_seed(args.rng_seed)?);
    let run = crate::sim::run(&model, args.steps, &mut rng, mode, &marks, false)?;
    let doc = RunDocument::new(&model, run);
    print!("{}", report::render_run(&doc, format));
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let format = Format::from_str(&args.format)?;
    let seed = SeedSpec::load(&args.seed)?;
    let analysis = Analysis::derive(&seed, args.arity)?;
    let mut policy = ReplicatePolicy::default();
    if let Some(t) = args.mean_tol {
        policy.mean_tol = t;
    }
    if let Some(t) = args.cov_tol {
        policy.cov_tol = t;
    }
    let jobs = args.jobs.unwrap_or_else(default_jobs).max(1);
    let stats = crate::stats::replicate(
        &analysis.model,
        args.steps,
        args.replicates,
        resolve_rng_seed(args.rng_seed)?,
        jobs,
    )?;
    let verdict = crate::stats::compare_theory(&stats, &analysis.laws, &policy)?;
    let pass = verdict.pass;
    let doc = VerifyDocument::new(&analysis.laws, stats, verdict);
    print!("{}", report::render_verify(&doc, format));
    Ok(pass)
}

fn examples(args: ExamplesArgs) -> Result<()> {
    let ex = crate::bundled::get(&args.name)?;
    std::fs::create_dir_all(&args.out_dir)?;
    let seed_path = args.out_dir.join(format!("{}.seed.json", ex.name));
    let manifest_path = args.out_dir.join(format!("{}.manifest.json", ex.name));
    std::fs::write(&seed_path, ex.seed.to_document())?;
    let mut manifest =
        serde_json::to_string_pretty(&ex.manifest).expect("manifest serializes");
    manifest.push('\n');
    std::fs::write(&manifest_path, manifest)?;
    println!("wrote {}", seed_path.display());
    println!("wrote {}", manifest_path.display());
    println!(
        "reproduce with: hooknet analyze {} -m {} --format json",
        seed_path.display(),
        ex.arity
    );
    Ok(())
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, std::num::NonZeroUsize::get)
}

/// Flag value, then the environment fallback, then 0.
fn resolve_rng_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(RNG_SEED_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::Parameter(format!(
                "{RNG_SEED_ENV} must be an unsigned integer, got \"{text}\""
            ))
        }),
        Err(_) => Ok(0),
    }
}

/// Parses `--checkpoints`: either an explicit comma-separated list of step
/// numbers or `geometric[:count]` for logarithmically spaced snapshots.
fn parse_checkpoints(spec: Option<&str>, n: u64) -> Result<Vec<u64>> {
    let Some(spec) = spec else {
        return Ok(Vec::new());
    };
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("geometric") {
        let count: u32 = match rest.strip_prefix(':') {
            Some(c) => c.parse().map_err(|_| {
                Error::Parameter(format!("geometric checkpoint count must be a number, got \"{c}\""))
            })?,
            None if rest.is_empty() => 10,
            None => {
                return Err(Error::Parameter(format!(
                    "unknown checkpoint spec \"{spec}\" (expected a comma list or geometric[:count])"
                )))
            }
        };
        if count == 0 || n == 0 {
            return Ok(Vec::new());
        }
        let mut marks = Vec::new();
        for i in 1..=count {
            let mark = (n as f64).powf(f64::from(i) / f64::from(count)).round() as u64;
            marks.push(mark.clamp(1, n));
        }
        marks.dedup();
        return Ok(marks);
    }
    spec.split(',')
        .map(|part| {
            part.trim().parse().map_err(|_| {
                Error::Parameter(format!(
                    "checkpoint \"{}\" is not a step number (expected a comma list or geometric[:count])",
                    part.trim()
                ))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoint_lists_parse() {
        assert_eq!(parse_checkpoints(None, 100).unwrap(), Vec::<u64>::new());
        assert_eq!(parse_checkpoints(Some("5, 10,20"), 100).unwrap(), vec![5, 10, 20]);
        assert!(parse_checkpoints(Some("5,x"), 100).is_err());
        assert!(parse_checkpoints(Some("geometric:abc"), 100).is_err());
        assert!(parse_checkpoints(Some("geometrical"), 100).is_err());
    }

    #[test]
    fn geometric_checkpoints_are_increasing_and_end_at_n() {
        let marks = parse_checkpoints(Some("geometric"), 20000).unwrap();
        assert!(marks.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*marks.last().unwrap(), 20000);
        let few = parse_checkpoints(Some("geometric:3"), 1000).unwrap();
        assert_eq!(few, vec![10, 100, 1000]);
    }

    #[test]
    fn cli_parses_the_documented_flags() {
        let cli = Cli::try_parse_from([
            "hooknet", "verify", "seed.json", "-m", "2", "-n", "5000", "-R", "200",
            "--rng-seed", "7", "--mean-tol", "0.05", "--cov-tol", "0.2", "--jobs", "3",
            "--format", "json",
        ])
        .unwrap();
        match cli.command {
            Command::Verify(v) => {
                assert_eq!(v.arity, 2);
                assert_eq!(v.steps, 5000);
                assert_eq!(v.replicates, 200);
                assert_eq!(v.rng_seed, Some(7));
                assert_eq!(v.jobs, Some(3));
            }
            _ => panic!("expected verify"),
        }
        assert!(Cli::try_parse_from(["hooknet", "analyze", "seed.json"]).is_err());
    }

    #[test]
    fn verify_defaults_match_the_documented_scale() {
        let cli = Cli::try_parse_from(["hooknet", "verify", "seed.json", "-m", "2"]).unwrap();
        match cli.command {
            Command::Verify(v) => {
                assert_eq!(v.steps, 20000);
                assert_eq!(v.replicates, 2000);
                assert_eq!(v.rng_seed, None);
            }
            _ => panic!("expected verify"),
        }
    }
}
