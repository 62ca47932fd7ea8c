//! `revpriv` — rationalizability tests for privacy-aware choice data.
//!
//! Three subcommands:
//!
//! * `check` decides whether a dataset is rationalizable under a chosen
//!   model and prints a machine-readable report;
//! * `generate` forward-simulates a random additive model into a dataset
//!   that is rationalizable by construction;
//! * `explain` walks one dataset through every model at once.
//!
//! Exit codes: 0 = rationalizable, 1 = not rationalizable, 2 = usage or
//! validation error. Reports go to stdout (or `--output`) and are
//! byte-deterministic; the human summary and timing go to stderr and can be
//! silenced with `--quiet`.

mod explain;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use revpriv::additive::{generate_additive, ValueRanges};
use revpriv::levelk::{LevelCap, TargetOrder, DEFAULT_LEVEL_CAP};
use revpriv::{load_problem, serialize_problem, Alternative, ChoiceProblem, DatasetFormat};

use report::{run_check, CheckError, CheckRequest, ModelKind, TargetSource};

#[derive(Parser)]
#[command(
    name = "revpriv",
    version,
    about = "Rationalizability tests for privacy-aware choice data",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide rationalizability of a dataset under one model.
    Check(CheckArgs),
    /// Forward-simulate an additive model into a dataset (with ground truth).
    Generate(GenerateArgs),
    /// Run every model over a dataset and emit one explanatory document.
    Explain(ExplainArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Model to test against.
    #[arg(long, value_enum)]
    model: ModelKind,

    /// Reasoning depth for --model levelk (1 = separable).
    #[arg(long)]
    k: Option<u32>,

    /// Conjectured object order for separable/level-k models, best first,
    /// e.g. "x>y>z". Defaults to the alphabetical order of the universe.
    #[arg(long = "target-order")]
    target_order: Option<String>,

    /// Dataset file to check.
    #[arg(long, conflicts_with = "input_dir")]
    input: Option<PathBuf>,

    /// Directory of dataset files to check in one run (batch mode).
    #[arg(long = "input-dir")]
    input_dir: Option<PathBuf>,

    /// Input format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Suppress the stderr summary.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Universe size (at least 2).
    #[arg(long)]
    alternatives: usize,

    /// Number of distinct menus to sample (each of size at least 2).
    #[arg(long)]
    menus: usize,

    /// RNG seed; equal seeds give byte-identical datasets.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output format for the dataset.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Write the dataset here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Suppress the stderr summary (including the ground-truth model).
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct ExplainArgs {
    /// Dataset file to explain.
    #[arg(long)]
    input: PathBuf,

    /// Reasoning depth for the level-k section.
    #[arg(long, default_value_t = 1)]
    k: u32,

    /// Target order for the level-k section (defaults to alphabetical).
    #[arg(long = "target-order")]
    target_order: Option<String>,

    /// Input format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Write the document here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Suppress the stderr summary.
    #[arg(long)]
    quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for DatasetFormat {
    fn from(arg: FormatArg) -> Self {
        match arg {
            FormatArg::Json => DatasetFormat::Json,
            FormatArg::Csv => DatasetFormat::Csv,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => run_check_command(args),
        Command::Generate(args) => run_generate_command(args),
        Command::Explain(args) => run_explain_command(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}

fn run_check_command(args: CheckArgs) -> Result<u8, CheckError> {
    let level_cap = level_cap_from_env()?;
    let started = Instant::now();

    match (&args.input, &args.input_dir) {
        (Some(input), None) => {
            let problem = load_dataset(input, args.format)?;
            let request = resolve_request(&args, &problem, level_cap)?;
            let report = run_check(&problem, &request)?;
            emit(&report.to_json(), args.output.as_deref())?;
            if !args.quiet {
                eprintln!("{}", report.human_summary());
                eprintln!("elapsed: {:?}", started.elapsed());
            }
            Ok(report.exit_code())
        }
        (None, Some(dir)) => run_batch(&args, dir, level_cap, started),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
        (None, None) => Err(CheckError {
            message: "one of --input or --input-dir is required".to_string(),
        }),
    }
}

/// Batch mode: every dataset file in the directory, in name order, one
/// report each. The exit code is the worst single verdict (2 if any file
/// fails to load, else 1 if any dataset is refuted, else 0).
fn run_batch(
    args: &CheckArgs,
    dir: &Path,
    level_cap: LevelCap,
    started: Instant,
) -> Result<u8, CheckError> {
    let mut names: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CheckError {
            message: format!("cannot read directory {}: {e}", dir.display()),
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|path| path.is_file())
        .collect();
    names.sort();

    let mut entries = Vec::new();
    let mut worst = 0u8;
    for path in &names {
        let file = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        match load_dataset(path, args.format)
            .and_then(|problem| {
                let request = resolve_request(args, &problem, level_cap)?;
                run_check(&problem, &request)
            }) {
            Ok(report) => {
                worst = worst.max(report.exit_code());
                entries.push(serde_json::json!({
                    "file": file,
                    "report": serde_json::to_value(&report)
                        .expect("report serialization cannot fail"),
                }));
            }
            Err(error) => {
                worst = 2;
                entries.push(serde_json::json!({
                    "file": file,
                    "error": error.message,
                }));
            }
        }
    }

    let mut text = serde_json::to_string_pretty(&entries).expect("array serialization");
    text.push('\n');
    emit(&text, args.output.as_deref())?;
    if !args.quiet {
        eprintln!(
            "checked {} file(s), worst exit {worst}",
            entries.len()
        );
        eprintln!("elapsed: {:?}", started.elapsed());
    }
    Ok(worst)
}

fn run_generate_command(args: GenerateArgs) -> Result<u8, CheckError> {
    if args.alternatives < 2 {
        return Err(CheckError {
            message: "--alternatives must be at least 2".to_string(),
        });
    }
    let started = Instant::now();
    let (problem, model) =
        generate_additive(args.alternatives, args.menus, args.seed, &ValueRanges::default())
            .map_err(|e| CheckError { message: e.to_string() })?;

    let text = match args.format {
        FormatArg::Json => serialize_problem(&problem),
        FormatArg::Csv => problem_to_csv(&problem),
    };
    emit(&text, args.output.as_deref())?;

    if !args.quiet {
        eprintln!(
            "generated {} observations over {} alternatives (seed {})",
            problem.observation_count(),
            problem.alternative_count(),
            args.seed
        );
        let truth =
            serde_json::to_string(&model).expect("model serialization cannot fail");
        eprintln!("ground-truth model: {truth}");
        eprintln!("elapsed: {:?}", started.elapsed());
    }
    Ok(0)
}

fn run_explain_command(args: ExplainArgs) -> Result<u8, CheckError> {
    let level_cap = level_cap_from_env()?;
    let started = Instant::now();
    let problem = load_dataset(&args.input, args.format)?;
    let target = resolve_target(args.target_order.as_deref(), &problem)?;
    let document = explain::build_explanation(&problem, target, args.k, level_cap)?;
    let mut text = serde_json::to_string_pretty(&document).expect("document serialization");
    text.push('\n');
    emit(&text, args.output.as_deref())?;
    if !args.quiet {
        eprintln!("{}", explain::human_summary(&document));
        eprintln!("elapsed: {:?}", started.elapsed());
    }
    Ok(0)
}

/// Resolves `--k` and `--target-order` against the chosen model.
fn resolve_request(
    args: &CheckArgs,
    problem: &ChoiceProblem,
    level_cap: LevelCap,
) -> Result<CheckRequest, CheckError> {
    let model = args.model;
    let k = match (model, args.k) {
        (ModelKind::Levelk, Some(0)) => {
            return Err(CheckError {
                message: "level 0 is the classical model; use --model classic".to_string(),
            })
        }
        (ModelKind::Levelk, Some(k)) => Some(k),
        (ModelKind::Levelk, None) => {
            return Err(CheckError {
                message: "--model levelk requires --k (1 = separable)".to_string(),
            })
        }
        (ModelKind::Separable, Some(k)) if k != 1 => {
            return Err(CheckError {
                message: "--model separable is level-k with k = 1; drop --k or use --model levelk"
                    .to_string(),
            })
        }
        (ModelKind::Separable, _) => Some(1),
        (_, Some(_)) => {
            return Err(CheckError {
                message: format!("--k does not apply to --model {}", model.name()),
            })
        }
        (_, None) => None,
    };

    let target = match model {
        ModelKind::Separable | ModelKind::Levelk => {
            Some(resolve_target(args.target_order.as_deref(), problem)?)
        }
        _ => {
            if args.target_order.is_some() {
                return Err(CheckError {
                    message: format!(
                        "--target-order does not apply to --model {}",
                        model.name()
                    ),
                });
            }
            None
        }
    };

    Ok(CheckRequest { model, k, target, level_cap })
}

fn resolve_target(
    flag: Option<&str>,
    problem: &ChoiceProblem,
) -> Result<(TargetOrder, TargetSource), CheckError> {
    match flag {
        Some(text) => {
            let target = TargetOrder::parse(text, problem).map_err(|e| CheckError {
                message: format!("invalid --target-order: {e}"),
            })?;
            Ok((target, TargetSource::Flag))
        }
        None => Ok((
            TargetOrder::lexicographic(problem),
            TargetSource::DefaultLexicographic,
        )),
    }
}

fn level_cap_from_env() -> Result<LevelCap, CheckError> {
    match std::env::var("REVPRIV_LEVEL_CAP") {
        Ok(raw) => raw.trim().parse::<u32>().map(LevelCap).map_err(|_| CheckError {
            message: format!("REVPRIV_LEVEL_CAP must be an unsigned integer, got '{raw}'"),
        }),
        Err(std::env::VarError::NotPresent) => Ok(LevelCap(DEFAULT_LEVEL_CAP)),
        Err(e) => Err(CheckError {
            message: format!("cannot read REVPRIV_LEVEL_CAP: {e}"),
        }),
    }
}

fn load_dataset(path: &Path, format: FormatArg) -> Result<ChoiceProblem, CheckError> {
    let file = fs::File::open(path).map_err(|e| CheckError {
        message: format!("cannot open {}: {e}", path.display()),
    })?;
    load_problem(std::io::BufReader::new(file), format.into()).map_err(|e| CheckError {
        message: format!("{}: {e}", path.display()),
    })
}

/// The dataset as `menu,choice` CSV, menus pipe-separated. Lossy for
/// alternatives that appear in no menu (the loader infers the universe).
fn problem_to_csv(problem: &ChoiceProblem) -> String {
    let mut out = String::from("menu,choice\n");
    for obs in problem.observations() {
        let ids: Vec<&str> = obs.menu().iter().map(Alternative::id).collect();
        out.push_str(&ids.join("|"));
        out.push(',');
        out.push_str(obs.choice().id());
        out.push('\n');
    }
    out
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CheckError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CheckError {
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
