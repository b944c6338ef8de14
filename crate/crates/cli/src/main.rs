//! The `alphacut` command line tool: seeded generation of point and
//! line instances, checks and constructions from the library (biased
//! cuts, grid orientations, level curves, stretchability), and
//! deterministic SVG plots. Every run command writes one JSON report to
//! standard output or `--out`; human summaries and timing go to standard
//! error. Exit 0 means the verdict is pass or done, exit 1 is a clean
//! "no" with a witness in the report, exit 2 is an error.

mod commands;
mod error;
mod files;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "alphacut",
    version,
    about = "Exact geometry workbench: biased cuts, grid orientations, level curves, \
             and pseudoline stretchability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded instance, arrangement, or allowable sequence.
    Generate(GenerateArgs),
    /// Run a check or construction on input files.
    #[command(subcommand)]
    Run(RunCommand),
    /// Render a planar input file to deterministic SVG.
    Plot(PlotArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// What to generate: well-separated, beta-gamma, arrangement, or
    /// allowable.
    kind: String,
    /// RNG seed; the output is a function of kind, parameters, and seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ambient dimension (well-separated; defaults to the class count).
    #[arg(long)]
    dim: Option<usize>,
    /// Comma-separated class sizes, e.g. 3,4.
    #[arg(long)]
    sizes: Option<String>,
    /// Ground-set size (allowable).
    #[arg(long)]
    lines: Option<usize>,
    /// Number of random adjacent swaps (allowable).
    #[arg(long)]
    steps: Option<usize>,
    /// Sweep a generic straight arrangement instead of a random walk
    /// (allowable); emits the arrangement alongside the sequence.
    #[arg(long)]
    full_sweep: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RunCommand {
    /// Check weak general position and (biased) separation of an instance.
    CheckSep {
        /// Instance file, or a report carrying one.
        instance: PathBuf,
        /// Per-class lower counts for biased separation (with --gamma).
        #[arg(long)]
        beta: Option<String>,
        /// Per-class upper counts for biased separation (with --beta).
        #[arg(long)]
        gamma: Option<String>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the grid orientation induced by an instance.
    BuildUso {
        /// Instance file, or a report carrying one.
        instance: PathBuf,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a grid orientation for unique sinks.
    CheckUso {
        /// Orientation file, or a report carrying one.
        orientation: PathBuf,
        /// Which criterion to run: full, lemma21, or both.
        #[arg(long, default_value = "full")]
        mode: String,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find the unique cut attaining one alpha vector.
    FindCut {
        /// Instance file, or a report carrying one.
        instance: PathBuf,
        /// Target alpha vector, comma-separated 1-based counts.
        #[arg(long)]
        alpha: String,
        /// Skip precondition verification (still verifies uniqueness).
        #[arg(long)]
        trust: bool,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate every cut and check the alpha map is a bijection.
    AllCuts {
        /// Instance file, or a report carrying one.
        instance: PathBuf,
        /// Skip precondition verification (still verifies the bijection).
        #[arg(long)]
        trust: bool,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count semi-cuts through a base point, or probe all count targets.
    SemiCuts {
        /// Instance file, or a report carrying one.
        instance: PathBuf,
        /// Index of the base point in class 0.
        #[arg(long)]
        base: Option<usize>,
        /// Required strictly-above counts for classes 1.., comma-separated.
        #[arg(long)]
        targets: Option<String>,
        /// Check every base point and target vector for uniqueness instead.
        #[arg(long)]
        probe: bool,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a planar instance to its dual red/blue line arrangement.
    Dualize {
        /// Instance file, or a report carrying one.
        instance: PathBuf,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute one level polyline per class of a line arrangement.
    Levels {
        /// Lines file, or a report carrying one.
        lines: PathBuf,
        /// Level per class, comma-separated 1-based counts.
        #[arg(long)]
        alpha: String,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find the colorful point attaining the requested levels.
    XAlpha {
        /// Lines file, or a report carrying one.
        lines: PathBuf,
        /// Level per class, comma-separated 1-based counts.
        #[arg(long)]
        alpha: String,
        /// Also bisect to the point numerically, to this rational
        /// tolerance; needs one flat and one steep slope family, as
        /// `generate arrangement` produces.
        #[arg(long)]
        tol: Option<String>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce an allowable sequence to a bicolored description.
    Reduce {
        /// Sequence file, or a report carrying one.
        sequence: PathBuf,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize a description as polylines, or a sequence as straight lines.
    Realize {
        /// Description file; with --straight, a sequence file instead.
        input: PathBuf,
        /// Single-colored straight arrangement realizing the sequence.
        #[arg(long)]
        straight: Option<PathBuf>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the allowable sequence from a straight arrangement.
    Extract {
        /// Straight red/blue arrangement file, or a report carrying one.
        arrangement: PathBuf,
        /// The bicolored description the arrangement realizes.
        description: PathBuf,
        /// Anchor parameter in (0,1) along the bottom control gap.
        #[arg(long)]
        anchor: Option<String>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an arrangement against a bicolored description.
    Verify {
        /// Polyline arrangement file; with --straight, a line arrangement.
        arrangement: PathBuf,
        /// The description to check against.
        description: PathBuf,
        /// The arrangement file holds straight lines, not polylines.
        #[arg(long)]
        straight: bool,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower-bound forced crossings between same-color pseudolines.
    LowerBound {
        /// Description file, or a report carrying one.
        description: PathBuf,
        /// A single pair of line ids like r1,r2; default scans all pairs.
        #[arg(long)]
        pair: Option<String>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read the grid orientation off a bicolored description.
    Bridge {
        /// Description file, or a report carrying one.
        description: PathBuf,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PlotArgs {
    /// Instance, lines, straight arrangement, or polyline file.
    input: PathBuf,
    /// Overlay the alpha cut (instance) or level curves (lines).
    #[arg(long)]
    alpha: Option<String>,
    /// Skip precondition verification for the cut overlay.
    #[arg(long)]
    trust: bool,
    /// Write the SVG here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let code = match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("alphacut: {e}");
            2
        }
    };
    ExitCode::from(code as u8)
}

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    check_workers()?;
    let started = Instant::now();
    match cli.command {
        Command::Generate(args) => {
            let params = commands::GenerateParams {
                kind: &args.kind,
                seed: args.seed,
                dim: args.dim,
                sizes: args.sizes.as_deref(),
                lines: args.lines,
                steps: args.steps,
                full_sweep: args.full_sweep,
            };
            let (inputs, outcome) = commands::generate(&params)?;
            report::emit(
                "generate",
                inputs.into_entries(),
                Some(args.seed),
                outcome,
                &args.out,
                started,
            )
        }
        Command::Run(run) => {
            let (name, out, (inputs, outcome)) = match run {
                RunCommand::CheckSep {
                    instance,
                    beta,
                    gamma,
                    out,
                } => (
                    "check-sep",
                    out,
                    commands::check_sep(&instance, beta.as_deref(), gamma.as_deref())?,
                ),
                RunCommand::BuildUso { instance, out } => {
                    ("build-uso", out, commands::build_uso(&instance)?)
                }
                RunCommand::CheckUso {
                    orientation,
                    mode,
                    out,
                } => ("check-uso", out, commands::check_uso(&orientation, &mode)?),
                RunCommand::FindCut {
                    instance,
                    alpha,
                    trust,
                    out,
                } => (
                    "find-cut",
                    out,
                    commands::find_cut(&instance, &alpha, trust)?,
                ),
                RunCommand::AllCuts {
                    instance,
                    trust,
                    out,
                } => ("all-cuts", out, commands::all_cuts(&instance, trust)?),
                RunCommand::SemiCuts {
                    instance,
                    base,
                    targets,
                    probe,
                    out,
                } => (
                    "semi-cuts",
                    out,
                    commands::semi_cuts(&instance, base, targets.as_deref(), probe)?,
                ),
                RunCommand::Dualize { instance, out } => {
                    ("dualize", out, commands::dualize_cmd(&instance)?)
                }
                RunCommand::Levels { lines, alpha, out } => {
                    ("levels", out, commands::levels(&lines, &alpha)?)
                }
                RunCommand::XAlpha {
                    lines,
                    alpha,
                    tol,
                    out,
                } => (
                    "x-alpha",
                    out,
                    commands::x_alpha(&lines, &alpha, tol.as_deref())?,
                ),
                RunCommand::Reduce { sequence, out } => {
                    ("reduce", out, commands::reduce(&sequence)?)
                }
                RunCommand::Realize {
                    input,
                    straight,
                    out,
                } => (
                    "realize",
                    out,
                    commands::realize(&input, straight.as_deref())?,
                ),
                RunCommand::Extract {
                    arrangement,
                    description,
                    anchor,
                    out,
                } => (
                    "extract",
                    out,
                    commands::extract(&arrangement, &description, anchor.as_deref())?,
                ),
                RunCommand::Verify {
                    arrangement,
                    description,
                    straight,
                    out,
                } => (
                    "verify",
                    out,
                    commands::verify(&arrangement, &description, straight)?,
                ),
                RunCommand::LowerBound {
                    description,
                    pair,
                    out,
                } => (
                    "lower-bound",
                    out,
                    commands::lower_bound(&description, pair.as_deref())?,
                ),
                RunCommand::Bridge { description, out } => {
                    ("bridge", out, commands::bridge(&description)?)
                }
            };
            report::emit(name, inputs.into_entries(), None, outcome, &out, started)
        }
        Command::Plot(args) => {
            let summary = commands::plot(&args.input, args.alpha.as_deref(), args.trust, &args.out)?;
            for line in &summary {
                eprintln!("plot: {line}");
            }
            eprintln!("plot: elapsed {:.3?}", started.elapsed());
            Ok(0)
        }
    }
}

/// Worker-count override, reserved for commands that can fan out.
/// Validated so scripts that set it get told early when it is malformed;
/// the current commands all run on one worker.
fn check_workers() -> Result<(), CliError> {
    match std::env::var("ALPHACUT_WORKERS") {
        Ok(text) => {
            let workers: usize = text.trim().parse().map_err(|_| {
                CliError::InvalidFlag(format!(
                    "ALPHACUT_WORKERS wants a positive integer, got {text:?}"
                ))
            })?;
            if workers == 0 {
                return Err(CliError::InvalidFlag(
                    "ALPHACUT_WORKERS wants a positive integer, got 0".into(),
                ));
            }
            if workers > 1 {
                eprintln!(
                    "alphacut: ALPHACUT_WORKERS={workers} noted; the current commands run on \
                     one worker"
                );
            }
            Ok(())
        }
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(CliError::InvalidFlag(format!("ALPHACUT_WORKERS: {e}"))),
    }
}
