use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gspkit::generators::Skew;
use gspkit_cli::{
    cmd_bench, cmd_generate, cmd_render, cmd_solve, cmd_verify, parse_eps, Algorithm, BenchArgs,
    GenerateArgs, GenerateKind, RenderArgs, SolveArgs, VerifyArgs,
};

/// Guillotine strip packing toolkit.
#[derive(Parser)]
#[command(name = "gspkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pack an instance file and write the solution.
    Solve(SolveCli),
    /// Check a solution file: feasibility plus guillotine separability.
    Verify(VerifyCli),
    /// Generate instances: random, partition reductions, or planted layouts.
    Generate(GenerateCli),
    /// Render an instance/solution pair as SVG.
    Render(RenderCli),
    /// Run algorithms over a corpus directory and write a CSV report.
    Bench(BenchCli),
}

#[derive(Args)]
struct SolveCli {
    /// Instance file.
    input: PathBuf,
    /// Solution output path.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Algorithm: nfdh | pptas | three-halves | portfolio | oracle.
    #[arg(long = "alg", default_value = "portfolio")]
    algorithm: String,
    /// Accuracy parameter as a fraction, e.g. 1/4.
    #[arg(long, default_value = "1/4")]
    eps: String,
    /// Container budget for the constant calculus.
    #[arg(long = "budget-containers", default_value_t = 64)]
    budget_containers: u64,
    /// Layout template file (e.g. a planted certificate's box lines).
    #[arg(long)]
    layout: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyCli {
    /// Instance file.
    instance: PathBuf,
    /// Solution file.
    solution: PathBuf,
    /// Print the canonical cut tree on success.
    #[arg(long = "emit-cuts")]
    emit_cuts: bool,
}

#[derive(Args)]
struct GenerateCli {
    /// Kind: random | partition | planted.
    #[arg(long, default_value = "random")]
    kind: String,
    /// RNG seed; output is a pure function of (parameters, seed).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance output path.
    #[arg(short, long)]
    output: PathBuf,
    /// Certificate output path (defaults to `<output>.cert`).
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Number of items (random) or values (partition).
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// Strip width (random).
    #[arg(long, default_value_t = 100)]
    width: u64,
    /// Maximum item height (random).
    #[arg(long = "max-height", default_value_t = 100)]
    max_height: u64,
    /// Shape skew for random instances: uniform | tall | wide | small.
    #[arg(long, default_value = "uniform")]
    skew: String,
    /// Explicit partition values, comma separated (overrides --n).
    #[arg(long)]
    values: Option<String>,
    /// Maximum partition value when drawing randomly.
    #[arg(long = "max-value", default_value_t = 12)]
    max_value: u64,
    /// Planted shape: nice (pptas) or flushed (three-halves).
    #[arg(long, default_value = "nice")]
    shape: String,
}

#[derive(Args)]
struct RenderCli {
    /// Instance file.
    instance: PathBuf,
    /// Solution file.
    solution: PathBuf,
    /// SVG output path.
    #[arg(short, long)]
    output: PathBuf,
    /// Draw guillotine cut lines colored by stage parity.
    #[arg(long)]
    cuts: bool,
}

#[derive(Args)]
struct BenchCli {
    /// Directory of `.txt` instance files.
    corpus: PathBuf,
    /// Comma-separated algorithms to run.
    #[arg(long, default_value = "nfdh,portfolio")]
    algs: String,
    /// CSV report output path.
    #[arg(long, default_value = "bench.csv")]
    report: PathBuf,
    /// Accuracy parameter as a fraction.
    #[arg(long, default_value = "1/4")]
    eps: String,
    /// Container budget for the constant calculus.
    #[arg(long = "budget-containers", default_value_t = 64)]
    budget_containers: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => parse_solve(args).and_then(|a| cmd_solve(&a)),
        Command::Verify(args) => cmd_verify(&VerifyArgs {
            instance: args.instance,
            solution: args.solution,
            emit_cuts: args.emit_cuts,
        }),
        Command::Generate(args) => parse_generate(args).and_then(|a| cmd_generate(&a)),
        Command::Render(args) => cmd_render(&RenderArgs {
            instance: args.instance,
            solution: args.solution,
            output: args.output,
            cuts: args.cuts,
        }),
        Command::Bench(args) => parse_bench(args).and_then(|a| cmd_bench(&a)),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn parse_solve(args: SolveCli) -> Result<SolveArgs, gspkit_cli::CmdError> {
    Ok(SolveArgs {
        input: args.input,
        output: args.output,
        algorithm: Algorithm::parse(&args.algorithm)?,
        eps: parse_eps(&args.eps)?,
        budget_containers: args.budget_containers,
        layout: args.layout,
    })
}

fn parse_generate(args: GenerateCli) -> Result<GenerateArgs, gspkit_cli::CmdError> {
    let kind = match args.kind.as_str() {
        "random" => GenerateKind::Random {
            n: args.n,
            width: args.width,
            max_height: args.max_height,
            skew: match args.skew.as_str() {
                "uniform" => Skew::Uniform,
                "tall" => Skew::Tall,
                "wide" => Skew::Wide,
                "small" => Skew::Small,
                other => {
                    return Err(gspkit_cli::CmdError::Usage(format!(
                        "unknown skew `{other}`"
                    )))
                }
            },
        },
        "partition" => GenerateKind::Partition {
            values: match args.values {
                Some(csv) => Some(
                    csv.split(',')
                        .map(|v| v.trim().parse())
                        .collect::<Result<Vec<u64>, _>>()
                        .map_err(|e| gspkit_cli::CmdError::Usage(format!("bad values: {e}")))?,
                ),
                None => None,
            },
            n: args.n.clamp(2, 24),
            max_value: args.max_value,
        },
        "planted" => GenerateKind::Planted {
            flushed: match args.shape.as_str() {
                "nice" => false,
                "flushed" => true,
                other => {
                    return Err(gspkit_cli::CmdError::Usage(format!(
                        "unknown shape `{other}`"
                    )))
                }
            },
        },
        other => {
            return Err(gspkit_cli::CmdError::Usage(format!(
                "unknown kind `{other}`"
            )))
        }
    };
    Ok(GenerateArgs {
        kind,
        seed: args.seed,
        output: args.output,
        certificate: args.certificate,
    })
}

fn parse_bench(args: BenchCli) -> Result<BenchArgs, gspkit_cli::CmdError> {
    let algorithms = args
        .algs
        .split(',')
        .map(|s| Algorithm::parse(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BenchArgs {
        corpus: args.corpus,
        algorithms,
        report: args.report,
        eps: parse_eps(&args.eps)?,
        budget_containers: args.budget_containers,
    })
}
