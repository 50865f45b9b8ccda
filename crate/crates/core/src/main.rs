use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use versal::cli::{run, serialize, Command, Format, InputSource, JobSpec};

/// Semi-universal deformations of weighted homogeneous singularities.
#[derive(Parser)]
#[command(name = "versal", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Build and verify the resolvent of the input ideal.
    Resolve(JobArgs),
    /// Compute T^1 and T^2.
    Tangent(JobArgs),
    /// Compute the semi-universal family and the Kuranishi map.
    Deform(JobArgs),
    /// Re-check flatness of a saved JSON `deform` report.
    Verify(JobArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Args)]
struct JobArgs {
    /// Input file, or `-` for stdin.
    #[arg(required_unless_present = "expr")]
    input: Option<PathBuf>,
    /// Inline input text instead of a file.
    #[arg(short = 'e', long, conflicts_with = "input")]
    expr: Option<String>,
    /// Top resolvent level.
    #[arg(long)]
    depth: Option<u32>,
    /// Parameter order of the perturbation.
    #[arg(long)]
    order: Option<u32>,
    /// Largest weight for which the resolvent is certified.
    #[arg(long)]
    weight_bound: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Print stage timings to stderr.
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Resolve(a) => (Command::Resolve, a),
        Sub::Tangent(a) => (Command::Tangent, a),
        Sub::Deform(a) => (Command::Deform, a),
        Sub::Verify(a) => (Command::Verify, a),
    };
    let input = match (args.expr, args.input) {
        (Some(text), _) => InputSource::Inline(text),
        (None, Some(path)) => InputSource::Path(path),
        (None, None) => unreachable!("clap requires one of them"),
    };
    let job = JobSpec { command, input, depth: args.depth, order: args.order, weight_bound: args.weight_bound };
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    let outcome = match run(&job) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if args.timing {
        for (stage, d) in &outcome.timings {
            eprintln!("{stage:>20}: {:.3} s", d.as_secs_f64());
        }
    }
    let out = serialize(&outcome.report, format);
    match &args.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{out}"),
    }
    if outcome.certified {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: certification failed; see the report");
        ExitCode::from(3)
    }
}
