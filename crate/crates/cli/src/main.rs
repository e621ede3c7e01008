use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twozeta::report::{run_analyze, run_batch, Input, RunConfig, DEFAULT_MAX_WORK};
use twozeta::Error;

#[derive(Parser)]
#[command(name = "twozeta", version, about = "Two-variable zeta functions of hyperelliptic curves over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and print the report.
    Analyze(InputArgs),
    /// Run the pipeline quietly; exit 0 iff every check passes.
    Verify(InputArgs),
    /// Analyze one curve spec per line of a file.
    Batch {
        /// File with one curve spec per line.
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bound on enumeration work before giving up with exit code 3.
    #[arg(long, default_value_t = DEFAULT_MAX_WORK)]
    max_work: u64,
    /// Leave timing out of the report.
    #[arg(long)]
    no_timing: bool,
    /// Constant-field extension degree.
    #[arg(long, default_value_t = 1)]
    base_change: u32,
    /// Highest degree for the divisor-count identity (default 2g+2).
    #[arg(long)]
    series_order: Option<usize>,
}

#[derive(Args)]
struct InputArgs {
    /// Curve spec such as "p=3; f=x^3+x".
    #[arg(long, conflicts_with_all = ["spec_file", "measure_table"])]
    spec: Option<String>,
    /// File holding a curve spec.
    #[arg(long, conflicts_with = "measure_table")]
    spec_file: Option<PathBuf>,
    /// Measure table file; needs --genus.
    #[arg(long, requires = "genus")]
    measure_table: Option<PathBuf>,
    #[arg(long)]
    genus: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

fn config(args: &InputArgs) -> Result<RunConfig, Error> {
    let input = match (&args.spec, &args.spec_file, &args.measure_table) {
        (Some(s), _, _) => Input::Curve(s.clone()),
        (_, Some(p), _) => Input::Curve(std::fs::read_to_string(p).map_err(|source| Error::Io {
            path: p.display().to_string(),
            source,
        })?),
        (_, _, Some(p)) => Input::MeasureTable {
            path: p.clone(),
            genus: args.genus.unwrap_or(0),
        },
        _ => {
            return Err(Error::InvalidArgument(
                "give one of --spec, --spec-file or --measure-table".into(),
            ))
        }
    };
    Ok(with_common(input, &args.common))
}

fn with_common(input: Input, c: &CommonArgs) -> RunConfig {
    RunConfig {
        input,
        base_change: c.base_change,
        series_order: c.series_order,
        max_work: c.max_work,
        timing: !c.no_timing,
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Analyze(args) => {
            let report = run_analyze(&config(&args)?)?;
            let text = match args.common.format {
                Format::Text => report.to_text(),
                Format::Machine => report.to_machine(),
            };
            emit(&text, &args.common.out)?;
            Ok(if report.all_passed { 0 } else { 4 })
        }
        Command::Verify(args) => {
            let report = run_analyze(&config(&args)?)?;
            for (section, checks) in report.check_reports() {
                for c in checks.failures() {
                    eprintln!("failed: {section}.{}: {}", c.name, c.detail);
                }
            }
            Ok(if report.all_passed { 0 } else { 4 })
        }
        Command::Batch { input, common } => {
            let text = std::fs::read_to_string(&input).map_err(|source| Error::Io {
                path: input.display().to_string(),
                source,
            })?;
            let report = run_batch(&text, &with_common(Input::Curve(String::new()), &common));
            let out = match common.format {
                Format::Text => report.to_text(),
                Format::Machine => report.to_machine(),
            };
            emit(&out, &common.out)?;
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
