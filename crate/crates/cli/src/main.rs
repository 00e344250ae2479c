use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adminratio_core::ledger::{load_dataset, Dataset, LoadError, DATASET_SCHEMA_VERSION};
use adminratio_core::model::ModelInputs;
use adminratio_core::numfmt::{localize_plain, Locale};
use adminratio_core::report::{
    build_bundle, emit_machine, render_text, write_outputs, MachineFormat, OutputFile, ReportError,
    REPORT_SCHEMA_VERSION,
};
use adminratio_core::sensitivity::{propagate_intervals, sweep, Bounds, IntervalMap, ParameterRef};
use adminratio_core::{render_rounded, DomainError, ExactRatio, RoundingMode};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "adminratio", about = "Total tax administrative cost as a share of tax revenue")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Inputs {
    /// Budget-ledger CSV file
    ledger: PathBuf,
    /// Estimation-parameters file
    params: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check a dataset and list every violation
    Validate {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Run the full estimate and write the report
    Compute {
        #[command(flatten)]
        inputs: Inputs,
        /// Directory for report files; standard output when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated output formats
        #[arg(long, value_enum, value_delimiter = ',', default_value = "text")]
        format: Vec<Format>,
        #[arg(long, env = "ADMINRATIO_LOCALE", default_value = "english")]
        locale: Locale,
    },
    /// Recompute the headline ratio while varying one parameter
    Sweep {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        param: ParameterRef,
        /// Values to evaluate, e.g. 0.223,0.28,0.4
        #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "interval", required_unless_present = "interval")]
        grid: Vec<ExactRatio>,
        /// Bounds lo,hi to propagate
        #[arg(long, value_delimiter = ',')]
        interval: Option<Vec<ExactRatio>>,
        #[arg(long, env = "ADMINRATIO_LOCALE", default_value = "english")]
        locale: Locale,
    },
    /// Print tool and dataset-schema versions
    Version,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Structured,
}

enum Failure {
    Validation(String),
    Io(String),
    Domain(DomainError),
    Usage(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Io(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Usage(_) => 4,
        }
    }
}

impl From<DomainError> for Failure {
    fn from(e: DomainError) -> Self {
        Failure::Domain(e)
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        Failure::Io(e.to_string())
    }
}

fn load(inputs: &Inputs) -> Result<Dataset, Failure> {
    load_dataset(&inputs.ledger, &inputs.params).map_err(|e| match e {
        LoadError::Io { .. } => Failure::Io(e.to_string()),
        LoadError::Csv(_) => Failure::Validation(e.to_string()),
        LoadError::Invalid(violations) => {
            let mut msg = format!("{} violation(s)", violations.len());
            for v in &violations {
                write!(msg, "\n{v}").unwrap();
            }
            Failure::Validation(msg)
        }
    })
}

fn print_stdout(text: &[u8]) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    out.write_all(text)
        .and_then(|()| out.flush())
        .map_err(|e| Failure::Io(format!("cannot write to standard output: {e}")))
}

fn pct(x: &ExactRatio, locale: Locale) -> String {
    format!("{}%", localize_plain(&render_rounded(&x.percent(), 2, RoundingMode::HalfUp), locale))
}

fn run_compute(inputs: &Inputs, out: Option<&Path>, formats: &[Format], locale: Locale) -> Result<(), Failure> {
    let mut formats = formats.to_vec();
    formats.dedup();
    if out.is_none() {
        if formats.contains(&Format::Csv) {
            return Err(Failure::Usage("--format csv writes several files and needs --out DIR".into()));
        }
        if formats.len() > 1 {
            return Err(Failure::Usage("only one format can go to standard output; use --out DIR".into()));
        }
    }

    let dataset = load(inputs)?;
    let evaluation = ModelInputs::from_dataset(&dataset)?.evaluate()?;
    let bundle = build_bundle(&dataset, &evaluation);

    let mut files = Vec::new();
    for format in &formats {
        match format {
            Format::Text => files.push(OutputFile {
                name: "report.txt",
                bytes: render_text(&bundle, locale).into_bytes(),
            }),
            Format::Csv => files.extend(emit_machine(&bundle, MachineFormat::Csv)?),
            Format::Structured => files.extend(emit_machine(&bundle, MachineFormat::Structured)?),
        }
    }
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
            write_outputs(dir, &files)?;
            Ok(())
        }
        None => print_stdout(&files[0].bytes),
    }
}

fn run_sweep(
    inputs: &Inputs,
    param: ParameterRef,
    grid: &[ExactRatio],
    interval: Option<&[ExactRatio]>,
    locale: Locale,
) -> Result<(), Failure> {
    let dataset = load(inputs)?;
    let model = ModelInputs::from_dataset(&dataset)?;
    let num = |x: &ExactRatio| localize_plain(&x.to_exact_string(), locale);
    let mut text = String::new();
    match interval {
        Some([low, high]) => {
            let mut intervals = IntervalMap::new();
            intervals.insert(param, Bounds::new(low.clone(), high.clone()));
            let result = propagate_intervals(&model, &intervals)?;
            writeln!(text, "parameter\tlow\thigh\tratio_low\tratio_high").unwrap();
            writeln!(
                text,
                "{param}\t{}\t{}\t{}\t{}",
                num(low),
                num(high),
                pct(&result.ratio_low, locale),
                pct(&result.ratio_high, locale)
            )
            .unwrap();
        }
        Some(_) => return Err(Failure::Usage("--interval takes exactly two values lo,hi".into())),
        None => {
            let result = sweep(&model, param, grid)?;
            writeln!(text, "{param}\tratio").unwrap();
            for (value, ratio) in result.grid.iter().zip(&result.ratios) {
                writeln!(text, "{}\t{}", num(value), pct(ratio, locale)).unwrap();
            }
        }
    }
    print_stdout(text.as_bytes())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { inputs } => {
            let dataset = load(&inputs)?;
            let positions: usize = dataset.jurisdictions.iter().map(|j| j.positions.len()).sum();
            print_stdout(
                format!(
                    "valid: {} jurisdictions, {positions} positions\n",
                    dataset.jurisdictions.len()
                )
                .as_bytes(),
            )
        }
        Command::Compute {
            inputs,
            out,
            format,
            locale,
        } => run_compute(&inputs, out.as_deref(), &format, locale),
        Command::Sweep {
            inputs,
            param,
            grid,
            interval,
            locale,
        } => run_sweep(&inputs, param, &grid, interval.as_deref(), locale),
        Command::Version => print_stdout(
            format!(
                "adminratio {}\ndataset schema {DATASET_SCHEMA_VERSION}\nreport schema {REPORT_SCHEMA_VERSION}\n",
                env!("CARGO_PKG_VERSION")
            )
            .as_bytes(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(4);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let code = failure.exit_code();
            match failure {
                Failure::Validation(msg) => eprintln!("adminratio: validation failed: {msg}"),
                Failure::Io(msg) => eprintln!("adminratio: {msg}"),
                Failure::Domain(e) => eprintln!("adminratio: {e}"),
                Failure::Usage(msg) => eprintln!("adminratio: {msg}"),
            }
            ExitCode::from(code)
        }
    }
}
