//! `dyntest`: dynamic coupling metrics versus unit-test effort.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dyntest_core::config::{ConfigOverrides, PipelineConfig};
use dyntest_core::linker::{test_metrics_from_tsv, NamingMode, TlocMode};
use dyntest_core::metrics::{metrics_from_tsv, TopK};
use dyntest_core::pipeline::{self, Artifacts};
use dyntest_core::report::{observations_from_tsv, OutputFormat};
use dyntest_core::trace::{read_trace_file, validate_trace};
use dyntest_core::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "dyntest",
    version,
    about = "Dynamic coupling metrics and test-effort correlation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Trace file utilities.
    Trace {
        #[command(subcommand)]
        command: TraceCommand,
    },
    /// Compute IC, EC and EF per class and rank key classes.
    Metrics(Common),
    /// Scan a source tree and summarize the corpus.
    Scan(Common),
    /// Link test classes to production classes and write TLOC and NTC.
    Link(Common),
    /// Join dynamic and test metrics, then correlate.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// metrics.tsv written by `metrics`.
        #[arg(long)]
        metrics: PathBuf,
        /// test_metrics.tsv written by `link`.
        #[arg(long = "test-metrics")]
        test_metrics: PathBuf,
    },
    /// Correlation report and boxplots from an observation table.
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        observations: PathBuf,
    },
    /// Run every stage.
    Run(Common),
}

#[derive(Debug, Subcommand)]
enum TraceCommand {
    /// Check traces for structural problems and print a summary.
    Validate {
        #[arg(long = "trace", required = true)]
        traces: Vec<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
    Tsv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TlocArg {
    Sloc,
    Raw,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NamingArg {
    Suffix,
    SuffixOrPrefix,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Trace file (repeatable).
    #[arg(long = "trace")]
    traces: Vec<PathBuf>,
    /// Root of the source tree.
    #[arg(long)]
    src: Option<PathBuf>,
    /// Class-id prefix to keep (repeatable).
    #[arg(long)]
    include: Vec<String>,
    /// Class-id prefix to drop (repeatable).
    #[arg(long)]
    exclude: Vec<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of key classes to list, or `all`.
    #[arg(long = "top-k")]
    top_k: Option<String>,
    #[arg(long = "tloc-mode", value_enum)]
    tloc_mode: Option<TlocArg>,
    #[arg(long = "naming-mode", value_enum)]
    naming_mode: Option<NamingArg>,
}

impl Common {
    fn load(&self) -> Result<PipelineConfig> {
        let flags = ConfigOverrides {
            trace: non_empty(&self.traces),
            src: self.src.clone(),
            include: non_empty(&self.include),
            exclude: non_empty(&self.exclude),
            alpha: self.alpha,
            format: self.format.map(|f| match f {
                FormatArg::Text => OutputFormat::Text,
                FormatArg::Structured => OutputFormat::Structured,
                FormatArg::Tsv => OutputFormat::Tsv,
            }),
            out: self.out.clone(),
            top_k: self.top_k.as_deref().map(str::parse::<TopK>).transpose()?,
            tloc_mode: self.tloc_mode.map(|m| match m {
                TlocArg::Sloc => TlocMode::Sloc,
                TlocArg::Raw => TlocMode::Raw,
            }),
            naming_mode: self.naming_mode.map(|m| match m {
                NamingArg::Suffix => NamingMode::Suffix,
                NamingArg::SuffixOrPrefix => NamingMode::SuffixOrPrefix,
            }),
            profile: None,
        };
        PipelineConfig::load(self.config.as_deref(), flags)
    }
}

fn non_empty<T: Clone>(v: &[T]) -> Option<Vec<T>> {
    (!v.is_empty()).then(|| v.to_vec())
}

fn report_written(artifacts: &Artifacts) {
    for path in &artifacts.written {
        println!("wrote {}", path.display());
    }
}

fn read(path: &Path) -> Result<String> {
    pipeline::read_stage_file(path)
}

fn execute(command: Command) -> Result<()> {
    let mut artifacts = Artifacts::default();
    match command {
        Command::Trace {
            command: TraceCommand::Validate { traces },
        } => {
            let mut failures = Vec::new();
            for path in &traces {
                let report = validate_trace(&read_trace_file(path)?);
                print!("{report}");
                if let Err(e) = report.into_result() {
                    failures.push(e);
                }
            }
            if let Some(e) = failures.into_iter().next() {
                return Err(e);
            }
        }
        Command::Metrics(common) => {
            let config = common.load()?;
            pipeline::metrics_stage(&config, &mut artifacts)?;
        }
        Command::Scan(common) => {
            let config = common.load()?;
            let scan = pipeline::scan_stage(&config, &mut artifacts)?;
            warn(&scan.warnings);
        }
        Command::Link(common) => {
            let config = common.load()?;
            let scan = pipeline::scan_stage(&config, &mut artifacts)?;
            warn(&scan.warnings);
            pipeline::link_stage(&config, &scan, &mut artifacts)?;
        }
        Command::Analyze {
            common,
            metrics,
            test_metrics,
        } => {
            let config = common.load()?;
            let dynamic = metrics_from_tsv(&read(&metrics)?, &metrics.display().to_string())?;
            let tests =
                test_metrics_from_tsv(&read(&test_metrics)?, &test_metrics.display().to_string())?;
            pipeline::analyze_stage(&config, &dynamic, &tests, &mut artifacts)?;
        }
        Command::Report {
            common,
            observations,
        } => {
            let config = common.load()?;
            let rows =
                observations_from_tsv(&read(&observations)?, &observations.display().to_string())?;
            pipeline::report_stage(&config, &rows, &mut artifacts)?;
        }
        Command::Run(common) => {
            let config = common.load()?;
            let outcome = pipeline::run_pipeline(&config)?;
            warn(&outcome.warnings);
            artifacts = outcome.artifacts;
            println!(
                "{} classes observed, corpus {:.3} KLOC ({})",
                outcome.analysis.observations.len(),
                outcome.corpus.kloc,
                outcome.corpus.size_band
            );
        }
    }
    report_written(&artifacts);
    Ok(())
}

fn warn(warnings: &[dyntest_core::linker::ScanWarning]) {
    for w in warnings {
        eprintln!("warning: {}: {}", w.path.display(), w.message);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.exit_code().try_into().unwrap_or(2)
}
