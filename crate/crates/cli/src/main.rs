use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ssb_cli::commands::{self, CliError, Options, UnitaryGaugePaths, DEFAULT_REFINE, DEFAULT_SEED};
use ssb_cli::{emit_report, render_table, Report};
use ssb_core::electroweak::ElectroweakParams;
use ssb_core::lattice::Metric;

#[derive(Parser)]
#[command(name = "ssb", version, about = "Symmetry-breaking spectra, unitary gauge and gauge-covariance checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Machine,
}

#[derive(Args)]
struct Common {
    /// Seed for all stochastic checks.
    #[arg(long, env = "SSB_SPECTRUM_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Override the tolerance of the subcommand's main check.
    #[arg(long)]
    tol: Option<f64>,
    /// Grid extent along each axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Number of grid doublings for the convergence study.
    #[arg(long, default_value_t = DEFAULT_REFINE)]
    refine: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long, value_parser = parse_metric)]
    metric: Option<Metric>,
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse::<Metric>().map_err(|e| e.to_string())
}

#[derive(Args)]
struct WithModel {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Gauge-boson and Higgs spectrum of a model file.
    Spectrum(WithModel),
    /// Algebra, potential, vacuum and unitary-gauge validation defects.
    Validate(WithModel),
    /// Rotate a Higgs grid field into unitary gauge.
    UnitaryGauge {
        #[command(flatten)]
        inner: WithModel,
        /// Input grid field file; a smooth random field is generated when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Output grid field file for the transformed Higgs field.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Output grid field file for the gauge transformation.
        #[arg(long)]
        sigma_output: Option<PathBuf>,
    },
    /// Convergence orders of the discrete gauge-covariance defects.
    GaugeCheck(WithModel),
    /// Yukawa invariance and fermion masses after breaking.
    Yukawa(WithModel),
    /// Electroweak preset report.
    Electroweak {
        #[arg(long, default_value_t = 2.0)]
        g: f64,
        #[arg(long, default_value_t = 1.0)]
        gp: f64,
        #[arg(long, default_value_t = 2.0)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[command(flatten)]
        common: Common,
    },
}

impl Common {
    fn options(&self) -> Options {
        Options {
            seed: self.seed,
            tol: self.tol,
            grid: self.grid,
            refine: self.refine,
            metric: self.metric,
        }
    }
}

fn run(cli: Cli) -> Result<(Report, Format), CliError> {
    let with_model = |w: &WithModel, f: fn(&ssb_cli::ModelFile, &Options) -> Result<Report, CliError>| {
        let file = commands::load_model(&w.model)?;
        Ok((f(&file, &w.common.options())?, w.common.format))
    };
    match cli.command {
        Command::Spectrum(w) => with_model(&w, commands::spectrum),
        Command::Validate(w) => with_model(&w, commands::validate),
        Command::GaugeCheck(w) => with_model(&w, commands::gauge_check),
        Command::Yukawa(w) => with_model(&w, commands::yukawa),
        Command::UnitaryGauge {
            inner,
            input,
            output,
            sigma_output,
        } => {
            let file = commands::load_model(&inner.model)?;
            let paths = UnitaryGaugePaths {
                input,
                output,
                sigma_output,
            };
            Ok((commands::unitary_gauge(&file, &inner.common.options(), &paths)?, inner.common.format))
        }
        Command::Electroweak { g, gp, mu, lambda, common } => {
            let p = ElectroweakParams::new(g, gp, mu, lambda)?;
            Ok((commands::electroweak(&p, &common.options())?, common.format))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok((report, format)) => {
            match format {
                Format::Table => print!("{}", render_table(&report)),
                Format::Machine => print!("{}", emit_report(&report)),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
