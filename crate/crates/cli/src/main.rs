mod commands;
mod output;

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nilmetriq::Catalog;
use output::Format;

/// Exact computations on six-dimensional nilpotent Lie algebras and their left-invariant metrics.
#[derive(Parser, Debug)]
#[command(name = "nilmetriq", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Run the full golden suite against the embedded reference tables.
    #[arg(long)]
    verify_paper: bool,

    /// Output format; defaults to `table` on a terminal and `json` otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Compare the JSON result with this file; exit 3 on mismatch.
    #[arg(long, global = true, value_name = "FILE")]
    expect: Option<PathBuf>,

    /// Catalog JSON replacing the embedded one (also read from NILMETRIQ_CATALOG).
    #[arg(long, global = true, env = "NILMETRIQ_CATALOG", value_name = "FILE")]
    catalog: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Nilpotency step, CSLA / CSLAT status and derivation dimensions.
    Classify {
        /// Catalog name, a tuple such as "(0,0,0,12,13,23)", or `all`.
        target: String,
    },
    /// Free and fixed entries of the cross-section Σ.
    Sigma { algebra: String },
    /// Pattern of Aut_0 and the component group.
    Aut { algebra: String },
    /// Isotropy group of the metric at a Σ point.
    Isotropy {
        algebra: String,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Tally of isotropy groups over all ways of zeroing `p` off-diagonal parameters.
    Sweep {
        algebra: String,
        /// Number of off-diagonal parameters set to zero.
        #[arg(long)]
        zeros: usize,
    },
    /// Index and distribution of symmetry of the metric at a Σ point.
    Symmetry {
        algebra: String,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Ricci operator of a left-invariant metric.
    Ricci {
        algebra: String,
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
    },
    /// Solve Ric = c I + D for a metric, by default the tabulated nilsoliton.
    Nilsoliton {
        algebra: String,
        /// Parameter of the diagonal nilsoliton family.
        #[arg(long, conflicts_with = "t")]
        r: Option<String>,
        /// Parameter of the rational h22 family.
        #[arg(long)]
        t: Option<String>,
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
    },
    /// Check one of the index-of-symmetry statements on random samples.
    Verify {
        /// Statement id, or `all`.
        theorem: String,
        #[arg(long, default_value_t = 25)]
        samples: usize,
    },
    /// Isometric automorphisms outside the component group (h13, h19+, h26-).
    Exceptional {
        algebra: String,
        #[arg(long, default_value = "1/2")]
        r: String,
    },
}

#[derive(Args, Debug, Default)]
pub struct PointArgs {
    /// Parameter assignments such as `s0=3/2`; repeatable or comma separated.
    #[arg(long = "set", value_delimiter = ',', value_name = "NAME=VALUE")]
    pub set: Vec<String>,
    /// Parameters set to zero.
    #[arg(long = "zero", value_delimiter = ',', value_name = "NAME")]
    pub zero: Vec<String>,
    /// Values of parameters not assigned explicitly.
    #[arg(long, value_enum, default_value_t = Defaults::Generic)]
    pub defaults: Defaults,
}

#[derive(Args, Debug, Default)]
pub struct MetricArgs {
    /// Diagonal metric entries, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "sigma")]
    pub diag: Option<Vec<String>>,
    /// Lower-triangular σ with g = σᵀσ: rows separated by `;`, entries by `,`.
    #[arg(long)]
    pub sigma: Option<String>,
    #[command(flatten)]
    pub point: PointArgs,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Defaults {
    /// Distinct generic rationals drawn from the seed.
    #[default]
    Generic,
    /// Diagonal parameters 1, off-diagonal 0.
    Trivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Approximate,
}

impl From<ModeArg> for nilmetriq::curvature::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Self::Exact,
            ModeArg::Approximate => Self::Approximate,
        }
    }
}

/// Failure with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit 2.
    Input(String),
    /// A verification found a mismatch: exit 1.
    Failed(String),
    /// `--expect` differs: exit 3.
    Mismatch(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
            CliError::Mismatch(_) => 3,
        }
    }
}

impl From<nilmetriq::Error> for CliError {
    fn from(e: nilmetriq::Error) -> Self {
        use nilmetriq::Error as E;
        match e {
            E::NonGenericSampling(_) | E::GroupTooLarge(_) | E::NotNilpotent => CliError::Failed(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn install_catalog(path: &Option<PathBuf>) -> Result<(), CliError> {
    if let Some(p) = path {
        let cat = Catalog::from_path(p)?;
        Catalog::install(cat)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    install_catalog(&cli.catalog)?;
    let format = cli.format.unwrap_or(if std::io::stdout().is_terminal() { Format::Table } else { Format::Json });
    let report = match (&cli.command, cli.verify_paper) {
        (_, true) => commands::verify_paper(cli.seed)?,
        (Some(cmd), false) => commands::dispatch(cmd, cli.seed)?,
        (None, false) => return Err(CliError::Input("no command given; see --help".into())),
    };
    output::emit(&report, format)?;
    if let Some(path) = &cli.expect {
        output::compare(&report, path)?;
    }
    if !report.ok {
        return Err(CliError::Failed(report.failure.clone().unwrap_or_else(|| "verification failed".into())));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Input(m) => eprintln!("error: {m}"),
                CliError::Failed(m) => eprintln!("verification failed: {m}"),
                CliError::Mismatch(m) => eprintln!("mismatch: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}
