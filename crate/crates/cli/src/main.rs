use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "isoembed",
    version,
    about = "Constrained versus limit embeddings of probability spaces"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Decimals printed for floats.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u8).range(0..=15))]
    pub precision: u8,
    /// Grid points per axis for grid searches (at least 11).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(11..=5001))]
    pub grid: Option<u64>,
    /// Seed for sampled fixtures.
    #[arg(long, global = true, default_value_t = 20)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Corr,
    Ind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportArg {
    Eq1,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coin, triangle and square dice optimized three ways.
    Dice,
    /// Gaussian relation gradients under both semantics.
    GaussianCheck {
        /// Number of seeded parameter sets.
        #[arg(long, default_value_t = 10)]
        sets: usize,
    },
    /// Two binary variables: correlation, gradients, Fisher information, MLE.
    Joint {
        /// Joint probabilities a,b,c,d.
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.0, 0.0, 0.5])]
        point: Vec<f64>,
        /// Counts n_a,n_b,n_c,n_d for the likelihood.
        #[arg(long, value_delimiter = ',')]
        counts: Option<Vec<u64>>,
        /// Emit the dimension and gradient discrepancy table instead.
        #[arg(long, value_enum)]
        report: Option<ReportArg>,
    },
    /// Gradient patterns of the mixed and behavioural strategy spaces.
    Table1 {
        #[arg(long, value_enum, default_value_t = CaseArg::Corr)]
        case: CaseArg,
    },
    /// Maximize the payoff on one correlation slice or sweep the nine standard ones.
    TreeOpt {
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "sweep",
            required_unless_present = "sweep"
        )]
        rho: Option<f64>,
        #[arg(long)]
        sweep: bool,
    },
    /// (p, q, r+) triples of a constant-correlation surface.
    Surface {
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
    },
    /// Backward induction and the correlation slices of the game.
    Game {
        /// X payoff coefficients c0,cx,cy,cxy.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        cx: Option<Vec<f64>>,
        /// Y payoff coefficients c0,cx,cy,cxy.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        cy: Option<Vec<f64>>,
    },
    /// Dimensions, gradients and volumes under both semantics.
    #[command(name = "report-eq1-4")]
    ReportEq14,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(sections) => {
            let text = output::render(&sections, cli.global.format, cli.global.precision as usize);
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 3 for optimizer failures, 2 for everything else.
fn exit_code(e: &isoembed::Error) -> u8 {
    match e {
        isoembed::Error::ConvergenceFailure { .. } => 3,
        _ => 2,
    }
}
