mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "qbb", version, about = "Exact computations in quantum Borcherds-Bozec algebras")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Datum file (JSON).
    #[arg(long, global = true)]
    datum: Option<PathBuf>,
    /// Height cutoff N.
    #[arg(long, global = true, default_value_t = 4)]
    cutoff: usize,
    /// Largest cutoff accepted.
    #[arg(long, global = true, default_value_t = 8)]
    max_cutoff: usize,
    /// JSON table of tau overrides keyed by "node,level".
    #[arg(long, global = true)]
    tau: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the Borcherds-Cartan conditions and the tau table.
    Validate,
    /// Normal form f K e of a generator expression.
    NormalForm { expr: String },
    /// Weight multiplicities of V(lambda) down to depth N.
    Character {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<i64>,
    },
    /// dim V(lambda)_{lambda - beta} from the contravariant form and the character formula.
    WeightMult {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        beta: Vec<i64>,
    },
    /// Root multiplicities through height N.
    RootMult,
    /// Highest-weight components of V(lambda) (x) V(mu) within depth N.
    Decompose {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Vec<i64>,
    },
    /// Gram rank of the form on the free algebra against dim U^- per degree.
    FormRanks,
    /// Residuals of the defining relations through height N.
    CheckRelations {
        /// Also check the image of each residual under the coproduct.
        #[arg(long)]
        delta: bool,
    },
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let c = &cli.common;
    if c.cutoff > c.max_cutoff {
        return Err(CliError::Input(format!("cutoff {} exceeds the limit {}", c.cutoff, c.max_cutoff)));
    }
    let ctx = commands::Context::load(c)?;
    let out = match &cli.command {
        Command::Validate => commands::validate(&ctx)?,
        Command::NormalForm { expr } => commands::normal_form(&ctx, expr)?,
        Command::Character { lambda } => commands::character(&ctx, lambda)?,
        Command::WeightMult { lambda, beta } => commands::weight_mult(&ctx, lambda, beta)?,
        Command::RootMult => commands::root_mult(&ctx)?,
        Command::Decompose { lambda, mu } => commands::decompose(&ctx, lambda, mu)?,
        Command::FormRanks => commands::form_ranks(&ctx)?,
        Command::CheckRelations { delta } => commands::check_relations(&ctx, *delta)?,
    };
    Ok(out.render(c.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(CliError::Failed(out)) => {
            print!("{}", out.render(cli.common.format));
            eprintln!("error: consistency check failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
