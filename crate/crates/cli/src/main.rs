//! `weil`: command-line front end for weil-core. Inputs are JSON files with
//! exact rational strings; results are written as deterministic JSON.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "weil", version, about = "p-adic jets, Mahler expansions and formal groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Global {
    /// The prime p; overrides any prime given in input files.
    #[arg(long = "p", global = true)]
    pub prime: Option<u64>,
    /// Precision N in p-adic digits; overrides input files (default 20).
    #[arg(long = "N", global = true)]
    pub precision: Option<u32>,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Arithmetic, norms and digits of rational literals in Q_p.
    Padic {
        #[command(subcommand)]
        op: PadicOp,
    },
    /// Weil-algebra structure constants.
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Lifts a power series to a point with coordinates in a Weil algebra.
    Lift {
        series: PathBuf,
        point: PathBuf,
        /// Also check that projecting the lift equals evaluating at the projection.
        #[arg(long)]
        check_diagram: bool,
    },
    /// Mahler expansions of functions on Z_p.
    Mahler {
        #[command(subcommand)]
        op: MahlerOp,
    },
    /// Formal group laws of Weierstrass curves.
    Fgl {
        #[command(subcommand)]
        op: FglOp,
    },
    /// Polynomial systems over Z_p.
    Dioph {
        #[command(subcommand)]
        op: DiophOp,
    },
    /// Chart transitions on Weil bundles.
    Chart {
        #[command(subcommand)]
        op: ChartOp,
    },
}

#[derive(Subcommand, Debug)]
pub enum PadicOp {
    Add(Pair),
    Sub(Pair),
    Mul(Pair),
    Div(Pair),
    /// |x|_p as an exact rational.
    Norm(Single),
    /// Base-p digits a_0 .. a_{N-1} of an integral element.
    Digits(Single),
    /// Valuation, norm, digits and rational form as JSON.
    Show(Single),
}

/// Literals may be negative, e.g. `-3/10`.
#[derive(Args, Debug)]
pub struct Pair {
    #[arg(allow_hyphen_values = true)]
    pub x: String,
    #[arg(allow_hyphen_values = true)]
    pub y: String,
}

#[derive(Args, Debug)]
pub struct Single {
    #[arg(allow_hyphen_values = true)]
    pub x: String,
}

#[derive(Subcommand, Debug)]
pub enum AlgebraOp {
    /// Validates an algebra file.
    Check { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum MahlerOp {
    /// Coefficients a_0..a_K from samples f(0)..f(K).
    Fit { samples: PathBuf },
    /// Evaluates an expansion at an integral point.
    Eval {
        coeffs: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Decay check on |a_n|_p; exits 1 when it fails.
    Check { coeffs: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum FglOp {
    /// Expands F(z, w) to total degree D.
    Build {
        curve: PathBuf,
        #[arg(long, default_value_t = 6)]
        degree: u32,
    },
    /// Adds two dual-number jets given as "z0,z1".
    Add {
        curve: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 6)]
        degree: u32,
    },
    /// Checks the formal-group axioms; without a curve file a random curve
    /// is drawn from `--seed`.
    Verify {
        curve: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 6)]
        degree: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum DiophOp {
    /// Kernel of the Jacobian at a solution.
    Tangent {
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Newton iteration from an approximate simple root.
    Hensel {
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
    },
    /// Verifies base + v e on every equation; without `--vector` each
    /// kernel basis vector is checked.
    Points {
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ChartOp {
    /// Applies a transition to a point, or runs the P^1 cocycle check.
    Transit {
        #[arg(required_unless_present = "cocycle")]
        transition: Option<PathBuf>,
        #[arg(required_unless_present = "cocycle")]
        point: Option<PathBuf>,
        /// Triple-overlap check on the built-in P^1 charts at random dual points.
        #[arg(long, conflicts_with_all = ["transition", "point"])]
        cocycle: bool,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Padic { op } => commands::padic(&cli.global, op),
        Command::Algebra { op: AlgebraOp::Check { file } } => commands::algebra_check(&cli.global, &file),
        Command::Lift {
            series,
            point,
            check_diagram,
        } => commands::lift(&cli.global, &series, &point, check_diagram),
        Command::Mahler { op } => commands::mahler(&cli.global, op),
        Command::Fgl { op } => commands::fgl(&cli.global, op),
        Command::Dioph { op } => commands::dioph(&cli.global, op),
        Command::Chart { op } => commands::chart(&cli.global, op),
    };
    match result.and_then(|outcome| outcome.emit(cli.global.out.as_deref())) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
