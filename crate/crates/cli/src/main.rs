mod commands;
mod format;
mod range;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nctwobody::{QuantumNumbers, OMEGA_C};

use crate::range::Range;

#[derive(Debug, Parser)]
#[command(
    name = "nctwobody",
    version,
    about = "Self-consistent two-body bound states with noncommuting inter-particle operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
struct LevelArgs {
    /// Principal quantum number
    #[arg(short = 'n', default_value_t = 1)]
    n: u32,
    /// Orbital quantum number
    #[arg(short = 'l', default_value_t = 0)]
    l: u32,
}

impl LevelArgs {
    fn level(&self) -> nctwobody::Result<QuantumNumbers> {
        QuantumNumbers::new(self.n, self.l)
    }
}

#[derive(Debug, Args, Clone)]
struct SolverArgs {
    /// Kernel constant Omega
    #[arg(long, default_value_t = OMEGA_C)]
    omega: f64,
    /// Tolerance on eta
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one level at one coupling and print a JSON record
    Solve {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long = "alpha-z")]
        alpha_z: f64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Critical coupling of one level
    Critical {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Critical coupling of the ground state, i.e. Omega_c
    OmegaC {
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Write a CSV curve
    Curve {
        #[command(subcommand)]
        kind: CurveKind,
    },
    /// Table of all levels up to a principal quantum number
    Spectrum {
        #[arg(long = "alpha-z")]
        alpha_z: f64,
        #[arg(long = "n-max", default_value_t = 3)]
        n_max: u32,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Operator-algebra checks
    Algebra {
        #[command(subcommand)]
        kind: AlgebraKind,
    },
}

#[derive(Debug, Subcommand)]
enum CurveKind {
    /// Right-hand side of the fixed-point equation against eta at fixed g
    Rhs {
        #[command(flatten)]
        level: LevelArgs,
        /// Coupling g = Omega (alpha Z)^6
        #[arg(long)]
        g: f64,
        #[arg(long, default_value = "0.01:1:0.01")]
        eta: Range,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ground-state energies (Schrodinger, Dirac, self-consistent) against alpha Z
    Energy {
        #[arg(long = "alpha-z", default_value = "0.05:1:0.05")]
        alpha_z: Range,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Noncommutativity parameter against alpha Z
    Epsilon {
        #[command(flatten)]
        level: LevelArgs,
        /// Several levels at once, e.g. 1S,2S,2P (overrides -n/-l)
        #[arg(long, value_delimiter = ',')]
        levels: Vec<String>,
        #[arg(long = "alpha-z", default_value = "0.1:1:0.1")]
        alpha_z: Range,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Clone)]
struct ScalarArg {
    /// Use exact rational arithmetic on the decimal inputs
    #[arg(long)]
    exact: bool,
}

#[derive(Debug, Args, Clone)]
struct BodyArgs {
    /// Comma-separated masses
    #[arg(long, value_delimiter = ',', required = true)]
    masses: Vec<String>,
    /// Same epsilon for every pair
    #[arg(long = "eps-uniform", conflicts_with = "eps_matrix")]
    eps_uniform: Option<String>,
    /// Full matrix, rows separated by ';' and entries by ','
    #[arg(long = "eps-matrix")]
    eps_matrix: Option<String>,
    #[command(flatten)]
    scalar: ScalarArg,
}

#[derive(Debug, Subcommand)]
enum AlgebraKind {
    /// Two-body commutator table in units of i hbar
    Commutators {
        #[arg(long)]
        m1: String,
        #[arg(long)]
        m2: String,
        #[arg(long)]
        eps: String,
        #[command(flatten)]
        scalar: ScalarArg,
    },
    /// Kinetic-form coefficients A_i and B_ik
    Coeffs {
        #[command(flatten)]
        bodies: BodyArgs,
    },
    /// Center-of-mass separation in Jacobi coordinates
    ComCheck {
        #[command(flatten)]
        bodies: BodyArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
