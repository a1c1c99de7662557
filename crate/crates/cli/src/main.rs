mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Spreading measures and composite complexities of hydrogenic orbitals.
#[derive(Debug, Parser)]
#[command(name = "hydrogenic", version, about, allow_negative_numbers = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Nuclear charge.
    #[arg(long = "Z", global = true, default_value_t = 1.0, value_name = "CHARGE")]
    pub z: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (stdout when omitted). For `profiles`, a path prefix.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Highest Gauss rule order used by the entropic integrals.
    #[arg(long, global = true, default_value_t = 256, value_name = "ORDER")]
    pub quad_max_order: usize,
    /// Uniform tolerance for `validate`, replacing the per-quantity defaults.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol: Option<f64>,
    /// Worker threads for multi-orbital commands (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    N,
    L,
    M,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every measure of a single orbital.
    #[command(allow_negative_numbers = true)]
    Orbital { n: u32, l: u32, m: i32 },
    /// One row of measures per orbital while one quantum number varies.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long, value_enum)]
        vary: Axis,
        #[arg(long)]
        from: i32,
        #[arg(long)]
        to: i32,
        /// Fixed n (when not varied).
        #[arg(long)]
        n: Option<u32>,
        /// Fixed l (when not varied).
        #[arg(long)]
        l: Option<u32>,
        /// Fixed m (when not varied).
        #[arg(long)]
        m: Option<i32>,
        /// Comma-separated subset of measure columns to keep.
        #[arg(long, value_delimiter = ',')]
        measures: Option<Vec<String>>,
        /// Emit the ground-state-normalized ratios.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        normalize: bool,
    },
    /// Upper bounds and their relative gaps for every (n, l, 0) up to n_max.
    Bounds {
        #[arg(long, default_value_t = 6)]
        n_max: u32,
    },
    /// Tabulated radial and angular densities.
    #[command(allow_negative_numbers = true)]
    Profiles {
        n: u32,
        l: u32,
        m: i32,
        /// Radial extent in bohr (default 5n²/Z).
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, default_value_t = 2000)]
        r_points: usize,
        #[arg(long, default_value_t = 1000)]
        theta_points: usize,
    },
    /// Quadratic least-squares fit of C_FS along n.
    #[command(allow_negative_numbers = true)]
    Fit {
        l: u32,
        m: i32,
        /// First n (default l+1).
        #[arg(long)]
        n_from: Option<u32>,
        /// Last n (default max(20, l+10)).
        #[arg(long)]
        n_to: Option<u32>,
        /// Fit raw C_FS instead of C_FS / C_FS(1,0,0).
        #[arg(long)]
        raw: bool,
    },
    /// Compare closed forms with brute-force integration.
    Validate {
        #[arg(long, default_value_t = 6)]
        n_max: u32,
        /// Permit n_max above 8.
        #[arg(long)]
        allow_large: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::ValidationFailed) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}
