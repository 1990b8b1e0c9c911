use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "parcel", version, about = "Cubical homology, discrete Stokes checks, framework sums and flow diagnostics")]
struct Cli {
    /// Emit `key=value` lines instead of the text report.
    #[arg(long, global = true)]
    machine: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Discrete,
    Analytic,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integral homology of a complex file.
    Homology { file: PathBuf },

    /// Coherent orientation of the top cells, or a non-orientable witness.
    Orient { file: PathBuf },

    /// Compare the integral of da over a region with the integral of a over its boundary.
    Stokes {
        form: PathBuf,
        region: PathBuf,
        #[arg(long, value_enum, default_value = "discrete")]
        mode: Mode,
        /// Lattice step of the region; overrides its `scale` line.
        #[arg(long)]
        h: Option<f64>,
        /// Pass threshold on |difference|.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Also run on this many successive refinements (step halved each time).
        #[arg(long, default_value_t = 0)]
        refine: usize,
    },

    /// Framework graphs and their connected sums.
    #[command(subcommand)]
    Framework(FrameworkCmd),

    /// Residual and curvature diagnostics for a sampled field.
    Flow {
        file: PathBuf,
        /// Comma-separated subset of laplacian, closedness, divergence, holonomy, curvature.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Resample polynomial fields at this spacing.
        #[arg(long)]
        h: Option<f64>,
        /// Pass threshold on residual maxima.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Gradient norms below this are excluded from unit-field checks.
        #[arg(long, default_value_t = parcel_core::flows::DEFAULT_GRADIENT_EPS)]
        eps: f64,
    },
}

#[derive(Debug, Subcommand)]
enum FrameworkCmd {
    /// Graph of a sum of compositions, e.g. `(1 2)` or `(1 2) + (2 1)`.
    Build {
        #[arg(required = true, num_args = 1..)]
        expr: Vec<String>,
        /// Also list the edges.
        #[arg(long)]
        edges: bool,
    },
    /// Normal form of a connected sum.
    Sum {
        #[arg(required = true, num_args = 1..)]
        expr: Vec<String>,
    },
    /// Whether the fundamental group of the sum is trivial.
    Pi1 {
        #[arg(required = true, num_args = 1..)]
        expr: Vec<String>,
    },
    /// Cell structure of the product of spheres for one composition.
    Surface {
        #[arg(required = true, num_args = 1..)]
        expr: Vec<String>,
    },
    /// Check a framework file (a `sum` line or an explicit graph).
    Validate { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Homology { file } => commands::homology(&file),
        Command::Orient { file } => commands::orient(&file),
        Command::Stokes {
            form,
            region,
            mode,
            h,
            tol,
            refine,
        } => commands::stokes(&form, &region, mode, h, tol, refine),
        Command::Framework(sub) => match sub {
            FrameworkCmd::Build { expr, edges } => commands::framework_build(&expr.join(" "), edges),
            FrameworkCmd::Sum { expr } => commands::framework_sum(&expr.join(" ")),
            FrameworkCmd::Pi1 { expr } => commands::framework_pi1(&expr.join(" ")),
            FrameworkCmd::Surface { expr } => commands::framework_surface(&expr.join(" ")),
            FrameworkCmd::Validate { file } => commands::framework_validate(&file),
        },
        Command::Flow {
            file,
            checks,
            h,
            tol,
            eps,
        } => commands::flow(&file, &checks, h, tol, eps),
    };
    match result {
        Ok(report) => {
            print!("{}", report.render(cli.machine));
            ExitCode::SUCCESS
        }
        Err(Failure { code, message, report }) => {
            if let Some(report) = report {
                print!("{}", report.render(cli.machine));
            }
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
