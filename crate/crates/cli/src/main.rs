mod commands;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::Context;

/// Gromov–Hausdorff type distances and shadowing-based conjugacies on finite
/// metric spaces. Writes a JSON report to stdout and a summary to stderr.
#[derive(Debug, Parser)]
#[command(name = "ghdyn", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Tolerance for metric validation and every feasibility comparison.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Extra ε values to evaluate: a comma list, or "critical" for none.
    #[arg(long, global = true, default_value = "critical")]
    pub eps_grid: String,
    /// Largest number of maps an exhaustive search may enumerate.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub max_enum: u64,
    /// Restarts for the GH local search used when the budget is exceeded.
    #[arg(long, global = true, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Orbit window: offsets in [-N, N].
    #[arg(long, global = true, default_value_t = 20)]
    pub window: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistanceKind {
    Hausdorff,
    Gh,
    GhHat,
    Pgh,
    C0,
    Gh0,
    Pgh0,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a space file holds a metric.
    Validate { space: PathBuf },
    /// Compute a distance. Hausdorff takes one space and two sets; gh, gh-hat
    /// and pgh take two space files; c0, gh0 and pgh0 take two self-map files.
    Distance {
        #[arg(value_enum)]
        kind: DistanceKind,
        #[arg(num_args = 1..=2, required = true)]
        inputs: Vec<PathBuf>,
        /// First set for hausdorff, as comma-separated indices.
        #[arg(long)]
        set_a: Option<String>,
        /// Second set for hausdorff.
        #[arg(long)]
        set_b: Option<String>,
    },
    /// List the points whose orbit traces a pseudo-orbit.
    Shadow {
        system: PathBuf,
        orbit: PathBuf,
        /// A number or a scale file.
        eps: String,
    },
    /// Build the conjugacy h from an approximation j: Y → X.
    Conjugacy {
        f: PathBuf,
        g: PathBuf,
        j: PathBuf,
        /// A number or a scale file on the points of X.
        #[arg(long)]
        delta: String,
        /// A number or a scale file on the points of X.
        #[arg(long)]
        eps: String,
        /// Tracing scale; calibrated from the expansivity estimate when absent.
        #[arg(long)]
        eps_bar: Option<f64>,
        /// Approximation i: X → Y used for the pair bound; defaults to j⁻¹.
        #[arg(long)]
        i: Option<PathBuf>,
        /// Write h as a map file.
        #[arg(long)]
        out_h: Option<PathBuf>,
    },
    /// Write a generated space or system to files.
    Demo {
        /// circle, torus, shifted-torus, circle-doubling, rotation, two-point,
        /// singleton or truncated-line.
        name: String,
        /// Resolution, or the far point for two-point.
        #[arg(long)]
        n: Option<f64>,
        /// Shift "a,b" for shifted-torus, or "s" for rotation.
        #[arg(long)]
        shift: Option<String>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = Context::new(cli.common.clone());
    let outcome = commands::run(&cli.command, &mut ctx);
    let (report, summary) = ctx.finish(commands::name(&cli.command), outcome);
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("reports serialize")
    );
    eprintln!("{summary}");
    ExitCode::from(report.exit_code())
}
