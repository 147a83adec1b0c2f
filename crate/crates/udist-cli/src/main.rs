use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use udist_cli::app;
use udist_cli::output::Format;

/// Distance distributions of a fixed point to uniform random points on
/// disks, balls, segments, planar polygons and their disjoint unions, plus
/// seismic hazard curves built from them.
///
/// Exit codes: 0 success, 1 verification failure, 2 unreadable input or
/// schema violation, 3 invalid geometry/parameters, 4 target outside the
/// attainable range.
#[derive(Parser)]
#[command(name = "udist", version, about, verbatim_doc_comment)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the distance CDF of a scene.
    Cdf {
        /// Scene JSON file (one site, one support or a union).
        #[arg(long)]
        scene: PathBuf,
        /// Evaluate on this many evenly spaced distances spanning the
        /// support's distance range.
        #[arg(long, conflicts_with = "d")]
        d_grid: Option<usize>,
        /// Evaluate at a single distance.
        #[arg(long)]
        d: Option<f64>,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Tabulate the distance density of a scene (exact for closed-form
    /// supports, cell averages for polygons).
    Pdf {
        #[arg(long)]
        scene: PathBuf,
        /// Number of grid cells.
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Tabulate expected exceedance counts and exceedance probabilities
    /// over the model's horizon for a grid of acceleration thresholds.
    Hazard {
        /// Hazard model JSON file.
        #[arg(long)]
        model: PathBuf,
        /// Threshold grid as START:STOP:COUNT.
        #[arg(long)]
        a_grid: String,
        /// Space the thresholds geometrically instead of linearly.
        #[arg(long)]
        log_a: bool,
        #[arg(long, default_value_t = 256)]
        distance_cells: usize,
        #[arg(long, default_value_t = 128)]
        magnitude_cells: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Solve for the acceleration whose horizon exceedance probability
    /// equals epsilon.
    DesignPga {
        #[arg(long)]
        model: PathBuf,
        /// Target exceedance probability over the model's horizon.
        #[arg(long)]
        epsilon: f64,
        /// Absolute tolerance on the returned acceleration.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 256)]
        distance_cells: usize,
        #[arg(long, default_value_t = 128)]
        magnitude_cells: usize,
    },
    /// Check the exact CDF of a scene against seeded Monte Carlo (and a
    /// raster overlap for polygon supports); exits 1 on any breach.
    Verify {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Negative-control hook: bias added to the exact values.
        #[arg(long, hide = true, default_value_t = 0.0, allow_negative_numbers = true)]
        tamper_bias: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Cdf {
            scene,
            d_grid,
            d,
            out,
            format,
        } => app::cmd_cdf(&scene, d_grid, d, out.as_deref(), format),
        Command::Pdf {
            scene,
            grid,
            out,
            format,
        } => app::cmd_pdf(&scene, grid, out.as_deref(), format),
        Command::Hazard {
            model,
            a_grid,
            log_a,
            distance_cells,
            magnitude_cells,
            out,
            format,
        } => app::cmd_hazard(
            &model,
            &a_grid,
            log_a,
            distance_cells,
            magnitude_cells,
            out.as_deref(),
            format,
        ),
        Command::DesignPga {
            model,
            epsilon,
            tol,
            distance_cells,
            magnitude_cells,
        } => app::cmd_design_pga(&model, epsilon, tol, distance_cells, magnitude_cells),
        Command::Verify {
            scene,
            samples,
            seed,
            tamper_bias,
        } => app::cmd_verify(&scene, samples, seed, tamper_bias),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
