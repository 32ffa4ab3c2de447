//! Command-line surface: scenario runners and the built-in gallery.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::gallery::{run_gallery, GalleryOptions};
use crate::report::Report;
use crate::scenario::{load_scenario, run_scenario, Recipe};
use crate::tolerances::POSITIVITY_TOL;

pub const JOBS_ENV: &str = "CONTACT_BUNDLES_JOBS";

#[derive(Debug, Parser)]
#[command(name = "contact-bundles")]
#[command(about = "invariant contact structures on circle bundles: scenario checks and gallery")]
struct Cli {
    /// Multiplies every per-factor resolution.
    #[arg(long, global = true, default_value_t = 1.0)]
    resolution_scale: f64,

    /// Positivity margin for sweeps.
    #[arg(long, global = true, default_value_t = POSITIVITY_TOL)]
    tol: f64,

    /// Write the JSON report here (overrides the scenario's output path).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sweeps; defaults to CONTACT_BUNDLES_JOBS or all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a contact candidate described by a scenario file.
    VerifyContact { scenario: PathBuf },
    /// Run a construction recipe (neck-and-gluing or contactisation).
    Construct { scenario: PathBuf },
    /// Run the open-book construction recipe.
    Bourgeois { scenario: PathBuf },
    /// Evaluate Euler-class pairings against the scenario's generators.
    Euler { scenario: PathBuf },
    /// Run a built-in gallery case by name.
    Gallery { name: String },
}

fn accepted(recipes: &[Recipe], got: &Recipe) -> bool {
    recipes.contains(got)
}

pub fn run_cli() -> i32 {
    let cli = Cli::parse();
    let jobs = cli.jobs.or_else(|| {
        std::env::var(JOBS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    });
    if let Some(n) = jobs {
        // best effort; a pool may already exist in-process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    let opts = GalleryOptions {
        resolution_scale: cli.resolution_scale,
        tol: cli.tol,
    };

    let (report, output_from_scenario) = match &cli.command {
        Command::Gallery { name } => match run_gallery(name, &opts) {
            Ok(r) => (r, None),
            Err(Error::UnknownGallery { name, valid }) => {
                eprintln!("unknown gallery case '{name}'; valid names: {valid}");
                return 2;
            }
            Err(e) => {
                eprintln!("gallery failed: {e}");
                return 2;
            }
        },
        Command::VerifyContact { scenario }
        | Command::Construct { scenario }
        | Command::Bourgeois { scenario }
        | Command::Euler { scenario } => {
            let sc = match load_scenario(scenario) {
                Ok(sc) => sc,
                Err(e) => {
                    eprintln!("failed to load {}: {e}", scenario.display());
                    return 2;
                }
            };
            let wanted: &[Recipe] = match &cli.command {
                Command::VerifyContact { .. } => &[Recipe::VerifyContact, Recipe::Split],
                Command::Construct { .. } => &[Recipe::Construct, Recipe::Contactise],
                Command::Bourgeois { .. } => &[Recipe::Bourgeois],
                Command::Euler { .. } => &[Recipe::Euler],
                Command::Gallery { .. } => unreachable!(),
            };
            if !accepted(wanted, &sc.recipe) {
                eprintln!(
                    "scenario recipe '{}' does not match this subcommand",
                    sc.recipe.name()
                );
                return 2;
            }
            let out = sc.output.clone();
            (run_scenario(&sc, &opts), out)
        }
    };

    let out_path = cli.out.clone().or(output_from_scenario);
    if let Some(path) = out_path {
        match write_report(&report, &path) {
            Ok(()) => {}
            Err(e) => {
                eprintln!("failed to write report to {}: {e}", path.display());
                return 2;
            }
        }
    }
    print!("{}", report.summary());
    if report.overall_pass {
        0
    } else {
        1
    }
}

pub fn write_report(report: &Report, path: &std::path::Path) -> crate::error::Result<()> {
    let json = serde_json::to_string_pretty(report)?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}
