//! Loading and running a JSON scenario file, the same path the CLI takes.

use std::path::Path;

use contact_bundles::gallery::GalleryOptions;
use contact_bundles::scenario::{load_scenario, run_scenario};

fn main() -> contact_bundles::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/lutz-split.json");
    let scenario = load_scenario(&path)?;
    println!("loaded '{}' ({})", scenario.name, scenario.recipe.name());
    let report = run_scenario(&scenario, &GalleryOptions::default());
    print!("{}", report.summary());
    println!("report JSON:\n{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
