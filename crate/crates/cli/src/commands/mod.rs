pub mod distances;
pub mod dynamics;
pub mod energy;
pub mod selftest;
pub mod topology;

use desprox_core::description::{described_sets_from_json, DescribedSet};
use std::path::Path;

use crate::{Failure, RunResult};

/// Loads described sets after validation has passed.
pub fn load_sets(path: &Path, tau_eq: Option<f64>) -> RunResult<Vec<DescribedSet>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("cannot read `{}`: {e}", path.display())))?;
    described_sets_from_json(&text, tau_eq).map_err(Failure::computation)
}

/// Prints a report to stdout and, when an output directory is given,
/// persists it there as well.
pub fn emit_report(
    manifest: &mut crate::manifest::RunManifest,
    output: Option<&Path>,
    name: &str,
    contents: &str,
) -> RunResult<()> {
    print!("{contents}");
    if !contents.ends_with('\n') {
        println!();
    }
    if let Some(dir) = output {
        manifest.write_output(dir, name, contents)?;
    }
    Ok(())
}
