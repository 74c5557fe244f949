//! Loads a model from a JSON config file and prints a one-line summary.
//!
//! ```text
//! cargo run --example config_file -- configs/lambda4_extended.json
//! ```

use std::path::PathBuf;

use fssqm::config::ModelConfig;
use fssqm::verifier::audit;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/lambda3_reference.json")
        });
    let config = ModelConfig::load(&path)?;
    let tol = config.effective_tolerance(None)?;
    let model = config.build()?;
    let results = audit(&model, tol);
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "{}: lambda {}, dim {}, {} relations, {failed} failed",
        path.display(),
        model.lambda,
        model.dim(),
        results.len()
    );
    Ok(())
}
