//! Sweeps one deformation parameter of a λ = 3 algebra and tracks the
//! ground degeneracy and classification of each sector.

use fssqm::analysis::sector::reduce_sector;
use fssqm::fock::{build_fock_rep, StructureFunctionSpec};
use fssqm::function::ComponentFunction;
use fssqm::model::FssqmModel;
use fssqm::verifier::{all_passed, audit, DEFAULT_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = 3;
    for step in 0..=8 {
        let a = -0.8 + 0.2 * step as f64;
        let spec = StructureFunctionSpec::c_lambda_extended(vec![a, -a, 0.0]);
        let rep = match build_fock_rep(&spec, lambda, 30) {
            Ok(rep) => rep,
            Err(e) => {
                println!("alpha = {a:+.1}: {e}");
                continue;
            }
        };
        let model = FssqmModel::build(rep, vec![ComponentFunction::one(); lambda])?;
        let ok = all_passed(&audit(&model, DEFAULT_TOL));
        let mut cells = Vec::new();
        for mu in 0..lambda {
            let s = reduce_sector(&model, mu)?;
            cells.push(format!(
                "{}:{}",
                s.ground_degeneracy,
                s.classification.label()
            ));
        }
        println!(
            "alpha = {a:+.1}  audit {}  {}",
            if ok { "ok  " } else { "FAIL" },
            cells.join("  ")
        );
    }
    Ok(())
}
