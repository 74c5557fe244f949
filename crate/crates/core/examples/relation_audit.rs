//! Audits every defining identity for the reference models λ = 2..6.

use std::time::Instant;

use fssqm::fock::{build_fock_rep, StructureFunctionSpec};
use fssqm::function::ComponentFunction;
use fssqm::model::FssqmModel;
use fssqm::verifier::{audit, DEFAULT_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for lambda in 2..=6 {
        let start = Instant::now();
        let rep = build_fock_rep(&StructureFunctionSpec::Oscillator, lambda, 40)?;
        let model = FssqmModel::build(rep, vec![ComponentFunction::one(); lambda])?;
        let results = audit(&model, DEFAULT_TOL);
        let worst = results
            .iter()
            .max_by(|a, b| {
                (a.residual / a.tolerance.max(1e-300))
                    .total_cmp(&(b.residual / b.tolerance.max(1e-300)))
            })
            .unwrap();
        println!(
            "lambda {lambda}: {} relations, {} failed, worst {} = {:.2e}, {:.2?}",
            results.len(),
            results.iter().filter(|r| !r.passed).count(),
            worst.name,
            worst.residual,
            start.elapsed()
        );
        for r in results.iter().filter(|r| !r.passed) {
            println!(
                "  FAIL {:<36} {:.3e} > {:.1e}   {}",
                r.name, r.residual, r.tolerance, r.formula
            );
        }
    }
    Ok(())
}
