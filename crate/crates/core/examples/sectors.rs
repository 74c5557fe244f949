//! Reduces a λ = 4 model to its sectors and classifies supersymmetry
//! breaking in each, before and after engineering a zero of f_1.

use fssqm::analysis::sector::reduce_sector;
use fssqm::fock::{build_fock_rep, StructureFunctionSpec};
use fssqm::function::ComponentFunction;
use fssqm::model::FssqmModel;

fn describe(title: &str, model: &FssqmModel) -> Result<(), Box<dyn std::error::Error>> {
    println!("{title}");
    for mu in 0..model.lambda {
        let s = reduce_sector(model, mu)?;
        println!(
            "  mu = {mu}: {:<24} E0 = {:.3e}  degeneracy {}  block residual {:.1e}",
            s.classification.label(),
            s.ground_energy,
            s.ground_degeneracy,
            s.block_residual
        );
        if s.classification != s.numeric_classification {
            println!(
                "    numeric classification disagrees: {}",
                s.numeric_classification
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = 4;
    let rep = build_fock_rep(&StructureFunctionSpec::Oscillator, lambda, 40)?;

    let reference = FssqmModel::build(rep.clone(), vec![ComponentFunction::one(); lambda])?;
    describe("f_i = 1", &reference)?;

    let mut f = vec![ComponentFunction::one(); lambda];
    f[0] = ComponentFunction::shifted(1.0);
    let engineered = FssqmModel::build(rep, f)?;
    describe("f_1 = n - 1", &engineered)?;
    Ok(())
}
