//! Analytic spectrum next to exact diagonalization, with the action of the
//! supercharge inside every level.

use fssqm::analysis::spectrum::{
    analytic_spectrum, compare_spectra, numeric_spectrum, supercharge_orbit,
};
use fssqm::fock::{build_fock_rep, StructureFunctionSpec};
use fssqm::function::ComponentFunction;
use fssqm::model::FssqmModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = 3;
    let rep = build_fock_rep(&StructureFunctionSpec::Oscillator, lambda, 30)?;
    let model = FssqmModel::build(rep, vec![ComponentFunction::one(); lambda])?;

    let analytic = analytic_spectrum(&model, 5)?.merged();
    let numeric = numeric_spectrum(&model, 5)?;
    compare_spectra(&analytic, &numeric, 1e-9)?;

    println!("{:>10} {:>6}  states", "energy", "mult");
    for level in &numeric.levels {
        let states: Vec<String> = level
            .members
            .iter()
            .map(|s| format!("({},{})", s.block, s.n))
            .collect();
        println!(
            "{:>10.4} {:>6}  {}",
            level.energy,
            level.multiplicity,
            states.join(" ")
        );
    }

    for level in &numeric.levels {
        let orbit = supercharge_orbit(&model, level);
        let killed = orbit.annihilated().len();
        println!(
            "E = {:<8.3} single Q-cycle: {:<5} annihilated by Q: {killed}",
            level.energy,
            orbit.is_single_cycle()
        );
    }
    Ok(())
}
