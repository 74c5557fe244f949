//! Zero modes per grade and the integer invariants Δ_ij, for the full
//! model and for each sector.

use fssqm::analysis::topology::{sector_invariants, topological_invariants, TopologyReport};
use fssqm::fock::{build_fock_rep, StructureFunctionSpec};
use fssqm::function::ComponentFunction;
use fssqm::model::FssqmModel;

fn print_delta(t: &TopologyReport) {
    for row in &t.delta {
        let cells: Vec<String> = row.iter().map(|d| format!("{d:3}")).collect();
        println!("    {}", cells.join(""));
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = 5;
    let rep = build_fock_rep(&StructureFunctionSpec::Oscillator, lambda, 40)?;
    let model = FssqmModel::build(rep, vec![ComponentFunction::one(); lambda])?;

    let full = topological_invariants(&model)?;
    println!(
        "full model: zero modes {:?}, level multiplicities {:?}",
        full.zero_mode_counts, full.multiplicities
    );
    print_delta(&full);

    for mu in 0..lambda {
        let t = sector_invariants(&model, mu)?;
        println!("sector {mu}: zero modes {:?}", t.zero_mode_counts);
        print_delta(&t);
    }
    Ok(())
}
