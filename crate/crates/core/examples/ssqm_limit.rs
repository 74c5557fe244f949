//! λ = 2 recovers ordinary supersymmetric quantum mechanics with a
//! nilpotent supercharge.

use fssqm::fock::{build_fock_rep, StructureFunctionSpec};
use fssqm::function::ComponentFunction;
use fssqm::model::{build_ssqm_limit, FssqmModel};
use fssqm::residual::scaled_difference;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Calogero-Vasiliev oscillator
    let spec = StructureFunctionSpec::c_lambda_extended(vec![0.5, -0.5]);
    let rep = build_fock_rep(&spec, 2, 30)?;
    let model = FssqmModel::build(rep, vec![ComponentFunction::one(); 2])?;
    let cols = model.safe_columns();

    let pair = build_ssqm_limit(&model)?;
    let square = &pair.charge * &pair.charge;
    println!("nonzero entries of Q^2: {}", square.count_nonzero());

    let anti = &(&pair.charge * &pair.charge_adj) + &(&pair.charge_adj * &pair.charge);
    println!(
        "{{Q, Q+}} - H: {:.2e}",
        scaled_difference(&anti, &model.hamiltonian, &cols)
    );

    let dq = &(&model.covariant * &model.supercharge) + &(&model.supercharge * &model.covariant);
    println!("DQ + QD: {:.2e}", dq.inf_norm_on_columns(&cols));
    Ok(())
}
