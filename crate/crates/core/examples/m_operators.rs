//! The diagonal operators M_i that factorize powers of the Hermitian and
//! anti-Hermitian parts of the supercharge, for λ = 3, 4, 5.
//!
//! Residuals grow with the dimension because the identities cancel terms of
//! order n^(2λ) down to the Hamiltonian.

use fssqm::fock::{build_fock_rep, StructureFunctionSpec};
use fssqm::function::ComponentFunction;
use fssqm::model::FssqmModel;
use fssqm::verifier::{audit, DEFAULT_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for lambda in 3..=5 {
        for dim in [20, 28, 36, 40] {
            let rep = build_fock_rep(&StructureFunctionSpec::Oscillator, lambda, dim)?;
            let model = FssqmModel::build(rep, vec![ComponentFunction::one(); lambda])?;
            let results = audit(&model, DEFAULT_TOL);
            let get = |name: &str| {
                results
                    .iter()
                    .find(|r| r.name == name)
                    .map_or(f64::NAN, |r| r.residual)
            };
            print!(
                "lambda {lambda} dim {dim:2}: q1 {:.2e}  q2 {:.2e}",
                get("m_identity_q1"),
                get("m_identity_q2")
            );
            match model.min_radicand_safe {
                Some(d) => println!("  min radicand {d:.3}"),
                None => println!(),
            }
        }
    }
    Ok(())
}
