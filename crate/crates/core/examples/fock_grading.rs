//! Builds the truncated Fock representation of a deformed oscillator and
//! checks the grading operator and projector relations.

use fssqm::fock::{build_fock_rep, check_grading_relations, StructureFunctionSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = StructureFunctionSpec::c_lambda_extended(vec![0.4, -0.1, -0.3]);
    let rep = build_fock_rep(&spec, 3, 12)?;

    println!("F(n) for n = 0..{}:", rep.f_table.n_max());
    for (n, v) in rep.f_table.values().iter().enumerate() {
        println!("  F({n:2}) = {v:8.4}");
    }
    println!("safe block: |0> .. |{}>", rep.safe_dim - 1);

    let report = check_grading_relations(&rep, 1e-12);
    for r in &report.residuals {
        println!("  {:<32} {:.2e}", r.name, r.residual);
    }
    println!("all relations hold: {}", report.passed());
    Ok(())
}
