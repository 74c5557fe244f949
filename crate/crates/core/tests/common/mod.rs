#![allow(dead_code)]

use fssqm::fock::{build_fock_rep, StructureFunctionSpec};
use fssqm::function::ComponentFunction;
use fssqm::model::FssqmModel;

pub fn model(
    spec: &StructureFunctionSpec,
    lambda: usize,
    dim: usize,
    f: Vec<ComponentFunction>,
) -> FssqmModel {
    let rep = build_fock_rep(spec, lambda, dim).expect("valid representation");
    FssqmModel::build(rep, f).expect("valid model")
}

pub fn reference(lambda: usize, dim: usize) -> FssqmModel {
    model(
        &StructureFunctionSpec::Oscillator,
        lambda,
        dim,
        vec![ComponentFunction::one(); lambda],
    )
}

/// `f_1 = n − shift`, all other components 1.
pub fn engineered_zero(
    spec: &StructureFunctionSpec,
    lambda: usize,
    dim: usize,
    shift: usize,
) -> FssqmModel {
    let mut f = vec![ComponentFunction::one(); lambda];
    f[0] = ComponentFunction::shifted(shift as f64);
    model(spec, lambda, dim, f)
}

pub fn config_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}
