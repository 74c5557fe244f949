pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod fock;
pub mod function;
pub mod matrix;
pub mod model;
pub mod residual;
pub mod verifier;
