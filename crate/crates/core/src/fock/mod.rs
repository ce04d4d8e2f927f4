//! Truncated Fock-space states: construction, photon addition and parity.

mod build;
mod density;
mod spec;
mod state;

pub use build::{
    build_pure, build_state, build_state_with, ebs_normalization, BuildOptions, Dim,
    DEFAULT_DIM_CAP, DEFAULT_TAIL_TOL,
};
pub use density::{mean_parity, DensityMatrix};
pub use spec::StateSpec;
pub use state::{build_binomial, photon_add, FockState};
