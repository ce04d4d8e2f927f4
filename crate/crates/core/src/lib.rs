//! Mean parity and Wigner functions of photon-added optical fields in a
//! thermal environment.
//!
//! The crate builds excited coherent, binomial and thermal states in a
//! truncated Fock basis ([`fock`]), evaluates their Wigner functions
//! ([`wigner`]), evolves them through a thermal channel with several
//! independent backends ([`channel`]), and reconstructs the mean parity from
//! simulated Jaynes-Cummings Rabi oscillations ([`rabi`]).
//!
//! ```
//! use photonparity::fock::{build_state, Dim, StateSpec};
//! use photonparity::channel::threshold_tc;
//!
//! let rho = build_state(&StateSpec::ebs(1, 0.5, 2), Dim::Auto).unwrap();
//! assert!(rho.mean_parity().abs() < 1e-15);
//! assert!((threshold_tc(0.5) - 1.5f64.ln()).abs() < 1e-15);
//! ```

pub mod channel;
pub mod error;
pub mod fock;
pub mod rabi;
pub mod special;
pub mod wigner;

pub use error::{Error, Result};

/// Version string stamped into exported data.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/wigner.md")]
    mod wigner {}
    #[doc = include_str!("../../../book/src/channel.md")]
    mod channel {}
    #[doc = include_str!("../../../book/src/thresholds.md")]
    mod thresholds {}
    #[doc = include_str!("../../../book/src/rabi.md")]
    mod rabi {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
