//! Encoding-aware unitary coupled-cluster circuit simulation with cheap,
//! exact gradients of fermionic excitation gates.

pub mod autodiff;
pub mod dense;
pub mod error;
pub mod fermion;
pub mod io;
pub mod optimize;
pub mod pauli;
pub mod sim;

pub use error::{Error, Result};
