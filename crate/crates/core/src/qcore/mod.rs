//! Dense state-vector and operator kernel.
//!
//! Basis convention: registers are listed most-significant first, so the
//! flat index of `|a>|b>` on a layout `[(A, dA), (B, dB)]` is `a * dB + b`.

mod haar;
mod kernel;
mod layout;
mod measure;
mod metrics;
mod operator;
mod random;
mod schmidt;
mod serial;
mod state;

pub use haar::{haar_state, haar_state_on, haar_unitary};
pub use kernel::{apply_controlled, apply_local, hermitian_eigen};
pub use layout::{Register, RegisterLayout, MAX_TOTAL_DIM};
pub use measure::{
    born_measure, born_probabilities, measure_computational, swap_operator, swap_test,
    swap_test_pass_probability,
};
pub use metrics::{fidelity, frobenius, hs_inner, op_norm, trace_distance, trace_norm};
pub use operator::{OperatorMatrix, Roles};
pub use random::RandomStream;
pub use schmidt::{schmidt_decompose, SchmidtDecomposition};
pub use serial::{OperatorRecord, StateRecord};
pub use state::PureState;

pub type C64 = num_complex::Complex64;

/// Tolerance for role flags.
pub const FLAG_TOL: f64 = 1e-10;
/// Tolerance for algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-9;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
