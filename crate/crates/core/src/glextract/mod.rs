//! Simultaneous Goldreich-Levin extraction against explicit non-local
//! responders, and the reduction from correlated samples.

mod adversary;
mod correlated;
mod extract;

pub use adversary::{
    inner_bit, GLAdversary, BOB_COINS, BOB_OUT, BOB_WORK, CHARLIE_COINS, CHARLIE_OUT, CHARLIE_WORK, MAX_GL_BITS,
};
pub use correlated::{
    evaluate_correlated, gl_correlated_reduce, table_successes, CorrelatedAdversary, CorrelatedEvaluation,
};
pub use extract::{extractor_gates, gl_advantage, gl_circuit_extraction, gl_extract, GLPoint, GLReport};
