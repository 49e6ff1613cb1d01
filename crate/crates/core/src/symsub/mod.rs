//! Symmetric-subspace machinery: permutation operators, projectors, type
//! states and the crossing-number decomposition of `S_{2t}`.

mod classsum;
mod distinct;
mod perm;
mod projector;

pub use classsum::{
    class_size, class_sum_check, class_sum_total_check, enumerate_class, enumerated_class_sizes,
    perm_class_sum, perm_class_sum_factored, ClassSumCheck, ClassSumMethod, ENUMERATION_MAX_POINTS,
};
pub use distinct::{distinct_type_distance, DistinctTypeReport};
pub use perm::{perm_operator, LexPermutations, Permutation};
pub use projector::{
    binomial, factorial, projector_rank, sym_dim, sym_moment, sym_projector, sym_projector_by_summation,
    sym_projector_by_types, type_state, TypeIndex,
};

use crate::error::Result;
use crate::qcore::frobenius;

/// Frobenius distance between the summation and type-basis projectors.
pub fn projector_identity_residual(d: usize, t: usize) -> Result<f64> {
    let a = sym_projector_by_summation(d, t)?;
    let b = sym_projector_by_types(d, t)?;
    Ok(frobenius(&a.sub(&b)?))
}

/// Frobenius distance between the partial trace of `Pi(d,t)/dim` over the
/// last `t - s` registers and `Pi(d,s)/dim`.
pub fn partial_trace_residual(d: usize, t: usize, s: usize) -> Result<f64> {
    if s == 0 || s > t {
        crate::error::bail!(Parameter, "need 1 <= s <= t");
    }
    let big = sym_moment(d, t)?;
    let keep: Vec<String> = (0..s).map(|i| format!("A{i}")).collect();
    let reduced = big.partial_trace(&keep)?;
    let small = sym_moment(d, s)?;
    Ok(frobenius(&reduced.sub(&small)?))
}
