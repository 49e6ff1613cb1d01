use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::projector::{binomial, sym_dim, TypeIndex};
use crate::error::{bail, Result};
use crate::qcore::MAX_TOTAL_DIM;

/// Trace distance between the uniform mixture of distinct-type states and
/// the Haar moment `Pi_Sym / sym_dim`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistinctTypeReport {
    pub d: usize,
    pub t: usize,
    pub trace_distance: f64,
    /// `1 - binom(d, t) / binom(d + t - 1, t)`.
    pub closed_form: f64,
    /// `2 t^2 / d`.
    pub bound: f64,
    /// Largest deviation of the type-state Gram matrix from the identity.
    pub gram_error: f64,
}

/// Computes the distance by eigendecomposition of the difference operator
/// compressed to the span of the type states.
pub fn distinct_type_distance(d: usize, t: usize) -> Result<DistinctTypeReport> {
    if t > d {
        bail!(Parameter, "no distinct types with t = {t} > d = {d}");
    }
    match d.checked_pow(t as u32) {
        Some(n) if n <= MAX_TOTAL_DIM => {}
        _ => bail!(Dimension, "{d}^{t} exceeds the dimension cap"),
    }
    let types = TypeIndex::enumerate(d, t);
    let m = types.len();
    let n_distinct = binomial(d as u64, t as u64)? as f64;
    let dim = sym_dim(d as u64, t as u64)? as f64;
    let strings: Vec<Vec<usize>> = types.iter().map(|ty| ty.strings(d)).collect();
    let mut owner = vec![usize::MAX; d.pow(t as u32)];
    for (k, s) in strings.iter().enumerate() {
        for &x in s {
            owner[x] = k;
        }
    }
    // Gram matrix of the normalized type vectors.
    let mut gram = DMatrix::<f64>::zeros(m, m);
    for (a, sa) in strings.iter().enumerate() {
        let na = 1.0 / (sa.len() as f64).sqrt();
        for &x in sa {
            let b = owner[x];
            gram[(a, b)] += na / (strings[b].len() as f64).sqrt();
        }
    }
    let gram_error = (&gram - DMatrix::<f64>::identity(m, m)).abs().max();
    let w: Vec<f64> = types
        .iter()
        .map(|ty| if ty.is_distinct() { 1.0 / n_distinct } else { 0.0 } - 1.0 / dim)
        .collect();
    let mut diff = gram.clone();
    for j in 0..m {
        for i in 0..m {
            diff[(i, j)] *= w[j];
        }
    }
    let diff = &diff * &gram;
    let eig = diff.symmetric_eigen();
    let trace_distance = 0.5 * eig.eigenvalues.iter().map(|v| v.abs()).sum::<f64>();
    Ok(DistinctTypeReport {
        d,
        t,
        trace_distance,
        closed_form: 1.0 - n_distinct / dim,
        bound: 2.0 * (t * t) as f64 / d as f64,
        gram_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{trace_distance, OperatorMatrix};
    use crate::symsub::{sym_moment, type_state};

    #[test]
    fn matches_full_space_computation() {
        let (d, t) = (8, 2);
        let rep = distinct_type_distance(d, t).unwrap();
        let types: Vec<_> = TypeIndex::enumerate(d, t).into_iter().filter(|ty| ty.is_distinct()).collect();
        let mut acc = OperatorMatrix::zeros(crate::qcore::RegisterLayout::uniform("A", t, d).unwrap());
        for ty in &types {
            acc = acc.add(&type_state(ty, d).unwrap().density()).unwrap();
        }
        let avg = acc.scale(1.0 / types.len() as f64);
        let full = trace_distance(&avg, &sym_moment(d, t).unwrap()).unwrap();
        assert!((full - rep.trace_distance).abs() < 1e-12);
        assert!((rep.trace_distance - 8.0 / 36.0).abs() < 1e-12);
    }
}
