use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use ssilab::qcore::{frobenius, C64};
use ssilab::symsub::{
    binomial, class_size, class_sum_check, class_sum_total_check, enumerated_class_sizes, factorial,
    partial_trace_residual, perm_operator, sym_dim, sym_projector, type_state, Permutation, TypeIndex,
};

fn cases(max_dim: usize, min_t: usize) -> Vec<(usize, usize)> {
    let mut out = vec![];
    for d in 2..=max_dim {
        let mut t = min_t.max(1);
        while d.checked_pow(t as u32).is_some_and(|v| v <= max_dim) {
            out.push((d, t));
            t += 1;
        }
    }
    out
}

#[test]
fn projector_is_gram_span_of_type_states() {
    for (d, t) in cases(256, 1) {
        let dim = d.pow(t as u32);
        let mut basis: Vec<DVector<C64>> = vec![];
        for ty in TypeIndex::enumerate(d, t) {
            let mut v = type_state(&ty, d).unwrap().amplitudes().clone();
            for b in &basis {
                let c = b.dotc(&v);
                v -= b * c;
            }
            let n = v.norm();
            assert!(n > 1e-8, "type states dependent at ({d}, {t})");
            basis.push(v / C64::new(n, 0.0));
        }
        let mut gram = DMatrix::<C64>::zeros(dim, dim);
        for b in &basis {
            gram += b * b.adjoint();
        }
        let p = sym_projector(d, t).unwrap();
        let err = (p.entries() - gram).norm();
        assert!(err <= 1e-8, "({d}, {t}): {err}");
    }
}

/// `Tr_{last t-s}[Pi(d,t)] / sym_dim(d,t)` as a sparse map on the first `s`
/// registers, computed orbit by orbit.
fn reduced_moment(d: usize, t: usize, s: usize) -> HashMap<(usize, usize), f64> {
    let split = d.pow((t - s) as u32);
    let norm = sym_dim(d as u64, t as u64).unwrap() as f64;
    let mut out: HashMap<(usize, usize), f64> = HashMap::new();
    for ty in TypeIndex::enumerate(d, t) {
        let strings = ty.strings(d);
        let w = 1.0 / (strings.len() as f64 * norm);
        let mut by_suffix: HashMap<usize, Vec<usize>> = HashMap::new();
        for a in strings {
            by_suffix.entry(a % split).or_default().push(a / split);
        }
        for prefixes in by_suffix.values() {
            for &a in prefixes {
                for &b in prefixes {
                    *out.entry((a, b)).or_default() += w;
                }
            }
        }
    }
    out
}

fn moment(d: usize, s: usize) -> HashMap<(usize, usize), f64> {
    let norm = sym_dim(d as u64, s as u64).unwrap() as f64;
    let mut out = HashMap::new();
    for ty in TypeIndex::enumerate(d, s) {
        let strings = ty.strings(d);
        let w = 1.0 / (strings.len() as f64 * norm);
        for &a in &strings {
            for &b in &strings {
                out.insert((a, b), w);
            }
        }
    }
    out
}

#[test]
fn partial_trace_of_moment_for_every_small_case() {
    for (d, t) in cases(4096, 2) {
        for s in 1..t {
            let lhs = reduced_moment(d, t, s);
            let rhs = moment(d, s);
            let mut err2 = 0.0;
            for (k, v) in &lhs {
                err2 += (v - rhs.get(k).copied().unwrap_or(0.0)).powi(2);
            }
            for (k, v) in &rhs {
                if !lhs.contains_key(k) {
                    err2 += v * v;
                }
            }
            assert!(err2.sqrt() <= 1e-9, "({d}, {t}, {s}): {}", err2.sqrt());
        }
    }
}

#[test]
fn dense_partial_trace_route_agrees() {
    for (d, t) in cases(256, 2) {
        for s in 1..=t {
            let r = partial_trace_residual(d, t, s).unwrap();
            assert!(r <= 1e-9, "({d}, {t}, {s}): {r}");
        }
    }
}

#[test]
fn class_sums_add_up_to_full_symmetrizer() {
    for (d, t) in [(2, 1), (2, 2), (3, 2), (2, 3), (4, 2)] {
        let r = class_sum_total_check(d, t).unwrap();
        assert!(r <= 1e-8, "({d}, {t}): {r}");
    }
}

#[test]
fn class_sizes_match_enumeration() {
    for t in 1..=4 {
        let enumerated = enumerated_class_sizes(t);
        for (s, &count) in enumerated.iter().enumerate() {
            let expect = factorial(t as u64).unwrap().pow(2) * binomial(t as u64, s as u64).unwrap().pow(2);
            assert_eq!(count, expect);
            assert_eq!(class_size(t, s).unwrap(), expect);
        }
        assert_eq!(enumerated.iter().sum::<u128>(), factorial(2 * t as u64).unwrap());
    }
}

#[test]
fn class_sum_identity_residuals() {
    for (d, t) in [(2, 1), (2, 2), (3, 2), (4, 2), (2, 3)] {
        for s in 0..=t {
            let c = class_sum_check(d, t, s).unwrap();
            assert!(c.residual <= 1e-8, "({d}, {t}, {s}): {}", c.residual);
        }
    }
}

fn random_permutation(n: usize, seed: u64) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    let mut x = seed;
    for i in (1..n).rev() {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        v.swap(i, (x >> 33) as usize % (i + 1));
    }
    Permutation::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(32) })]

    #[test]
    fn projector_absorbs_permutations(seed in any::<u64>(), d in 2usize..4, t in 1usize..4) {
        let p = sym_projector(d, t).unwrap();
        let perm = perm_operator(&random_permutation(t, seed), d).unwrap();
        let left = perm.mul(&p).unwrap();
        prop_assert!(frobenius(&left.sub(&p).unwrap()) <= 1e-9);
    }

    #[test]
    fn type_states_are_symmetric(seed in any::<u64>(), d in 2usize..5, t in 1usize..4) {
        let types = TypeIndex::enumerate(d, t);
        let ty = &types[seed as usize % types.len()];
        let psi = type_state(ty, d).unwrap();
        let perm = perm_operator(&random_permutation(t, seed ^ 0x55), d).unwrap();
        let moved = psi.apply(&perm).unwrap();
        prop_assert!((moved.amplitudes() - psi.amplitudes()).norm() <= 1e-12);
    }
}
