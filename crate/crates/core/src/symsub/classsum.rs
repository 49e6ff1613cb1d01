use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::perm::Permutation;
use super::projector::{binomial, factorial, sym_projector_sparse, TypeIndex};
use crate::error::{bail, Result};
use crate::qcore::{OperatorMatrix, RegisterLayout, Roles, C64, MAX_TOTAL_DIM};

/// Largest `2t` for which class sums are built by walking `S_{2t}`.
pub const ENUMERATION_MAX_POINTS: usize = 8;

/// How the left-hand class sum was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassSumMethod {
    Enumeration,
    Counting,
}

/// Outcome of comparing a class sum with its factored form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassSumCheck {
    pub d: usize,
    pub t: usize,
    pub s: usize,
    pub class_size: u128,
    pub enumerated_size: Option<u128>,
    pub method: ClassSumMethod,
    /// Frobenius distance between the class average and
    /// `(Pi ⊗ Pi) P_{sigma_s} (Pi ⊗ Pi)`.
    pub residual: f64,
}

/// `|S_{2t}^{(s)}| = (t!)^2 binom(t, s)^2`.
pub fn class_size(t: usize, s: usize) -> Result<u128> {
    if s > t {
        bail!(Parameter, "crossing number {s} exceeds {t}");
    }
    let f = factorial(t as u64)?;
    let b = binomial(t as u64, s as u64)?;
    let fb = f.checked_mul(b).ok_or_else(|| crate::Error::Arithmetic("class size".into()))?;
    fb.checked_mul(fb).ok_or_else(|| crate::Error::Arithmetic("class size".into()))
}

/// Permutations of `2t` points with crossing number `s`, lexicographic.
pub fn enumerate_class(t: usize, s: usize) -> impl Iterator<Item = Permutation> {
    Permutation::all(2 * t).filter(move |p| p.crossing_number(t) == s)
}

/// Class sizes for every `s`, tallied in one pass over `S_{2t}`.
pub fn enumerated_class_sizes(t: usize) -> Vec<u128> {
    let mut out = vec![0u128; t + 1];
    for p in Permutation::all(2 * t) {
        out[p.crossing_number(t)] += 1;
    }
    out
}

fn check_dims(d: usize, t: usize, s: usize) -> Result<usize> {
    if s > t || t == 0 || d == 0 {
        bail!(Parameter, "need 0 <= s <= t, t >= 1, d >= 1");
    }
    match d.checked_pow(2 * t as u32) {
        Some(n) if n <= MAX_TOTAL_DIM => Ok(n),
        _ => bail!(Dimension, "{d}^{} exceeds the dimension cap", 2 * t),
    }
}

/// Per-value counts in each half of a `2t`-register string.
struct HalfCounts {
    d: usize,
    t: usize,
}

impl HalfCounts {
    fn counts(&self, mut x: usize) -> Vec<[u64; 2]> {
        let mut c = vec![[0u64; 2]; self.d];
        for i in (0..2 * self.t).rev() {
            c[x % self.d][usize::from(i < self.t)] += 1;
            x /= self.d;
        }
        c
    }

    /// Number of sigma with `P_sigma |x> = |y>`, split by crossing number.
    fn polynomial(&self, cx: &[[u64; 2]], cy: &[[u64; 2]]) -> Vec<u64> {
        let fact = |n: u64| factorial(n).unwrap() as u64;
        let binom = |n: u64, k: u64| binomial(n, k).unwrap() as u64;
        let mut poly = vec![1u64];
        for v in 0..self.d {
            let [b, a] = cx[v];
            let [e, c] = cy[v];
            if a + b == 0 {
                continue;
            }
            let lo = a.saturating_sub(c);
            let hi = a.min(e);
            let mut term = vec![0u64; (hi + 1) as usize];
            for k in lo..=hi {
                if c + k < a || c + k - a > b {
                    continue;
                }
                term[k as usize] = binom(a, k) * binom(b, c + k - a) * fact(c) * fact(e);
            }
            let mut next = vec![0u64; poly.len() + term.len() - 1];
            for (i, &p) in poly.iter().enumerate() {
                for (j, &q) in term.iter().enumerate() {
                    next[i + j] += p * q;
                }
            }
            poly = next;
        }
        poly.resize(self.t + 1, 0);
        poly
    }
}

/// Sparse rows of the class sum, built by per-value counting.
fn counted_rows(d: usize, t: usize, s: Option<usize>) -> Vec<Vec<(usize, f64)>> {
    let n = d.pow(2 * t as u32);
    let hc = HalfCounts { d, t };
    let mut rows = vec![vec![]; n];
    for ty in TypeIndex::enumerate(d, 2 * t) {
        let members = ty.strings(d);
        let counts: Vec<_> = members.iter().map(|&x| hc.counts(x)).collect();
        for (iy, &y) in members.iter().enumerate() {
            for (ix, &x) in members.iter().enumerate() {
                let poly = hc.polynomial(&counts[ix], &counts[iy]);
                let v = match s {
                    Some(s) => poly[s],
                    None => poly.iter().sum(),
                };
                if v > 0 {
                    rows[y].push((x, v as f64));
                }
            }
        }
        for &y in &members {
            rows[y].sort_unstable_by_key(|e| e.0);
        }
    }
    rows
}

fn enumerated_matrix(d: usize, t: usize, s: usize) -> (DMatrix<f64>, u128) {
    let n = d.pow(2 * t as u32);
    let mut m = DMatrix::<f64>::zeros(n, n);
    let mut size = 0u128;
    for p in enumerate_class(t, s) {
        size += 1;
        for (x, y) in p.index_map(d).into_iter().enumerate() {
            m[(y, x)] += 1.0;
        }
    }
    (m, size)
}

/// Rows of `(Pi ⊗ Pi) P_{sigma_s} (Pi ⊗ Pi)`, computed from the sparse
/// structure of `Pi_Sym(d, t)`.
struct Factored {
    a: Vec<Vec<(usize, f64)>>,
    dt: usize,
    inv: Vec<usize>,
}

impl Factored {
    fn new(d: usize, t: usize, s: usize) -> Result<Self> {
        let a = sym_projector_sparse(d, t)?;
        let rep = Permutation::crossing_representative(t, s)?;
        let map = rep.index_map(d);
        let mut inv = vec![0; map.len()];
        for (x, &y) in map.iter().enumerate() {
            inv[y] = x;
        }
        Ok(Self { dt: a.len(), a, inv })
    }

    fn k_row(&self, r: usize, mut f: impl FnMut(usize, f64)) {
        let (i1, i2) = (r / self.dt, r % self.dt);
        for &(j1, v1) in &self.a[i1] {
            for &(j2, v2) in &self.a[i2] {
                f(j1 * self.dt + j2, v1 * v2);
            }
        }
    }

    fn row(&self, y: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        self.k_row(y, |j, w| {
            self.k_row(self.inv[j], |c, v| out[c] += w * v);
        });
    }
}

fn to_operator(d: usize, t: usize, m: DMatrix<f64>) -> Result<OperatorMatrix> {
    let layout = RegisterLayout::uniform("A", 2 * t, d)?;
    Ok(OperatorMatrix::trusted(layout, m.map(|v| C64::new(v, 0.0)), Roles::HERMITIAN))
}

/// `sum_{sigma in S_{2t}^{(s)}} P_sigma`: walks the class for `2t <= 8`,
/// otherwise counts matching permutations entry by entry.
pub fn perm_class_sum(d: usize, t: usize, s: usize) -> Result<OperatorMatrix> {
    let n = check_dims(d, t, s)?;
    let m = if 2 * t <= ENUMERATION_MAX_POINTS {
        enumerated_matrix(d, t, s).0
    } else {
        let mut m = DMatrix::zeros(n, n);
        for (y, row) in counted_rows(d, t, Some(s)).into_iter().enumerate() {
            for (x, v) in row {
                m[(y, x)] = v;
            }
        }
        m
    };
    to_operator(d, t, m)
}

/// `(t!)^2 binom(t,s)^2 (Pi ⊗ Pi) P_{sigma_s} (Pi ⊗ Pi)`.
pub fn perm_class_sum_factored(d: usize, t: usize, s: usize) -> Result<OperatorMatrix> {
    let n = check_dims(d, t, s)?;
    let f = Factored::new(d, t, s)?;
    let size = class_size(t, s)? as f64;
    let mut m = DMatrix::zeros(n, n);
    let mut row = vec![0.0; n];
    for y in 0..n {
        f.row(y, &mut row);
        for (x, v) in row.iter().enumerate() {
            m[(y, x)] = v * size;
        }
    }
    to_operator(d, t, m)
}

/// Computes both sides of the class-sum identity independently and returns
/// the Frobenius distance between the class average and the factored form.
pub fn class_sum_check(d: usize, t: usize, s: usize) -> Result<ClassSumCheck> {
    let n = check_dims(d, t, s)?;
    let size = class_size(t, s)?;
    let f = Factored::new(d, t, s)?;
    let mut rhs = vec![0.0; n];
    let mut acc = 0.0;
    let (method, enumerated_size) = if 2 * t <= ENUMERATION_MAX_POINTS {
        let (m, count) = enumerated_matrix(d, t, s);
        let scale = 1.0 / count as f64;
        for y in 0..n {
            f.row(y, &mut rhs);
            for x in 0..n {
                let diff = m[(y, x)] * scale - rhs[x];
                acc += diff * diff;
            }
        }
        (ClassSumMethod::Enumeration, Some(count))
    } else {
        let scale = 1.0 / size as f64;
        for (y, row) in counted_rows(d, t, Some(s)).into_iter().enumerate() {
            f.row(y, &mut rhs);
            for (x, v) in row {
                rhs[x] -= v * scale;
            }
            acc += rhs.iter().map(|v| v * v).sum::<f64>();
        }
        (ClassSumMethod::Counting, None)
    };
    Ok(ClassSumCheck { d, t, s, class_size: size, enumerated_size, method, residual: acc.sqrt() })
}

/// Frobenius distance between `(1/(2t)!) sum_s (class sum)` and
/// `Pi_Sym(d, 2t)`.
pub fn class_sum_total_check(d: usize, t: usize) -> Result<f64> {
    check_dims(d, t, 0)?;
    let total = factorial(2 * t as u64)? as f64;
    let sym = sym_projector_sparse(d, 2 * t)?;
    let lhs: Vec<Vec<(usize, f64)>> = if 2 * t <= ENUMERATION_MAX_POINTS {
        let n = d.pow(2 * t as u32);
        let mut m = DMatrix::<f64>::zeros(n, n);
        for s in 0..=t {
            m += enumerated_matrix(d, t, s).0;
        }
        (0..n)
            .map(|y| (0..n).filter(|&x| m[(y, x)] != 0.0).map(|x| (x, m[(y, x)])).collect())
            .collect()
    } else {
        counted_rows(d, t, None)
    };
    let mut acc = 0.0;
    for (l, r) in lhs.iter().zip(&sym) {
        let mut i = 0;
        let mut j = 0;
        while i < l.len() || j < r.len() {
            let li = l.get(i).map_or(usize::MAX, |e| e.0);
            let rj = r.get(j).map_or(usize::MAX, |e| e.0);
            let diff = if li == rj {
                let dv = l[i].1 / total - r[j].1;
                i += 1;
                j += 1;
                dv
            } else if li < rj {
                i += 1;
                l[i - 1].1 / total
            } else {
                j += 1;
                r[j - 1].1
            };
            acc += diff * diff;
        }
    }
    Ok(acc.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::frobenius;
    use crate::symsub::{perm_operator, sym_projector};

    #[test]
    fn class_sizes_at_t2() {
        let sizes: Vec<u128> = (0..=2).map(|s| class_size(2, s).unwrap()).collect();
        assert_eq!(sizes, vec![4, 16, 4]);
        assert_eq!(enumerated_class_sizes(2), vec![4, 16, 4]);
    }

    #[test]
    fn t1_s1_is_swap() {
        let c = perm_class_sum(2, 1, 1).unwrap();
        let f = perm_operator(&Permutation::transposition(2, 0, 1).unwrap(), 2).unwrap();
        assert_eq!(c.entries(), f.entries());
    }

    #[test]
    fn s0_is_product_of_symmetrizers() {
        for (d, t) in [(2, 2), (3, 2), (2, 3)] {
            let c = perm_class_sum(d, t, 0).unwrap();
            let p = sym_projector(d, t).unwrap();
            let f = factorial(t as u64).unwrap() as f64;
            let expect = p.tensor(&p.relabel(&(0..t).map(|i| format!("B{i}")).collect::<Vec<_>>()).unwrap()).unwrap();
            let diff = c.entries() - expect.entries() * C64::new(f * f, 0.0);
            assert!(diff.norm() < 1e-9);
        }
    }

    #[test]
    fn counting_matches_enumeration() {
        for (d, t) in [(2, 2), (3, 2), (2, 3), (2, 4)] {
            let rows_by_s: Vec<_> = (0..=t).map(|s| counted_rows(d, t, Some(s))).collect();
            for s in 0..=t {
                let (m, _) = enumerated_matrix(d, t, s);
                let n = m.nrows();
                let mut c = DMatrix::<f64>::zeros(n, n);
                for (y, row) in rows_by_s[s].iter().enumerate() {
                    for &(x, v) in row {
                        c[(y, x)] = v;
                    }
                }
                assert_eq!(m, c, "d={d} t={t} s={s}");
            }
        }
    }

    #[test]
    fn factored_matches_dense_product() {
        let (d, t) = (2, 2);
        for s in 0..=t {
            let p = sym_projector(d, t).unwrap();
            let pp = p.entries().kronecker(p.entries());
            let rep = perm_operator(&Permutation::crossing_representative(t, s).unwrap(), d).unwrap();
            let dense = &pp * rep.entries() * &pp * C64::new(class_size(t, s).unwrap() as f64, 0.0);
            let fac = perm_class_sum_factored(d, t, s).unwrap();
            assert!((fac.entries() - dense).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_small_cases() {
        for (d, t) in [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3)] {
            for s in 0..=t {
                let c = class_sum_check(d, t, s).unwrap();
                assert!(c.residual < 1e-10, "{c:?}");
                assert_eq!(c.enumerated_size, Some(c.class_size));
            }
            assert!(class_sum_total_check(d, t).unwrap() < 1e-10);
        }
        let lhs = perm_class_sum(2, 2, 1).unwrap();
        let rhs = perm_class_sum_factored(2, 2, 1).unwrap();
        assert!(frobenius(&lhs.sub(&rhs).unwrap()) < 1e-9);
    }

    #[test]
    fn counting_route_at_t5() {
        for s in [0, 2, 5] {
            let c = class_sum_check(2, 5, s).unwrap();
            assert_eq!(c.method, ClassSumMethod::Counting);
            assert!(c.residual < 1e-10, "{c:?}");
        }
    }
}
