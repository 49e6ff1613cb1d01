use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::perm::Permutation;
use crate::error::{bail, Result};
use crate::qcore::{OperatorMatrix, PureState, RegisterLayout, Roles, C64, MAX_TOTAL_DIM};

/// Largest dimension at which projector idempotence is re-verified densely.
const VERIFY_DIM: usize = 512;

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => bail!(Arithmetic, "binomial({n}, {k}) overflows"),
        };
    }
    Ok(acc)
}

pub fn factorial(n: u64) -> Result<u128> {
    let mut acc: u128 = 1;
    for i in 2..=n as u128 {
        acc = match acc.checked_mul(i) {
            Some(v) => v,
            None => bail!(Arithmetic, "{n}! overflows"),
        };
    }
    Ok(acc)
}

/// Dimension of the symmetric subspace of `t` copies of `C^d`.
pub fn sym_dim(d: u64, t: u64) -> Result<u64> {
    if d == 0 || t == 0 {
        bail!(Parameter, "sym_dim needs d, t >= 1");
    }
    let n = match d.checked_add(t - 1) {
        Some(n) => n,
        None => bail!(Arithmetic, "d + t - 1 overflows"),
    };
    let b = binomial(n, t)?;
    match u64::try_from(b) {
        Ok(v) => Ok(v),
        Err(_) => bail!(Arithmetic, "sym_dim({d}, {t}) exceeds 64 bits"),
    }
}

/// Multiset of basis labels, stored as a sorted representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeIndex {
    values: Vec<usize>,
}

impl TypeIndex {
    pub fn new(mut values: Vec<usize>) -> Self {
        values.sort_unstable();
        Self { values }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn t(&self) -> usize {
        self.values.len()
    }

    pub fn counts(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &v in &self.values {
            *m.entry(v).or_insert(0) += 1;
        }
        m
    }

    pub fn is_distinct(&self) -> bool {
        self.values.windows(2).all(|w| w[0] != w[1])
    }

    /// Number of strings of this type, `t! / prod m_v!`.
    pub fn orbit_size(&self) -> u128 {
        let mut acc = factorial(self.t() as u64).unwrap_or(u128::MAX);
        for &c in self.counts().values() {
            acc /= factorial(c as u64).unwrap_or(1);
        }
        acc
    }

    /// All types of length `t` over `d` labels, lexicographic.
    pub fn enumerate(d: usize, t: usize) -> Vec<TypeIndex> {
        let mut out = vec![];
        let mut cur = vec![0usize; t];
        if d == 0 {
            return out;
        }
        loop {
            out.push(TypeIndex { values: cur.clone() });
            let mut i = t;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] + 1 < d {
                    let v = cur[i] + 1;
                    for c in &mut cur[i..] {
                        *c = v;
                    }
                    break;
                }
            }
        }
    }

    /// Flat indices of every string of this type over `d` labels.
    pub fn strings(&self, d: usize) -> Vec<usize> {
        let mut out = vec![];
        let mut cur = self.values.clone();
        let t = cur.len();
        loop {
            out.push(cur.iter().fold(0, |acc, &v| acc * d + v));
            // next distinct permutation of a multiset, lexicographic
            let Some(i) = (1..t).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..t).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
    }
}


/// Normalized symmetrization of a basis string.
pub fn type_state(x: &TypeIndex, d: usize) -> Result<PureState> {
    if x.values.iter().any(|&v| v >= d) {
        bail!(Parameter, "type label exceeds d = {d}");
    }
    let layout = RegisterLayout::uniform("A", x.t(), d)?;
    let idx = x.strings(d);
    let a = C64::new(1.0 / (idx.len() as f64).sqrt(), 0.0);
    let mut v = DVector::zeros(layout.total_dim());
    for i in idx {
        v[i] = a;
    }
    PureState::from_vector(layout, v)
}

fn check_cap(d: usize, t: usize) -> Result<RegisterLayout> {
    if d == 0 || t == 0 {
        bail!(Parameter, "need d, t >= 1");
    }
    match d.checked_pow(t as u32) {
        Some(n) if n <= MAX_TOTAL_DIM => RegisterLayout::uniform("A", t, d),
        _ => bail!(Dimension, "{d}^{t} exceeds the dimension cap"),
    }
}

fn finish(layout: RegisterLayout, m: DMatrix<C64>) -> Result<OperatorMatrix> {
    if layout.total_dim() <= VERIFY_DIM {
        OperatorMatrix::projector(layout, m)
    } else {
        Ok(OperatorMatrix::trusted(layout, m, Roles::PROJECTOR))
    }
}

/// `(1/t!) sum_sigma P_sigma`.
pub fn sym_projector_by_summation(d: usize, t: usize) -> Result<OperatorMatrix> {
    let layout = check_cap(d, t)?;
    let n = layout.total_dim();
    let w = C64::new(1.0 / factorial(t as u64)? as f64, 0.0);
    let mut m = DMatrix::zeros(n, n);
    for sigma in Permutation::all(t) {
        for (x, y) in sigma.index_map(d).into_iter().enumerate() {
            m[(y, x)] += w;
        }
    }
    finish(layout, m)
}

/// `sum_T |T><T|` over type states.
pub fn sym_projector_by_types(d: usize, t: usize) -> Result<OperatorMatrix> {
    let layout = check_cap(d, t)?;
    let n = layout.total_dim();
    let mut m = DMatrix::zeros(n, n);
    for ty in TypeIndex::enumerate(d, t) {
        let idx = ty.strings(d);
        let w = C64::new(1.0 / idx.len() as f64, 0.0);
        for &a in &idx {
            for &b in &idx {
                m[(a, b)] = w;
            }
        }
    }
    finish(layout, m)
}

/// Projector onto the symmetric subspace; summation for `t <= 4`, type
/// outer products otherwise.
pub fn sym_projector(d: usize, t: usize) -> Result<OperatorMatrix> {
    if t <= 4 {
        sym_projector_by_summation(d, t)
    } else {
        sym_projector_by_types(d, t)
    }
}

/// `Pi_Sym / sym_dim`, the t-th Haar moment.
pub fn sym_moment(d: usize, t: usize) -> Result<OperatorMatrix> {
    let p = sym_projector(d, t)?;
    let dim = sym_dim(d as u64, t as u64)? as f64;
    let layout = p.layout().clone();
    Ok(OperatorMatrix::trusted(layout, p.into_entries() / C64::new(dim, 0.0), Roles::DENSITY))
}

/// Rank by counting eigenvalues above 1e-6.
pub fn projector_rank(p: &OperatorMatrix) -> usize {
    p.rank(1e-6)
}

/// Sparse real rows of `Pi_Sym(d, t)`.
pub(crate) fn sym_projector_sparse(d: usize, t: usize) -> Result<Vec<Vec<(usize, f64)>>> {
    let layout = check_cap(d, t)?;
    let mut rows = vec![vec![]; layout.total_dim()];
    for ty in TypeIndex::enumerate(d, t) {
        let idx = ty.strings(d);
        let w = 1.0 / idx.len() as f64;
        for &a in &idx {
            for &b in &idx {
                rows[a].push((b, w));
            }
        }
    }
    for r in &mut rows {
        r.sort_unstable_by_key(|e| e.0);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::frobenius;

    #[test]
    fn sym_dim_values() {
        assert_eq!(sym_dim(2, 2).unwrap(), 3);
        assert_eq!(sym_dim(7, 1).unwrap(), 7);
        assert_eq!(sym_dim(4, 3).unwrap(), 20);
        assert!(matches!(sym_dim(u64::MAX, 40), Err(crate::Error::Arithmetic(_))));
    }

    #[test]
    fn ranks() {
        assert_eq!(projector_rank(&sym_projector(2, 2).unwrap()), 3);
        assert_eq!(projector_rank(&sym_projector(3, 2).unwrap()), 6);
        let p = sym_projector(5, 1).unwrap();
        assert_eq!(p.entries(), &DMatrix::<C64>::identity(5, 5));
    }

    #[test]
    fn both_paths_agree() {
        for (d, t) in [(2, 3), (3, 3), (2, 5), (4, 2)] {
            let a = sym_projector_by_summation(d, t).unwrap();
            let b = sym_projector_by_types(d, t).unwrap();
            assert!(frobenius(&a.sub(&b).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn type_states() {
        let s = type_state(&TypeIndex::new(vec![1, 0]), 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [0.0, h, h, 0.0];
        for (a, e) in s.amplitudes().iter().zip(expect) {
            assert!((a.re - e).abs() < 1e-15 && a.im == 0.0);
        }
        let c = type_state(&TypeIndex::new(vec![2, 2, 2]), 3).unwrap();
        assert!((c.amplitudes()[26].re - 1.0).abs() < 1e-15);
        assert!(type_state(&TypeIndex::new(vec![3]), 3).is_err());
    }

    #[test]
    fn type_enumeration_counts() {
        for (d, t) in [(2, 2), (3, 3), (4, 2), (5, 4)] {
            let types = TypeIndex::enumerate(d, t);
            assert_eq!(types.len() as u64, sym_dim(d as u64, t as u64).unwrap());
            let total: u128 = types.iter().map(|ty| ty.orbit_size()).sum();
            assert_eq!(total, (d as u128).pow(t as u32));
        }
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(sym_projector(2, 15), Err(crate::Error::Dimension(_))));
    }
}
