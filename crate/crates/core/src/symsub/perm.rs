use nalgebra::DMatrix;

use crate::error::{bail, Result};
use crate::qcore::{OperatorMatrix, RandomStream, RegisterLayout, Roles, C64};

/// Bijection on `{0, .., k-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &m in &mapping {
            if m >= mapping.len() || seen[m] {
                bail!(Parameter, "mapping {mapping:?} is not a bijection");
            }
            seen[m] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(k: usize) -> Self {
        Self { mapping: (0..k).collect() }
    }

    pub fn transposition(k: usize, i: usize, j: usize) -> Result<Self> {
        if i >= k || j >= k {
            bail!(Parameter, "transposition ({i} {j}) outside 0..{k}");
        }
        let mut m: Vec<usize> = (0..k).collect();
        m.swap(i, j);
        Ok(Self { mapping: m })
    }

    /// The permutation of `2t` points swapping `i` with `t + i` for `i < s`.
    pub fn crossing_representative(t: usize, s: usize) -> Result<Self> {
        if s > t {
            bail!(Parameter, "crossing number {s} exceeds {t}");
        }
        let mut m: Vec<usize> = (0..2 * t).collect();
        for i in 0..s {
            m.swap(i, t + i);
        }
        Ok(Self { mapping: m })
    }

    pub fn random(k: usize, rng: &mut RandomStream) -> Self {
        let mut m: Vec<usize> = (0..k).collect();
        for i in (1..k).rev() {
            let j = rng.below(i + 1);
            m.swap(i, j);
        }
        Self { mapping: m }
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            bail!(Parameter, "composing permutations of different degree");
        }
        Ok(Self { mapping: other.mapping.iter().map(|&i| self.mapping[i]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &m) in self.mapping.iter().enumerate() {
            inv[m] = i;
        }
        Self { mapping: inv }
    }

    /// Number of points in the first `t` mapped into the last `len - t`.
    pub fn crossing_number(&self, t: usize) -> usize {
        self.mapping[..t].iter().filter(|&&m| m >= t).count()
    }

    /// All permutations of degree `k` in lexicographic order.
    pub fn all(k: usize) -> LexPermutations {
        LexPermutations { next: Some((0..k).collect()) }
    }

    /// Flat-index image of every basis string under `P_sigma` on `d`-level
    /// registers.
    pub fn index_map(&self, d: usize) -> Vec<usize> {
        let k = self.len();
        let total = d.pow(k as u32);
        let mut strides = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * d;
        }
        let target: Vec<usize> = self.mapping.iter().map(|&m| strides[m]).collect();
        (0..total)
            .map(|mut x| {
                let mut y = 0;
                for i in (0..k).rev() {
                    y += (x % d) * target[i];
                    x /= d;
                }
                y
            })
            .collect()
    }
}

/// Lexicographic permutation iterator.
pub struct LexPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        let n = nxt.len();
        let mut i = n.checked_sub(1);
        while let Some(ii) = i {
            if ii > 0 && nxt[ii - 1] < nxt[ii] {
                break;
            }
            i = ii.checked_sub(1);
        }
        if let Some(ii) = i.filter(|&ii| ii > 0) {
            let pivot = ii - 1;
            let mut j = n - 1;
            while nxt[j] <= nxt[pivot] {
                j -= 1;
            }
            nxt.swap(pivot, j);
            nxt[ii..].reverse();
            self.next = Some(nxt);
        }
        Some(Permutation { mapping: cur })
    }
}

/// Register-wise permutation operator: the content of register `i` moves to
/// register `sigma(i)`, so `P_sigma P_tau = P_{sigma ∘ tau}`.
pub fn perm_operator(sigma: &Permutation, d: usize) -> Result<OperatorMatrix> {
    let layout = RegisterLayout::uniform("A", sigma.len(), d)?;
    let map = sigma.index_map(d);
    let n = layout.total_dim();
    let mut m = DMatrix::zeros(n, n);
    for (x, &y) in map.iter().enumerate() {
        m[(y, x)] = C64::new(1.0, 0.0);
    }
    Ok(OperatorMatrix::trusted(layout, m, Roles::UNITARY))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_enumeration_count_and_order() {
        let all: Vec<_> = Permutation::all(4).collect();
        assert_eq!(all.len(), 24);
        assert_eq!(all[0].mapping(), &[0, 1, 2, 3]);
        assert_eq!(all[1].mapping(), &[0, 1, 3, 2]);
        assert_eq!(all[23].mapping(), &[3, 2, 1, 0]);
        assert_eq!(Permutation::all(0).count(), 1);
    }

    #[test]
    fn bijection_enforced() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![1, 2]).is_err());
    }

    #[test]
    fn identity_gives_identity_matrix() {
        let p = perm_operator(&Permutation::identity(3), 2).unwrap();
        assert_eq!(p.entries(), &DMatrix::<C64>::identity(8, 8));
    }

    #[test]
    fn transposition_is_swap() {
        let p = perm_operator(&Permutation::transposition(2, 0, 1).unwrap(), 2).unwrap();
        let mut f = DMatrix::<C64>::zeros(4, 4);
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            f[(i, j)] = C64::new(1.0, 0.0);
        }
        assert_eq!(p.entries(), &f);
    }

    #[test]
    fn content_moves_to_image_register() {
        // sigma = (0 -> 1, 1 -> 2, 2 -> 0) on |abc> gives |c a b>.
        let s = Permutation::new(vec![1, 2, 0]).unwrap();
        let map = s.index_map(3);
        let x = 9 + 2 * 3 + 1; // |1 2 1>... digits a=1,b=2,c=1
        let y = 9 + 3 + 2; // |c a b> = |1 1 2>
        assert_eq!(map[x], y);
    }

    #[test]
    fn homomorphism() {
        let mut rng = RandomStream::new(3, 0);
        for _ in 0..20 {
            let s = Permutation::random(3, &mut rng);
            let t = Permutation::random(3, &mut rng);
            let lhs = perm_operator(&s, 2).unwrap().mul(&perm_operator(&t, 2).unwrap()).unwrap();
            let rhs = perm_operator(&s.compose(&t).unwrap(), 2).unwrap();
            assert_eq!(lhs.entries(), rhs.entries());
        }
    }

    #[test]
    fn crossing_numbers() {
        for s in 0..=3 {
            assert_eq!(Permutation::crossing_representative(3, s).unwrap().crossing_number(3), s);
        }
    }
}
