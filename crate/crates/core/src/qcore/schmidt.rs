use nalgebra::DVector;

use super::{PureState, C64};
use crate::error::{bail, Result};

/// `state = sum_k weights[k] |left[k]>|right[k]>` up to register order.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub weights: Vec<f64>,
    pub left: Vec<PureState>,
    pub right: Vec<PureState>,
}

impl SchmidtDecomposition {
    /// Recombines into a state on the concatenated (left, right) layout.
    pub fn reconstruct(&self) -> Result<PureState> {
        let layout = self.left[0].layout().concat(self.right[0].layout())?;
        let mut v = DVector::<C64>::zeros(layout.total_dim());
        for ((w, l), r) in self.weights.iter().zip(&self.left).zip(&self.right) {
            v += l.amplitudes().kronecker(r.amplitudes()) * C64::new(*w, 0.0);
        }
        PureState::normalized(layout, v)
    }
}

/// Schmidt decomposition across `cut` versus the remaining registers.
/// Weights below 1e-12 are dropped; the rest are sorted descending.
pub fn schmidt_decompose<S: AsRef<str>>(state: &PureState, cut: &[S]) -> Result<SchmidtDecomposition> {
    let layout = state.layout();
    let mut pos = layout.positions(cut)?;
    if pos.is_empty() || pos.len() == layout.len() {
        bail!(Layout, "Schmidt cut must be a nonempty proper subset of registers");
    }
    pos.sort_unstable();
    let rest = layout.complement(&pos);
    let left_layout = layout.select(&pos)?;
    let right_layout = layout.select(&rest)?;
    let m = state.matrix_cut(&pos);
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested u");
    let vt = svd.v_t.expect("requested v_t");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut out = SchmidtDecomposition { weights: vec![], left: vec![], right: vec![] };
    for k in order {
        let w = svd.singular_values[k];
        if w <= 1e-12 {
            continue;
        }
        out.weights.push(w);
        out.left.push(PureState::normalized(left_layout.clone(), u.column(k).into_owned())?);
        out.right
            .push(PureState::normalized(right_layout.clone(), vt.row(k).transpose().into_owned())?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{haar_state_on, RandomStream, RegisterLayout};

    #[test]
    fn product_state_single_weight() {
        let mut rng = RandomStream::new(1, 0);
        let a = haar_state_on(RegisterLayout::single("a", 3).unwrap(), &mut rng).unwrap();
        let b = haar_state_on(RegisterLayout::single("b", 2).unwrap(), &mut rng).unwrap();
        let s = schmidt_decompose(&a.tensor(&b).unwrap(), &["a"]).unwrap();
        assert_eq!(s.weights.len(), 1);
        assert!((s.weights[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn epr_pairs_equal_weights() {
        for r in 1..=3 {
            let mut labels = vec![];
            for i in 0..r {
                labels.push((format!("b{i}"), 2));
            }
            for i in 0..r {
                labels.push((format!("c{i}"), 2));
            }
            let l = RegisterLayout::new(labels).unwrap();
            let dim = 1usize << r;
            let mut v = DVector::<C64>::zeros(dim * dim);
            for i in 0..dim {
                v[i * dim + i] = C64::new(1.0, 0.0);
            }
            let s = PureState::normalized(l, v).unwrap();
            let cut: Vec<String> = (0..r).map(|i| format!("b{i}")).collect();
            let sd = schmidt_decompose(&s, &cut).unwrap();
            assert_eq!(sd.weights.len(), dim);
            for w in &sd.weights {
                assert!((w - 2f64.powf(-(r as f64) / 2.0)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reconstruction_and_normalization() {
        let mut rng = RandomStream::new(2, 0);
        let l = RegisterLayout::new([("a", 2), ("b", 3), ("c", 2)]).unwrap();
        let s = haar_state_on(l, &mut rng).unwrap();
        let sd = schmidt_decompose(&s, &["c", "a"]).unwrap();
        let total: f64 = sd.weights.iter().map(|w| w * w).sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(sd.weights.windows(2).all(|w| w[0] >= w[1]));
        let back = sd.reconstruct().unwrap().permute_registers(&["a", "b", "c"]).unwrap();
        assert!((back.amplitudes() - s.amplitudes()).norm() < 1e-8);
    }

    #[test]
    fn trivial_cut_rejected() {
        let s = PureState::basis(RegisterLayout::new([("a", 2), ("b", 2)]).unwrap(), 0).unwrap();
        let none: [&str; 0] = [];
        assert!(schmidt_decompose(&s, &none).is_err());
        assert!(schmidt_decompose(&s, &["a", "b"]).is_err());
    }
}
