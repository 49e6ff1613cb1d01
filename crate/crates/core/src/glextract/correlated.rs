use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::adversary::{coin_count, inner_bit, GLAdversary, BOB_OUT, BOB_WORK, CHARLIE_OUT, CHARLIE_WORK};
use crate::error::{bail, Result};
use crate::qcore::{haar_state_on, haar_unitary, OperatorMatrix, PureState, RandomStream, RegisterLayout, C64};

/// Responders for correlated samples `(y, b)`: on `(y_B, b_B)` Bob measures
/// `{P, I - P}` with `P = bob_projectors[2 y_B + b_B]` on his share of the
/// shared input and outputs 1 on `P`; Charlie likewise on his share.
#[derive(Debug, Clone)]
pub struct CorrelatedAdversary {
    n: usize,
    shared_inputs: Vec<PureState>,
    bob_projectors: Vec<DMatrix<C64>>,
    charlie_projectors: Vec<DMatrix<C64>>,
}

fn check_projector(p: &DMatrix<C64>, dim: usize) -> Result<()> {
    if p.shape() != (dim, dim) {
        bail!(Dimension, "responder projector must be {dim} x {dim}");
    }
    if (p * p - p).norm() > 1e-9 || (p - p.adjoint()).norm() > 1e-9 {
        bail!(Parameter, "responder operator is not a projector");
    }
    Ok(())
}

impl CorrelatedAdversary {
    pub fn new(
        n: usize,
        shared_inputs: Vec<PureState>,
        bob_projectors: Vec<DMatrix<C64>>,
        charlie_projectors: Vec<DMatrix<C64>>,
    ) -> Result<Self> {
        let r = coin_count(n)?;
        if shared_inputs.len() != r || bob_projectors.len() != 2 * r || charlie_projectors.len() != 2 * r {
            bail!(Parameter, "need 2^n inputs and 2^(n+1) projectors per side");
        }
        let l = shared_inputs[0].layout().clone();
        if l.labels() != [BOB_WORK, CHARLIE_WORK] || shared_inputs.iter().any(|s| s.layout() != &l) {
            bail!(Layout, "shared inputs must all live on ({BOB_WORK}, {CHARLIE_WORK})");
        }
        let d = l.dims();
        for p in &bob_projectors {
            check_projector(p, d[0])?;
        }
        for p in &charlie_projectors {
            check_projector(p, d[1])?;
        }
        Ok(Self { n, shared_inputs, bob_projectors, charlie_projectors })
    }

    /// Deterministic classical responders: Bob outputs `table_b[2 y + b]`.
    pub fn from_tables(n: usize, table_b: &[bool], table_c: &[bool]) -> Result<Self> {
        let r = coin_count(n)?;
        let layout = RegisterLayout::new([(BOB_WORK, 1), (CHARLIE_WORK, 1)])?;
        let inputs = (0..r).map(|_| PureState::basis(layout.clone(), 0)).collect::<Result<_>>()?;
        let one = |b: bool| DMatrix::from_element(1, 1, C64::new(f64::from(u8::from(b)), 0.0));
        Self::new(n, inputs, table_b.iter().map(|&b| one(b)).collect(), table_c.iter().map(|&b| one(b)).collect())
    }

    /// Random entangled shared inputs of local dimension `dim` and random
    /// projectors of random rank.
    pub fn random(n: usize, dim: usize, rng: &mut RandomStream) -> Result<Self> {
        let r = coin_count(n)?;
        let layout = RegisterLayout::new([(BOB_WORK, dim), (CHARLIE_WORK, dim)])?;
        let inputs = (0..r).map(|_| haar_state_on(layout.clone(), rng)).collect::<Result<_>>()?;
        let proj = |rng: &mut RandomStream| -> Result<DMatrix<C64>> {
            let u = haar_unitary(RegisterLayout::single("w", dim)?, rng);
            let k = rng.below(dim + 1);
            let c = u.entries().columns(0, k).into_owned();
            Ok(&c * c.adjoint())
        };
        let bob = (0..2 * r).map(|_| proj(rng)).collect::<Result<_>>()?;
        let charlie = (0..2 * r).map(|_| proj(rng)).collect::<Result<_>>()?;
        Self::new(n, inputs, bob, charlie)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Pr[o_B, o_C]` on input `x` and samples `(y_B, b_B)`, `(y_C, b_C)`.
    fn joint(&self, x: usize, yb: usize, bb: usize, yc: usize, bc: usize) -> [[f64; 2]; 2] {
        let d = self.shared_inputs[x].layout().dims();
        let a = self.shared_inputs[x].amplitudes();
        let phi = DMatrix::from_fn(d[0], d[1], |i, j| a[i * d[1] + j]);
        let p = &self.bob_projectors[2 * yb + bb];
        let q = &self.charlie_projectors[2 * yc + bc];
        let tr = |m: DMatrix<C64>| m.trace().re;
        let p11 = tr(phi.adjoint() * p * &phi * q.transpose());
        let p1x = tr(phi.adjoint() * p * &phi);
        let px1 = tr(&phi * q.transpose() * phi.adjoint());
        [[1.0 - p1x - px1 + p11, px1 - p11], [p1x - p11, p11]]
    }
}

/// Event probabilities for one input, with pads drawn independently and
/// `E` the event that the pads XOR to `<y_B, x> ^ <y_C, x>`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CorrelatedEvaluation {
    pub x: usize,
    /// Success on correlated samples: `Pr[E_B and E_C | E]`.
    pub original_success: f64,
    /// Success of the wrapped pair at the relaxed task.
    pub relaxed_success: f64,
    pub p_eb_given_e: f64,
    pub p_eb_given_not_e: f64,
    pub p_ec_given_e: f64,
    pub p_ec_given_not_e: f64,
    /// `Pr[E_B and E_C | E] + Pr[not E_B and not E_C | not E]`.
    pub diag_lhs: f64,
    /// `Pr[not E_B and not E_C | E] + Pr[E_B and E_C | not E]`.
    pub diag_rhs: f64,
}

impl CorrelatedEvaluation {
    pub fn diag_residual(&self) -> f64 {
        (self.diag_lhs - self.diag_rhs).abs()
    }

    pub fn signalling_residual(&self) -> f64 {
        (self.p_eb_given_e - self.p_eb_given_not_e).abs().max((self.p_ec_given_e - self.p_ec_given_not_e).abs())
    }
}

/// Exhaustive enumeration over `(y_B, y_C, b_B, b_C)` for input `x`.
pub fn evaluate_correlated(adv: &CorrelatedAdversary, x: usize) -> Result<CorrelatedEvaluation> {
    let r = 1usize << adv.n;
    if x >= r {
        bail!(Parameter, "x must be an {}-bit string", adv.n);
    }
    // acc[e][(eb, ec)] with e = 1 when the pads are consistent.
    let mut acc = [[[0.0; 2]; 2]; 2];
    for yb in 0..r {
        for yc in 0..r {
            let (tb, tc) = (inner_bit(yb, x), inner_bit(yc, x));
            for bb in 0..2 {
                for bc in 0..2 {
                    let e = usize::from(bb ^ bc == tb ^ tc);
                    let p = adv.joint(x, yb, bb, yc, bc);
                    for ob in 0..2 {
                        for oc in 0..2 {
                            acc[e][usize::from(ob == tb)][usize::from(oc == tc)] += p[ob][oc];
                        }
                    }
                }
            }
        }
    }
    let norm = (r * r * 2) as f64;
    let c = |e: usize, eb: usize, ec: usize| acc[e][eb][ec] / norm;
    let both_e = c(1, 1, 1);
    let none_not = c(0, 0, 0);
    Ok(CorrelatedEvaluation {
        x,
        original_success: both_e,
        relaxed_success: 0.5 * (c(1, 1, 1) + c(1, 0, 0) + c(0, 1, 1) + c(0, 0, 0)),
        p_eb_given_e: c(1, 1, 0) + c(1, 1, 1),
        p_eb_given_not_e: c(0, 1, 0) + c(0, 1, 1),
        p_ec_given_e: c(1, 0, 1) + c(1, 1, 1),
        p_ec_given_not_e: c(0, 0, 1) + c(0, 1, 1),
        diag_lhs: both_e + none_not,
        diag_rhs: c(1, 0, 0) + c(0, 1, 1),
    })
}

/// Closed-form evaluation for deterministic classical tables, equal to
/// `evaluate_correlated` on `CorrelatedAdversary::from_tables`.
pub fn table_successes(n: usize, table_b: &[bool], table_c: &[bool], x: usize) -> (f64, f64) {
    let r = 1usize << n;
    let (mut orig, mut relaxed) = (0usize, 0usize);
    for yb in 0..r {
        for yc in 0..r {
            let (tb, tc) = (inner_bit(yb, x), inner_bit(yc, x));
            for bb in 0..2 {
                let ob = usize::from(table_b[2 * yb + bb]);
                let bc = bb ^ tb ^ tc;
                if ob == tb && usize::from(table_c[2 * yc + bc]) == tc {
                    orig += 2;
                }
                for bc in 0..2 {
                    let oc = usize::from(table_c[2 * yc + bc]);
                    if ob ^ oc == tb ^ tc {
                        relaxed += 1;
                    }
                }
            }
        }
    }
    let norm = (r * r * 4) as f64;
    (orig as f64 / norm, relaxed as f64 / norm)
}

/// Each side draws its own pad bit, held coherently as `|+>` in the work
/// register, and runs its responder on `(y, pad)`; the result answers
/// Goldreich-Levin samples with advantage equal to the relaxed success
/// minus one half.
pub fn gl_correlated_reduce(adv: &CorrelatedAdversary) -> Result<GLAdversary> {
    let r = 1usize << adv.n;
    let d = adv.shared_inputs[0].layout().dims();
    let (wb, wc) = (2 * d[0], 2 * d[1]);
    let layout = RegisterLayout::new([(BOB_WORK, wb), (CHARLIE_WORK, wc)])?;
    let inputs = adv
        .shared_inputs
        .iter()
        .map(|s| {
            let a = s.amplitudes();
            let v = nalgebra::DVector::from_fn(wb * wc, |k, _| {
                let (i, j) = (k / wc, k % wc);
                a[(i / 2) * d[1] + j / 2] * C64::new(0.5, 0.0)
            });
            PureState::from_vector(layout.clone(), v)
        })
        .collect::<Result<_>>()?;
    let wrap = |projs: &[DMatrix<C64>], dim: usize, out: &str, work: &str| -> Result<Vec<OperatorMatrix>> {
        let l = RegisterLayout::new([(out, 2), (work, 2 * dim)])?;
        (0..r)
            .map(|y| {
                let mut u = DMatrix::<C64>::zeros(4 * dim, 4 * dim);
                for pad in 0..2 {
                    let p = &projs[2 * y + pad];
                    for o in 0..2 {
                        for i in 0..dim {
                            for j in 0..dim {
                                let pij = p[(i, j)];
                                let id = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                                let col = o * 2 * dim + 2 * j + pad;
                                // P ⊗ X on out plus (I - P) ⊗ I.
                                u[((1 - o) * 2 * dim + 2 * i + pad, col)] += pij;
                                u[(o * 2 * dim + 2 * i + pad, col)] += id - pij;
                            }
                        }
                    }
                }
                OperatorMatrix::unitary(l.clone(), u)
            })
            .collect()
    };
    GLAdversary::new(
        adv.n,
        wrap(&adv.bob_projectors, d[0], BOB_OUT, BOB_WORK)?,
        wrap(&adv.charlie_projectors, d[1], CHARLIE_OUT, CHARLIE_WORK)?,
        inputs,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glextract::{gl_advantage, gl_extract};

    fn table(bits: usize, len: usize) -> Vec<bool> {
        (0..len).map(|i| (bits >> i) & 1 == 1).collect()
    }

    #[test]
    fn random_behaviours_satisfy_identities() {
        let mut rng = RandomStream::new(11, 0);
        for _ in 0..5 {
            let adv = CorrelatedAdversary::random(2, 2, &mut rng).unwrap();
            for x in 0..4 {
                let ev = evaluate_correlated(&adv, x).unwrap();
                assert!(ev.diag_residual() < 1e-12);
                assert!(ev.signalling_residual() < 1e-12);
                assert!(ev.relaxed_success >= ev.original_success - 1e-12);
            }
        }
    }

    #[test]
    fn wrapped_advantage_is_relaxed_success() {
        let mut rng = RandomStream::new(12, 0);
        let adv = CorrelatedAdversary::random(2, 2, &mut rng).unwrap();
        let gl = gl_correlated_reduce(&adv).unwrap();
        for x in 0..4 {
            let ev = evaluate_correlated(&adv, x).unwrap();
            let eps = gl_advantage(&gl, x).unwrap();
            assert!((eps + 0.5 - ev.relaxed_success).abs() < 1e-12);
        }
        assert!(gl_extract(&gl).unwrap().holds);
    }

    #[test]
    fn tables_agree_with_enumeration() {
        for (tb, tc) in [(0b1011_0110, 0b0110_1001), (0b1111_0000, 0b0000_1111), (0b0101_0101, 0b1100_0011)] {
            let (b, c) = (table(tb, 8), table(tc, 8));
            let adv = CorrelatedAdversary::from_tables(2, &b, &c).unwrap();
            for x in 0..4 {
                let ev = evaluate_correlated(&adv, x).unwrap();
                let (o, r) = table_successes(2, &b, &c, x);
                assert!((ev.original_success - o).abs() < 1e-12);
                assert!((ev.relaxed_success - r).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pad_blind_responders_keep_success() {
        // Bob answers <y, 3> and Charlie <y, 3>, ignoring the pad.
        let f = |y: usize| inner_bit(y, 3) == 1;
        let t: Vec<bool> = (0..8).map(|k| f(k / 2)).collect();
        let adv = CorrelatedAdversary::from_tables(2, &t, &t).unwrap();
        let ev = evaluate_correlated(&adv, 3).unwrap();
        assert!((ev.original_success - ev.relaxed_success).abs() < 1e-12);
        assert!((ev.original_success - 1.0).abs() < 1e-12);
    }
}
