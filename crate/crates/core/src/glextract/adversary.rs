use nalgebra::DMatrix;

use crate::error::{bail, Result};
use crate::qcore::{OperatorMatrix, PureState, RegisterLayout, C64};

pub const BOB_COINS: &str = "RB";
pub const BOB_OUT: &str = "BO";
pub const BOB_WORK: &str = "BW";
pub const CHARLIE_COINS: &str = "RC";
pub const CHARLIE_OUT: &str = "CO";
pub const CHARLIE_WORK: &str = "CW";

/// Largest `n` for which per-coin unitaries are stored explicitly.
pub const MAX_GL_BITS: usize = 4;

/// `<r, x>` over `F_2`.
pub fn inner_bit(r: usize, x: usize) -> usize {
    (r & x).count_ones() as usize & 1
}

/// Non-local responder pair for Goldreich-Levin samples. On coins `r`, Bob
/// applies `U_B^r` to `(BO, BW)` with `BO` starting in `|0>` and reports the
/// `BO` measurement; Charlie mirrors this on `(CO, CW)`. Input `x` is given
/// as the shared state `shared_inputs[x]` on `(BW, CW)`.
#[derive(Debug, Clone)]
pub struct GLAdversary {
    n: usize,
    bob_unitaries: Vec<OperatorMatrix>,
    charlie_unitaries: Vec<OperatorMatrix>,
    shared_inputs: Vec<PureState>,
}

fn side_layout(out: &str, work: &str, dim: usize) -> Result<RegisterLayout> {
    RegisterLayout::new([(out, 2), (work, dim)])
}

fn input_layout(wb: usize, wc: usize) -> Result<RegisterLayout> {
    RegisterLayout::new([(BOB_WORK, wb), (CHARLIE_WORK, wc)])
}

/// Permutation unitary `|o, w> -> |o ^ f(w), w>` on `(out, work)`.
fn predicate_unitary(dim: usize, f: impl Fn(usize) -> bool) -> DMatrix<C64> {
    let mut u = DMatrix::<C64>::zeros(2 * dim, 2 * dim);
    for o in 0..2 {
        for w in 0..dim {
            let o2 = o ^ usize::from(f(w));
            u[(o2 * dim + w, o * dim + w)] = C64::new(1.0, 0.0);
        }
    }
    u
}

impl GLAdversary {
    pub fn new(
        n: usize,
        bob_unitaries: Vec<OperatorMatrix>,
        charlie_unitaries: Vec<OperatorMatrix>,
        shared_inputs: Vec<PureState>,
    ) -> Result<Self> {
        let r = coin_count(n)?;
        if bob_unitaries.len() != r || charlie_unitaries.len() != r || shared_inputs.len() != r {
            bail!(Parameter, "need 2^n unitaries per side and 2^n shared inputs");
        }
        let dims = shared_inputs[0].layout().dims();
        if shared_inputs[0].layout().labels() != [BOB_WORK, CHARLIE_WORK] {
            bail!(Layout, "shared inputs must live on ({BOB_WORK}, {CHARLIE_WORK})");
        }
        if shared_inputs.iter().any(|s| s.layout() != shared_inputs[0].layout()) {
            bail!(Layout, "shared inputs disagree on layout");
        }
        let bl = side_layout(BOB_OUT, BOB_WORK, dims[0])?;
        let cl = side_layout(CHARLIE_OUT, CHARLIE_WORK, dims[1])?;
        for (us, l) in [(&bob_unitaries, &bl), (&charlie_unitaries, &cl)] {
            for u in us.iter() {
                if u.layout() != l {
                    bail!(Layout, "unitary must live on {:?}", l.labels());
                }
                if !u.roles().unitary {
                    bail!(Parameter, "adversary maps must carry the unitary flag");
                }
            }
        }
        Ok(Self { n, bob_unitaries, charlie_unitaries, shared_inputs })
    }

    /// Classical responders: Bob outputs `f_b(r, w)` on work basis state `w`,
    /// Charlie `f_c(r', w')`.
    pub fn from_predicates(
        n: usize,
        shared_inputs: Vec<PureState>,
        f_b: impl Fn(usize, usize) -> bool,
        f_c: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let dims = shared_inputs.first().map(|s| s.layout().dims()).unwrap_or_default();
        if dims.len() != 2 {
            bail!(Layout, "shared inputs must have two registers");
        }
        let bl = side_layout(BOB_OUT, BOB_WORK, dims[0])?;
        let cl = side_layout(CHARLIE_OUT, CHARLIE_WORK, dims[1])?;
        let r = coin_count(n)?;
        let bob = (0..r)
            .map(|r| OperatorMatrix::unitary(bl.clone(), predicate_unitary(dims[0], |w| f_b(r, w))))
            .collect::<Result<_>>()?;
        let charlie = (0..r)
            .map(|r| OperatorMatrix::unitary(cl.clone(), predicate_unitary(dims[1], |w| f_c(r, w))))
            .collect::<Result<_>>()?;
        Self::new(n, bob, charlie, shared_inputs)
    }

    /// Each side holds a copy of `x` and answers `<r, x>` exactly.
    pub fn perfect(n: usize) -> Result<Self> {
        let r = coin_count(n)?;
        let inputs = (0..r).map(|x| PureState::basis_digits(input_layout(r, r)?, &[x, x])).collect::<Result<_>>()?;
        Self::from_predicates(n, inputs, inner_bit_pred, inner_bit_pred)
    }

    /// Both sides output the fixed `bit` regardless of input.
    pub fn constant(n: usize, bit: bool) -> Result<Self> {
        let r = coin_count(n)?;
        let inputs = (0..r).map(|_| PureState::basis(input_layout(1, 1)?, 0)).collect::<Result<_>>()?;
        Self::from_predicates(n, inputs, |_, _| bit, |_, _| bit)
    }

    /// Each side holds `x` and a noise qubit; `U^r` rotates the noise qubit
    /// to `sqrt(p)|0> + (-1)^<r, mask> sqrt(1-p)|1>` and then writes
    /// `<r, x> ^ noise` to the output, so each side is correct with
    /// probability `p` independently.
    pub fn noisy(n: usize, p_bob: f64, p_charlie: f64, phase_mask: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_bob) || !(0.0..=1.0).contains(&p_charlie) {
            bail!(Parameter, "correctness probabilities must lie in [0, 1]");
        }
        let r_count = coin_count(n)?;
        let wd = 2 * r_count;
        let inputs = (0..r_count)
            .map(|x| PureState::basis_digits(input_layout(wd, wd)?, &[2 * x, 2 * x]))
            .collect::<Result<_>>()?;
        let side = |p: f64, out: &str, work: &str| -> Result<Vec<OperatorMatrix>> {
            let l = side_layout(out, work, wd)?;
            (0..r_count)
                .map(|r| {
                    let s = if inner_bit(r, phase_mask) == 1 { -1.0 } else { 1.0 };
                    let (a, b) = (p.sqrt(), (1.0 - p).sqrt());
                    let v = DMatrix::from_row_slice(
                        2,
                        2,
                        &[C64::new(a, 0.0), C64::new(-s * b, 0.0), C64::new(s * b, 0.0), C64::new(a, 0.0)],
                    );
                    let rot = DMatrix::<C64>::identity(2 * r_count, 2 * r_count).kronecker(&v);
                    let parity = predicate_unitary(wd, |w| (inner_bit(r, w >> 1) ^ (w & 1)) == 1);
                    OperatorMatrix::unitary(l.clone(), parity * rot)
                })
                .collect()
        };
        Self::new(n, side(p_bob, BOB_OUT, BOB_WORK)?, side(p_charlie, CHARLIE_OUT, CHARLIE_WORK)?, inputs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn work_dims(&self) -> (usize, usize) {
        let d = self.shared_inputs[0].layout().dims();
        (d[0], d[1])
    }

    pub fn bob_unitary(&self, r: usize) -> &OperatorMatrix {
        &self.bob_unitaries[r]
    }

    pub fn charlie_unitary(&self, r: usize) -> &OperatorMatrix {
        &self.charlie_unitaries[r]
    }

    pub fn shared_input(&self, x: usize) -> &PureState {
        &self.shared_inputs[x]
    }

    /// Shared input as a `wb x wc` amplitude matrix.
    pub(crate) fn input_matrix(&self, x: usize) -> DMatrix<C64> {
        let (wb, wc) = self.work_dims();
        let a = self.shared_inputs[x].amplitudes();
        DMatrix::from_fn(wb, wc, |i, j| a[i * wc + j])
    }
}

pub(crate) fn coin_count(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_GL_BITS {
        bail!(Parameter, "n must lie in 1..={MAX_GL_BITS}");
    }
    Ok(1 << n)
}

fn inner_bit_pred(r: usize, w: usize) -> bool {
    inner_bit(r, w) == 1
}
