use nalgebra::DMatrix;

use crate::error::{bail, Result};
use crate::qcore::{OperatorMatrix, PureState, RegisterLayout, Roles, C64};

pub const BOB_ANCILLA: &str = "B1";
pub const BOB_INPUT: &str = "B2";
pub const CHARLIE_ANCILLA: &str = "C1";
pub const CHARLIE_INPUT: &str = "C2";

/// Shared state on `(B1, C1)` plus one binary projective measurement per
/// party: Bob's projector on `(B1, B2)`, Charlie's on `(C1, C2)`. The
/// projectors mark the outcome whose joint occurrence is scored.
#[derive(Debug, Clone)]
pub struct NonLocalStrategy {
    shared_state: PureState,
    bob_projector: OperatorMatrix,
    charlie_projector: OperatorMatrix,
}

fn expect_labels(layout: &RegisterLayout, labels: [&str; 2], what: &str) -> Result<()> {
    if layout.labels() != labels {
        bail!(Layout, "{what} must live on registers {labels:?}, found {:?}", layout.labels());
    }
    Ok(())
}

impl NonLocalStrategy {
    pub fn new(
        shared_state: PureState,
        bob_projector: OperatorMatrix,
        charlie_projector: OperatorMatrix,
    ) -> Result<Self> {
        expect_labels(shared_state.layout(), [BOB_ANCILLA, CHARLIE_ANCILLA], "shared state")?;
        expect_labels(bob_projector.layout(), [BOB_ANCILLA, BOB_INPUT], "Bob's projector")?;
        expect_labels(charlie_projector.layout(), [CHARLIE_ANCILLA, CHARLIE_INPUT], "Charlie's projector")?;
        let sd = shared_state.layout().dims();
        if bob_projector.layout().dims()[0] != sd[0] || charlie_projector.layout().dims()[0] != sd[1] {
            bail!(Dimension, "ancilla dimensions disagree with the shared state");
        }
        if !bob_projector.roles().projector || !charlie_projector.roles().projector {
            bail!(Parameter, "strategy measurements must carry the projector flag");
        }
        Ok(Self { shared_state, bob_projector, charlie_projector })
    }

    /// Strategy without shared entanglement: projectors act on the inputs only.
    pub fn unentangled(bob: DMatrix<C64>, charlie: DMatrix<C64>) -> Result<Self> {
        let shared = PureState::basis(RegisterLayout::new([(BOB_ANCILLA, 1), (CHARLIE_ANCILLA, 1)])?, 0)?;
        let bl = RegisterLayout::new([(BOB_ANCILLA, 1), (BOB_INPUT, bob.nrows())])?;
        let cl = RegisterLayout::new([(CHARLIE_ANCILLA, 1), (CHARLIE_INPUT, charlie.nrows())])?;
        Self::new(shared, OperatorMatrix::projector(bl, bob)?, OperatorMatrix::projector(cl, charlie)?)
    }

    pub fn shared_state(&self) -> &PureState {
        &self.shared_state
    }

    pub fn bob_projector(&self) -> &OperatorMatrix {
        &self.bob_projector
    }

    pub fn charlie_projector(&self) -> &OperatorMatrix {
        &self.charlie_projector
    }

    pub fn ancilla_dims(&self) -> (usize, usize) {
        let d = self.shared_state.layout().dims();
        (d[0], d[1])
    }

    pub fn input_dims(&self) -> (usize, usize) {
        (self.bob_projector.layout().dims()[1], self.charlie_projector.layout().dims()[1])
    }

    /// Re-expresses an unentangled strategy over a larger shared state by
    /// letting both projectors act trivially on the new ancillas.
    pub fn lift_to(&self, shared: &PureState) -> Result<NonLocalStrategy> {
        let (ab, ac) = self.ancilla_dims();
        if (ab, ac) == (shared.layout().dims()[0], shared.layout().dims()[1]) {
            return Ok(NonLocalStrategy { shared_state: shared.clone(), ..self.clone() });
        }
        if ab != 1 || ac != 1 {
            bail!(Dimension, "only unentangled strategies can be lifted");
        }
        let sd = shared.layout().dims();
        let lift = |p: &OperatorMatrix, a: usize, anc: &str, inp: &str| -> Result<OperatorMatrix> {
            let m = DMatrix::<C64>::identity(a, a).kronecker(p.entries());
            let l = RegisterLayout::new([(anc, a), (inp, p.layout().dims()[1])])?;
            Ok(OperatorMatrix::trusted(l, m, Roles::PROJECTOR))
        };
        Self::new(
            shared.clone(),
            lift(&self.bob_projector, sd[0], BOB_ANCILLA, BOB_INPUT)?,
            lift(&self.charlie_projector, sd[1], CHARLIE_ANCILLA, CHARLIE_INPUT)?,
        )
    }

    fn check_input(&self, rho: &OperatorMatrix) -> Result<()> {
        let (db, dc) = self.input_dims();
        if rho.layout().labels() != [BOB_INPUT, CHARLIE_INPUT] || rho.layout().dims() != [db, dc] {
            bail!(Layout, "input must live on (B2: {db}, C2: {dc})");
        }
        Ok(())
    }

    /// `Tr((M ⊗ N)(psi ⊗ rho))`, the probability that both projectors fire.
    pub fn acceptance_probability(&self, rho: &OperatorMatrix) -> Result<f64> {
        self.check_input(rho)?;
        let a = bob_effective(&self.shared_state, self.charlie_projector.entries(), rho.entries(), self.input_dims());
        Ok(trace_product(self.bob_projector.entries(), &a))
    }

    /// Probability that both projectors fire on a pure joint input on `(B2, C2)`.
    pub fn acceptance_probability_pure(&self, input: &PureState) -> Result<f64> {
        let (db, dc) = self.input_dims();
        if input.layout().dims() != [db, dc] {
            bail!(Layout, "input must live on (B2: {db}, C2: {dc})");
        }
        let (ab, ac) = self.ancilla_dims();
        let psi = self.shared_state.amplitudes();
        let chi = input.amplitudes();
        let mut v = DMatrix::<C64>::zeros(ab * db, ac * dc);
        for b1 in 0..ab {
            for c1 in 0..ac {
                let p = psi[b1 * ac + c1];
                if p == C64::new(0.0, 0.0) {
                    continue;
                }
                for b2 in 0..db {
                    for c2 in 0..dc {
                        v[(b1 * db + b2, c1 * dc + c2)] = p * chi[b2 * dc + c2];
                    }
                }
            }
        }
        let w = self.bob_projector.entries() * v * self.charlie_projector.entries().transpose();
        Ok(w.iter().map(|z| z.norm_sqr()).sum())
    }
}

/// `Tr(X Y)` without forming the product.
pub(crate) fn trace_product(x: &DMatrix<C64>, y: &DMatrix<C64>) -> f64 {
    let n = x.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += x[(i, j)] * y[(j, i)];
        }
    }
    acc.re
}

/// Operator `A` on `(B1, B2)` with `Tr(M A) = Tr((M ⊗ N)(psi ⊗ delta))`.
pub(crate) fn bob_effective(
    psi: &PureState,
    n: &DMatrix<C64>,
    delta: &DMatrix<C64>,
    (db, dc): (usize, usize),
) -> DMatrix<C64> {
    bob_effective_reshaped(psi, n, &reshape_delta(delta, db, dc), (db, dc))
}

/// Operator `B` on `(C1, C2)` with `Tr(N B) = Tr((M ⊗ N)(psi ⊗ delta))`.
#[cfg(test)]
pub(crate) fn charlie_effective(
    psi: &PureState,
    m: &DMatrix<C64>,
    delta: &DMatrix<C64>,
    (db, dc): (usize, usize),
) -> DMatrix<C64> {
    charlie_effective_reshaped(psi, m, &reshape_delta(delta, db, dc), (db, dc))
}

/// `D[(b2, b2'), (c2, c2')] = delta[(b2, c2), (b2', c2')]`.
pub(crate) fn reshape_delta(delta: &DMatrix<C64>, db: usize, dc: usize) -> DMatrix<C64> {
    DMatrix::from_fn(db * db, dc * dc, |r, c| {
        let (b2, b2p, c2, c2p) = (r / db, r % db, c / dc, c % dc);
        delta[(b2 * dc + c2, b2p * dc + c2p)]
    })
}

fn shared_matrix(psi: &PureState) -> DMatrix<C64> {
    let sd = psi.layout().dims();
    DMatrix::from_fn(sd[0], sd[1], |b, c| psi.amplitudes()[b * sd[1] + c])
}

/// `bob_effective` with `delta` already passed through `reshape_delta`.
pub(crate) fn bob_effective_reshaped(
    psi: &PureState,
    n: &DMatrix<C64>,
    dr: &DMatrix<C64>,
    (db, dc): (usize, usize),
) -> DMatrix<C64> {
    let p = shared_matrix(psi);
    let ab = p.nrows();
    // s2[(b1', c2'), (b1, c2)] = sum conj(psi[b1', c1']) N[(c1', c2'), (c1, c2)] psi[b1, c1]
    let s2 = contract_shared(&p, n, dc);
    // A[(b1, b2), (b1', b2')] = sum_{c2, c2'} s2[(b1', c2'), (b1, c2)] delta[(b2, c2), (b2', c2')]
    let st = DMatrix::from_fn(ab * ab, dc * dc, |r, c| s2[((r % ab) * dc + c % dc, (r / ab) * dc + c / dc)]);
    unflatten(&(dr * st.transpose()).transpose(), ab, db)
}

/// `charlie_effective` with `delta` already passed through `reshape_delta`.
pub(crate) fn charlie_effective_reshaped(
    psi: &PureState,
    m: &DMatrix<C64>,
    dr: &DMatrix<C64>,
    (db, dc): (usize, usize),
) -> DMatrix<C64> {
    let p = shared_matrix(psi).transpose();
    let ac = p.nrows();
    // t2[(c1', b2'), (c1, b2)] = sum conj(psi[b1', c1']) M[(b1', b2'), (b1, b2)] psi[b1, c1]
    let t2 = contract_shared(&p, m, db);
    // B[(c1, c2), (c1', c2')] = sum_{b2, b2'} t2[(c1', b2'), (c1, b2)] delta[(b2, c2), (b2', c2')]
    let tt = DMatrix::from_fn(ac * ac, db * db, |r, c| t2[((r % ac) * db + c % db, (r / ac) * db + c / db)]);
    unflatten(&(tt * dr), ac, dc)
}

fn unflatten(prod: &DMatrix<C64>, a: usize, d: usize) -> DMatrix<C64> {
    DMatrix::from_fn(a * d, a * d, |r, c| prod[((r / d) * a + c / d, (r % d) * d + c % d)])
}

/// `out[(x', y2'), (x, y2)] = sum_{y, y'} conj(p[x', y']) op[(y', y2'), (y, y2)] p[x, y]`.
fn contract_shared(p: &DMatrix<C64>, op: &DMatrix<C64>, dy: usize) -> DMatrix<C64> {
    let (ax, ay) = p.shape();
    let pc = p.conjugate();
    let pt = p.transpose();
    let mut out = DMatrix::<C64>::zeros(ax * dy, ax * dy);
    for y2p in 0..dy {
        for y2 in 0..dy {
            let blk = DMatrix::from_fn(ay, ay, |yp, y| op[(yp * dy + y2p, y * dy + y2)]);
            let r = &pc * blk * &pt;
            for xp in 0..ax {
                for x in 0..ax {
                    out[(xp * dy + y2p, x * dy + y2)] = r[(xp, x)];
                }
            }
        }
    }
    out
}

/// `Pr[both fire | rho0] - Pr[both fire | rho1]`.
pub fn advantage_signed(strategy: &NonLocalStrategy, rho0: &OperatorMatrix, rho1: &OperatorMatrix) -> Result<f64> {
    strategy.check_input(rho0)?;
    strategy.check_input(rho1)?;
    if !rho0.roles().density || !rho1.roles().density {
        bail!(Parameter, "inputs must carry the density flag");
    }
    let delta = rho0.entries() - rho1.entries();
    let a = bob_effective(
        strategy.shared_state(),
        strategy.charlie_projector().entries(),
        &delta,
        strategy.input_dims(),
    );
    Ok(trace_product(strategy.bob_projector().entries(), &a))
}

/// `|Tr((M ⊗ N)(psi ⊗ rho0)) - Tr((M ⊗ N)(psi ⊗ rho1))|`, by exact contraction.
pub fn advantage_exact(strategy: &NonLocalStrategy, rho0: &OperatorMatrix, rho1: &OperatorMatrix) -> Result<f64> {
    Ok(advantage_signed(strategy, rho0, rho1)?.abs())
}
