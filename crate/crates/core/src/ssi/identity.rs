use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::seesaw::random_projector;
use super::strategy::{BOB_ANCILLA, BOB_INPUT, CHARLIE_ANCILLA, CHARLIE_INPUT};
use crate::error::{bail, Result};
use crate::qcore::{haar_state, swap_operator, OperatorMatrix, RandomStream, RegisterLayout, C64};

/// Both sides of `Tr((M~ (x) N)(Omega (x) F)) = Tr(M~ . N^{T_C1})` for one
/// random instance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TraceIdentityCheck {
    pub epr_pairs: usize,
    pub d: usize,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub residual: f64,
}

/// `M~ = (sigma^{1/2} (x) I) M (sigma^{1/2} (x) I)` with `M` a random
/// projector on `(B1, B2)` and `sigma` the reduced state of a Haar vector;
/// `N` a random projector on `(C1, C2)`. `Omega` is the unnormalized
/// maximally entangled operator on `(B1, C1)` with `2^epr_pairs` levels and
/// `F` the swap of `(B2, C2)`. The product on the right joins `B1` with `C1`
/// and `B2` with `C2`.
pub fn trace_identity_check(epr_pairs: usize, d: usize, rng: &mut RandomStream) -> Result<TraceIdentityCheck> {
    if epr_pairs == 0 || d < 2 {
        bail!(Parameter, "need at least one EPR pair and d >= 2");
    }
    let a = 1usize << epr_pairs;
    let side = RegisterLayout::new([(BOB_ANCILLA, a), (BOB_INPUT, d)])?;
    let nside = RegisterLayout::new([(CHARLIE_ANCILLA, a), (CHARLIE_INPUT, d)])?;
    let full = side.concat(&nside)?;
    if full.total_dim() > 1 << 10 {
        bail!(Dimension, "instance exceeds the dense trace-identity cap");
    }
    let psi = haar_state(a * a, rng)?.regroup(RegisterLayout::new([("s", a), ("r", a)])?)?;
    let sigma = psi.reduced_density(&["s"])?;
    let (vals, vecs) = sigma.eigh();
    let root = &vecs
        * DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            a,
            vals.iter().map(|&v| C64::new(v.max(0.0).sqrt(), 0.0)),
        ))
        * vecs.adjoint();
    let lift = root.kronecker(&DMatrix::<C64>::identity(d, d));
    let m = random_projector(a * d, rng)?;
    let mt = &lift * m * &lift;
    let n = random_projector(a * d, rng)?;

    let mut omega = DMatrix::<C64>::zeros(a * a, a * a);
    for i in 0..a {
        for j in 0..a {
            omega[(i * a + i, j * a + j)] = C64::new(1.0, 0.0);
        }
    }
    let pair = RegisterLayout::new([(BOB_INPUT, d), (CHARLIE_INPUT, d)])?;
    let f = swap_operator(&pair, &[BOB_INPUT], &[CHARLIE_INPUT])?;
    let of = OperatorMatrix::new(
        RegisterLayout::new([(BOB_ANCILLA, a), (CHARLIE_ANCILLA, a), (BOB_INPUT, d), (CHARLIE_INPUT, d)])?,
        omega.kronecker(f.entries()),
    )?
    .permute_registers(&[BOB_ANCILLA, BOB_INPUT, CHARLIE_ANCILLA, CHARLIE_INPUT])?;
    let lhs = (mt.kronecker(&n) * of.entries()).trace();

    let nt = OperatorMatrix::new(nside, n)?.partial_transpose(&[CHARLIE_ANCILLA])?;
    let rhs = (&mt * nt.entries()).trace();
    Ok(TraceIdentityCheck {
        epr_pairs,
        d,
        lhs_re: lhs.re,
        lhs_im: lhs.im,
        rhs_re: rhs.re,
        rhs_im: rhs.im,
        residual: (lhs - rhs).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_holds() {
        let mut r = RandomStream::from_seed(31);
        for e in [1, 2] {
            for _ in 0..5 {
                let c = trace_identity_check(e, 2, &mut r).unwrap();
                assert!(c.residual < 1e-9, "{c:?}");
                assert!(c.lhs_re.abs() > 1e-6);
            }
        }
    }

    #[test]
    fn transpose_on_wrong_register_breaks_it() {
        let mut r = RandomStream::from_seed(32);
        let a = 2;
        let n = random_projector(2 * a, &mut r).unwrap();
        let layout = RegisterLayout::new([(CHARLIE_ANCILLA, a), (CHARLIE_INPUT, 2)]).unwrap();
        let op = OperatorMatrix::new(layout, n).unwrap();
        let x = op.partial_transpose(&[CHARLIE_ANCILLA]).unwrap();
        let y = op.partial_transpose(&[CHARLIE_INPUT]).unwrap();
        assert!((x.entries() - y.entries()).norm() > 1e-6);
    }
}
