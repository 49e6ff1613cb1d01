use nalgebra::{DMatrix, DVector};

use super::{OperatorMatrix, PureState, RandomStream, RegisterLayout, Roles, C64};
use crate::error::Result;

/// Haar-random pure state on a single register labelled `psi`.
pub fn haar_state(d: usize, rng: &mut RandomStream) -> Result<PureState> {
    haar_state_on(RegisterLayout::single("psi", d)?, rng)
}

/// Haar-random pure state on an arbitrary layout: a normalized complex
/// Gaussian vector, global phase fixed so the first amplitude is real.
pub fn haar_state_on(layout: RegisterLayout, rng: &mut RandomStream) -> Result<PureState> {
    let d = layout.total_dim();
    let v = DVector::from_fn(d, |_, _| rng.complex_normal());
    Ok(PureState::normalized(layout, v)?.phase_fixed())
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary(layout: RegisterLayout, rng: &mut RandomStream) -> OperatorMatrix {
    let d = layout.total_dim();
    let g = DMatrix::from_fn(d, d, |_, _| rng.complex_normal());
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let ph = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= ph;
        }
    }
    OperatorMatrix::trusted(layout, q, Roles::UNITARY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_state_is_one() {
        let mut rng = RandomStream::new(0, 0);
        let s = haar_state(1, &mut rng).unwrap();
        assert!((s.amplitudes()[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_dimension_rejected() {
        let mut rng = RandomStream::new(0, 0);
        assert!(haar_state(0, &mut rng).is_err());
    }

    #[test]
    fn mean_first_population_is_one_over_d() {
        let mut rng = RandomStream::new(11, 0);
        let n = 100_000;
        let mut acc = 0.0;
        for _ in 0..n {
            acc += haar_state(4, &mut rng).unwrap().amplitudes()[0].norm_sqr();
        }
        assert!((acc / n as f64 - 0.25).abs() < 0.01);
    }

    #[test]
    fn first_moment_is_maximally_mixed() {
        let mut rng = RandomStream::new(12, 0);
        let n = 100_000;
        let mut acc = DMatrix::<C64>::zeros(2, 2);
        for _ in 0..n {
            let v = haar_state(2, &mut rng).unwrap().into_amplitudes();
            acc += &v * v.adjoint();
        }
        acc /= C64::new(n as f64, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                let e = if i == j { 0.5 } else { 0.0 };
                assert!((acc[(i, j)] - C64::new(e, 0.0)).norm() < 0.01);
            }
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = RandomStream::new(13, 0);
        let u = haar_unitary(RegisterLayout::single("u", 5).unwrap(), &mut rng);
        assert!(u.is_unitary(1e-10));
    }
}
