use nalgebra::DMatrix;

use super::kernel::hermitian_eigen;
use super::{OperatorMatrix, C64, FLAG_TOL};
use crate::error::{bail, Result};

fn same_layout(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<()> {
    if a.layout().dims() != b.layout().dims() {
        bail!(Layout, "metric arguments live on different layouts");
    }
    Ok(())
}

/// Half the trace norm of `a - b`; both arguments must be Hermitian.
pub fn trace_distance(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<f64> {
    same_layout(a, b)?;
    if !a.is_hermitian(FLAG_TOL) || !b.is_hermitian(FLAG_TOL) {
        bail!(Parameter, "trace distance needs hermitian arguments");
    }
    let diff = a.entries() - b.entries();
    Ok(0.5 * hermitian_eigen(&diff).0.iter().map(|v| v.abs()).sum::<f64>())
}

/// Sum of singular values.
pub fn trace_norm(a: &OperatorMatrix) -> f64 {
    a.entries().clone().singular_values().iter().sum()
}

fn psd_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let (vals, vecs) = hermitian_eigen(m);
    let n = vals.len();
    let mut scaled = vecs.clone();
    for (j, v) in vals.iter().enumerate() {
        let s = C64::new(if *v > 1e-13 { v.sqrt() } else { 0.0 }, 0.0);
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    &scaled * vecs.adjoint()
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
pub fn fidelity(rho: &OperatorMatrix, sigma: &OperatorMatrix) -> Result<f64> {
    same_layout(rho, sigma)?;
    let s = psd_sqrt(rho.entries());
    let inner = &s * sigma.entries() * &s;
    let (vals, _) = hermitian_eigen(&inner);
    let t: f64 = vals.iter().filter(|&&v| v > 1e-13).map(|v| v.sqrt()).sum();
    Ok(t * t)
}

/// Hilbert-Schmidt inner product `Tr(a^dagger b)`.
pub fn hs_inner(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<C64> {
    same_layout(a, b)?;
    Ok(a.entries().iter().zip(b.entries().iter()).map(|(x, y)| x.conj() * y).sum())
}

/// Largest singular value.
pub fn op_norm(a: &OperatorMatrix) -> f64 {
    a.entries().clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

pub fn frobenius(a: &OperatorMatrix) -> f64 {
    a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{haar_state_on, PureState, RandomStream, RegisterLayout};

    #[test]
    fn distance_to_self_is_zero() {
        let mut rng = RandomStream::new(1, 0);
        let l = RegisterLayout::single("a", 3).unwrap();
        let r = OperatorMatrix::pure(&haar_state_on(l, &mut rng).unwrap());
        assert!(trace_distance(&r, &r).unwrap().abs() < 1e-14);
        assert!((fidelity(&r, &r).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn orthogonal_states_distance_one() {
        let l = RegisterLayout::single("a", 2).unwrap();
        let p0 = OperatorMatrix::basis_projector(l.clone(), 0).unwrap();
        let p1 = OperatorMatrix::basis_projector(l, 1).unwrap();
        assert!((trace_distance(&p0, &p1).unwrap() - 1.0).abs() < 1e-14);
        assert!(fidelity(&p0, &p1).unwrap().abs() < 1e-14);
    }

    #[test]
    fn frobenius_of_rank_r_projector() {
        let l = RegisterLayout::single("a", 5).unwrap();
        let mut m = DMatrix::zeros(5, 5);
        for i in 0..3 {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        let p = OperatorMatrix::projector(l, m).unwrap();
        assert!((frobenius(&p) - 3f64.sqrt()).abs() < 1e-14);
        assert!((op_norm(&p) - 1.0).abs() < 1e-12);
        assert!((trace_norm(&p) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pure_state_fidelity_is_overlap() {
        let mut rng = RandomStream::new(2, 0);
        let l = RegisterLayout::single("a", 4).unwrap();
        let a = haar_state_on(l.clone(), &mut rng).unwrap();
        let b = haar_state_on(l, &mut rng).unwrap();
        let f = fidelity(&a.density(), &b.density()).unwrap();
        assert!((f - a.inner(&b).unwrap().norm_sqr()).abs() < 1e-9);
        let td = trace_distance(&a.density(), &b.density()).unwrap();
        assert!((td - (1.0 - f).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn mismatched_layouts_rejected() {
        let a = OperatorMatrix::identity(RegisterLayout::single("a", 2).unwrap());
        let b = OperatorMatrix::identity(RegisterLayout::single("a", 3).unwrap());
        assert!(matches!(trace_distance(&a, &b), Err(crate::Error::Layout(_))));
        let _ = PureState::basis(RegisterLayout::single("a", 2).unwrap(), 0);
    }
}
