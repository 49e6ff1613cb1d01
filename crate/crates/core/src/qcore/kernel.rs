use nalgebra::{DMatrix, DVector};

use super::{RegisterLayout, C64};
use crate::error::{bail, Result};

/// Applies `u` to the registers at `positions` (in that order) of the
/// amplitude vector, identity elsewhere.
pub fn apply_local(
    layout: &RegisterLayout,
    amps: &mut [C64],
    positions: &[usize],
    u: &DMatrix<C64>,
) -> Result<()> {
    let sub = layout.offsets(positions);
    if u.nrows() != sub.len() || u.ncols() != sub.len() {
        bail!(
            Dimension,
            "operator of size {}x{} does not act on a {}-dim subsystem",
            u.nrows(),
            u.ncols(),
            sub.len()
        );
    }
    let rest = layout.offsets(&layout.complement(positions));
    let mut buf = vec![C64::new(0.0, 0.0); sub.len()];
    for &base in &rest {
        apply_block(amps, base, &sub, u, &mut buf);
    }
    Ok(())
}

fn apply_block(amps: &mut [C64], base: usize, sub: &[usize], u: &DMatrix<C64>, buf: &mut [C64]) {
    let n = sub.len();
    for (b, &o) in buf.iter_mut().zip(sub) {
        *b = amps[base + o];
    }
    for (i, &oi) in sub.iter().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..n {
            acc += u[(i, j)] * buf[j];
        }
        amps[base + oi] = acc;
    }
}

/// Applies `us[c]` to the target registers on the branch where the control
/// register holds `c`.
pub fn apply_controlled(
    layout: &RegisterLayout,
    amps: &mut [C64],
    control: usize,
    targets: &[usize],
    us: &[DMatrix<C64>],
) -> Result<()> {
    if targets.contains(&control) {
        bail!(Layout, "control register is also a target");
    }
    let cdim = layout.registers()[control].dim;
    if us.len() != cdim {
        bail!(
            Dimension,
            "controlled family needs {cdim} operators, got {}",
            us.len()
        );
    }
    let sub = layout.offsets(targets);
    for u in us {
        if u.nrows() != sub.len() || u.ncols() != sub.len() {
            bail!(Dimension, "controlled operator has the wrong size");
        }
    }
    let mut fixed = targets.to_vec();
    fixed.push(control);
    let rest = layout.offsets(&layout.complement(&fixed));
    let cstride = layout.strides()[control];
    let mut buf = vec![C64::new(0.0, 0.0); sub.len()];
    for (c, u) in us.iter().enumerate() {
        for &base in &rest {
            apply_block(amps, base + c * cstride, &sub, u, &mut buf);
        }
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending, with
/// eigenvectors as matching columns.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

pub(crate) fn vector_norm(v: &DVector<C64>) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_gate() -> DMatrix<C64> {
        DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        )
    }

    #[test]
    fn local_x_on_second_qubit() {
        let l = RegisterLayout::qubits("q", 2).unwrap();
        let mut a = vec![C64::new(0.0, 0.0); 4];
        a[0] = C64::new(1.0, 0.0);
        apply_local(&l, &mut a, &[1], &x_gate()).unwrap();
        assert_eq!(a[1], C64::new(1.0, 0.0));
    }

    #[test]
    fn controlled_acts_only_on_branch() {
        let l = RegisterLayout::qubits("q", 2).unwrap();
        let mut a = vec![C64::new(0.5, 0.0); 4];
        a[3] = C64::new(0.0, 0.0);
        let id = DMatrix::identity(2, 2);
        apply_controlled(&l, &mut a, 0, &[1], &[id, x_gate()]).unwrap();
        assert_eq!(a[2], C64::new(0.0, 0.0));
        assert_eq!(a[3], C64::new(0.5, 0.0));
        assert_eq!(a[0], C64::new(0.5, 0.0));
    }

    #[test]
    fn eigen_sorted() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(3.0, 0.0),
            C64::new(-1.0, 0.0),
        ]));
        let (v, _) = hermitian_eigen(&m);
        assert!((v[0] + 1.0).abs() < 1e-12 && (v[1] - 3.0).abs() < 1e-12);
    }
}
