use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::kernel::hermitian_eigen;
use super::{PureState, RegisterLayout, C64, FLAG_TOL, IDENTITY_TOL};
use crate::error::{bail, Result};

/// Verified structural roles of an operator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roles {
    #[serde(default)]
    pub hermitian: bool,
    #[serde(default)]
    pub projector: bool,
    #[serde(default)]
    pub density: bool,
    #[serde(default)]
    pub unitary: bool,
}

impl Roles {
    pub const NONE: Roles = Roles { hermitian: false, projector: false, density: false, unitary: false };
    pub const HERMITIAN: Roles = Roles { hermitian: true, projector: false, density: false, unitary: false };
    pub const PROJECTOR: Roles = Roles { hermitian: true, projector: true, density: false, unitary: false };
    pub const DENSITY: Roles = Roles { hermitian: true, projector: false, density: true, unitary: false };
    pub const UNITARY: Roles = Roles { hermitian: false, projector: false, density: false, unitary: true };

    fn and(self, o: Roles) -> Roles {
        Roles {
            hermitian: self.hermitian && o.hermitian,
            projector: self.projector && o.projector,
            density: self.density && o.density,
            unitary: self.unitary && o.unitary,
        }
    }

    fn union(self, o: Roles) -> Roles {
        Roles {
            hermitian: self.hermitian || o.hermitian,
            projector: self.projector || o.projector,
            density: self.density || o.density,
            unitary: self.unitary || o.unitary,
        }
    }
}

/// Dense square operator on a register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    layout: RegisterLayout,
    entries: DMatrix<C64>,
    roles: Roles,
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

impl OperatorMatrix {
    pub fn new(layout: RegisterLayout, entries: DMatrix<C64>) -> Result<Self> {
        let d = layout.total_dim();
        if entries.nrows() != d || entries.ncols() != d {
            bail!(
                Dimension,
                "matrix is {}x{} but layout has dimension {d}",
                entries.nrows(),
                entries.ncols()
            );
        }
        Ok(Self { layout, entries, roles: Roles::NONE })
    }

    /// Builds an operator and verifies the claimed roles.
    pub fn with_roles(layout: RegisterLayout, entries: DMatrix<C64>, roles: Roles) -> Result<Self> {
        let mut op = Self::new(layout, entries)?;
        op.claim(roles)?;
        Ok(op)
    }

    pub fn hermitian(layout: RegisterLayout, entries: DMatrix<C64>) -> Result<Self> {
        Self::with_roles(layout, entries, Roles::HERMITIAN)
    }

    pub fn projector(layout: RegisterLayout, entries: DMatrix<C64>) -> Result<Self> {
        Self::with_roles(layout, entries, Roles::PROJECTOR)
    }

    pub fn density(layout: RegisterLayout, entries: DMatrix<C64>) -> Result<Self> {
        Self::with_roles(layout, entries, Roles::DENSITY)
    }

    pub fn unitary(layout: RegisterLayout, entries: DMatrix<C64>) -> Result<Self> {
        Self::with_roles(layout, entries, Roles::UNITARY)
    }

    /// Attaches roles that hold by construction without re-verifying them.
    pub(crate) fn trusted(layout: RegisterLayout, entries: DMatrix<C64>, roles: Roles) -> Self {
        debug_assert_eq!(entries.nrows(), layout.total_dim());
        let roles = if roles.projector || roles.density { roles.union(Roles::HERMITIAN) } else { roles };
        Self { layout, entries, roles }
    }

    /// Verifies and adds roles.
    pub fn claim(&mut self, roles: Roles) -> Result<()> {
        let check = |ok: bool, name: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                bail!(Parameter, "operator fails the {name} invariant")
            }
        };
        if roles.hermitian || roles.projector || roles.density {
            check(self.is_hermitian(FLAG_TOL), "hermitian")?;
        }
        if roles.projector {
            check(self.is_idempotent(IDENTITY_TOL), "projector")?;
        }
        if roles.density {
            check(self.is_density(FLAG_TOL), "density")?;
        }
        if roles.unitary {
            check(self.is_unitary(IDENTITY_TOL), "unitary")?;
        }
        let mut r = self.roles.union(roles);
        if r.projector || r.density {
            r.hermitian = true;
        }
        self.roles = r;
        Ok(())
    }

    pub fn identity(layout: RegisterLayout) -> Self {
        let d = layout.total_dim();
        Self::trusted(
            layout,
            DMatrix::identity(d, d),
            Roles { hermitian: true, projector: true, density: d == 1, unitary: true },
        )
    }

    pub fn zeros(layout: RegisterLayout) -> Self {
        let d = layout.total_dim();
        Self::trusted(layout, DMatrix::zeros(d, d), Roles::PROJECTOR)
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(layout: RegisterLayout) -> Self {
        let d = layout.total_dim();
        let m = DMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
        Self::trusted(layout, m, Roles { projector: d == 1, ..Roles::DENSITY })
    }

    /// Rank-one projector `|psi><psi|`, which is also a density operator.
    pub fn pure(state: &PureState) -> Self {
        let v = state.amplitudes();
        let m = v * v.adjoint();
        Self::trusted(
            state.layout().clone(),
            m,
            Roles { hermitian: true, projector: true, density: true, unitary: false },
        )
    }

    /// Projector onto a single computational basis vector.
    pub fn basis_projector(layout: RegisterLayout, index: usize) -> Result<Self> {
        let d = layout.total_dim();
        if index >= d {
            bail!(Dimension, "basis index {index} out of range {d}");
        }
        let mut m = DMatrix::zeros(d, d);
        m[(index, index)] = C64::new(1.0, 0.0);
        Ok(Self::trusted(layout, m, Roles { density: true, ..Roles::PROJECTOR }))
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn roles(&self) -> Roles {
        self.roles
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                if (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    fn is_idempotent(&self, tol: f64) -> bool {
        max_abs(&(&self.entries * &self.entries - &self.entries)) <= tol
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.is_idempotent(tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let n = self.dim();
        max_abs(&(&self.entries * self.entries.adjoint() - DMatrix::<C64>::identity(n, n))) <= tol
    }

    pub fn is_density(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) || (self.trace() - C64::new(1.0, 0.0)).norm() > tol {
            return false;
        }
        self.eigenvalues()[0] >= -tol
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.entries).0
    }

    /// Eigenvalues and eigenvectors of the Hermitian part, ascending.
    pub fn eigh(&self) -> (Vec<f64>, DMatrix<C64>) {
        hermitian_eigen(&self.entries)
    }

    /// Number of eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.eigenvalues().iter().filter(|&&v| v > threshold).count()
    }

    fn same_layout(&self, other: &OperatorMatrix) -> Result<()> {
        if self.layout.dims() != other.layout.dims() {
            bail!(Layout, "operators live on different layouts");
        }
        Ok(())
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.same_layout(other)?;
        let roles = Roles { hermitian: self.roles.hermitian && other.roles.hermitian, ..Roles::NONE };
        Ok(Self::trusted(self.layout.clone(), &self.entries + &other.entries, roles))
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.same_layout(other)?;
        let roles = Roles { hermitian: self.roles.hermitian && other.roles.hermitian, ..Roles::NONE };
        Ok(Self::trusted(self.layout.clone(), &self.entries - &other.entries, roles))
    }

    pub fn mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.same_layout(other)?;
        let roles = Roles { unitary: self.roles.unitary && other.roles.unitary, ..Roles::NONE };
        Ok(Self::trusted(self.layout.clone(), &self.entries * &other.entries, roles))
    }

    /// Real rescaling; keeps only the hermitian role.
    pub fn scale(&self, factor: f64) -> OperatorMatrix {
        let roles = Roles { hermitian: self.roles.hermitian, ..Roles::NONE };
        Self::trusted(self.layout.clone(), &self.entries * C64::new(factor, 0.0), roles)
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        Self::trusted(self.layout.clone(), self.entries.adjoint(), self.roles)
    }

    /// Same matrix on a different layout of equal total dimension.
    pub fn regroup(&self, layout: RegisterLayout) -> Result<OperatorMatrix> {
        if layout.total_dim() != self.dim() {
            bail!(Dimension, "regroup changes the total dimension");
        }
        Ok(Self::trusted(layout, self.entries.clone(), self.roles))
    }

    pub fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<OperatorMatrix> {
        self.regroup(self.layout.relabel(labels)?)
    }

    /// Kronecker product with concatenated layout.
    pub fn tensor(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Self::trusted(layout, self.entries.kronecker(&other.entries), self.roles.and(other.roles)))
    }

    /// Traces out every register not listed in `keep`; kept registers retain
    /// their layout order.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<OperatorMatrix> {
        let mut kp = self.layout.positions(keep)?;
        kp.sort_unstable();
        let tp = self.layout.complement(&kp);
        let ok = self.layout.offsets(&kp);
        let ot = self.layout.offsets(&tp);
        let n = ok.len();
        let m = &self.entries;
        let out = DMatrix::from_fn(n, n, |i, j| {
            ot.iter().map(|&k| m[(ok[i] + k, ok[j] + k)]).sum::<C64>()
        });
        let roles = Roles {
            hermitian: self.roles.hermitian,
            density: self.roles.density,
            ..Roles::NONE
        };
        Ok(Self::trusted(self.layout.select(&kp)?, out, roles))
    }

    /// Transposes the listed registers.
    pub fn partial_transpose<S: AsRef<str>>(&self, on: &[S]) -> Result<OperatorMatrix> {
        let mut op = self.layout.positions(on)?;
        op.sort_unstable();
        let rest = self.layout.complement(&op);
        let on_off = self.layout.offsets(&op);
        let off_off = self.layout.offsets(&rest);
        let d = self.dim();
        let mut out = DMatrix::zeros(d, d);
        let m = &self.entries;
        for &a in &on_off {
            for &a2 in &on_off {
                for &b in &off_off {
                    for &b2 in &off_off {
                        out[(a2 + b, a + b2)] = m[(a + b, a2 + b2)];
                    }
                }
            }
        }
        let roles = Roles { hermitian: self.roles.hermitian, ..Roles::NONE };
        Ok(Self::trusted(self.layout.clone(), out, roles))
    }

    /// Reorders registers; `order` lists every label once.
    pub fn permute_registers<S: AsRef<str>>(&self, order: &[S]) -> Result<OperatorMatrix> {
        let pos = self.layout.positions(order)?;
        if pos.len() != self.layout.len() {
            bail!(Layout, "permutation must list every register");
        }
        let new_layout = self.layout.select(&pos)?;
        let map = index_map(&self.layout, &new_layout, &pos);
        let d = self.dim();
        let mut out = DMatrix::zeros(d, d);
        for j in 0..d {
            for i in 0..d {
                out[(map[i], map[j])] = self.entries[(i, j)];
            }
        }
        Ok(Self::trusted(new_layout, out, self.roles))
    }

    /// Extends this operator to `full`, acting on the registers named like
    /// this operator's own and as identity elsewhere.
    pub fn embed(&self, full: &RegisterLayout) -> Result<OperatorMatrix> {
        let pos = full.positions(&self.layout.labels())?;
        if full.dim_of(&pos) != self.dim() {
            bail!(Dimension, "embedding dimension mismatch");
        }
        let sub = full.offsets(&pos);
        let rest = full.offsets(&full.complement(&pos));
        let d = full.total_dim();
        let mut out = DMatrix::zeros(d, d);
        for &r in &rest {
            for (a, &oa) in sub.iter().enumerate() {
                for (b, &ob) in sub.iter().enumerate() {
                    out[(r + oa, r + ob)] = self.entries[(a, b)];
                }
            }
        }
        let roles = Roles {
            hermitian: self.roles.hermitian,
            projector: self.roles.projector,
            unitary: self.roles.unitary,
            density: false,
        };
        Ok(Self::trusted(full.clone(), out, roles))
    }

    /// Expectation `<psi|A|psi>`.
    pub fn expectation(&self, state: &PureState) -> Result<C64> {
        if state.layout().dims() != self.layout.dims() {
            bail!(Layout, "state and operator layouts differ");
        }
        let v = state.amplitudes();
        Ok(v.dotc(&(&self.entries * v)))
    }
}

/// Maps each flat index of `old` to the flat index of the same basis vector in
/// `new`, whose registers are `old` registers at positions `pos`.
pub(crate) fn index_map(old: &RegisterLayout, new: &RegisterLayout, pos: &[usize]) -> Vec<usize> {
    let new_strides = new.strides();
    let mut stride_for_old = vec![0; old.len()];
    for (k, &p) in pos.iter().enumerate() {
        stride_for_old[p] = new_strides[k];
    }
    (0..old.total_dim())
        .map(|i| {
            old.digits(i)
                .iter()
                .zip(&stride_for_old)
                .map(|(d, s)| d * s)
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::RandomStream;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn random_op(layout: RegisterLayout, rng: &mut RandomStream) -> OperatorMatrix {
        let d = layout.total_dim();
        OperatorMatrix::new(layout, DMatrix::from_fn(d, d, |_, _| rng.complex_normal())).unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let a = OperatorMatrix::identity(RegisterLayout::single("a", 2).unwrap());
        let b = OperatorMatrix::identity(RegisterLayout::single("b", 2).unwrap());
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.entries(), &DMatrix::<C64>::identity(4, 4));
        assert!(a.tensor(&a).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = RandomStream::new(1, 0);
        let a = random_op(RegisterLayout::single("a", 2).unwrap(), &mut rng);
        let b = random_op(RegisterLayout::single("b", 3).unwrap(), &mut rng);
        let ab = a.tensor(&b).unwrap();
        let ra = ab.partial_trace(&["a"]).unwrap();
        let expect = a.entries() * b.trace();
        assert!(max_abs(&(ra.entries() - expect)) < 1e-12);
        let rb = ab.partial_trace(&["b"]).unwrap();
        assert!(max_abs(&(rb.entries() - b.entries() * a.trace())) < 1e-12);
    }

    #[test]
    fn partial_transpose_of_product() {
        let mut rng = RandomStream::new(2, 0);
        let a = random_op(RegisterLayout::single("a", 2).unwrap(), &mut rng);
        let b = random_op(RegisterLayout::single("b", 3).unwrap(), &mut rng);
        let pt = a.tensor(&b).unwrap().partial_transpose(&["b"]).unwrap();
        let expect = a.entries().kronecker(&b.entries().transpose());
        assert!(max_abs(&(pt.entries() - expect)) < 1e-15);
    }

    #[test]
    fn epr_partial_transpose_is_half_swap() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let l = RegisterLayout::qubits("q", 2).unwrap();
        let epr = PureState::new(l.clone(), vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
        let pt = OperatorMatrix::pure(&epr).partial_transpose(&["q0"]).unwrap();
        let mut swap = DMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            swap[(i, j)] = c(0.5);
        }
        assert!(max_abs(&(pt.entries() - swap)) < 1e-15);
        let ev = pt.eigenvalues();
        assert!((ev[0] + 0.5).abs() < 1e-12);
        assert!(ev[1..].iter().all(|v| (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn permute_then_back() {
        let mut rng = RandomStream::new(3, 0);
        let l = RegisterLayout::new([("a", 2), ("b", 3), ("c", 2)]).unwrap();
        let x = random_op(l, &mut rng);
        let y = x.permute_registers(&["c", "a", "b"]).unwrap();
        let z = y.permute_registers(&["a", "b", "c"]).unwrap();
        assert_eq!(x.entries(), z.entries());
    }

    #[test]
    fn permute_matches_kronecker_order() {
        let mut rng = RandomStream::new(4, 0);
        let a = random_op(RegisterLayout::single("a", 2).unwrap(), &mut rng);
        let b = random_op(RegisterLayout::single("b", 3).unwrap(), &mut rng);
        let ab = a.tensor(&b).unwrap().permute_registers(&["b", "a"]).unwrap();
        let ba = b.tensor(&a).unwrap();
        assert!(max_abs(&(ab.entries() - ba.entries())) < 1e-15);
    }

    #[test]
    fn embed_equals_kron_identity() {
        let mut rng = RandomStream::new(5, 0);
        let b = random_op(RegisterLayout::single("b", 3).unwrap(), &mut rng);
        let full = RegisterLayout::new([("a", 2), ("b", 3)]).unwrap();
        let e = b.embed(&full).unwrap();
        let expect = DMatrix::<C64>::identity(2, 2).kronecker(b.entries());
        assert!(max_abs(&(e.entries() - expect)) < 1e-15);
    }

    #[test]
    fn role_verification_rejects_bad_claims() {
        let l = RegisterLayout::single("a", 2).unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!(OperatorMatrix::hermitian(l.clone(), m.clone()).is_err());
        assert!(OperatorMatrix::unitary(l.clone(), m).is_err());
        let p = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.5), c(0.5), c(0.5)]);
        let op = OperatorMatrix::projector(l.clone(), p).unwrap();
        assert!(op.roles().hermitian && op.roles().projector);
        assert!(OperatorMatrix::density(l, DMatrix::identity(2, 2)).is_err());
    }
}
