use nalgebra::{DMatrix, DVector};

use super::kernel::{apply_controlled, apply_local, vector_norm};
use super::operator::index_map;
use super::{OperatorMatrix, RegisterLayout, Roles, C64, FLAG_TOL};
use crate::error::{bail, Result};

/// Unit vector on a register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: RegisterLayout,
    amps: DVector<C64>,
}

impl PureState {
    /// Builds a state, rejecting amplitudes whose norm is not 1.
    pub fn new(layout: RegisterLayout, amps: Vec<C64>) -> Result<Self> {
        Self::from_vector(layout, DVector::from_vec(amps))
    }

    pub fn from_vector(layout: RegisterLayout, amps: DVector<C64>) -> Result<Self> {
        if amps.len() != layout.total_dim() {
            bail!(
                Dimension,
                "{} amplitudes for a layout of dimension {}",
                amps.len(),
                layout.total_dim()
            );
        }
        let n = vector_norm(&amps);
        if (n - 1.0).abs() > FLAG_TOL {
            bail!(Parameter, "state norm is {n}, not 1");
        }
        Ok(Self { layout, amps })
    }

    /// Rescales the vector to unit norm.
    pub fn normalized(layout: RegisterLayout, amps: DVector<C64>) -> Result<Self> {
        let n = vector_norm(&amps);
        if n == 0.0 || !n.is_finite() {
            bail!(Arithmetic, "cannot normalize a vector of norm {n}");
        }
        Self::from_vector(layout, amps / C64::new(n, 0.0))
    }

    pub fn basis(layout: RegisterLayout, index: usize) -> Result<Self> {
        let d = layout.total_dim();
        if index >= d {
            bail!(Dimension, "basis index {index} out of range {d}");
        }
        let mut v = DVector::zeros(d);
        v[index] = C64::new(1.0, 0.0);
        Ok(Self { layout, amps: v })
    }

    /// Basis state given one digit per register.
    pub fn basis_digits(layout: RegisterLayout, digits: &[usize]) -> Result<Self> {
        if digits.len() != layout.len() || digits.iter().zip(layout.dims()).any(|(&a, d)| a >= d) {
            bail!(Dimension, "digits do not fit the layout");
        }
        let idx = layout.index_of(digits);
        Self::basis(layout, idx)
    }

    /// Equal superposition over all basis states.
    pub fn uniform(layout: RegisterLayout) -> Self {
        let d = layout.total_dim();
        let a = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        Self { layout, amps: DVector::from_element(d, a) }
    }

    pub(crate) fn trusted(layout: RegisterLayout, amps: DVector<C64>) -> Self {
        debug_assert_eq!(amps.len(), layout.total_dim());
        Self { layout, amps }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        vector_norm(&self.amps)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.layout.dims() != other.layout.dims() {
            bail!(Layout, "states live on different layouts");
        }
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Self { layout, amps: self.amps.kronecker(&other.amps) })
    }

    pub fn regroup(&self, layout: RegisterLayout) -> Result<PureState> {
        if layout.total_dim() != self.dim() {
            bail!(Dimension, "regroup changes the total dimension");
        }
        Ok(Self { layout, amps: self.amps.clone() })
    }

    pub fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<PureState> {
        self.regroup(self.layout.relabel(labels)?)
    }

    /// Applies a unitary-flagged operator to the registers it is labelled on.
    pub fn apply(&self, u: &OperatorMatrix) -> Result<PureState> {
        let mut out = self.clone();
        out.apply_mut(u)?;
        Ok(out)
    }

    pub fn apply_mut(&mut self, u: &OperatorMatrix) -> Result<()> {
        if !u.roles().unitary {
            bail!(Parameter, "operator is not flagged unitary");
        }
        let labels = u.layout().labels();
        self.apply_on(&labels, u.entries())
    }

    /// Applies a matrix assumed unitary to the listed registers in order.
    pub fn apply_on<S: AsRef<str>>(&mut self, labels: &[S], u: &DMatrix<C64>) -> Result<()> {
        let pos = self.layout.positions(labels)?;
        apply_local(&self.layout, self.amps.as_mut_slice(), &pos, u)
    }

    /// Applies `us[c]` to `targets` on the branch where `control` holds `c`.
    pub fn apply_controlled<S: AsRef<str>>(
        &mut self,
        control: &str,
        targets: &[S],
        us: &[DMatrix<C64>],
    ) -> Result<()> {
        let c = self.layout.position(control)?;
        let t = self.layout.positions(targets)?;
        apply_controlled(&self.layout, self.amps.as_mut_slice(), c, &t, us)
    }

    /// Unnormalized image under an arbitrary local operator.
    pub fn apply_raw<S: AsRef<str>>(&self, labels: &[S], op: &DMatrix<C64>) -> Result<DVector<C64>> {
        let pos = self.layout.positions(labels)?;
        let mut v = self.amps.clone();
        apply_local(&self.layout, v.as_mut_slice(), &pos, op)?;
        Ok(v)
    }

    pub fn density(&self) -> OperatorMatrix {
        OperatorMatrix::pure(self)
    }

    /// Reduced density operator on `keep`, kept registers in layout order.
    pub fn reduced_density<S: AsRef<str>>(&self, keep: &[S]) -> Result<OperatorMatrix> {
        let mut kp = self.layout.positions(keep)?;
        kp.sort_unstable();
        let psi = self.matrix_cut(&kp);
        let rho = &psi * psi.adjoint();
        Ok(OperatorMatrix::trusted(self.layout.select(&kp)?, rho, Roles::DENSITY))
    }

    /// Amplitudes reshaped to a `dim(cut) x dim(rest)` matrix.
    pub(crate) fn matrix_cut(&self, cut: &[usize]) -> DMatrix<C64> {
        let rest = self.layout.complement(cut);
        let oc = self.layout.offsets(cut);
        let or = self.layout.offsets(&rest);
        DMatrix::from_fn(oc.len(), or.len(), |i, j| self.amps[oc[i] + or[j]])
    }

    pub fn permute_registers<S: AsRef<str>>(&self, order: &[S]) -> Result<PureState> {
        let pos = self.layout.positions(order)?;
        if pos.len() != self.layout.len() {
            bail!(Layout, "permutation must list every register");
        }
        let new_layout = self.layout.select(&pos)?;
        let map = index_map(&self.layout, &new_layout, &pos);
        let mut v = DVector::zeros(self.dim());
        for (i, &m) in map.iter().enumerate() {
            v[m] = self.amps[i];
        }
        Ok(Self { layout: new_layout, amps: v })
    }

    /// Multiplies by a global phase so the first nonzero amplitude is real
    /// and positive.
    pub fn phase_fixed(mut self) -> PureState {
        if let Some(a) = self.amps.iter().find(|a| a.norm() > 1e-300).copied() {
            let ph = a.conj() / a.norm();
            self.amps *= ph;
        }
        self
    }
}
