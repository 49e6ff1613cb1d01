use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::strategy::{NonLocalStrategy, BOB_INPUT, CHARLIE_INPUT};
use crate::error::{bail, Result};
use crate::qcore::{haar_state, OperatorMatrix, PureState, RandomStream, RegisterLayout, Roles, C64, MAX_TOTAL_DIM};
use crate::symsub::sym_moment;

/// Whether the two parties receive the same sample or independent ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    Identical,
    Independent,
}

fn input_layout(db: usize, dc: usize) -> Result<RegisterLayout> {
    RegisterLayout::new([(BOB_INPUT, db), (CHARLIE_INPUT, dc)])
}

/// Averaged joint input for `t` Haar copies per party, on `(B2, C2)` with
/// each party's copies grouped into one register of dimension `d^t`.
pub fn haar_pair_density(d: usize, t: usize, mode: PairMode) -> Result<OperatorMatrix> {
    let dt = match d.checked_pow(t as u32) {
        Some(v) if v.checked_mul(v).is_some_and(|x| x <= MAX_TOTAL_DIM) => v,
        _ => bail!(Dimension, "{d}^(2*{t}) exceeds the dimension cap"),
    };
    let layout = input_layout(dt, dt)?;
    match mode {
        PairMode::Identical => sym_moment(d, 2 * t)?.regroup(layout),
        PairMode::Independent => {
            let one = sym_moment(d, t)?;
            let m = one.entries().kronecker(one.entries());
            Ok(OperatorMatrix::trusted(layout, m, Roles::DENSITY))
        }
    }
}

/// Source of joint inputs on `(B2, C2)`.
pub trait PairSampler: Sync {
    fn input_dims(&self) -> (usize, usize);
    fn sample(&self, mode: PairMode, rng: &mut RandomStream) -> Result<PureState>;
}

/// The two input distributions of an SSI experiment.
#[derive(Debug, Clone)]
pub enum StatePairDistribution {
    /// `t` copies of a Haar state per party.
    Haar { d: usize, t: usize },
    /// Explicit densities for the two hypotheses.
    Explicit { rho0: OperatorMatrix, rho1: OperatorMatrix },
}

impl StatePairDistribution {
    pub fn explicit(rho0: OperatorMatrix, rho1: OperatorMatrix) -> Result<Self> {
        if !rho0.roles().density || !rho1.roles().density {
            bail!(Parameter, "explicit inputs must carry the density flag");
        }
        if rho0.layout() != rho1.layout() || rho0.layout().labels() != [BOB_INPUT, CHARLIE_INPUT] {
            bail!(Layout, "explicit inputs must share a (B2, C2) layout");
        }
        Ok(Self::Explicit { rho0, rho1 })
    }

    /// Averaged densities for the two hypotheses.
    pub fn densities(&self) -> Result<(OperatorMatrix, OperatorMatrix)> {
        match self {
            Self::Haar { d, t } => Ok((
                haar_pair_density(*d, *t, PairMode::Identical)?,
                haar_pair_density(*d, *t, PairMode::Independent)?,
            )),
            Self::Explicit { rho0, rho1 } => Ok((rho0.clone(), rho1.clone())),
        }
    }

    pub fn sampler(&self) -> Result<Box<dyn PairSampler>> {
        match self {
            Self::Haar { d, t } => Ok(Box::new(HaarPairSampler::new(*d, *t)?)),
            Self::Explicit { rho0, rho1 } => Ok(Box::new(SpectralPairSampler::new(rho0, rho1))),
        }
    }
}

/// `psi^{⊗t}` to each party, from one Haar state or two.
#[derive(Debug, Clone)]
pub struct HaarPairSampler {
    d: usize,
    t: usize,
    dt: usize,
}

impl HaarPairSampler {
    pub fn new(d: usize, t: usize) -> Result<Self> {
        let dt = match d.checked_pow(t as u32) {
            Some(v) if v.checked_mul(v).is_some_and(|x| x <= MAX_TOTAL_DIM) => v,
            _ => bail!(Dimension, "{d}^(2*{t}) exceeds the dimension cap"),
        };
        Ok(Self { d, t, dt })
    }

    fn copies(&self, psi: &PureState) -> DVector<C64> {
        let mut v = DVector::from_element(1, C64::new(1.0, 0.0));
        for _ in 0..self.t {
            v = v.kronecker(psi.amplitudes());
        }
        v
    }
}

impl PairSampler for HaarPairSampler {
    fn input_dims(&self) -> (usize, usize) {
        (self.dt, self.dt)
    }

    fn sample(&self, mode: PairMode, rng: &mut RandomStream) -> Result<PureState> {
        let a = haar_state(self.d, rng)?;
        let b = match mode {
            PairMode::Identical => a.clone(),
            PairMode::Independent => haar_state(self.d, rng)?,
        };
        let v = self.copies(&a).kronecker(&self.copies(&b));
        PureState::from_vector(input_layout(self.dt, self.dt)?, v)
    }
}

/// Samples eigenvectors of explicit densities with their eigenvalue weights.
#[derive(Debug, Clone)]
pub struct SpectralPairSampler {
    layout: RegisterLayout,
    spectra: [(Vec<f64>, DMatrix<C64>); 2],
}

impl SpectralPairSampler {
    pub fn new(rho0: &OperatorMatrix, rho1: &OperatorMatrix) -> Self {
        let clip = |(v, m): (Vec<f64>, DMatrix<C64>)| (v.into_iter().map(|x| x.max(0.0)).collect(), m);
        Self { layout: rho0.layout().clone(), spectra: [clip(rho0.eigh()), clip(rho1.eigh())] }
    }
}

impl PairSampler for SpectralPairSampler {
    fn input_dims(&self) -> (usize, usize) {
        let d = self.layout.dims();
        (d[0], d[1])
    }

    fn sample(&self, mode: PairMode, rng: &mut RandomStream) -> Result<PureState> {
        let (w, v) = &self.spectra[usize::from(mode == PairMode::Independent)];
        let k = rng.categorical(w);
        PureState::normalized(self.layout.clone(), v.column(k).into_owned())
    }
}

/// Monte-Carlo estimate of `Pr[both fire | identical] - Pr[both fire |
/// independent]` with its binomial standard error.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: usize,
    pub identical_rate: f64,
    pub independent_rate: f64,
}

/// Each trial samples one identical and one independent input, draws the
/// Born outcome of the joint measurement for each, and records whether both
/// projectors fired. Trial `i` uses the child stream `rng.split(i)`.
pub fn advantage_mc(
    strategy: &NonLocalStrategy,
    sampler: &dyn PairSampler,
    trials: usize,
    rng: &RandomStream,
) -> Result<McEstimate> {
    if trials == 0 {
        bail!(Parameter, "advantage_mc needs at least one trial");
    }
    if sampler.input_dims() != strategy.input_dims() {
        bail!(Layout, "sampler and strategy disagree on input dimensions");
    }
    let hits: Vec<(u8, u8)> = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<(u8, u8)> {
            let mut r = rng.split(i as u64);
            let mut one = |mode| -> Result<u8> {
                let x = sampler.sample(mode, &mut r)?;
                let p = strategy.acceptance_probability_pure(&x)?;
                Ok(u8::from(r.uniform() < p))
            };
            Ok((one(PairMode::Identical)?, one(PairMode::Independent)?))
        })
        .collect::<Result<_>>()?;
    let n = trials as f64;
    let p0 = hits.iter().map(|h| h.0 as f64).sum::<f64>() / n;
    let p1 = hits.iter().map(|h| h.1 as f64).sum::<f64>() / n;
    Ok(McEstimate {
        estimate: p0 - p1,
        stderr: ((p0 * (1.0 - p0) + p1 * (1.0 - p1)) / n).sqrt(),
        trials,
        identical_rate: p0,
        independent_rate: p1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::frobenius;
    use crate::symsub::sym_projector;

    #[test]
    fn single_copy_densities() {
        let id = haar_pair_density(2, 1, PairMode::Identical).unwrap();
        let expect = sym_projector(2, 2).unwrap().scale(1.0 / 3.0);
        assert!((id.entries() - expect.entries()).norm() < 1e-15);
        let ind = haar_pair_density(2, 1, PairMode::Independent).unwrap();
        assert!((ind.entries() - DMatrix::<C64>::identity(4, 4) * C64::new(0.25, 0.0)).norm() < 1e-15);
        for d in [id, ind] {
            assert!((d.trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sampler_moments_match_density() {
        let s = HaarPairSampler::new(2, 1).unwrap();
        let mut rng = RandomStream::new(5, 0);
        let n = 40_000;
        for mode in [PairMode::Identical, PairMode::Independent] {
            let mut acc = DMatrix::<C64>::zeros(4, 4);
            for _ in 0..n {
                let v = s.sample(mode, &mut rng).unwrap().into_amplitudes();
                acc += &v * v.adjoint();
            }
            let emp = OperatorMatrix::new(input_layout(2, 2).unwrap(), acc / C64::new(n as f64, 0.0)).unwrap();
            let exact = haar_pair_density(2, 1, mode).unwrap();
            assert!(frobenius(&emp.sub(&exact).unwrap()) < 0.02);
        }
    }

    #[test]
    fn cap_enforced() {
        assert!(haar_pair_density(16, 4, PairMode::Identical).is_err());
    }
}
