use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pairs::{PairMode, PairSampler};
use super::strategy::{BOB_INPUT, CHARLIE_INPUT};
use crate::error::{bail, Result};
use crate::qcore::{haar_state, haar_unitary, trace_distance, OperatorMatrix, PureState, RandomStream, RegisterLayout, C64};
use crate::symsub::{sym_dim, sym_projector};

/// Distribution over pure states on `C^d`.
pub trait StateDistribution: Sync {
    fn dim(&self) -> usize;
    fn sample(&self, rng: &mut RandomStream) -> Result<PureState>;
    /// `E |<psi|psi'>|^2` over independent draws, when known in closed form.
    fn mean_overlap(&self) -> Option<f64> {
        None
    }
    /// `Pr[|<psi|psi'>|^2 > delta]`, when known in closed form.
    fn overlap_tail(&self, _delta: f64) -> Option<f64> {
        None
    }
}

/// Always the same state.
#[derive(Debug, Clone)]
pub struct PointMass(pub PureState);

impl StateDistribution for PointMass {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn sample(&self, _rng: &mut RandomStream) -> Result<PureState> {
        Ok(self.0.clone())
    }
    fn mean_overlap(&self) -> Option<f64> {
        Some(1.0)
    }
    fn overlap_tail(&self, delta: f64) -> Option<f64> {
        Some(if delta < 1.0 { 1.0 } else { 0.0 })
    }
}

/// Uniform computational basis state.
#[derive(Debug, Clone, Copy)]
pub struct UniformBasis(pub usize);

impl StateDistribution for UniformBasis {
    fn dim(&self) -> usize {
        self.0
    }
    fn sample(&self, rng: &mut RandomStream) -> Result<PureState> {
        PureState::basis(RegisterLayout::single("psi", self.0)?, rng.below(self.0))
    }
    fn mean_overlap(&self) -> Option<f64> {
        Some(1.0 / self.0 as f64)
    }
    fn overlap_tail(&self, delta: f64) -> Option<f64> {
        Some(if delta < 1.0 { 1.0 / self.0 as f64 } else { 0.0 })
    }
}

/// Haar-random state.
#[derive(Debug, Clone, Copy)]
pub struct HaarStates(pub usize);

impl StateDistribution for HaarStates {
    fn dim(&self) -> usize {
        self.0
    }
    fn sample(&self, rng: &mut RandomStream) -> Result<PureState> {
        haar_state(self.0, rng)
    }
    fn mean_overlap(&self) -> Option<f64> {
        Some(1.0 / self.0 as f64)
    }
    fn overlap_tail(&self, delta: f64) -> Option<f64> {
        Some((1.0 - delta.clamp(0.0, 1.0)).powi(self.0 as i32 - 1))
    }
}

/// Wraps a base distribution: one Haar unitary, shared by both parties, is
/// applied to each party's sample. Identical mode hands both parties the
/// same base sample; independent mode draws two.
pub struct HaarTwirl<D> {
    base: D,
    layout: RegisterLayout,
}

pub fn haar_twirl_reduction<D: StateDistribution>(base: D) -> Result<HaarTwirl<D>> {
    let d = base.dim();
    let layout = RegisterLayout::new([(BOB_INPUT, d), (CHARLIE_INPUT, d)])?;
    Ok(HaarTwirl { base, layout })
}

impl<D: StateDistribution> HaarTwirl<D> {
    pub fn base(&self) -> &D {
        &self.base
    }
}

impl<D: StateDistribution> PairSampler for HaarTwirl<D> {
    fn input_dims(&self) -> (usize, usize) {
        let d = self.base.dim();
        (d, d)
    }

    fn sample(&self, mode: PairMode, rng: &mut RandomStream) -> Result<PureState> {
        let d = self.base.dim();
        let u = haar_unitary(RegisterLayout::single("u", d)?, rng);
        let x = self.base.sample(rng)?;
        let y = match mode {
            PairMode::Identical => x.clone(),
            PairMode::Independent => self.base.sample(rng)?,
        };
        let ux = u.entries() * x.amplitudes();
        let uy = u.entries() * y.amplitudes();
        let v = DVector::from_fn(d * d, |k, _| ux[k / d] * uy[k % d]);
        PureState::normalized(self.layout.clone(), v)
    }
}

/// Empirical overlap statistics of a base distribution.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OverlapStats {
    pub delta: f64,
    pub mu: f64,
    pub mu_stderr: f64,
    pub mean_overlap: f64,
    pub mean_stderr: f64,
    pub samples: usize,
}

/// Estimates `mu = Pr[|<psi|psi'>|^2 > delta]` and `E |<psi|psi'>|^2` from
/// `samples` independent pairs; pair `i` uses `rng.split(i)`.
pub fn overlap_stats<D: StateDistribution>(
    base: &D,
    delta: f64,
    samples: usize,
    rng: &RandomStream,
) -> Result<OverlapStats> {
    if samples < 2 {
        bail!(Parameter, "need at least two samples");
    }
    let xs: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut r = rng.split(i as u64);
            let a = base.sample(&mut r)?;
            let b = base.sample(&mut r)?;
            a.fidelity(&b)
        })
        .collect::<Result<_>>()?;
    let n = samples as f64;
    let mu = xs.iter().filter(|&&x| x > delta).count() as f64 / n;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(OverlapStats {
        delta,
        mu,
        mu_stderr: (mu * (1.0 - mu) / n).sqrt(),
        mean_overlap: mean,
        mean_stderr: (var / n).sqrt(),
        samples,
    })
}

/// Exact twirled independent-mode density for a base distribution with
/// `E |<psi|psi'>|^2 = mean_overlap`: weight `(1 + x) / 2` on the normalized
/// symmetric projector and the rest on the antisymmetric one.
pub fn twirled_independent_density(d: usize, mean_overlap: f64) -> Result<OperatorMatrix> {
    let layout = RegisterLayout::new([(BOB_INPUT, d), (CHARLIE_INPUT, d)])?;
    let pi = sym_projector(d, 2)?.regroup(layout.clone())?;
    let ds = sym_dim(d as u64, 2)? as f64;
    let da = (d * d) as f64 - ds;
    let ps = (1.0 + mean_overlap) / 2.0;
    let id = nalgebra::DMatrix::<C64>::identity(d * d, d * d);
    let sym = pi.entries() * C64::new(ps / ds, 0.0);
    let anti = if da > 0.0 { (&id - pi.entries()) * C64::new((1.0 - ps) / da, 0.0) } else { id * C64::new(0.0, 0.0) };
    OperatorMatrix::density(layout, sym + anti)
}

/// Outcome of the Haar-twirl reduction check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwirlReport {
    pub d: usize,
    pub stats: OverlapStats,
    /// Closed-form `mu`, when the base distribution provides one.
    pub mu_exact: Option<f64>,
    pub mean_overlap_used: f64,
    /// Trace distance of the twirled independent density to `I / d^2`.
    pub trace_distance_independent: f64,
    /// `|E x - 1/d| / 2`.
    pub trace_distance_formula: f64,
    /// `mu + delta + 1/d`.
    pub bound: f64,
    pub within_bound: bool,
}

/// Measures the base distribution's overlap statistics and compares the
/// twirled densities with their Haar targets. The exact mean overlap is used
/// when available, the empirical one otherwise.
pub fn twirl_report<D: StateDistribution>(
    base: &D,
    delta: f64,
    samples: usize,
    rng: &RandomStream,
) -> Result<TwirlReport> {
    let d = base.dim();
    let stats = overlap_stats(base, delta, samples, rng)?;
    let x = base.mean_overlap().unwrap_or(stats.mean_overlap);
    let ind = twirled_independent_density(d, x)?;
    let mixed = OperatorMatrix::maximally_mixed(ind.layout().clone());
    let tdi = trace_distance(&ind, &mixed)?;
    let bound = stats.mu + delta + 1.0 / d as f64;
    Ok(TwirlReport {
        d,
        stats,
        mu_exact: base.overlap_tail(delta),
        mean_overlap_used: x,
        trace_distance_independent: tdi,
        trace_distance_formula: (x - 1.0 / d as f64).abs() / 2.0,
        bound,
        within_bound: tdi <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ssi::haar_pair_density;
    use nalgebra::DMatrix;

    fn empirical_density<S: PairSampler>(s: &S, mode: PairMode, n: usize, seed: u64) -> DMatrix<C64> {
        let (d, _) = s.input_dims();
        let mut acc = DMatrix::<C64>::zeros(d * d, d * d);
        let mut rng = RandomStream::new(seed, 0);
        for _ in 0..n {
            let v = s.sample(mode, &mut rng).unwrap().into_amplitudes();
            acc += &v * v.adjoint();
        }
        acc / C64::new(n as f64, 0.0)
    }

    #[test]
    fn point_mass_identical_becomes_haar() {
        let base = PointMass(PureState::basis(RegisterLayout::single("psi", 2).unwrap(), 0).unwrap());
        let w = haar_twirl_reduction(base).unwrap();
        let emp = empirical_density(&w, PairMode::Identical, 20000, 5);
        let target = haar_pair_density(2, 1, PairMode::Identical).unwrap();
        assert!((emp - target.entries()).norm() < 0.03);
    }

    #[test]
    fn independent_density_matches_closed_form() {
        let w = haar_twirl_reduction(UniformBasis(2)).unwrap();
        let emp = empirical_density(&w, PairMode::Independent, 20000, 6);
        let exact = twirled_independent_density(2, 0.5).unwrap();
        assert!((emp - exact.entries()).norm() < 0.03);
    }

    #[test]
    fn uniform_basis_d8() {
        let rep = twirl_report(&UniformBasis(8), 0.01, 20000, &RandomStream::new(7, 0)).unwrap();
        assert!(rep.stats.mu <= 0.125 + 3.0 * rep.stats.mu_stderr + 1e-12);
        assert!(rep.trace_distance_independent < 1e-12);
        assert!(rep.within_bound);
        assert!((rep.trace_distance_independent - rep.trace_distance_formula).abs() < 1e-12);
    }

    #[test]
    fn point_mass_distance_formula() {
        let base = PointMass(PureState::basis(RegisterLayout::single("psi", 4).unwrap(), 1).unwrap());
        let rep = twirl_report(&base, 0.5, 100, &RandomStream::new(8, 0)).unwrap();
        assert!((rep.trace_distance_independent - 0.375).abs() < 1e-12);
        assert!(rep.within_bound);
    }
}
