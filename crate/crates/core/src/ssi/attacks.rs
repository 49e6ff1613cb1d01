use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pairs::{haar_pair_density, PairMode};
use super::strategy::{
    advantage_exact, advantage_signed, NonLocalStrategy, BOB_ANCILLA, BOB_INPUT, CHARLIE_ANCILLA, CHARLIE_INPUT,
};
use crate::error::{bail, Result};
use crate::qcore::{OperatorMatrix, PureState, RandomStream, RegisterLayout, Roles, C64};

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Both parties measure the most significant qubit of their input and
/// accept on outcome 0.
pub fn attack_first_qubit(d: usize) -> Result<NonLocalStrategy> {
    if d < 2 || !d.is_power_of_two() {
        bail!(Parameter, "first-qubit attack needs d a power of two, got {d}");
    }
    let m = DMatrix::from_fn(d, d, |i, j| if i == j && i < d / 2 { one() } else { C64::new(0.0, 0.0) });
    NonLocalStrategy::unentangled(m.clone(), m)
}

/// `1 / (4 (d + 1))`.
pub fn first_qubit_advantage_formula(d: usize) -> f64 {
    1.0 / (4.0 * (d as f64 + 1.0))
}

/// `(d + 2) / (4 (d + 1))`, the joint (0, 0) probability on identical inputs.
pub fn first_qubit_identical_formula(d: usize) -> f64 {
    (d as f64 + 2.0) / (4.0 * (d as f64 + 1.0))
}

/// Exact advantage of the first-qubit attack on `t = 1` Haar inputs.
pub fn first_qubit_advantage(d: usize) -> Result<f64> {
    let s = attack_first_qubit(d)?;
    advantage_exact(
        &s,
        &haar_pair_density(d, 1, PairMode::Identical)?,
        &haar_pair_density(d, 1, PairMode::Independent)?,
    )
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Bell state on `(B2, C2)`.
pub fn bell_state(kind: BellState) -> Result<PureState> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |v: f64| C64::new(v * h, 0.0);
    let amps = match kind {
        BellState::PhiPlus => [c(1.0), c(0.0), c(0.0), c(1.0)],
        BellState::PhiMinus => [c(1.0), c(0.0), c(0.0), c(-1.0)],
        BellState::PsiPlus => [c(0.0), c(1.0), c(1.0), c(0.0)],
        BellState::PsiMinus => [c(0.0), c(1.0), c(-1.0), c(0.0)],
    };
    PureState::new(RegisterLayout::new([(BOB_INPUT, 2), (CHARLIE_INPUT, 2)])?, amps.to_vec())
}

/// Both parties project onto `|+>`.
pub fn plus_plus_strategy() -> Result<NonLocalStrategy> {
    let p = DMatrix::from_element(2, 2, C64::new(0.5, 0.0));
    NonLocalStrategy::unentangled(p.clone(), p)
}

/// Distribution over `n`-bit strings, indexed most significant bit first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassicalDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl ClassicalDistribution {
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        if n == 0 || n > 6 {
            bail!(Parameter, "classical attack supports 1 <= n <= 6");
        }
        if probs.len() != 1 << n || probs.iter().any(|&p| p < 0.0) {
            bail!(Parameter, "need {} nonnegative probabilities", 1 << n);
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            bail!(Parameter, "probabilities sum to {total}");
        }
        Ok(Self { n, probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(n, vec![1.0 / (1usize << n) as f64; 1 << n])
    }

    pub fn point_mass(n: usize, y: usize) -> Result<Self> {
        let mut p = vec![0.0; 1 << n];
        if y >= p.len() {
            bail!(Parameter, "string {y} out of range");
        }
        p[y] = 1.0;
        Self::new(n, p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability that two independent samples differ.
    pub fn collision_complement(&self) -> f64 {
        1.0 - self.probs.iter().map(|p| p * p).sum::<f64>()
    }

    fn bit(&self, y: usize, i: usize) -> usize {
        (y >> (self.n - 1 - i)) & 1
    }

    fn sample(&self, rng: &mut RandomStream) -> usize {
        rng.categorical(&self.probs)
    }
}

/// Exact and sampled behaviour of the shared-randomness attack.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassicalAttackReport {
    pub n: usize,
    pub collision_complement: f64,
    /// `c / (2n)`.
    pub bound: f64,
    pub p01_identical: f64,
    pub p01_independent: f64,
    pub exact_gap: f64,
    pub mc_gap: f64,
    pub mc_stderr: f64,
    pub trials: usize,
}

/// Shared index `i` and bit `b`; Bob accepts when `y_B[i] ^ b = 0`, Charlie
/// when `y_C[i] ^ b = 1`. The shared randomness is the maximally correlated
/// state on `(i, b)`; both measurements are diagonal on it, so it acts as a
/// classically correlated resource.
pub fn classical_attack_strategy(dist: &ClassicalDistribution) -> Result<NonLocalStrategy> {
    let n = dist.n;
    let anc = 2 * n;
    let dy = 1usize << n;
    let mut v = DVector::zeros(anc * anc);
    for k in 0..anc {
        v[k * anc + k] = one();
    }
    let shared = PureState::normalized(RegisterLayout::new([(BOB_ANCILLA, anc), (CHARLIE_ANCILLA, anc)])?, v)?;
    let proj = |target: usize| {
        DMatrix::from_fn(anc * dy, anc * dy, |r, c| {
            let (k, y) = (r / dy, r % dy);
            let (i, b) = (k / 2, k % 2);
            if r == c && (dist.bit(y, i) ^ b) == target {
                one()
            } else {
                C64::new(0.0, 0.0)
            }
        })
    };
    let bob = OperatorMatrix::trusted(RegisterLayout::new([(BOB_ANCILLA, anc), (BOB_INPUT, dy)])?, proj(0), Roles::PROJECTOR);
    let charlie =
        OperatorMatrix::trusted(RegisterLayout::new([(CHARLIE_ANCILLA, anc), (CHARLIE_INPUT, dy)])?, proj(1), Roles::PROJECTOR);
    NonLocalStrategy::new(shared, bob, charlie)
}

/// Input densities `(sum_y p(y) |yy><yy|, rho_p ⊗ rho_p)`.
pub fn classical_pair_densities(dist: &ClassicalDistribution) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let dy = 1usize << dist.n;
    let layout = RegisterLayout::new([(BOB_INPUT, dy), (CHARLIE_INPUT, dy)])?;
    let mut id = DMatrix::zeros(dy * dy, dy * dy);
    let mut ind = DMatrix::zeros(dy * dy, dy * dy);
    for a in 0..dy {
        id[(a * dy + a, a * dy + a)] = C64::new(dist.probs[a], 0.0);
        for b in 0..dy {
            ind[(a * dy + b, a * dy + b)] = C64::new(dist.probs[a] * dist.probs[b], 0.0);
        }
    }
    Ok((
        OperatorMatrix::density(layout.clone(), id)?,
        OperatorMatrix::density(layout, ind)?,
    ))
}

/// Runs the shared-randomness attack exactly and by sampling the
/// classical protocol.
pub fn attack_classical(
    dist: &ClassicalDistribution,
    trials: usize,
    rng: &RandomStream,
) -> Result<(NonLocalStrategy, ClassicalAttackReport)> {
    let strategy = classical_attack_strategy(dist)?;
    let (id, ind) = classical_pair_densities(dist)?;
    let p01_identical = strategy.acceptance_probability(&id)?;
    let p01_independent = strategy.acceptance_probability(&ind)?;
    let exact_gap = -advantage_signed(&strategy, &id, &ind)?;
    let n = dist.n;
    let outcomes: Vec<(u8, u8)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut r = rng.split(k as u64);
            let run = |r: &mut RandomStream, yb: usize, yc: usize| {
                let i = r.below(n);
                let b = r.bit() as usize;
                u8::from(dist.bit(yb, i) ^ b == 0 && dist.bit(yc, i) ^ b == 1)
            };
            let y = dist.sample(&mut r);
            let same = run(&mut r, y, y);
            let (yb, yc) = (dist.sample(&mut r), dist.sample(&mut r));
            (same, run(&mut r, yb, yc))
        })
        .collect();
    let t = trials.max(1) as f64;
    let q0 = outcomes.iter().map(|o| o.0 as f64).sum::<f64>() / t;
    let q1 = outcomes.iter().map(|o| o.1 as f64).sum::<f64>() / t;
    let c = dist.collision_complement();
    let report = ClassicalAttackReport {
        n,
        collision_complement: c,
        bound: c / (2.0 * n as f64),
        p01_identical,
        p01_independent,
        exact_gap,
        mc_gap: q1 - q0,
        mc_stderr: ((q0 * (1.0 - q0) + q1 * (1.0 - q1)) / t).sqrt(),
        trials,
    };
    Ok((strategy, report))
}
