use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bits::{check_bit, rate_stderr};
use crate::error::{bail, Result};
use crate::qcore::{
    haar_state, swap_test_pass_probability, trace_distance, OperatorMatrix, PureState, RandomStream,
    RegisterLayout, MAX_TOTAL_DIM,
};
use crate::symsub::sym_moment;

/// Label of a single share copy.
pub const SHARE_REGISTER: &str = "S";

/// `n_parties` groups of `t` copies of `d`-dimensional pure states.
#[derive(Debug, Clone)]
pub struct ShareBundle {
    pub n_parties: usize,
    pub t: usize,
    pub d: usize,
    pub m: u8,
    pub shares: Vec<Vec<PureState>>,
}

impl ShareBundle {
    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if i == j {
            bail!(Parameter, "reconstruction needs two distinct parties");
        }
        if i >= self.n_parties || j >= self.n_parties {
            bail!(Parameter, "party index out of range for {} parties", self.n_parties);
        }
        Ok(())
    }
}

fn check_params(n_parties: usize, t: usize, d: usize) -> Result<()> {
    if n_parties < 2 {
        bail!(Parameter, "need at least two parties");
    }
    if t == 0 {
        bail!(Parameter, "need at least one copy per party");
    }
    if d < 2 || !d.is_power_of_two() {
        bail!(Parameter, "share dimension must be a power of two, got {d}");
    }
    if d * d > MAX_TOTAL_DIM {
        bail!(Dimension, "d = {d} exceeds the SWAP-test dimension cap");
    }
    Ok(())
}

/// Number of passing SWAP tests at which reconstruction outputs 0.
pub fn rec_threshold(t: usize) -> usize {
    3 * t / 4
}

/// `m = 0`: all `n t` copies are one Haar state. `m = 1`: each party holds
/// `t` copies of its own Haar state.
pub fn ss_share(n_parties: usize, t: usize, d: usize, m: u8, rng: &mut RandomStream) -> Result<ShareBundle> {
    check_params(n_parties, t, d)?;
    check_bit(m, "message")?;
    let layout = RegisterLayout::single(SHARE_REGISTER, d)?;
    let mut fresh = || -> Result<PureState> { haar_state(d, rng)?.regroup(layout.clone()) };
    let shares = if m == 0 {
        let psi = fresh()?;
        vec![vec![psi; t]; n_parties]
    } else {
        (0..n_parties).map(|_| Ok(vec![fresh()?; t])).collect::<Result<Vec<_>>>()?
    };
    Ok(ShareBundle { n_parties, t, d, m, shares })
}

fn pair_pass_probabilities(bundle: &ShareBundle, i: usize, j: usize) -> Result<Vec<f64>> {
    bundle.check_pair(i, j)?;
    (0..bundle.t)
        .map(|c| {
            let a = bundle.shares[i][c].relabel(&["A"])?;
            let b = bundle.shares[j][c].relabel(&["B"])?;
            swap_test_pass_probability(&a.tensor(&b)?, &["A"], &["B"])
        })
        .collect()
}

/// SWAP tests between matched copies of parties `i` and `j`; outputs 0 if at
/// least `floor(3t/4)` pass.
pub fn ss_rec(bundle: &ShareBundle, i: usize, j: usize, rng: &mut RandomStream) -> Result<u8> {
    let passes = pair_pass_probabilities(bundle, i, j)?
        .into_iter()
        .filter(|&p| rng.uniform() < p)
        .count();
    Ok(u8::from(passes < rec_threshold(bundle.t)))
}

/// Exact probability that `ss_rec` outputs 0 on this bundle.
pub fn ss_rec_zero_probability(bundle: &ShareBundle, i: usize, j: usize) -> Result<f64> {
    let ps = pair_pass_probabilities(bundle, i, j)?;
    let mut dist = vec![1.0];
    for p in ps {
        let mut next = vec![0.0; dist.len() + 1];
        for (k, &w) in dist.iter().enumerate() {
            next[k] += w * (1.0 - p);
            next[k + 1] += w * p;
        }
        dist = next;
    }
    Ok(dist[rec_threshold(bundle.t)..].iter().sum())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrectnessReport {
    pub n_parties: usize,
    pub t: usize,
    pub d: usize,
    pub m: u8,
    pub trials: usize,
    pub errors: usize,
    pub error_rate: f64,
    pub stderr: f64,
    pub exact_error_rate: f64,
}

/// Reconstruction error rate between parties 0 and 1. `exact_error_rate`
/// averages the exact per-bundle error over the sampled bundles.
pub fn ss_correctness_experiment(
    n_parties: usize,
    t: usize,
    d: usize,
    m: u8,
    trials: usize,
    rng: &RandomStream,
) -> Result<CorrectnessReport> {
    if trials == 0 {
        bail!(Parameter, "need at least one trial");
    }
    let out = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<(bool, f64)> {
            let mut r = rng.split(i as u64);
            let b = ss_share(n_parties, t, d, m, &mut r)?;
            let p0 = ss_rec_zero_probability(&b, 0, 1)?;
            let exact = if m == 0 { 1.0 - p0 } else { p0 };
            Ok((ss_rec(&b, 0, 1, &mut r)? != m, exact))
        })
        .collect::<Result<Vec<_>>>()?;
    let errors = out.iter().filter(|o| o.0).count();
    let (error_rate, stderr) = rate_stderr(errors, trials);
    let exact_error_rate = out.iter().map(|o| o.1).sum::<f64>() / trials as f64;
    Ok(CorrectnessReport { n_parties, t, d, m, trials, errors, error_rate, stderr, exact_error_rate })
}

/// Local classical leakage applied by every party to its own copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakFamily {
    /// `ell` zero bits.
    Constant,
    /// Most significant qubit of the first copy; `ell = 1`.
    FirstQubit,
    /// Most significant qubit of each copy; `ell = t`.
    FirstQubitEachCopy,
    /// SWAP test on copies `(2j, 2j+1)`, bit 1 on failure; `ell = t / 2`.
    SwapOwnCopies,
}

impl LeakFamily {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "constant" => Self::Constant,
            "first_qubit" => Self::FirstQubit,
            "first_qubit_each_copy" => Self::FirstQubitEachCopy,
            "swap_own_copies" => Self::SwapOwnCopies,
            _ => bail!(Parameter, "unknown leak family {name:?}"),
        })
    }

    fn check(self, t: usize, ell: usize) -> Result<()> {
        let expected = match self {
            Self::Constant => {
                if ell == 0 || ell > 63 {
                    bail!(Parameter, "constant leak needs 1 <= ell <= 63");
                }
                ell
            }
            Self::FirstQubit => 1,
            Self::FirstQubitEachCopy => t,
            Self::SwapOwnCopies => {
                if t < 2 || t % 2 == 1 {
                    bail!(Parameter, "swap_own_copies needs an even t >= 2");
                }
                t / 2
            }
        };
        if ell != expected {
            bail!(Parameter, "{self:?} leaks {expected} bits, not ell = {ell}");
        }
        Ok(())
    }

    fn leak(self, copies: &[PureState], rng: &mut RandomStream) -> Result<u64> {
        let first = |s: &PureState, rng: &mut RandomStream| -> u64 {
            let half = s.dim() / 2;
            let p1: f64 = s.amplitudes().iter().skip(half).map(|a| a.norm_sqr()).sum();
            u64::from(rng.uniform() < p1)
        };
        Ok(match self {
            Self::Constant => 0,
            Self::FirstQubit => first(&copies[0], rng),
            Self::FirstQubitEachCopy => copies.iter().fold(0, |acc, c| (acc << 1) | first(c, rng)),
            Self::SwapOwnCopies => {
                let mut acc = 0;
                for pair in copies.chunks(2) {
                    let a = pair[0].relabel(&["A"])?;
                    let b = pair[1].relabel(&["B"])?;
                    let p = swap_test_pass_probability(&a.tensor(&b)?, &["A"], &["B"])?;
                    acc = (acc << 1) | u64::from(rng.uniform() >= p);
                }
                acc
            }
        })
    }
}

/// Test applied to the joint leakage transcript.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distinguisher {
    /// Accept when every leaked string is zero.
    AllZero,
    /// Accept when all parties leak the same string.
    AllEqual,
}

impl Distinguisher {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "all_zero" => Self::AllZero,
            "all_equal" => Self::AllEqual,
            _ => bail!(Parameter, "unknown distinguisher {name:?}"),
        })
    }

    fn accept(self, leaks: &[u64]) -> bool {
        match self {
            Self::AllZero => leaks.iter().all(|&l| l == 0),
            Self::AllEqual => leaks.windows(2).all(|w| w[0] == w[1]),
        }
    }
}

/// Constant in front of the asymptotic leakage bound.
pub const LEAKAGE_SAFETY: f64 = 1.0;
/// Security parameter used when logging the prescribed dimension.
pub const LEAKAGE_LAMBDA: usize = 128;

/// `2^{2 n ell} n^3 t^2 / sqrt(d)`.
pub fn leakage_bound(n_parties: usize, t: usize, d: usize, ell: usize) -> f64 {
    let n = n_parties as f64;
    2f64.powf(2.0 * n * ell as f64) * n.powi(3) * (t as f64).powi(2) / (d as f64).sqrt()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeakageReport {
    pub n_parties: usize,
    pub t: usize,
    pub d: usize,
    pub ell: usize,
    pub leak: LeakFamily,
    pub distinguisher: Distinguisher,
    pub trials: usize,
    pub accept_m0: f64,
    pub accept_m1: f64,
    pub advantage: f64,
    pub stderr: f64,
    pub exact_advantage: Option<f64>,
    pub bound: f64,
    pub safety: f64,
    pub ratio: f64,
    pub within_bound: bool,
    pub prescribed_log2_d: usize,
}

/// Closed form for the cases where one is known.
pub fn leakage_exact(n_parties: usize, t: usize, d: usize, leak: LeakFamily, dist: Distinguisher) -> Option<f64> {
    match (leak, dist) {
        (LeakFamily::Constant, _) => Some(0.0),
        (LeakFamily::SwapOwnCopies, _) => Some(0.0),
        (LeakFamily::FirstQubit, _) if n_parties == 2 => {
            let _ = t;
            Some(1.0 / (4.0 * (d as f64 + 1.0)) * if dist == Distinguisher::AllEqual { 2.0 } else { 1.0 })
        }
        _ => None,
    }
}

/// `|Pr[accept | m=0] - Pr[accept | m=1]|` over `trials` bundles per
/// message. Trial `i` of message `m` uses `rng.split(2 i + m)`.
#[allow(clippy::too_many_arguments)]
pub fn ss_leakage_experiment(
    n_parties: usize,
    t: usize,
    d: usize,
    ell: usize,
    leak: LeakFamily,
    distinguisher: Distinguisher,
    trials: usize,
    rng: &RandomStream,
) -> Result<LeakageReport> {
    check_params(n_parties, t, d)?;
    leak.check(t, ell)?;
    if trials == 0 {
        bail!(Parameter, "need at least one trial");
    }
    let accept = |m: u8| -> Result<usize> {
        let hits = (0..trials)
            .into_par_iter()
            .map(|i| -> Result<bool> {
                let mut r = rng.split(2 * i as u64 + m as u64);
                let b = ss_share(n_parties, t, d, m, &mut r)?;
                let leaks = b.shares.iter().map(|s| leak.leak(s, &mut r)).collect::<Result<Vec<_>>>()?;
                Ok(distinguisher.accept(&leaks))
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(hits.iter().filter(|&&h| h).count())
    };
    let (a0, s0) = rate_stderr(accept(0)?, trials);
    let (a1, s1) = rate_stderr(accept(1)?, trials);
    let advantage = (a0 - a1).abs();
    let stderr = (s0 * s0 + s1 * s1).sqrt();
    let bound = leakage_bound(n_parties, t, d, ell);
    Ok(LeakageReport {
        n_parties,
        t,
        d,
        ell,
        leak,
        distinguisher,
        trials,
        accept_m0: a0,
        accept_m1: a1,
        advantage,
        stderr,
        exact_advantage: leakage_exact(n_parties, t, d, leak, distinguisher),
        bound,
        safety: LEAKAGE_SAFETY,
        ratio: advantage / bound,
        within_bound: advantage <= bound * LEAKAGE_SAFETY + 3.0 * stderr,
        prescribed_log2_d: 4 * n_parties * ell + LEAKAGE_LAMBDA,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PerfectSecrecyReport {
    pub n_parties: usize,
    pub t: usize,
    pub d: usize,
    pub method: String,
    pub marginal_m0: OperatorMatrix,
    pub marginal_m1: OperatorMatrix,
    pub trace_distance: f64,
}

/// Single-party marginals of the two share distributions. The `m = 1`
/// marginal is the `t`-th Haar moment; the `m = 0` marginal is the partial
/// trace of the `n t`-th moment when that fits under the cap, and the `t`-th
/// moment otherwise.
pub fn perfect_secrecy_check(n_parties: usize, t: usize, d: usize) -> Result<PerfectSecrecyReport> {
    if n_parties < 1 || t == 0 || d < 2 {
        bail!(Parameter, "need n_parties >= 1, t >= 1, d >= 2");
    }
    let m1 = sym_moment(d, t)?;
    let total = t * n_parties;
    let fits = d.checked_pow(total as u32).is_some_and(|v| v <= MAX_TOTAL_DIM);
    let (m0, method) = if fits {
        let joint = sym_moment(d, total)?;
        let keep: Vec<String> = joint.layout().labels()[..t].iter().map(|s| s.to_string()).collect();
        (joint.partial_trace(&keep)?, "partial_trace")
    } else {
        (m1.clone(), "moment_identity")
    };
    let trace_distance = trace_distance(&m0, &m1)?;
    Ok(PerfectSecrecyReport {
        n_parties,
        t,
        d,
        method: method.to_string(),
        marginal_m0: m0,
        marginal_m1: m1,
        trace_distance,
    })
}
