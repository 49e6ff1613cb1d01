use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use super::bits::{bits_to_index, check_bits, random_bits, rate_stderr};
use crate::error::{bail, Result};
use crate::qcore::{measure_computational, PureState, RandomStream, RegisterLayout, C64};
use crate::ssi::WIESNER_C;

/// Register prefix of weak-UE ciphertext qubits.
pub const WIESNER_PREFIX: &str = "w";

/// Conjugate-coding basis choices, one per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakUEKey {
    pub bases: Vec<u8>,
}

impl WeakUEKey {
    pub fn new(bases: Vec<u8>) -> Result<Self> {
        check_bits(&bases, "basis string")?;
        Ok(Self { bases })
    }

    pub fn n(&self) -> usize {
        self.bases.len()
    }

    pub(crate) fn hadamard_mask(&self) -> usize {
        bits_to_index(&self.bases)
    }
}

pub fn wiesner_layout(n: usize) -> Result<RegisterLayout> {
    RegisterLayout::qubits(WIESNER_PREFIX, n)
}

pub(crate) fn wiesner_label(i: usize) -> String {
    format!("{WIESNER_PREFIX}{i}")
}

pub(crate) fn hadamard() -> DMatrix<C64> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    DMatrix::from_row_slice(2, 2, &[h, h, h, -h])
}

pub fn weakue_gen(n: usize, rng: &mut RandomStream) -> Result<WeakUEKey> {
    WeakUEKey::new(random_bits(n, rng))
}

/// `H^theta |x>` qubit by qubit.
pub fn weakue_enc(k: &WeakUEKey, x: &[u8]) -> Result<PureState> {
    check_bits(x, "plaintext")?;
    if x.len() != k.n() {
        bail!(Parameter, "plaintext has {} bits but the key has {}", x.len(), k.n());
    }
    let n = k.n();
    let amps = DVector::from_fn(1 << n, |z, _| {
        let mut a = C64::new(1.0, 0.0);
        for i in 0..n {
            let zi = (z >> (n - 1 - i)) & 1;
            let xi = x[i] as usize;
            if k.bases[i] == 0 {
                if zi != xi {
                    return C64::new(0.0, 0.0);
                }
            } else {
                a *= if zi & xi == 1 { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
            }
        }
        a
    });
    PureState::from_vector(wiesner_layout(n)?, amps)
}

fn check_state(k: &WeakUEKey, state: &PureState) -> Result<()> {
    let layout = wiesner_layout(k.n())?;
    if state.layout() != &layout {
        bail!(Format, "weak-UE ciphertext must be {} qubits labelled {WIESNER_PREFIX}0..", k.n());
    }
    Ok(())
}

fn rotate_back(k: &WeakUEKey, state: &PureState) -> Result<PureState> {
    check_state(k, state)?;
    let mut s = state.clone();
    let h = hadamard();
    for (i, &b) in k.bases.iter().enumerate() {
        if b == 1 {
            s.apply_on(&[wiesner_label(i)], &h)?;
        }
    }
    Ok(s)
}

/// Applies `H^theta` and measures every qubit.
pub fn weakue_dec(k: &WeakUEKey, state: &PureState, rng: &mut RandomStream) -> Result<Vec<u8>> {
    let s = rotate_back(k, state)?;
    let labels: Vec<String> = (0..k.n()).map(wiesner_label).collect();
    let (digits, _) = measure_computational(&s, &labels, rng)?;
    Ok(digits.into_iter().map(|d| d as u8).collect())
}

/// Exact output distribution of `weakue_dec`, indexed by the decoded string.
pub fn weakue_dec_distribution(k: &WeakUEKey, state: &PureState) -> Result<Vec<f64>> {
    Ok(rotate_back(k, state)?.probabilities())
}

/// Cloning attacks on the weak-UE primitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeakUEAttack {
    /// Measure every qubit in the computational basis and hand both parties the result.
    ComputationalBasis,
    /// Measure every qubit in the Hadamard basis and hand both parties the result.
    HadamardBasis,
    /// Give the ciphertext to Bob; Charlie guesses.
    ForwardToBob,
}

impl WeakUEAttack {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "computational" | "computational_basis" => Self::ComputationalBasis,
            "hadamard" | "hadamard_basis" => Self::HadamardBasis,
            "forward" | "forward_to_bob" => Self::ForwardToBob,
            _ => bail!(Parameter, "unknown weak-UE attack {name:?}"),
        })
    }

    /// Success probability averaged over keys and plaintexts.
    pub fn exact_rate(self, n: usize) -> f64 {
        match self {
            Self::ComputationalBasis | Self::HadamardBasis => 0.75f64.powi(n as i32),
            Self::ForwardToBob => 0.5f64.powi(n as i32),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeakUEAttackReport {
    pub n: usize,
    pub attack: WeakUEAttack,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub stderr: f64,
    pub exact_rate: f64,
    pub bound: f64,
    pub within_bound: bool,
}

/// Simultaneous recovery rate of `attack` in the weak-UE cloning game. Trial
/// `i` uses `rng.split(i)`.
pub fn weakue_clone_experiment(
    n: usize,
    attack: WeakUEAttack,
    trials: usize,
    rng: &RandomStream,
) -> Result<WeakUEAttackReport> {
    if trials == 0 {
        bail!(Parameter, "need at least one trial");
    }
    let hits = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<bool> {
            let mut r = rng.split(i as u64);
            let k = weakue_gen(n, &mut r)?;
            let x = random_bits(n, &mut r);
            let ct = weakue_enc(&k, &x)?;
            let (bob, charlie) = match attack {
                WeakUEAttack::ComputationalBasis | WeakUEAttack::HadamardBasis => {
                    let basis = if attack == WeakUEAttack::HadamardBasis { 1 } else { 0 };
                    let guess = weakue_dec(&WeakUEKey::new(vec![basis; n])?, &ct, &mut r)?;
                    (guess.clone(), guess)
                }
                WeakUEAttack::ForwardToBob => (weakue_dec(&k, &ct, &mut r)?, random_bits(n, &mut r)),
            };
            Ok(bob == x && charlie == x)
        })
        .collect::<Result<Vec<bool>>>()?;
    let successes = hits.iter().filter(|&&h| h).count();
    let (rate, stderr) = rate_stderr(successes, trials);
    let bound = WIESNER_C.powi(n as i32);
    Ok(WeakUEAttackReport {
        n,
        attack,
        trials,
        successes,
        rate,
        stderr,
        exact_rate: attack.exact_rate(n),
        bound,
        within_bound: rate <= bound + 3.0 * stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crypto::bits::index_to_bits;
    use approx::assert_abs_diff_eq;

    #[test]
    fn computational_key_is_basis_encoding() {
        let k = WeakUEKey::new(vec![0, 0, 0]).unwrap();
        let s = weakue_enc(&k, &[1, 0, 1]).unwrap();
        assert_abs_diff_eq!(s.probabilities()[5], 1.0, epsilon = 1e-12);
        let mut r = RandomStream::from_seed(1);
        assert_eq!(weakue_dec(&k, &s, &mut r).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn hadamard_key_on_zero_is_plus() {
        let k = WeakUEKey::new(vec![1; 3]).unwrap();
        let s = weakue_enc(&k, &[0, 0, 0]).unwrap();
        for a in s.amplitudes().iter() {
            assert_abs_diff_eq!(a.re, 1.0 / 8f64.sqrt(), epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn decryption_is_exact() {
        let mut r = RandomStream::from_seed(4);
        for _ in 0..20 {
            let k = weakue_gen(5, &mut r).unwrap();
            let x = random_bits(5, &mut r);
            let ct = weakue_enc(&k, &x).unwrap();
            let p = weakue_dec_distribution(&k, &ct).unwrap();
            assert_abs_diff_eq!(p[bits_to_index(&x)], 1.0, epsilon = 1e-12);
            assert_eq!(index_to_bits(bits_to_index(&x), 5), x);
        }
    }

    #[test]
    fn length_mismatch_rejected() {
        let k = WeakUEKey::new(vec![0, 1]).unwrap();
        assert!(weakue_enc(&k, &[0, 1, 1]).is_err());
    }

    #[test]
    fn computational_attack_rate() {
        let rep = weakue_clone_experiment(4, WeakUEAttack::ComputationalBasis, 4000, &RandomStream::from_seed(2))
            .unwrap();
        assert!((rep.rate - rep.exact_rate).abs() < 4.0 * rep.stderr);
        assert!(rep.within_bound);
    }
}
