use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::report::Verdict;

/// Weak unclonable security constant of the conjugate-coding scheme.
pub const WIESNER_C: f64 = 0.86;

/// Margin `c` for which `(log2(1/sqrt(C)) - c) n = n / 10` at `C = 0.86`.
pub fn paper_margin() -> f64 {
    (1.0 / WIESNER_C.sqrt()).log2() - 0.1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// Base single-bit SSI error.
    pub epsilon: f64,
    /// Message length in bits.
    pub n: u32,
    /// Number of parties.
    pub q: u32,
    /// Copies per party.
    pub t: u32,
    /// Weak unclonable security constant, success `<= C^n`.
    pub c_weak_ue: f64,
    pub c_margin: f64,
    /// State dimension, when the report concerns Haar inputs.
    pub d: Option<u64>,
}

impl BoundInputs {
    pub fn new(epsilon: f64, n: u32, q: u32, t: u32) -> Self {
        Self { epsilon, n, q, t, c_weak_ue: WIESNER_C, c_margin: paper_margin(), d: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    /// `2^(2n-1) eps`: single-bit to `n`-bit messages.
    pub eps_union: f64,
    /// `2 q eps`: two parties to `q` parties.
    pub eps_multiparty: f64,
    /// `2^(2qn) q eps`: `qt`-copy SSI to `t`-copy, `n`-bit, `q`-party SSI.
    pub eps_combined: f64,
    /// `(log2(1/sqrt(C)) - c) n` before flooring.
    pub t_max_real: f64,
    pub t_max: u64,
    /// `2^(2t) C^n` for the requested `t`.
    pub guess_loss: f64,
    pub measured: Option<f64>,
    pub verdict: Verdict,
}

/// Evaluates the reduction bounds. With a measured advantage, the verdict
/// compares it against `eps_combined`.
pub fn bound_calculator(inputs: BoundInputs, measured: Option<f64>) -> Result<BoundReport> {
    let BoundInputs { epsilon, n, q, t, c_weak_ue, c_margin, .. } = inputs;
    if !(epsilon >= 0.0) || n == 0 || q == 0 || t == 0 {
        bail!(Parameter, "epsilon must be nonnegative and n, q, t positive");
    }
    if !(c_weak_ue > 0.0 && c_weak_ue < 1.0) || !(c_margin >= 0.0) {
        bail!(Parameter, "C must lie in (0, 1) and the margin must be nonnegative");
    }
    let pow2 = |e: f64| e.exp2();
    let eps_union = pow2((2 * n - 1) as f64) * epsilon;
    let eps_multiparty = 2.0 * q as f64 * epsilon;
    let eps_combined = pow2(2.0 * q as f64 * n as f64) * q as f64 * epsilon;
    let rate = (1.0 / c_weak_ue.sqrt()).log2() - c_margin;
    let t_max_real = rate * n as f64;
    let t_max = if t_max_real > 0.0 { (t_max_real + 1e-9).floor() as u64 } else { 0 };
    let guess_loss = pow2(2.0 * t as f64) * c_weak_ue.powi(n as i32);
    let verdict = match measured {
        Some(m) => Verdict::from_check(m <= eps_combined),
        None => Verdict::Info,
    };
    Ok(BoundReport {
        inputs,
        eps_union,
        eps_multiparty,
        eps_combined,
        t_max_real,
        t_max,
        guess_loss,
        measured,
        verdict,
    })
}
