use crate::error::{bail, Result};
use crate::qcore::RandomStream;

/// Largest string length handled by the schemes.
pub const MAX_BITS: usize = 12;

pub(crate) fn check_bits(bits: &[u8], what: &str) -> Result<()> {
    if bits.is_empty() || bits.len() > MAX_BITS {
        bail!(Parameter, "{what} must have between 1 and {MAX_BITS} bits, got {}", bits.len());
    }
    if bits.iter().any(|&b| b > 1) {
        bail!(Parameter, "{what} contains a non-binary entry");
    }
    Ok(())
}

pub(crate) fn check_bit(m: u8, what: &str) -> Result<()> {
    if m > 1 {
        bail!(Parameter, "{what} must be 0 or 1, got {m}");
    }
    Ok(())
}

/// Index of a bit string, first bit most significant.
pub fn bits_to_index(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

pub fn index_to_bits(index: usize, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((index >> (n - 1 - i)) & 1) as u8).collect()
}

pub fn random_bits(n: usize, rng: &mut RandomStream) -> Vec<u8> {
    (0..n).map(|_| rng.bit()).collect()
}

pub(crate) fn rate_stderr(successes: usize, trials: usize) -> (f64, f64) {
    let p = successes as f64 / trials as f64;
    (p, (p * (1.0 - p) / trials as f64).sqrt())
}
