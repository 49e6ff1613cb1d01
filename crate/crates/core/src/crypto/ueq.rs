use serde::{Deserialize, Serialize};

use super::bits::{bits_to_index, check_bit, check_bits, random_bits};
use super::sde::{check_gl, gl_decode, gl_decode_probability, gl_encode, seeded_haar};
use super::weakue::{weakue_dec, weakue_dec_distribution, weakue_enc, weakue_gen, WeakUEKey};
use crate::error::{bail, Result};
use crate::qcore::{PureState, RandomStream};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UEQEncKey {
    pub k: WeakUEKey,
    pub x: Vec<u8>,
    pub pad: u8,
}

#[derive(Debug, Clone)]
pub struct UEQDecKey {
    pub k: WeakUEKey,
    pub phi: PureState,
    pub haar_seed: u64,
}

#[derive(Debug, Clone)]
pub struct UEQKeyring {
    pub ek: UEQEncKey,
    pub dk: UEQDecKey,
}

/// Weak-UE encryption of `x` and the masked bit `pad xor m`.
#[derive(Debug, Clone)]
pub struct UEQCiphertext {
    pub wiesner: PureState,
    pub masked: u8,
}

pub fn ueq_gen(n: usize, rng: &mut RandomStream) -> Result<UEQKeyring> {
    let k = weakue_gen(n, rng)?;
    let x = random_bits(n, rng);
    let pad = rng.bit();
    let seed = rng.next_seed();
    ueq_gen_from(k, x, pad, seed)
}

/// Keyring with every random choice fixed.
pub fn ueq_gen_from(k: WeakUEKey, x: Vec<u8>, pad: u8, haar_seed: u64) -> Result<UEQKeyring> {
    check_bits(&x, "key string")?;
    check_bit(pad, "pad")?;
    if x.len() != k.n() {
        bail!(Parameter, "key string and weak-UE key lengths differ");
    }
    let psi = seeded_haar(k.n(), haar_seed)?;
    let phi = gl_encode(&psi, bits_to_index(&x), pad)?;
    Ok(UEQKeyring { dk: UEQDecKey { k: k.clone(), phi, haar_seed }, ek: UEQEncKey { k, x, pad } })
}

pub fn ueq_enc(ek: &UEQEncKey, m: u8) -> Result<UEQCiphertext> {
    check_bit(m, "message")?;
    Ok(UEQCiphertext { wiesner: weakue_enc(&ek.k, &ek.x)?, masked: ek.pad ^ m })
}

fn check(dk: &UEQDecKey, ct: &UEQCiphertext) -> Result<()> {
    if check_gl(&dk.phi)? != dk.k.n() {
        bail!(Format, "decryption-key register size disagrees with the key length");
    }
    if ct.masked > 1 {
        bail!(Format, "masked bit must be 0 or 1");
    }
    Ok(())
}

/// Recovers `x`, decodes the pad from the key state and unmasks.
pub fn ueq_dec(dk: &UEQDecKey, ct: &UEQCiphertext, rng: &mut RandomStream) -> Result<u8> {
    check(dk, ct)?;
    let x = weakue_dec(&dk.k, &ct.wiesner, rng)?;
    Ok(gl_decode(&dk.phi, bits_to_index(&x), rng)? ^ ct.masked)
}

/// Exact probability that `ueq_dec` returns `m`.
pub fn ueq_dec_probability(dk: &UEQDecKey, ct: &UEQCiphertext, m: u8) -> Result<f64> {
    check(dk, ct)?;
    check_bit(m, "message")?;
    let dist = weakue_dec_distribution(&dk.k, &ct.wiesner)?;
    let mut p = 0.0;
    for (x, &w) in dist.iter().enumerate() {
        if w > 0.0 {
            p += w * gl_decode_probability(&dk.phi, x, m ^ ct.masked)?;
        }
    }
    Ok(p)
}
