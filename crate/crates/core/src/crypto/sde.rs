use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::bits::{bits_to_index, check_bit, check_bits, random_bits};
use super::weakue::{weakue_dec, weakue_dec_distribution, weakue_enc, weakue_gen, WeakUEKey};
use crate::error::{bail, Result};
use crate::glextract::inner_bit;
use crate::qcore::{haar_state, measure_computational, PureState, RandomStream, RegisterLayout, C64};

/// Label of the `n`-qubit Goldreich-Levin register.
pub const GL_INPUT: &str = "Y";
/// Label of the message qubit.
pub const GL_OUTPUT: &str = "Z";
/// Stream id of seeded Haar sampling.
pub const HAAR_STREAM: u64 = 0x5de;

/// Layout `[(Y, 2^n), (Z, 2)]` of Goldreich-Levin states.
pub fn gl_layout(n: usize) -> Result<RegisterLayout> {
    RegisterLayout::new([(GL_INPUT, 1usize << n), (GL_OUTPUT, 2)])
}

/// Haar-random `n`-qubit state determined by `seed`.
pub fn seeded_haar(n: usize, seed: u64) -> Result<PureState> {
    let psi = haar_state(1 << n, &mut RandomStream::new(seed, HAAR_STREAM))?;
    psi.relabel(&[GL_INPUT])
}

/// `U_x |y>|z> = |y>|z xor <y,x>>`. Self-inverse.
pub fn apply_ux(state: &PureState, x: usize) -> Result<PureState> {
    let n = check_gl(state)?;
    if x >> n != 0 {
        bail!(Parameter, "U_x key {x} exceeds {n} bits");
    }
    let amps = state.amplitudes();
    let mut out = DVector::from_element(amps.len(), C64::new(0.0, 0.0));
    for y in 0..1usize << n {
        let f = inner_bit(y, x);
        for z in 0..2 {
            out[2 * y + (z ^ f)] = amps[2 * y + z];
        }
    }
    Ok(PureState::trusted(state.layout().clone(), out))
}

/// `psi (x) |b>` followed by `U_x`.
pub fn gl_encode(psi: &PureState, x: usize, b: u8) -> Result<PureState> {
    let bit = PureState::basis(RegisterLayout::single(GL_OUTPUT, 2)?, b as usize)?;
    apply_ux(&psi.tensor(&bit)?, x)
}

pub(crate) fn check_gl(state: &PureState) -> Result<usize> {
    let layout = state.layout();
    let regs = layout.registers();
    let ok = regs.len() == 2
        && regs[0].label == GL_INPUT
        && regs[1].label == GL_OUTPUT
        && regs[1].dim == 2
        && regs[0].dim.is_power_of_two();
    if !ok {
        bail!(Format, "expected a state on [(Y, 2^n), (Z, 2)]");
    }
    Ok(regs[0].dim.trailing_zeros() as usize)
}

/// Probability that applying `U_x` and measuring `Z` yields `bit`.
pub fn gl_decode_probability(phi: &PureState, x: usize, bit: u8) -> Result<f64> {
    let n = check_gl(phi)?;
    let amps = phi.amplitudes();
    Ok((0..1usize << n)
        .map(|y| amps[2 * y + (bit as usize ^ inner_bit(y, x))].norm_sqr())
        .sum())
}

/// Applies `U_x` and measures `Z`.
pub fn gl_decode(phi: &PureState, x: usize, rng: &mut RandomStream) -> Result<u8> {
    let s = apply_ux(phi, x)?;
    let (d, _) = measure_computational(&s, &[GL_OUTPUT], rng)?;
    Ok(d[0] as u8)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SDEEncKey {
    pub k: WeakUEKey,
    pub x: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct SDEKeyring {
    pub ek: SDEEncKey,
    pub dk: PureState,
}

#[derive(Debug, Clone)]
pub struct SDECiphertext {
    pub k: WeakUEKey,
    pub phi: PureState,
    pub haar_seed: u64,
}

impl SDECiphertext {
    fn check(&self) -> Result<()> {
        if check_gl(&self.phi)? != self.k.n() {
            bail!(Format, "ciphertext register size disagrees with the key length");
        }
        Ok(())
    }
}

pub fn sde_gen(n: usize, rng: &mut RandomStream) -> Result<SDEKeyring> {
    let k = weakue_gen(n, rng)?;
    let x = random_bits(n, rng);
    let dk = weakue_enc(&k, &x)?;
    Ok(SDEKeyring { ek: SDEEncKey { k, x }, dk })
}

/// Encrypts with a fresh Haar seed drawn from `rng`.
pub fn sde_enc(ek: &SDEEncKey, m: u8, rng: &mut RandomStream) -> Result<SDECiphertext> {
    sde_enc_seeded(ek, m, rng.next_seed())
}

/// `sum_y alpha_y |y>|<y,x> xor m>` with `alpha` fixed by `haar_seed`.
pub fn sde_enc_seeded(ek: &SDEEncKey, m: u8, haar_seed: u64) -> Result<SDECiphertext> {
    check_bit(m, "message")?;
    check_bits(&ek.x, "key string")?;
    if ek.x.len() != ek.k.n() {
        bail!(Parameter, "key string and weak-UE key lengths differ");
    }
    let psi = seeded_haar(ek.k.n(), haar_seed)?;
    let phi = gl_encode(&psi, bits_to_index(&ek.x), m)?;
    Ok(SDECiphertext { k: ek.k.clone(), phi, haar_seed })
}

/// Recovers `x` from the decryption-key state, applies `U_x` to the
/// ciphertext and measures the message qubit.
pub fn sde_dec(dk: &PureState, ct: &SDECiphertext, rng: &mut RandomStream) -> Result<u8> {
    ct.check()?;
    let x = weakue_dec(&ct.k, dk, rng)?;
    gl_decode(&ct.phi, bits_to_index(&x), rng)
}

/// Exact probability that `sde_dec` returns `m`.
pub fn sde_dec_probability(dk: &PureState, ct: &SDECiphertext, m: u8) -> Result<f64> {
    ct.check()?;
    check_bit(m, "message")?;
    let dist = weakue_dec_distribution(&ct.k, dk)?;
    let mut p = 0.0;
    for (x, &w) in dist.iter().enumerate() {
        if w > 0.0 {
            p += w * gl_decode_probability(&ct.phi, x, m)?;
        }
    }
    Ok(p)
}

/// Fidelity of `U_x^dagger phi` with `psi (x) |m>`.
pub fn sde_structure_fidelity(ek: &SDEEncKey, ct: &SDECiphertext, m: u8) -> Result<f64> {
    ct.check()?;
    let psi = seeded_haar(ek.k.n(), ct.haar_seed)?;
    let bit = PureState::basis(RegisterLayout::single(GL_OUTPUT, 2)?, m as usize)?;
    apply_ux(&ct.phi, bits_to_index(&ek.x))?.fidelity(&psi.tensor(&bit)?)
}
