//! Unclonable encryption constructions built on state indistinguishability:
//! the Wiesner weak-UE primitive, single-decryptor encryption, unclonable
//! encryption with quantum decryption keys, and Haar-state secret sharing,
//! with a cloning-adversary harness for their security games.

mod bits;
mod harness;
mod sde;
mod secret;
mod ueq;
mod weakue;

pub use bits::{bits_to_index, index_to_bits, random_bits, MAX_BITS};
pub use harness::{
    copy_danger_threshold, sde_security_experiment, ueq_security_experiment, CloningAdversary, GameReport,
    LocalAccess, Party, Responder, Scheme, SplitState, Splitter, ADVERSARY_NAMES, BREIDBART_ANGLE, KEY_COIN, KEY_MEASURED, KEY_PAD,
    KEY_WRAP_PAD,
};
pub use sde::{
    apply_ux, gl_decode, gl_decode_probability, gl_encode, gl_layout, sde_dec, sde_dec_probability, sde_enc,
    sde_enc_seeded, sde_gen, sde_structure_fidelity, seeded_haar, SDECiphertext, SDEEncKey, SDEKeyring, GL_INPUT,
    GL_OUTPUT, HAAR_STREAM,
};
pub use secret::{
    leakage_bound, leakage_exact, perfect_secrecy_check, rec_threshold, ss_correctness_experiment,
    ss_leakage_experiment, ss_rec, ss_rec_zero_probability, ss_share, CorrectnessReport, Distinguisher,
    LeakFamily, LeakageReport, PerfectSecrecyReport, ShareBundle, LEAKAGE_LAMBDA, LEAKAGE_SAFETY, SHARE_REGISTER,
};
pub use ueq::{ueq_dec, ueq_dec_probability, ueq_enc, ueq_gen, ueq_gen_from, UEQCiphertext, UEQDecKey, UEQEncKey, UEQKeyring};
pub use weakue::{
    weakue_clone_experiment, weakue_dec, weakue_dec_distribution, weakue_enc, weakue_gen, wiesner_layout,
    WeakUEAttack, WeakUEAttackReport, WeakUEKey, WIESNER_PREFIX,
};
