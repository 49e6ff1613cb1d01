//! Unclonable encryption with quantum keys, and the same adversary wrapped
//! into the single-decryptor game.

use ssilab::crypto::{sde_security_experiment, ueq_dec, ueq_enc, ueq_gen, ueq_security_experiment, CloningAdversary};
use ssilab::qcore::RandomStream;

pub fn main() -> ssilab::Result<()> {
    let mut rng = RandomStream::new(14, 0);
    let keys = ueq_gen(4, &mut rng)?;
    for m in 0..2 {
        let ct = ueq_enc(&keys.ek, m)?;
        println!("m = {m}: masked bit {}, decrypted {}", ct.masked, ueq_dec(&keys.dk, &ct, &mut rng)?);
    }
    for adv in [CloningAdversary::measure_and_forward(), CloningAdversary::split_halves(), CloningAdversary::random_guess()] {
        let u = ueq_security_experiment(&adv, 4, 1, 4000, &RandomStream::new(15, 0))?;
        let s = sde_security_experiment(&adv.wrap_ueq_for_sde(), 4, 1, 4000, &RandomStream::new(16, 0))?;
        println!("{:>20}: UEQ {:.4} +- {:.4}, wrapped decryptor {:.4} +- {:.4}", adv.name, u.rate, u.stderr, s.rate, s.stderr);
    }
    Ok(())
}
