//! Conjugate-coding weak unclonable encryption and cloning attacks.

use ssilab::crypto::{random_bits, weakue_clone_experiment, weakue_dec, weakue_enc, weakue_gen, WeakUEAttack};
use ssilab::qcore::RandomStream;

pub fn main() -> ssilab::Result<()> {
    let mut rng = RandomStream::new(9, 0);
    let k = weakue_gen(6, &mut rng)?;
    let x = random_bits(6, &mut rng);
    let ct = weakue_enc(&k, &x)?;
    println!("bases {:?}, x {:?}, decrypted {:?}", k.bases, x, weakue_dec(&k, &ct, &mut rng)?);
    for attack in [WeakUEAttack::ComputationalBasis, WeakUEAttack::HadamardBasis, WeakUEAttack::ForwardToBob] {
        let r = weakue_clone_experiment(6, attack, 5000, &RandomStream::new(1, 0))?;
        println!("{attack:?}: {:.4} +- {:.4} (exact {:.4}) vs 0.86^n = {:.4}", r.rate, r.stderr, r.exact_rate, r.bound);
    }
    Ok(())
}
