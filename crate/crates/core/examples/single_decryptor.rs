//! Single-decryptor encryption: round trip and the cloning game.

use ssilab::crypto::{sde_dec, sde_dec_probability, sde_enc, sde_gen, sde_security_experiment, CloningAdversary, ADVERSARY_NAMES};
use ssilab::qcore::RandomStream;

pub fn main() -> ssilab::Result<()> {
    let mut rng = RandomStream::new(12, 0);
    let keys = sde_gen(4, &mut rng)?;
    for m in 0..2 {
        let ct = sde_enc(&keys.ek, m, &mut rng)?;
        println!("m = {m}: decrypted {}, exact success {:.12}", sde_dec(&keys.dk, &ct, &mut rng)?, sde_dec_probability(&keys.dk, &ct, m)?);
    }
    let game = RandomStream::new(13, 0);
    for name in ADVERSARY_NAMES {
        for t in [1, 6] {
            let r = sde_security_experiment(&CloningAdversary::by_name(name)?, 4, t, 2000, &game)?;
            println!("{name:>36}, t = {t}: {:.4} +- {:.4}", r.rate, r.stderr);
        }
    }
    Ok(())
}
