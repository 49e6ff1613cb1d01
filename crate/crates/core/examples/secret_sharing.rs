//! Haar-state secret sharing: reconstruction, leakage and perfect secrecy.

use ssilab::crypto::{
    leakage_bound, perfect_secrecy_check, rec_threshold, ss_correctness_experiment, ss_leakage_experiment, ss_rec,
    ss_rec_zero_probability, ss_share, Distinguisher, LeakFamily,
};
use ssilab::qcore::RandomStream;

pub fn main() -> ssilab::Result<()> {
    let mut rng = RandomStream::new(18, 0);
    for m in 0..2 {
        let b = ss_share(3, 8, 8, m, &mut rng)?;
        println!(
            "m = {m}: {} parties x {} copies, threshold {}, Pr[rec = 0] = {:.4}, sampled {}",
            b.n_parties,
            b.t,
            rec_threshold(b.t),
            ss_rec_zero_probability(&b, 0, 2)?,
            ss_rec(&b, 0, 2, &mut rng)?
        );
    }
    for m in 0..2 {
        let r = ss_correctness_experiment(2, 32, 16, m, 500, &RandomStream::new(19, 0))?;
        println!("d = 16, t = 32, m = {m}: error {:.4} (exact {:.4})", r.error_rate, r.exact_error_rate);
    }
    let l = ss_leakage_experiment(2, 1, 4, 1, LeakFamily::FirstQubit, Distinguisher::AllZero, 20_000, &RandomStream::new(20, 0))?;
    println!(
        "first-qubit leak: advantage {:.4} +- {:.4} (exact {:?}), bound {:.2}",
        l.advantage, l.stderr, l.exact_advantage, leakage_bound(2, 1, 4, 1)
    );
    let s = perfect_secrecy_check(2, 2, 4)?;
    println!("single-party marginals ({}): trace distance {:.1e}", s.method, s.trace_distance);
    Ok(())
}
