//! Shared-randomness attack on classical string distributions.

use ssilab::qcore::RandomStream;
use ssilab::ssi::{attack_classical, ClassicalDistribution};

pub fn main() -> ssilab::Result<()> {
    let rng = RandomStream::new(3, 0);
    for n in 1..=4 {
        let (_, r) = attack_classical(&ClassicalDistribution::uniform(n)?, 5000, &rng)?;
        println!(
            "uniform n = {n}: c = {:.4}, gap = {:.4} >= c/(2n) = {:.4}, sampled {:.4} +- {:.4}",
            r.collision_complement, r.exact_gap, r.bound, r.mc_gap, r.mc_stderr
        );
    }
    let (_, r) = attack_classical(&ClassicalDistribution::point_mass(3, 5)?, 1000, &rng)?;
    println!("point mass: c = {}, gap = {}", r.collision_complement, r.exact_gap);
    Ok(())
}
