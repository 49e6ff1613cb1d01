//! The first-qubit attack: exact advantage against its closed form, then a
//! sampled estimate.

use ssilab::qcore::RandomStream;
use ssilab::ssi::{advantage_mc, attack_first_qubit, first_qubit_advantage, first_qubit_advantage_formula, HaarPairSampler};

pub fn main() -> ssilab::Result<()> {
    println!("{:>4} {:>12} {:>12}", "d", "exact", "1/(4(d+1))");
    for d in [2, 4, 8, 16, 32] {
        println!("{d:>4} {:>12.8} {:>12.8}", first_qubit_advantage(d)?, first_qubit_advantage_formula(d));
    }
    let d = 4;
    let est = advantage_mc(&attack_first_qubit(d)?, &HaarPairSampler::new(d, 1)?, 20_000, &RandomStream::new(1, 0))?;
    println!(
        "d = {d}: sampled {:.4} +- {:.4} (identical {:.4}, independent {:.4})",
        est.estimate, est.stderr, est.identical_rate, est.independent_rate
    );
    Ok(())
}
