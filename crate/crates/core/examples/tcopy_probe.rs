//! t-copy probe: global trace distance between identical and independent
//! Haar pairs, and the best non-local advantage the seesaw finds.

use ssilab::qcore::{trace_distance, RandomStream};
use ssilab::ssi::{attack_first_qubit, first_qubit_advantage_formula, haar_pair_density, seesaw_optimize, PairMode, SeesawConfig};

pub fn main() -> ssilab::Result<()> {
    let rng = RandomStream::new(11, 0);
    for (d, t, a) in [(2, 1, 4), (4, 1, 2), (2, 2, 2), (2, 3, 1)] {
        let id = haar_pair_density(d, t, PairMode::Identical)?;
        let ind = haar_pair_density(d, t, PairMode::Independent)?;
        let mut cfg = SeesawConfig { restarts: 6, ..SeesawConfig::with_ancilla(a) };
        if t == 1 {
            cfg.seeds.push(attack_first_qubit(d)?);
        }
        let best = seesaw_optimize(&id, &ind, &cfg, &rng)?;
        println!(
            "d = {d}, t = {t}, ancilla {a}: trace distance {:.4}, seesaw {:.4}, first qubit {:.4}",
            trace_distance(&id, &ind)?,
            best.advantage,
            first_qubit_advantage_formula(d)
        );
    }
    Ok(())
}
