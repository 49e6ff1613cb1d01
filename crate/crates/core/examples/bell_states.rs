//! Bell states: the simultaneous advantage stays at 1/2 with or without
//! shared entanglement.

use ssilab::qcore::RandomStream;
use ssilab::ssi::{bell_state, seesaw_optimize, BellState, SeesawConfig};

pub fn main() -> ssilab::Result<()> {
    let rho0 = bell_state(BellState::PhiPlus)?.density();
    let rng = RandomStream::new(5, 0);
    for other in [BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus] {
        let rho1 = bell_state(other)?.density();
        for pairs in 0..=2 {
            let cfg = SeesawConfig { restarts: 10, ..SeesawConfig::with_ancilla(1 << pairs) };
            let r = seesaw_optimize(&rho0, &rho1, &cfg, &rng)?;
            println!("phi+ vs {other:?}, {pairs} EPR pairs: {:.6}", r.advantage);
        }
    }
    Ok(())
}
