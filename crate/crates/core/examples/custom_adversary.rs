//! A user-defined cloning adversary: the splitter keeps the first half of
//! the Wiesner qubits for Bob and the rest for Charlie; each responder
//! measures its own qubits and guesses the message.

use std::sync::Arc;

use ssilab::crypto::{sde_security_experiment, CloningAdversary, LocalAccess, Responder, SplitState, Splitter, WeakUEKey};
use ssilab::qcore::{PureState, RandomStream};

struct Halves;

impl Splitter for Halves {
    fn split(&self, challenge: &PureState, _pad: Option<u8>, _rng: &mut RandomStream) -> ssilab::Result<SplitState> {
        let labels: Vec<String> = challenge.layout().labels().iter().map(|s| s.to_string()).collect();
        let (bob, charlie) = labels.split_at(labels.len() / 2);
        SplitState::new(challenge.clone(), bob, charlie)
    }
}

struct MeasureAndGuess;

impl Responder for MeasureAndGuess {
    fn respond(&self, _k: &WeakUEKey, _copies: Vec<PureState>, local: &mut LocalAccess<'_>, rng: &mut RandomStream) -> ssilab::Result<u8> {
        let mine = local.labels();
        let outcome = local.measure(&mine, rng)?;
        Ok((outcome.iter().sum::<usize>() % 2) as u8)
    }
}

pub fn main() -> ssilab::Result<()> {
    let r: Arc<dyn Responder> = Arc::new(MeasureAndGuess);
    let adv = CloningAdversary::new("halves_parity", Arc::new(Halves), r.clone(), r);
    let rep = sde_security_experiment(&adv, 4, 1, 4000, &RandomStream::new(17, 0))?;
    println!("{}: {:.4} +- {:.4}", rep.adversary, rep.rate, rep.stderr);
    Ok(())
}
