//! Twirling a base distribution by a shared Haar unitary.

use ssilab::qcore::{PureState, RandomStream, RegisterLayout};
use ssilab::ssi::{twirl_report, HaarStates, PointMass, UniformBasis};

pub fn main() -> ssilab::Result<()> {
    let rng = RandomStream::new(4, 0);
    let d = 8;
    let reports = [
        ("uniform basis", twirl_report(&UniformBasis(d), 0.1, 2000, &rng)?),
        ("haar", twirl_report(&HaarStates(d), 0.1, 2000, &rng)?),
        ("point mass", twirl_report(&PointMass(PureState::basis(RegisterLayout::single("B2", d)?, 0)?), 0.1, 200, &rng)?),
    ];
    for (name, r) in reports {
        println!(
            "{name:>13}: mu = {:.4}, mean overlap {:.4}, TD(independent, I/d^2) = {:.4} <= {:.4}: {}",
            r.stats.mu, r.mean_overlap_used, r.trace_distance_independent, r.bound, r.within_bound
        );
    }
    Ok(())
}
