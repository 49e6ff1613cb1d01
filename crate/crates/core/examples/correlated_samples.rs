//! Correlated-sample responders, the diagonal identity, and the wrapped
//! Goldreich-Levin pair.

use ssilab::glextract::{evaluate_correlated, gl_advantage, gl_correlated_reduce, CorrelatedAdversary};
use ssilab::qcore::RandomStream;

pub fn main() -> ssilab::Result<()> {
    let n = 2;
    let rng = RandomStream::new(6, 0);
    for i in 0..3 {
        let adv = CorrelatedAdversary::random(n, 2, &mut rng.split(i))?;
        let wrapped = gl_correlated_reduce(&adv)?;
        for x in 0..1 << n {
            let e = evaluate_correlated(&adv, x)?;
            println!(
                "adversary {i}, x = {x}: original {:.4}, relaxed {:.4}, wrapped GL {:.4}, diag residual {:.1e}, signalling {:.1e}",
                e.original_success,
                e.relaxed_success,
                gl_advantage(&wrapped, x)? + 0.5,
                e.diag_residual(),
                e.signalling_residual()
            );
        }
    }
    Ok(())
}
