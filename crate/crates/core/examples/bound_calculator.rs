//! Reduction losses for multi-bit, multi-party and multi-copy security.

use ssilab::ssi::{bound_calculator, BoundInputs};

pub fn main() -> ssilab::Result<()> {
    for (eps, n, q, t) in [(1e-6, 1, 2, 1), (1e-6, 4, 2, 1), (1e-6, 4, 3, 2), (0.01, 10, 2, 1), (0.01, 40, 2, 4)] {
        let r = bound_calculator(BoundInputs::new(eps, n, q, t), None)?;
        println!(
            "eps {eps:.0e}, n {n:>2}, q {q}, t {t}: union {:.3e}, multiparty {:.3e}, combined {:.3e}, t_max {}, guess loss {:.3e}",
            r.eps_union, r.eps_multiparty, r.eps_combined, r.t_max, r.guess_loss
        );
    }
    let r = bound_calculator(BoundInputs::new(0.01, 10, 2, 1), Some(0.05))?;
    println!("measured 0.05 against combined bound: {:?}", r.verdict);
    Ok(())
}
