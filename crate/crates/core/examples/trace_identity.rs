//! Partial-transpose trace identity on random instances.

use ssilab::qcore::RandomStream;
use ssilab::ssi::trace_identity_check;

pub fn main() -> ssilab::Result<()> {
    let rng = RandomStream::new(8, 0);
    for pairs in [1, 2] {
        for i in 0..3 {
            let c = trace_identity_check(pairs, 2, &mut rng.split(10 * pairs as u64 + i))?;
            println!(
                "r = {pairs}: lhs = {:+.6}{:+.6}i, rhs = {:+.6}{:+.6}i, residual {:.1e}",
                c.lhs_re, c.lhs_im, c.rhs_re, c.rhs_im, c.residual
            );
        }
    }
    Ok(())
}
