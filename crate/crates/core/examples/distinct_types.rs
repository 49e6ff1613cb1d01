//! Distinct-type states against the normalized symmetric projector.

use ssilab::symsub::distinct_type_distance;

pub fn main() -> ssilab::Result<()> {
    for (d, t) in [(4, 2), (8, 2), (16, 2), (8, 3), (16, 3)] {
        let r = distinct_type_distance(d, t)?;
        println!(
            "d = {d:>2}, t = {t}: TD = {:.6} (closed form {:.6}) <= 2t^2/d = {:.4}",
            r.trace_distance, r.closed_form, r.bound
        );
    }
    Ok(())
}
