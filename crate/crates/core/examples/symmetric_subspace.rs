//! Symmetric-subspace identities and crossing-class sizes.

use ssilab::symsub::{class_size, class_sum_check, partial_trace_residual, projector_identity_residual, sym_dim};

pub fn main() -> ssilab::Result<()> {
    for (d, t) in [(2usize, 2usize), (2, 3), (3, 2), (4, 2)] {
        println!(
            "d = {d}, t = {t}: dim Sym = {}, projector residual {:.1e}, partial trace residual {:.1e}",
            sym_dim(d as u64, t as u64)?,
            projector_identity_residual(d, t)?,
            partial_trace_residual(d, t, 1)?
        );
    }
    let t = 3;
    for s in 0..=t {
        let c = class_sum_check(2, t, s)?;
        println!("t = {t}, s = {s}: class size {} (enumerated {:?}), residual {:.1e}", class_size(t, s)?, c.enumerated_size, c.residual);
    }
    Ok(())
}
