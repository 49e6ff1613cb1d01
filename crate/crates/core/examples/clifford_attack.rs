//! Teleportation attack on Clifford encodings.

use ssilab::qcore::RandomStream;
use ssilab::ssi::{attack_clifford, CliffordCircuit};

pub fn main() -> ssilab::Result<()> {
    let rng = RandomStream::new(2, 0);
    for (m, n, text) in [(2, 2, "H 0; CNOT 0 1"), (3, 2, "H 0; S 1; CNOT 0 2; CNOT 1 2"), (2, 1, "")] {
        let c = CliffordCircuit::parse(m, text)?;
        let r = attack_clifford(&c, n, 1, 2000, &rng)?;
        println!(
            "[{}] m = {m}, n = {n}: P00 = {:.3} / {:.3} (sampled {:.3} / {:.3}), decode error {:.1e}",
            c.to_text(),
            r.p00_d1,
            r.p00_d2,
            r.mc_p00_d1,
            r.mc_p00_d2,
            r.decode_error
        );
    }
    Ok(())
}
