//! Simultaneous Goldreich-Levin extraction on synthetic responders.

use ssilab::glextract::{gl_extract, GLAdversary};

pub fn main() -> ssilab::Result<()> {
    let n = 3;
    let advs = [
        ("perfect", GLAdversary::perfect(n)?),
        ("constant", GLAdversary::constant(n, true)?),
        ("noisy 0.9/0.8", GLAdversary::noisy(n, 0.9, 0.8, 0)?),
        ("noisy masked", GLAdversary::noisy(n, 0.75, 0.75, 5)?),
    ];
    for (name, adv) in &advs {
        let r = gl_extract(adv)?;
        println!("{name:>14}: eps = {:.4}, extraction {:.4} >= 4 eps^2 = {:.4}: {}", r.epsilon, r.extraction, r.bound, r.holds);
    }
    println!("extractor circuit:");
    for g in gl_extract(&advs[0].1)?.gates {
        println!("  {g}");
    }
    Ok(())
}
