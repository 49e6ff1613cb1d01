//! Registers, Haar sampling, Schmidt decomposition and the SWAP test.

use ssilab::qcore::{
    haar_state_on, schmidt_decompose, swap_test_pass_probability, trace_distance, PureState, RandomStream,
    RegisterLayout,
};

pub fn main() -> ssilab::Result<()> {
    let mut rng = RandomStream::new(7, 0);
    let layout = RegisterLayout::new([("A", 4), ("B", 4)])?;
    let psi = haar_state_on(layout.clone(), &mut rng)?;
    println!("norm = {:.12}", psi.norm());

    let s = schmidt_decompose(&psi, &["A"])?;
    let w: Vec<String> = s.weights.iter().map(|x| format!("{x:.4}")).collect();
    println!("Schmidt weights across A|B: [{}]", w.join(", "));

    let rho_a = psi.density().partial_trace(&["A"])?;
    let mixed = ssilab::qcore::OperatorMatrix::maximally_mixed(rho_a.layout().clone());
    println!("trace distance of rho_A to I/4 = {:.4}", trace_distance(&rho_a, &mixed)?);

    let same = psi.tensor(&psi.relabel(&["C", "D"])?)?;
    let other = psi.tensor(&haar_state_on(layout.relabel(&["C", "D"])?, &mut rng)?)?;
    println!("SWAP test on identical copies passes with p = {:.6}", swap_test_pass_probability(&same, &["A", "B"], &["C", "D"])?);
    println!("SWAP test on independent states passes with p = {:.4}", swap_test_pass_probability(&other, &["A", "B"], &["C", "D"])?);

    let zero = PureState::basis(RegisterLayout::qubits("q", 2)?, 0)?;
    println!("|00> probabilities = {:?}", zero.probabilities());
    Ok(())
}
