use nalgebra::DMatrix;
use proptest::prelude::*;
use ssilab::qcore::{haar_unitary, RandomStream, RegisterLayout, C64};
use ssilab::ssi::{
    advantage_exact, attack_first_qubit, first_qubit_advantage_formula, haar_pair_density, seesaw_objective,
    seesaw_optimize, NonLocalStrategy, PairMode, SeesawConfig,
};

fn random_projector(dim: usize, rng: &mut RandomStream) -> DMatrix<C64> {
    let u = haar_unitary(RegisterLayout::single("w", dim).unwrap(), rng);
    let c = u.entries().columns(0, rng.below(dim + 1)).into_owned();
    &c * c.adjoint()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(40) })]

    #[test]
    fn advantage_lies_in_unit_interval(seed in any::<u64>(), d in 2usize..5, t in 1usize..3) {
        prop_assume!(d.pow(2 * t as u32) <= 256);
        let mut rng = RandomStream::new(seed, 0);
        let dim = d.pow(t as u32);
        let s = NonLocalStrategy::unentangled(random_projector(dim, &mut rng), random_projector(dim, &mut rng)).unwrap();
        let id = haar_pair_density(d, t, PairMode::Identical).unwrap();
        let ind = haar_pair_density(d, t, PairMode::Independent).unwrap();
        let a = advantage_exact(&s, &id, &ind).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(advantage_exact(&s, &id, &id).unwrap() < 1e-12);
    }

    #[test]
    fn seesaw_result_matches_its_strategy(seed in any::<u64>()) {
        let id = haar_pair_density(2, 1, PairMode::Identical).unwrap();
        let ind = haar_pair_density(2, 1, PairMode::Independent).unwrap();
        let cfg = SeesawConfig { restarts: 2, ..SeesawConfig::with_ancilla(2) };
        let r = seesaw_optimize(&id, &ind, &cfg, &RandomStream::new(seed, 1)).unwrap();
        let exact = advantage_exact(&r.strategy, &id, &ind).unwrap();
        prop_assert!((exact - r.advantage).abs() < 1e-9);
        prop_assert!((seesaw_objective(&r.strategy, &id, &ind).abs() - r.advantage).abs() < 1e-9);
    }
}

#[test]
fn entangled_seesaw_stays_below_envelope() {
    for d in [2, 4, 8] {
        let id = haar_pair_density(d, 1, PairMode::Identical).unwrap();
        let ind = haar_pair_density(d, 1, PairMode::Independent).unwrap();
        let mut cfg = SeesawConfig { restarts: 10, ..SeesawConfig::with_ancilla(2) };
        cfg.seeds.push(attack_first_qubit(d).unwrap());
        let r = seesaw_optimize(&id, &ind, &cfg, &RandomStream::new(d as u64, 2)).unwrap();
        let lower = first_qubit_advantage_formula(d);
        println!("d = {d}: best {:.6}, 1/(4(d+1)) = {lower:.6}, ratio to 3/d = {:.4}", r.advantage, r.advantage * d as f64 / 3.0);
        assert!(r.advantage >= lower - 1e-9);
        assert!(r.advantage <= 3.0 / d as f64);
    }
}

#[test]
fn two_copy_probe_at_d8() {
    let (d, t) = (8, 2);
    let id = haar_pair_density(d, t, PairMode::Identical).unwrap();
    let ind = haar_pair_density(d, t, PairMode::Independent).unwrap();
    let cfg = SeesawConfig { restarts: 4, max_iters: 100, ..SeesawConfig::with_ancilla(1) };
    let r = seesaw_optimize(&id, &ind, &cfg, &RandomStream::new(8, 3)).unwrap();
    let envelope = 20.0 * (t * t) as f64 / (d as f64).sqrt();
    println!("d = 8, t = 2: best {:.6}, envelope {envelope:.3}, ratio {:.5}", r.advantage, r.advantage / envelope);
    assert!(r.advantage <= envelope);
    assert!(r.advantage >= first_qubit_advantage_formula(d) - 1e-9);
}
