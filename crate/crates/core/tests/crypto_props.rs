use proptest::prelude::*;
use ssilab::crypto::{
    perfect_secrecy_check, sde_dec_probability, sde_enc, sde_enc_seeded, sde_gen, sde_security_experiment,
    sde_structure_fidelity, ss_correctness_experiment, ss_rec_zero_probability, ss_share, ueq_dec_probability,
    ueq_enc, ueq_gen, ueq_gen_from, ueq_security_experiment, weakue_dec_distribution, weakue_enc, weakue_gen,
    bits_to_index, random_bits, CloningAdversary, WeakUEKey,
};
use ssilab::qcore::{trace_distance, OperatorMatrix, RandomStream};
use ssilab::symsub::sym_moment;

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(24) })]

    #[test]
    fn weak_ue_decrypts_exactly(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = RandomStream::new(seed, 0);
        let k = weakue_gen(n, &mut rng).unwrap();
        let x = random_bits(n, &mut rng);
        let dist = weakue_dec_distribution(&k, &weakue_enc(&k, &x).unwrap()).unwrap();
        prop_assert!((dist[bits_to_index(&x)] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sde_is_exactly_correct(seed in any::<u64>(), n in 1usize..9, m in 0u8..2) {
        let mut rng = RandomStream::new(seed, 1);
        let keys = sde_gen(n, &mut rng).unwrap();
        let ct = sde_enc(&keys.ek, m, &mut rng).unwrap();
        prop_assert!(sde_dec_probability(&keys.dk, &ct, m).unwrap() >= 1.0 - 1e-10);
        prop_assert!(sde_structure_fidelity(&keys.ek, &ct, m).unwrap() >= 1.0 - 1e-10);
    }

    #[test]
    fn sde_is_pseudo_deterministic(seed in any::<u64>(), n in 1usize..6, haar in any::<u64>()) {
        let keys = sde_gen(n, &mut RandomStream::new(seed, 2)).unwrap();
        let a = sde_enc_seeded(&keys.ek, 1, haar).unwrap();
        let b = sde_enc_seeded(&keys.ek, 1, haar).unwrap();
        prop_assert_eq!(a.phi.amplitudes(), b.phi.amplitudes());
    }

    #[test]
    fn ueq_is_exactly_correct(seed in any::<u64>(), n in 1usize..9, m in 0u8..2) {
        let keys = ueq_gen(n, &mut RandomStream::new(seed, 3)).unwrap();
        let ct = ueq_enc(&keys.ek, m).unwrap();
        prop_assert_eq!(ct.masked, keys.ek.pad ^ m);
        prop_assert!(ueq_dec_probability(&keys.dk, &ct, m).unwrap() >= 1.0 - 1e-10);
    }

    #[test]
    fn equal_shares_reconstruct_zero(seed in any::<u64>(), parties in 2usize..4, t in 1usize..33, logd in 1u32..7) {
        let b = ss_share(parties, t, 1 << logd, 0, &mut RandomStream::new(seed, 4)).unwrap();
        prop_assert!((ss_rec_zero_probability(&b, 0, parties - 1).unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn zero_pad_with_message_one_sends_one() {
    let k = WeakUEKey::new(vec![0, 1, 1]).unwrap();
    let keys = ueq_gen_from(k, vec![1, 0, 1], 0, 9).unwrap();
    assert_eq!(ueq_enc(&keys.ek, 1).unwrap().masked, 1);
}

#[test]
fn ueq_reduction_preserves_success() {
    for adv in [CloningAdversary::measure_and_forward(), CloningAdversary::split_halves(), CloningAdversary::forward_to_bob()] {
        let u = ueq_security_experiment(&adv, 4, 1, 20_000, &RandomStream::new(10, 0)).unwrap();
        let s = sde_security_experiment(&adv.wrap_ueq_for_sde(), 4, 1, 20_000, &RandomStream::new(11, 0)).unwrap();
        let se = (u.stderr.powi(2) + s.stderr.powi(2)).sqrt();
        println!("{}: UEQ {:.4}, wrapped {:.4}, combined stderr {:.4}", adv.name, u.rate, s.rate, se);
        assert!((u.rate - s.rate).abs() <= 3.0 * se);
    }
}

#[test]
fn linear_algebra_attack_breaks_many_copies() {
    for n in [4, 6] {
        for adv in [CloningAdversary::gaussian_elimination(), CloningAdversary::gaussian_elimination_computational()] {
            let r = sde_security_experiment(&adv, n, n + 2, 20_000, &RandomStream::new(12, n as u64)).unwrap();
            println!("{} n = {n}, t = {}: {:.4} +- {:.4}", adv.name, n + 2, r.rate, r.stderr);
            assert!(!r.warnings.is_empty());
            if adv.name == "gaussian_elimination" {
                assert!(r.rate >= 0.9, "{}", r.rate);
            }
        }
    }
}

#[test]
fn secret_sharing_error_rates() {
    let r0 = ss_correctness_experiment(2, 32, 16, 0, 1000, &RandomStream::new(13, 0)).unwrap();
    let r1 = ss_correctness_experiment(2, 32, 16, 1, 1000, &RandomStream::new(13, 1)).unwrap();
    assert_eq!(r0.errors, 0);
    assert!(r1.error_rate <= 0.03, "{}", r1.error_rate);
    let small = ss_correctness_experiment(2, 4, 2, 1, 1000, &RandomStream::new(13, 2)).unwrap();
    println!("d = 2, t = 4: error {:.3} (exact {:.3})", small.error_rate, small.exact_error_rate);
    assert!(small.error_rate > r1.error_rate);
}

#[test]
fn marginals_are_symmetric_moments() {
    let r = perfect_secrecy_check(2, 1, 2).unwrap();
    let half = OperatorMatrix::maximally_mixed(r.marginal_m0.layout().clone());
    assert!(trace_distance(&r.marginal_m0, &half).unwrap() < 1e-10);
    let r = perfect_secrecy_check(2, 2, 4).unwrap();
    let target = sym_moment(4, 2).unwrap();
    for m in [&r.marginal_m0, &r.marginal_m1] {
        assert!((m.entries() - target.entries()).norm() < 1e-10);
    }
    assert!(r.trace_distance < 1e-10);
}
