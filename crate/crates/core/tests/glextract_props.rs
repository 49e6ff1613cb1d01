use proptest::prelude::*;
use ssilab::glextract::{
    evaluate_correlated, gl_advantage, gl_correlated_reduce, gl_extract, table_successes, CorrelatedAdversary,
    GLAdversary,
};
use ssilab::qcore::RandomStream;

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(24) })]

    #[test]
    fn extraction_beats_four_eps_squared(n in 1usize..4, pb in 0.5f64..=1.0, pc in 0.5f64..=1.0, mask in 0usize..8) {
        let adv = GLAdversary::noisy(n, pb, pc, mask % (1 << n)).unwrap();
        let r = gl_extract(&adv).unwrap();
        for p in &r.points {
            prop_assert!(p.extraction >= 4.0 * p.epsilon * p.epsilon - 1e-9);
        }
        prop_assert!(r.holds);
    }

    #[test]
    fn correlated_identities(seed in any::<u64>(), n in 1usize..3, dim in 1usize..4) {
        let adv = CorrelatedAdversary::random(n, dim, &mut RandomStream::new(seed, 0)).unwrap();
        let wrapped = gl_correlated_reduce(&adv).unwrap();
        for x in 0..1 << n {
            let e = evaluate_correlated(&adv, x).unwrap();
            prop_assert!(e.diag_residual() <= 1e-12);
            prop_assert!(e.signalling_residual() <= 1e-12);
            prop_assert!((gl_advantage(&wrapped, x).unwrap() + 0.5 - e.relaxed_success).abs() <= 1e-12);
        }
    }
}

#[test]
fn perfect_extraction_restores_the_input() {
    for n in 1..=3 {
        let r = gl_extract(&GLAdversary::perfect(n).unwrap()).unwrap();
        assert!((r.epsilon - 0.5).abs() < 1e-12);
        assert!((r.extraction - 1.0).abs() < 1e-12);
        for p in &r.points {
            assert!((p.restoration_fidelity - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn constant_responders_have_no_advantage_off_zero() {
    let adv = GLAdversary::constant(3, true).unwrap();
    for x in 1..8 {
        assert!(gl_advantage(&adv, x).unwrap().abs() < 1e-12);
    }
}

#[test]
fn relaxation_never_lowers_success_over_all_tables() {
    let n = 2;
    let tables: Vec<Vec<bool>> = (0..256usize).map(|v| (0..8).map(|j| (v >> j) & 1 == 1).collect()).collect();
    let mut min_gain = f64::INFINITY;
    for tb in &tables {
        for tc in &tables {
            for x in 0..4 {
                let (orig, relaxed) = table_successes(n, tb, tc, x);
                min_gain = min_gain.min(relaxed - orig);
            }
        }
    }
    assert!(min_gain >= -1e-12, "{min_gain}");
}

#[test]
fn five_random_behaviours_satisfy_diag_identity() {
    let rng = RandomStream::new(21, 0);
    for i in 0..5 {
        let adv = CorrelatedAdversary::random(2, 2, &mut rng.split(i)).unwrap();
        for x in 0..4 {
            assert!(evaluate_correlated(&adv, x).unwrap().diag_residual() <= 1e-12);
        }
    }
}
