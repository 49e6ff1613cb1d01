use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use ssilab::qcore::{
    born_measure, born_probabilities, haar_state, haar_state_on, haar_unitary, hs_inner, trace_distance, OperatorMatrix,
    PureState, RandomStream, RegisterLayout, C64,
};
use ssilab::symsub::sym_moment;

fn random_projector(layout: RegisterLayout, rank: usize, rng: &mut RandomStream) -> OperatorMatrix {
    let u = haar_unitary(layout.clone(), rng);
    let c = u.entries().columns(0, rank).into_owned();
    OperatorMatrix::projector(layout, &c * c.adjoint()).unwrap()
}

fn random_density(layout: RegisterLayout, rng: &mut RandomStream) -> OperatorMatrix {
    let dim = layout.total_dim();
    let env = RegisterLayout::single("E", 2).unwrap();
    let full = layout.concat(&env).unwrap();
    let psi = haar_state_on(full, rng).unwrap();
    let labels: Vec<String> = layout.labels().iter().map(|s| s.to_string()).collect();
    let rho = psi.density().partial_trace(&labels).unwrap();
    assert_eq!(rho.dim(), dim);
    rho
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(48) })]

    #[test]
    fn partial_trace_keeps_density_role(seed in any::<u64>(), da in 2usize..4, db in 2usize..4, keep_a in any::<bool>()) {
        let layout = RegisterLayout::new([("A", da), ("B", db)]).unwrap();
        let rho = random_density(layout, &mut RandomStream::new(seed, 0));
        let reduced = rho.partial_trace(&[if keep_a { "A" } else { "B" }]).unwrap();
        prop_assert!(reduced.roles().hermitian && reduced.roles().density);
        prop_assert!(reduced.is_density(1e-10));
        prop_assert!((reduced.trace().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), d in 2usize..5) {
        let layout = RegisterLayout::new([("A", d), ("B", 2)]).unwrap();
        let rho = random_density(layout, &mut RandomStream::new(seed, 1));
        for on in [&["A"][..], &["B"][..], &["A", "B"][..]] {
            let back = rho.partial_transpose(on).unwrap().partial_transpose(on).unwrap();
            prop_assert!((back.entries() - rho.entries()).norm() <= 1e-12);
        }
    }

    #[test]
    fn haar_states_are_normalized(seed in any::<u64>(), d in 1usize..64) {
        let psi = haar_state(d, &mut RandomStream::new(seed, 2)).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn split_streams_depend_only_on_indices(seed in any::<u64>(), a in 0u64..1000, draws in 0usize..20) {
        let root = RandomStream::new(seed, 3);
        let mut advanced = root.clone();
        for _ in 0..draws {
            advanced.uniform();
        }
        let mut x = root.split(a);
        let mut y = advanced.split(a);
        prop_assert_eq!(x.next_seed(), y.next_seed());
    }
}

#[test]
fn partial_transpose_is_adjoint_under_hs_inner() {
    let mut rng = RandomStream::new(4, 0);
    for d in [2, 3, 4] {
        let layout = RegisterLayout::new([("A", d), ("S", 2)]).unwrap();
        for _ in 0..10 {
            let n = random_projector(layout.clone(), 1 + rng.below(2 * d - 1), &mut rng);
            let m = random_projector(layout.clone(), 1 + rng.below(2 * d - 1), &mut rng);
            let lhs = hs_inner(&n.partial_transpose(&["S"]).unwrap(), &m).unwrap();
            let rhs = hs_inner(&n, &m.partial_transpose(&["S"]).unwrap()).unwrap();
            assert!((lhs - rhs).norm() <= 1e-9, "d = {d}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn born_frequencies_match_probabilities() {
    let layout = RegisterLayout::single("A", 3).unwrap();
    let psi = haar_state_on(layout.clone(), &mut RandomStream::new(5, 0)).unwrap();
    let projectors: Vec<OperatorMatrix> =
        (0..3).map(|i| OperatorMatrix::basis_projector(layout.clone(), i).unwrap()).collect();
    let probs = born_probabilities(&psi, &projectors).unwrap();
    let trials = 100_000;
    let mut counts = [0usize; 3];
    let mut rng = RandomStream::new(5, 1);
    for _ in 0..trials {
        let (k, _) = born_measure(&psi, &projectors, &mut rng).unwrap();
        counts[k] += 1;
    }
    for (c, p) in counts.iter().zip(&probs) {
        let f = *c as f64 / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((f - p).abs() <= 3.0 * se, "frequency {f} vs probability {p}");
    }
}

fn tensor_power(v: &DVector<C64>, t: usize) -> DVector<C64> {
    let mut out = DVector::from_element(1, C64::new(1.0, 0.0));
    for _ in 0..t {
        out = out.kronecker(v);
    }
    out
}

#[test]
fn haar_moments_match_symmetric_projector() {
    let samples = 100_000;
    for (d, t) in [(2, 2), (2, 3), (4, 2)] {
        let dim = (d as usize).pow(t as u32);
        let mut acc = DMatrix::<C64>::zeros(dim, dim);
        let mut rng = RandomStream::new(6, (d * 10 + t) as u64);
        for _ in 0..samples {
            let v = tensor_power(haar_state(d, &mut rng).unwrap().amplitudes(), t);
            acc += &v * v.adjoint();
        }
        acc /= C64::new(samples as f64, 0.0);
        let target = sym_moment(d, t).unwrap();
        let empirical = OperatorMatrix::density(target.layout().clone(), acc).unwrap();
        let td = trace_distance(&empirical, &target).unwrap();
        assert!(td <= 0.02, "(d, t) = ({d}, {t}): trace distance {td}");
    }
}

#[test]
fn basis_states_have_point_distributions() {
    let layout = RegisterLayout::qubits("q", 3).unwrap();
    for i in 0..8 {
        let p = PureState::basis(layout.clone(), i).unwrap().probabilities();
        assert_eq!(p.iter().position(|&x| x == 1.0), Some(i));
    }
}
