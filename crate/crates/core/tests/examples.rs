#[allow(dead_code)]
#[path = "../examples/state_kernel.rs"]
mod state_kernel;

#[allow(dead_code)]
#[path = "../examples/first_qubit_attack.rs"]
mod first_qubit_attack;

#[allow(dead_code)]
#[path = "../examples/classical_attack.rs"]
mod classical_attack;

#[allow(dead_code)]
#[path = "../examples/tcopy_probe.rs"]
mod tcopy_probe;

#[allow(dead_code)]
#[path = "../examples/bell_states.rs"]
mod bell_states;

#[allow(dead_code)]
#[path = "../examples/clifford_attack.rs"]
mod clifford_attack;

#[allow(dead_code)]
#[path = "../examples/haar_twirl.rs"]
mod haar_twirl;

#[allow(dead_code)]
#[path = "../examples/trace_identity.rs"]
mod trace_identity;

#[allow(dead_code)]
#[path = "../examples/symmetric_subspace.rs"]
mod symmetric_subspace;

#[allow(dead_code)]
#[path = "../examples/distinct_types.rs"]
mod distinct_types;

#[allow(dead_code)]
#[path = "../examples/goldreich_levin.rs"]
mod goldreich_levin;

#[allow(dead_code)]
#[path = "../examples/correlated_samples.rs"]
mod correlated_samples;

#[allow(dead_code)]
#[path = "../examples/weak_ue.rs"]
mod weak_ue;

#[allow(dead_code)]
#[path = "../examples/single_decryptor.rs"]
mod single_decryptor;

#[allow(dead_code)]
#[path = "../examples/ueq_reduction.rs"]
mod ueq_reduction;

#[allow(dead_code)]
#[path = "../examples/custom_adversary.rs"]
mod custom_adversary;

#[allow(dead_code)]
#[path = "../examples/secret_sharing.rs"]
mod secret_sharing;

#[allow(dead_code)]
#[path = "../examples/bound_calculator.rs"]
mod bound_calculator;

#[allow(dead_code)]
#[path = "../examples/runner.rs"]
mod runner;

macro_rules! run {
    ($($name:ident),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                super::$name::main().unwrap();
            }
        )*
    };
}

mod runs {
    run!(
        state_kernel,
        first_qubit_attack,
        classical_attack,
        tcopy_probe,
        bell_states,
        clifford_attack,
        haar_twirl,
        trace_identity,
        symmetric_subspace,
        distinct_types,
        goldreich_levin,
        correlated_samples,
        weak_ue,
        single_decryptor,
        ueq_reduction,
        custom_adversary,
        secret_sharing,
        bound_calculator,
        runner,
    );
}
