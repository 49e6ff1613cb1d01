//! Non-local adversaries against simultaneous state indistinguishability:
//! exact and sampled advantages, explicit attacks, bound arithmetic and a
//! seesaw optimizer.

mod attacks;
mod bounds;
mod clifford;
mod identity;
mod pairs;
mod seesaw;
mod strategy;
mod twirl;

pub use attacks::{
    attack_classical, attack_first_qubit, bell_state, classical_attack_strategy, classical_pair_densities,
    first_qubit_advantage, first_qubit_advantage_formula, first_qubit_identical_formula, plus_plus_strategy,
    BellState, ClassicalAttackReport, ClassicalDistribution,
};
pub use bounds::{bound_calculator, paper_margin, BoundInputs, BoundReport, WIESNER_C};
pub use clifford::{attack_clifford, decode_bit, CliffordAttackReport, CliffordCircuit, Gate, Pauli};
pub use identity::{trace_identity_check, TraceIdentityCheck};
pub use pairs::{
    advantage_mc, haar_pair_density, HaarPairSampler, McEstimate, PairMode, PairSampler, SpectralPairSampler,
    StatePairDistribution,
};
pub use seesaw::{
    maximally_entangled, seesaw_objective, seesaw_optimize, RestartTrace, SeesawConfig, SeesawResult, EIGEN_CUTOFF,
};
pub use strategy::{
    advantage_exact, advantage_signed, NonLocalStrategy, BOB_ANCILLA, BOB_INPUT, CHARLIE_ANCILLA, CHARLIE_INPUT,
};
pub use twirl::{
    haar_twirl_reduction, overlap_stats, twirl_report, twirled_independent_density, HaarStates, HaarTwirl,
    OverlapStats, PointMass, StateDistribution, TwirlReport, UniformBasis,
};
