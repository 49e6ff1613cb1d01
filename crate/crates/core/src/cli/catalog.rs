use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    Int,
    Float,
    Str,
    Bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub kind: ParamKind,
    /// `null` marks an optional parameter without default.
    pub default: Value,
    pub help: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub module: String,
    /// Result the experiment reproduces.
    pub anchor: String,
    pub summary: String,
    pub params: Vec<ParamSpec>,
}

impl CatalogEntry {
    pub fn param(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }
}

fn p(name: &str, kind: ParamKind, default: Value, help: &str) -> ParamSpec {
    ParamSpec { name: name.into(), kind, default, help: help.into() }
}

fn entry(name: &str, module: &str, anchor: &str, summary: &str, params: Vec<ParamSpec>) -> CatalogEntry {
    CatalogEntry { name: name.into(), module: module.into(), anchor: anchor.into(), summary: summary.into(), params }
}

use ParamKind::{Bool, Float, Int, Str};

/// Every experiment the runner knows, in listing order.
pub fn catalog() -> Vec<CatalogEntry> {
    let trials = |n: u64| p("trials", Int, json!(n), "Monte-Carlo trials");
    vec![
        entry(
            "ssi-first-qubit",
            "ssi",
            "first-qubit attack on identical vs independent Haar states: advantage 1/(4(d+1))",
            "exact advantage of the first-qubit measurement, optional sampled cross-check",
            vec![p("d", Int, json!(4), "state dimension, a power of two"), trials(0)],
        ),
        entry(
            "ssi-classical",
            "ssi",
            "classical distributions admit no SSI below c/(2n): shared index and mask attack",
            "exact and sampled gap of the shared-randomness attack",
            vec![
                p("n", Int, json!(3), "string length"),
                p("dist", Str, json!("uniform"), "uniform | point"),
                trials(10_000),
            ],
        ),
        entry(
            "ssi-bound",
            "ssi",
            "SHI sandwich: first-qubit lower bound vs global trace distance of t-copy Haar pairs",
            "exact trace distance between identical and independent t-copy Haar pair densities",
            vec![p("d", Int, json!(4), "state dimension"), p("t", Int, json!(1), "copies per party")],
        ),
        entry(
            "seesaw",
            "ssi",
            "SHI numerical probe: best-found non-local advantage within [1/(4(d+1)), 3/d]",
            "seesaw search over projective strategies with a maximally entangled ancilla",
            vec![
                p("d", Int, json!(4), "state dimension"),
                p("t", Int, json!(1), "copies per party"),
                p("restarts", Int, json!(50), "random restarts per sign"),
                p("ancilla_dim", Int, json!(0), "ancilla dimension per party; 0 picks by size"),
                p("max_iters", Int, json!(200), "iterations per restart"),
                p("tol", Float, json!(1e-9), "convergence tolerance"),
            ],
        ),
        entry(
            "bell",
            "ssi",
            "Bell states: simultaneous advantage 1/2, entanglement has no effect",
            "seesaw on Phi+ against another Bell state with 0 to 2 EPR ancilla pairs",
            vec![
                p("ancilla_pairs", Int, json!(0), "EPR pairs shared as ancilla"),
                p("other", Str, json!("phi_minus"), "phi_minus | psi_plus | psi_minus"),
                p("restarts", Int, json!(50), "random restarts per sign"),
            ],
        ),
        entry(
            "clifford-attack",
            "ssi",
            "Clifford encodings admit no SSI: teleport then invert the circuit",
            "exact and sampled acceptance of the teleportation attack",
            vec![
                p("circuit", Str, json!("H 0; CNOT 0 1"), "gate list, e.g. \"H 0; S 1; CNOT 0 1\""),
                p("m", Int, json!(2), "circuit width"),
                p("n", Int, json!(2), "logical bits"),
                p("bob_qubits", Int, json!(1), "qubits teleported by Bob"),
                trials(2000),
            ],
        ),
        entry(
            "twirl",
            "ssi",
            "Haar twirl reduction: any base distribution with small overlaps twirls to SHI",
            "overlap statistics of a base distribution and its twirled densities",
            vec![
                p("d", Int, json!(8), "state dimension"),
                p("base", Str, json!("uniform_basis"), "uniform_basis | haar | point"),
                p("delta", Float, json!(0.1), "overlap threshold"),
                p("samples", Int, json!(2000), "overlap samples"),
            ],
        ),
        entry(
            "trace-identity",
            "ssi",
            "tensor-network trace identity: Tr((M~ x N)(Omega x F)) = Tr(M~ N^T_C1)",
            "random instances of the partial-transpose trace identity",
            vec![
                p("epr_pairs", Int, json!(1), "EPR pairs in Omega"),
                p("d", Int, json!(2), "input register dimension"),
                p("instances", Int, json!(20), "random instances"),
            ],
        ),
        entry(
            "sym-identities",
            "symsub",
            "symmetric subspace: projector, partial-trace and permutation class-sum identities",
            "Frobenius residuals of the symmetric-subspace identities and class sizes",
            vec![p("d", Int, json!(2), "local dimension"), p("t", Int, json!(2), "copies")],
        ),
        entry(
            "distinct-types",
            "symsub",
            "distinct-type states: trace distance to the symmetric moment at most 2t^2/d",
            "exact trace distance against its closed form and bound",
            vec![p("d", Int, json!(8), "local dimension"), p("t", Int, json!(2), "copies")],
        ),
        entry(
            "gl-extract",
            "glextract",
            "simultaneous Goldreich-Levin: extraction probability at least 4 eps^2",
            "exact extractor on a synthetic responder pair",
            vec![
                p("n", Int, json!(3), "secret length"),
                p("adversary", Str, json!("noisy"), "perfect | constant | noisy"),
                p("p_bob", Float, json!(0.75), "noisy: Bob's correctness"),
                p("p_charlie", Float, json!(0.75), "noisy: Charlie's correctness"),
                p("mask", Int, json!(1), "noisy: phase mask"),
            ],
        ),
        entry(
            "gl-correlated",
            "glextract",
            "correlated-sample reduction: no-signalling diagonal identity and wrapped advantage",
            "exact evaluation of correlated-input responders and their Goldreich-Levin wrapping",
            vec![
                p("n", Int, json!(2), "secret length"),
                p("mode", Str, json!("random"), "random | tables"),
                p("dim", Int, json!(2), "random: shared dimension per side"),
                p("instances", Int, json!(5), "random: adversaries drawn"),
            ],
        ),
        entry(
            "weakue",
            "crypto",
            "Wiesner weak unclonable encryption: cloning success below 0.86^n",
            "simultaneous recovery rate of a weak-UE cloning attack",
            vec![
                p("n", Int, json!(6), "key length"),
                p("attack", Str, json!("computational"), "computational | hadamard | forward_to_bob"),
                trials(10_000),
            ],
        ),
        entry(
            "sde",
            "crypto",
            "single-decryptor encryption: correctness and identical-ciphertext cloning game",
            "honest round trip and the cloning game against a named adversary",
            vec![
                p("n", Int, json!(4), "key length"),
                p("t", Int, json!(1), "ciphertext copies per responder"),
                p("adversary", Str, json!("random_guess"), "adversary family"),
                trials(10_000),
            ],
        ),
        entry(
            "ueq",
            "crypto",
            "unclonable encryption with quantum keys: correctness and reduction to the decryptor game",
            "honest round trip and the cloning game, optionally against the wrapped decryptor game",
            vec![
                p("n", Int, json!(4), "key length"),
                p("t", Int, json!(1), "key copies per responder"),
                p("adversary", Str, json!("measure_and_forward"), "adversary family"),
                p("compare_wrapped", Bool, json!(true), "also run the wrapped adversary in the decryptor game"),
                trials(10_000),
            ],
        ),
        entry(
            "ss-correctness",
            "crypto",
            "Haar secret sharing: reconstruct by thresholding floor(3t/4) SWAP tests",
            "reconstruction error rates for both messages",
            vec![
                p("n_parties", Int, json!(2), "parties"),
                p("t", Int, json!(32), "copies per party"),
                p("d", Int, json!(16), "share dimension"),
                trials(1000),
            ],
        ),
        entry(
            "ss-leakage",
            "crypto",
            "classical leakage resilience: advantage O(2^{2 n l} n^3 t^2 / sqrt d)",
            "distinguishing advantage of explicit leakage functions",
            vec![
                p("n_parties", Int, json!(2), "parties"),
                p("t", Int, json!(1), "copies per party"),
                p("d", Int, json!(4), "share dimension"),
                p("ell", Int, json!(1), "leaked bits per party"),
                p("leak", Str, json!("first_qubit"), "constant | first_qubit | first_qubit_each_copy | swap_own_copies"),
                p("distinguisher", Str, json!("all_zero"), "all_zero | all_equal"),
                trials(20_000),
            ],
        ),
        entry(
            "perfect-secrecy",
            "crypto",
            "perfect secrecy: single-party share marginals independent of the message",
            "exact single-party marginals for both messages",
            vec![
                p("n_parties", Int, json!(2), "parties"),
                p("t", Int, json!(2), "copies per party"),
                p("d", Int, json!(4), "share dimension"),
            ],
        ),
        entry(
            "bound-calc",
            "ssi",
            "reduction arithmetic: 2^{2n-1} eps, 2 q eps, 2^{2qn} q eps and t_max = n/10",
            "closed-form security losses of the reductions",
            vec![
                p("epsilon", Float, json!(0.01), "base advantage"),
                p("n", Int, json!(10), "message length"),
                p("q", Int, json!(2), "parties"),
                p("t", Int, json!(1), "copies"),
                p("c_weak_ue", Float, json!(0.86), "weak-UE constant"),
                p("c_margin", Float, Value::Null, "margin in t_max; default gives n/10"),
                p("measured", Float, Value::Null, "measured advantage to compare"),
            ],
        ),
    ]
}

pub fn find(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shape() {
        let c = catalog();
        assert!(c.len() >= 12);
        for m in ["ssi", "crypto", "glextract"] {
            assert!(c.iter().any(|e| e.module == m));
        }
        assert!(c.iter().all(|e| !e.anchor.is_empty()));
        let mut names: Vec<_> = c.iter().map(|e| e.name.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), c.len());
    }

    #[test]
    fn catalog_json_roundtrip() {
        let c = catalog();
        let text = serde_json::to_string(&c).unwrap();
        let back: Vec<CatalogEntry> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }
}
