use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::qcore::{PureState, RandomStream, RegisterLayout, C64};

/// Clifford generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    S(usize),
    Cnot(usize, usize),
}

/// Gate list on `n_qubits` qubits, applied first to last. Qubit 0 is the
/// most significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordCircuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

impl CliffordCircuit {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            let ok = match *g {
                Gate::H(q) | Gate::S(q) => q < n_qubits,
                Gate::Cnot(c, t) => c < n_qubits && t < n_qubits && c != t,
            };
            if !ok {
                bail!(Parameter, "gate {g:?} does not fit {n_qubits} qubits");
            }
        }
        Ok(Self { n_qubits, gates })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { n_qubits, gates: vec![] }
    }

    /// Parses `"H 0; S 1; CNOT 0 1"`. Anything outside `{H, S, CNOT}` is
    /// rejected.
    pub fn parse(n_qubits: usize, text: &str) -> Result<Self> {
        let mut gates = vec![];
        for part in text.split([';', '\n']).map(str::trim).filter(|p| !p.is_empty()) {
            let tok: Vec<&str> = part.split_whitespace().collect();
            let arg = |i: usize| -> Result<usize> {
                match tok.get(i).and_then(|s| s.parse().ok()) {
                    Some(v) => Ok(v),
                    None => bail!(Parameter, "bad qubit index in '{part}'"),
                }
            };
            let g = match (tok[0].to_ascii_uppercase().as_str(), tok.len()) {
                ("H", 2) => Gate::H(arg(1)?),
                ("S", 2) => Gate::S(arg(1)?),
                ("CNOT" | "CX", 3) => Gate::Cnot(arg(1)?, arg(2)?),
                _ => bail!(Parameter, "'{part}' is not a Clifford generator"),
            };
            gates.push(g);
        }
        Self::new(n_qubits, gates)
    }

    /// Dense unitary, `2^n x 2^n`.
    pub fn unitary(&self) -> DMatrix<C64> {
        let n = self.n_qubits;
        let dim = 1usize << n;
        let mut u = DMatrix::<C64>::identity(dim, dim);
        for g in &self.gates {
            u = gate_matrix(n, *g) * u;
        }
        u
    }

    pub fn to_text(&self) -> String {
        self.gates
            .iter()
            .map(|g| match g {
                Gate::H(q) => format!("H {q}"),
                Gate::S(q) => format!("S {q}"),
                Gate::Cnot(c, t) => format!("CNOT {c} {t}"),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn bit(x: usize, n: usize, q: usize) -> usize {
    (x >> (n - 1 - q)) & 1
}

fn gate_matrix(n: usize, g: Gate) -> DMatrix<C64> {
    let dim = 1usize << n;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for x in 0..dim {
        match g {
            Gate::H(q) => {
                let flip = x ^ (1 << (n - 1 - q));
                let sign = if bit(x, n, q) == 1 { -1.0 } else { 1.0 };
                m[(x, x)] += C64::new(sign * h, 0.0);
                m[(flip, x)] += C64::new(h, 0.0);
            }
            Gate::S(q) => {
                m[(x, x)] = if bit(x, n, q) == 1 { C64::new(0.0, 1.0) } else { C64::new(1.0, 0.0) };
            }
            Gate::Cnot(c, t) => {
                let y = if bit(x, n, c) == 1 { x ^ (1 << (n - 1 - t)) } else { x };
                m[(y, x)] = C64::new(1.0, 0.0);
            }
        }
    }
    m
}

/// `i^phase · ⊗_q X^{x_q} Z^{z_q}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pauli {
    pub x: Vec<bool>,
    pub z: Vec<bool>,
    pub phase: u8,
}

impl Pauli {
    pub fn identity(n: usize) -> Self {
        Self { x: vec![false; n], z: vec![false; n], phase: 0 }
    }

    pub fn from_bits(x: Vec<bool>, z: Vec<bool>) -> Self {
        Self { x, z, phase: 0 }
    }

    /// `G^dagger P G` for one generator.
    fn conjugate_gate(&mut self, g: Gate) {
        match g {
            Gate::H(q) => {
                if self.x[q] && self.z[q] {
                    self.phase = (self.phase + 2) % 4;
                }
                std::mem::swap(&mut self.x[q], &mut self.z[q]);
            }
            Gate::S(q) => {
                if self.x[q] {
                    self.phase = (self.phase + 3) % 4;
                    self.z[q] = !self.z[q];
                }
            }
            Gate::Cnot(c, t) => {
                self.x[t] ^= self.x[c];
                self.z[c] ^= self.z[t];
            }
        }
    }

    /// `C^dagger P C`, by symplectic tableau update.
    pub fn conjugate(&self, circuit: &CliffordCircuit) -> Pauli {
        let mut p = self.clone();
        for g in circuit.gates.iter().rev() {
            p.conjugate_gate(*g);
        }
        p
    }

    pub fn matrix(&self) -> DMatrix<C64> {
        let n = self.x.len();
        let dim = 1usize << n;
        let ph = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][self.phase as usize];
        let xm: usize = (0..n).filter(|&q| self.x[q]).map(|q| 1 << (n - 1 - q)).sum();
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for v in 0..dim {
            let zsign = (0..n).filter(|&q| self.z[q] && bit(v, n, q) == 1).count() % 2;
            let s = if zsign == 1 { -1.0 } else { 1.0 };
            m[(v ^ xm, v)] = ph * s;
        }
        m
    }
}

/// Exact outcome of the teleport-and-invert distinguisher.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CliffordAttackReport {
    pub circuit: String,
    pub n: usize,
    pub m: usize,
    pub bob_qubits: usize,
    /// `Pr[(0, 0)]` when the last logical bit is 0.
    pub p00_d1: f64,
    /// `Pr[(0, 0)]` when the last logical bit is 1.
    pub p00_d2: f64,
    /// Largest failure probability of Charlie's decoded bit over branches.
    pub decode_error: f64,
    pub mc_p00_d1: f64,
    pub mc_p00_d2: f64,
    pub trials: usize,
}

const TOTAL_QUBIT_CAP: usize = 12;

fn basis_input(n: usize, m: usize, r: usize, last: usize) -> usize {
    ((r << 1) | last) << (m - n)
}

/// Exact joint law of Bob's Bell outcomes `(a, b)` and Charlie's decoded
/// message qubit, for a fixed logical input.
fn branch_table(
    circuit: &CliffordCircuit,
    n: usize,
    bob_qubits: usize,
    input: usize,
) -> Result<Vec<[f64; 2]>> {
    let m = circuit.n_qubits;
    let mb = bob_qubits;
    let mut regs: Vec<(String, usize)> = (0..m).map(|i| (format!("q{i}"), 2)).collect();
    for i in 0..mb {
        regs.push((format!("eb{i}"), 2));
        regs.push((format!("ec{i}"), 2));
    }
    let layout = RegisterLayout::new(regs)?;
    let mut state = PureState::basis(RegisterLayout::qubits("q", m)?, input)?;
    state.apply_on(&(0..m).map(|i| format!("q{i}")).collect::<Vec<_>>(), &circuit.unitary())?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let epr = PureState::new(
        RegisterLayout::qubits("e", 2)?,
        vec![C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)],
    )?;
    for i in 0..mb {
        state = state.tensor(&epr.relabel(&[format!("eb{i}"), format!("ec{i}")])?)?;
    }
    debug_assert_eq!(state.layout(), &layout);
    let cnot = gate_matrix(2, Gate::Cnot(0, 1));
    let had = gate_matrix(1, Gate::H(0));
    for i in 0..mb {
        state.apply_on(&[format!("q{i}"), format!("eb{i}")], &cnot)?;
        state.apply_on(&[format!("q{i}")], &had)?;
    }
    let charlie: Vec<String> = (0..mb).map(|i| format!("ec{i}")).chain((mb..m).map(|i| format!("q{i}"))).collect();
    state.apply_on(&charlie, &circuit.unitary().adjoint())?;
    let pos_a: Vec<usize> = (0..mb).map(|i| layout.position(&format!("eb{i}"))).collect::<Result<_>>()?;
    let pos_b: Vec<usize> = (0..mb).map(|i| layout.position(&format!("q{i}"))).collect::<Result<_>>()?;
    let msg = layout.position(&charlie[n - 1])?;
    let mut table = vec![[0.0; 2]; 1 << (2 * mb)];
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let digits = layout.digits(idx);
        let a = pos_a.iter().fold(0, |acc, &q| (acc << 1) | digits[q]);
        let b = pos_b.iter().fold(0, |acc, &q| (acc << 1) | digits[q]);
        table[(a << mb) | b][digits[msg]] += p;
    }
    Ok(table)
}

/// Bob's decode bit: the X component on logical qubit `n - 1` of
/// `C^dagger (X^a Z^b ⊗ I) C`.
pub fn decode_bit(circuit: &CliffordCircuit, n: usize, bob_qubits: usize, a: usize, b: usize) -> bool {
    let m = circuit.n_qubits;
    let mb = bob_qubits;
    let x = (0..m).map(|q| q < mb && (a >> (mb - 1 - q)) & 1 == 1).collect();
    let z = (0..m).map(|q| q < mb && (b >> (mb - 1 - q)) & 1 == 1).collect();
    Pauli::from_bits(x, z).conjugate(circuit).x[n - 1]
}

/// Bob teleports his `bob_qubits` qubits into shared EPR pairs with a Bell
/// measurement, Charlie inverts the circuit on the teleported register and
/// reads the message qubit; both mask their bit with a shared random bit.
/// Probabilities are computed exactly; `trials` additionally samples the game.
pub fn attack_clifford(
    circuit: &CliffordCircuit,
    n: usize,
    bob_qubits: usize,
    trials: usize,
    rng: &RandomStream,
) -> Result<CliffordAttackReport> {
    let m = circuit.n_qubits;
    if n == 0 || n > m {
        bail!(Parameter, "need 1 <= n <= m");
    }
    if bob_qubits > m || m + 2 * bob_qubits > TOTAL_QUBIT_CAP {
        bail!(Dimension, "simulation exceeds {TOTAL_QUBIT_CAP} qubits");
    }
    let mb = bob_qubits;
    let mut p00 = [0.0; 2];
    let mut decode_error: f64 = 0.0;
    let mut tables = vec![];
    for last in 0..2 {
        let mut per_r = vec![];
        for r in 0..1usize << (n - 1) {
            let table = branch_table(circuit, n, mb, basis_input(n, m, r, last))?;
            let mut acc = 0.0;
            for (ab, probs) in table.iter().enumerate() {
                let g = decode_bit(circuit, n, mb, ab >> mb, ab & ((1 << mb) - 1)) as usize;
                let total = probs[0] + probs[1];
                // Bob outputs g ^ s, Charlie meas ^ s, with s a shared fair bit.
                acc += 0.5 * probs[g];
                if total > 1e-15 {
                    decode_error = decode_error.max(probs[g ^ 1 ^ last] / total);
                }
            }
            p00[last] += acc / (1usize << (n - 1)) as f64;
            per_r.push(table);
        }
        tables.push(per_r);
    }
    let mut hits = [0usize; 2];
    let mut r = rng.clone();
    for k in 0..trials {
        let last = k % 2;
        let ri = r.below(1 << (n - 1));
        let table = &tables[last][ri];
        let flat: Vec<f64> = table.iter().flat_map(|p| [p[0], p[1]]).collect();
        let pick = r.categorical(&flat);
        let (ab, meas) = (pick / 2, pick % 2);
        let g = decode_bit(circuit, n, mb, ab >> mb, ab & ((1 << mb) - 1)) as usize;
        let s = r.bit() as usize;
        if g ^ s == 0 && meas ^ s == 0 {
            hits[last] += 1;
        }
    }
    let half = (trials / 2).max(1) as f64;
    Ok(CliffordAttackReport {
        circuit: circuit.to_text(),
        n,
        m,
        bob_qubits: mb,
        p00_d1: p00[0],
        p00_d2: p00[1],
        decode_error,
        mc_p00_d1: hits[0] as f64 / ((trials + 1) / 2).max(1) as f64,
        mc_p00_d2: hits[1] as f64 / half,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_paulis(n: usize) -> impl Iterator<Item = Pauli> {
        (0..1usize << (2 * n)).map(move |k| {
            let x = (0..n).map(|q| (k >> q) & 1 == 1).collect();
            let z = (0..n).map(|q| (k >> (n + q)) & 1 == 1).collect();
            Pauli::from_bits(x, z)
        })
    }

    #[test]
    fn tableau_matches_dense_conjugation() {
        let circuits = [
            "H 0",
            "S 0",
            "CNOT 0 1",
            "H 1; S 1; CNOT 1 0; H 0; S 0; S 1",
            "S 0; H 0; CNOT 0 2; S 2; H 1; CNOT 2 1",
        ];
        for text in circuits {
            let c = CliffordCircuit::parse(3, text).unwrap();
            let u = c.unitary();
            for p in all_paulis(3) {
                let dense = u.adjoint() * p.matrix() * &u;
                let tab = p.conjugate(&c).matrix();
                assert!((dense - tab).norm() < 1e-12, "{text}: {p:?}");
            }
        }
    }

    #[test]
    fn non_clifford_rejected() {
        assert!(matches!(CliffordCircuit::parse(2, "H 0; T 1"), Err(crate::Error::Parameter(_))));
        assert!(CliffordCircuit::parse(2, "CNOT 0 0").is_err());
        assert!(CliffordCircuit::parse(2, "H 2").is_err());
    }

    #[test]
    fn separation_for_small_circuits() {
        let rng = RandomStream::new(3, 0);
        let cases = [(2, 2, "", 1), (2, 2, "CNOT 0 1", 1), (2, 2, "H 1", 1), (2, 3, "H 0; CNOT 0 2; S 1", 2)];
        for (n, m, text, mb) in cases {
            let c = CliffordCircuit::parse(m, text).unwrap();
            let rep = attack_clifford(&c, n, mb, 2000, &rng).unwrap();
            assert!((rep.p00_d1 - 0.5).abs() < 1e-12, "{text}: {rep:?}");
            assert!(rep.p00_d2.abs() < 1e-12, "{text}: {rep:?}");
            assert!(rep.decode_error < 1e-12);
            assert_eq!(rep.mc_p00_d2, 0.0);
        }
    }
}
