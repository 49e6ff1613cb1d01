use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

use super::bits::{bits_to_index, random_bits, rate_stderr};
use super::sde::{gl_decode, gl_encode, seeded_haar, GL_INPUT, GL_OUTPUT};
use super::weakue::{hadamard, weakue_enc, weakue_gen, WeakUEKey, WIESNER_PREFIX};
use crate::error::{bail, Result};
use crate::glextract::inner_bit;
use crate::qcore::{measure_computational, PureState, RandomStream, C64};

/// Classical key the splitter uses to forward a measured string.
pub const KEY_MEASURED: &str = "measured";
/// Classical key carrying the masked bit of a UEQ ciphertext.
pub const KEY_PAD: &str = "pad";
/// Classical key carrying a shared random bit.
pub const KEY_COIN: &str = "coin";
/// Classical key carrying the wrapper's own pad.
pub const KEY_WRAP_PAD: &str = "wrap_pad";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    Bob,
    Charlie,
}

impl Party {
    fn slot(self) -> usize {
        match self {
            Party::Bob => 0,
            Party::Charlie => 1,
        }
    }
}

/// Splitter output: a joint state whose registers each belong to exactly one
/// responder, plus classical messages for each.
#[derive(Debug, Clone, Default)]
pub struct SplitState {
    quantum: Option<PureState>,
    owners: Vec<Party>,
    classical: [BTreeMap<String, u64>; 2],
}

impl SplitState {
    pub fn classical_only() -> Self {
        Self::default()
    }

    /// Every register of `state` must be listed in exactly one of `bob` and
    /// `charlie`.
    pub fn new<S: AsRef<str>>(state: PureState, bob: &[S], charlie: &[S]) -> Result<Self> {
        let layout = state.layout();
        let mut owners: Vec<Option<Party>> = vec![None; layout.len()];
        for (labels, party) in [(bob, Party::Bob), (charlie, Party::Charlie)] {
            for p in layout.positions(labels)? {
                if owners[p].is_some() {
                    bail!(Layout, "register {} assigned twice", layout.registers()[p].label);
                }
                owners[p] = Some(party);
            }
        }
        let owners = owners
            .into_iter()
            .enumerate()
            .map(|(p, o)| o.ok_or_else(|| crate::Error::Layout(format!("register {} has no owner", layout.registers()[p].label))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { quantum: Some(state), owners, classical: Default::default() })
    }

    pub fn send(&mut self, party: Party, key: &str, value: u64) {
        self.classical[party.slot()].insert(key.to_string(), value);
    }

    pub fn broadcast(&mut self, key: &str, value: u64) {
        self.send(Party::Bob, key, value);
        self.send(Party::Charlie, key, value);
    }

    pub fn local(&mut self, party: Party) -> LocalAccess<'_> {
        LocalAccess { split: self, party }
    }
}

/// A responder's view of the split state: its own registers and messages.
pub struct LocalAccess<'a> {
    split: &'a mut SplitState,
    party: Party,
}

impl LocalAccess<'_> {
    pub fn party(&self) -> Party {
        self.party
    }

    pub fn labels(&self) -> Vec<String> {
        match &self.split.quantum {
            None => vec![],
            Some(s) => s
                .layout()
                .registers()
                .iter()
                .zip(&self.split.owners)
                .filter(|(_, &o)| o == self.party)
                .map(|(r, _)| r.label.clone())
                .collect(),
        }
    }

    pub fn classical(&self, key: &str) -> Option<u64> {
        self.split.classical[self.party.slot()].get(key).copied()
    }

    fn owned<S: AsRef<str>>(&mut self, labels: &[S]) -> Result<&mut PureState> {
        let party = self.party;
        let Some(state) = self.split.quantum.as_mut() else {
            bail!(Layout, "split state has no quantum part");
        };
        for p in state.layout().positions(labels)? {
            if self.split.owners[p] != party {
                bail!(Layout, "register {} belongs to the other responder", state.layout().registers()[p].label);
            }
        }
        Ok(state)
    }

    pub fn apply<S: AsRef<str>>(&mut self, labels: &[S], u: &DMatrix<C64>) -> Result<()> {
        self.owned(labels)?.apply_on(labels, u)
    }

    pub fn measure<S: AsRef<str>>(&mut self, labels: &[S], rng: &mut RandomStream) -> Result<Vec<usize>> {
        let state = self.owned(labels)?;
        let (digits, post) = measure_computational(state, labels, rng)?;
        *state = post;
        Ok(digits)
    }
}

/// Acts on the challenge state given to the splitter. `pad` is the classical
/// part of a UEQ ciphertext and is `None` in the SDE game. Implementations
/// must be re-entrant.
pub trait Splitter: Send + Sync {
    fn split(&self, challenge: &PureState, pad: Option<u8>, rng: &mut RandomStream) -> Result<SplitState>;
}

/// Receives the weak-UE key, its own `t` copies of the Goldreich-Levin state
/// and its share, and outputs a bit. Implementations must be re-entrant.
pub trait Responder: Send + Sync {
    fn respond(
        &self,
        k: &WeakUEKey,
        copies: Vec<PureState>,
        local: &mut LocalAccess<'_>,
        rng: &mut RandomStream,
    ) -> Result<u8>;
}

#[derive(Clone)]
pub struct CloningAdversary {
    pub name: String,
    pub splitter: Arc<dyn Splitter>,
    pub bob: Arc<dyn Responder>,
    pub charlie: Arc<dyn Responder>,
}

impl std::fmt::Debug for CloningAdversary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CloningAdversary").field("name", &self.name).finish()
    }
}

/// Names accepted by `CloningAdversary::by_name`.
pub const ADVERSARY_NAMES: [&str; 6] = [
    "random_guess",
    "measure_and_forward",
    "split_halves",
    "forward_to_bob",
    "gaussian_elimination",
    "gaussian_elimination_computational",
];

/// Breidbart basis angle, the splitter's default measurement for the
/// linear-constraint attack.
pub const BREIDBART_ANGLE: f64 = std::f64::consts::PI / 8.0;

impl CloningAdversary {
    pub fn new(
        name: impl Into<String>,
        splitter: Arc<dyn Splitter>,
        bob: Arc<dyn Responder>,
        charlie: Arc<dyn Responder>,
    ) -> Self {
        Self { name: name.into(), splitter, bob, charlie }
    }

    /// Both responders output fresh random bits.
    pub fn random_guess() -> Self {
        Self::new("random_guess", Arc::new(ForwardPad), Arc::new(GuessResponder), Arc::new(GuessResponder))
    }

    /// The splitter measures in the computational basis and forwards the
    /// string; each responder decodes one copy with it.
    pub fn measure_and_forward() -> Self {
        let r: Arc<dyn Responder> = Arc::new(ForwardedKeyResponder);
        Self::new("measure_and_forward", Arc::new(MeasureSplitter), r.clone(), r)
    }

    /// Bob gets the first half of the qubits and Charlie the rest. Each
    /// decodes its own half with the key and waits for a copy whose support
    /// avoids the unknown half.
    pub fn split_halves() -> Self {
        let r: Arc<dyn Responder> = Arc::new(KnownBitsResponder);
        Self::new("split_halves", Arc::new(HalvesSplitter { bob_share: None }), r.clone(), r)
    }

    /// Bob gets every qubit; Charlie holds nothing.
    pub fn forward_to_bob() -> Self {
        let r: Arc<dyn Responder> = Arc::new(KnownBitsResponder);
        Self::new("forward_to_bob", Arc::new(HalvesSplitter { bob_share: Some(1.0) }), r.clone(), r)
    }

    /// Linear-constraint attack with Breidbart side information: the
    /// splitter measures every qubit at angle pi/8 and each responder decodes
    /// its measured copies by exact posterior over `x`.
    pub fn gaussian_elimination() -> Self {
        Self::posterior_decoder(BREIDBART_ANGLE).renamed("gaussian_elimination")
    }

    /// Computational-basis splitter; each responder measures all its copies
    /// and solves the resulting linear system over F2, falling back to a
    /// coin shared through the splitter.
    pub fn gaussian_elimination_computational() -> Self {
        let r: Arc<dyn Responder> = Arc::new(GaussianResponder);
        Self::new("gaussian_elimination_computational", Arc::new(MeasureSplitter), r.clone(), r)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Splitter measures each qubit in a basis rotated by `angle`; each
    /// responder decodes its copies by exact posterior over `x`.
    pub fn posterior_decoder(angle: f64) -> Self {
        let r: Arc<dyn Responder> = Arc::new(PosteriorResponder { angle });
        Self::new("posterior_decoder", Arc::new(RotatedSplitter { angle }), r.clone(), r)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name {
            "random_guess" => Self::random_guess(),
            "measure_and_forward" => Self::measure_and_forward(),
            "split_halves" => Self::split_halves(),
            "forward_to_bob" => Self::forward_to_bob(),
            "gaussian_elimination" => Self::gaussian_elimination(),
            "gaussian_elimination_computational" => Self::gaussian_elimination_computational(),
            _ => bail!(Parameter, "unknown adversary {name:?}; expected one of {ADVERSARY_NAMES:?}"),
        })
    }

    /// SDE adversary built from a UEQ adversary: the splitter draws a pad bit
    /// `b1`, runs the inner splitter on `(dk, b1)` and sends `b1` to both;
    /// the responders xor their inner answer with `b1`.
    pub fn wrap_ueq_for_sde(&self) -> Self {
        Self::new(
            format!("wrapped_{}", self.name),
            Arc::new(WrappedSplitter { inner: self.splitter.clone() }),
            Arc::new(WrappedResponder { inner: self.bob.clone() }),
            Arc::new(WrappedResponder { inner: self.charlie.clone() }),
        )
    }
}

fn challenge_qubits(challenge: &PureState) -> Vec<String> {
    challenge.layout().labels().into_iter().map(String::from).collect()
}

fn pad_of(local: &LocalAccess<'_>) -> u8 {
    local.classical(KEY_PAD).unwrap_or(0) as u8
}

fn measure_copy(copy: &PureState, rng: &mut RandomStream) -> Result<(usize, u8)> {
    let (d, _) = measure_computational(copy, &[GL_INPUT, GL_OUTPUT], rng)?;
    Ok((d[0], d[1] as u8))
}

fn wiesner_index(label: &str) -> Result<usize> {
    label
        .strip_prefix(WIESNER_PREFIX)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| crate::Error::Format(format!("unexpected challenge register {label:?}")))
}

struct ForwardPad;

impl Splitter for ForwardPad {
    fn split(&self, _: &PureState, pad: Option<u8>, _: &mut RandomStream) -> Result<SplitState> {
        let mut s = SplitState::classical_only();
        if let Some(p) = pad {
            s.broadcast(KEY_PAD, p as u64);
        }
        Ok(s)
    }
}

struct GuessResponder;

impl Responder for GuessResponder {
    fn respond(&self, _: &WeakUEKey, _: Vec<PureState>, _: &mut LocalAccess<'_>, rng: &mut RandomStream) -> Result<u8> {
        Ok(rng.bit())
    }
}

struct MeasureSplitter;

impl Splitter for MeasureSplitter {
    fn split(&self, challenge: &PureState, pad: Option<u8>, rng: &mut RandomStream) -> Result<SplitState> {
        let labels = challenge_qubits(challenge);
        let (digits, _) = measure_computational(challenge, &labels, rng)?;
        let measured = digits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        let mut s = ForwardPad.split(challenge, pad, rng)?;
        s.broadcast(KEY_MEASURED, measured);
        s.broadcast(KEY_COIN, rng.bit() as u64);
        Ok(s)
    }
}

struct ForwardedKeyResponder;

impl Responder for ForwardedKeyResponder {
    fn respond(
        &self,
        _: &WeakUEKey,
        copies: Vec<PureState>,
        local: &mut LocalAccess<'_>,
        rng: &mut RandomStream,
    ) -> Result<u8> {
        let Some(x) = local.classical(KEY_MEASURED) else {
            return Ok(rng.bit());
        };
        let Some(copy) = copies.first() else {
            return Ok(rng.bit());
        };
        Ok(gl_decode(copy, x as usize, rng)? ^ pad_of(local))
    }
}

struct HalvesSplitter {
    bob_share: Option<f64>,
}

impl Splitter for HalvesSplitter {
    fn split(&self, challenge: &PureState, pad: Option<u8>, _: &mut RandomStream) -> Result<SplitState> {
        let labels = challenge_qubits(challenge);
        let cut = match self.bob_share {
            Some(f) => (labels.len() as f64 * f).round() as usize,
            None => labels.len().div_ceil(2),
        };
        let mut s = SplitState::new(challenge.clone(), &labels[..cut], &labels[cut..])?;
        if let Some(p) = pad {
            s.broadcast(KEY_PAD, p as u64);
        }
        Ok(s)
    }
}

struct KnownBitsResponder;

impl Responder for KnownBitsResponder {
    fn respond(
        &self,
        k: &WeakUEKey,
        copies: Vec<PureState>,
        local: &mut LocalAccess<'_>,
        rng: &mut RandomStream,
    ) -> Result<u8> {
        let n = k.n();
        let labels = local.labels();
        let h = hadamard();
        let mut known_mask = 0usize;
        let mut known = 0usize;
        for label in &labels {
            let i = wiesner_index(label)?;
            if k.bases[i] == 1 {
                local.apply(&[label], &h)?;
            }
            let b = local.measure(&[label], rng)?[0];
            known_mask |= 1 << (n - 1 - i);
            known |= b << (n - 1 - i);
        }
        for copy in &copies {
            let (y, c) = measure_copy(copy, rng)?;
            if y & !known_mask == 0 {
                return Ok(c ^ inner_bit(y, known) as u8 ^ pad_of(local));
            }
        }
        Ok(rng.bit())
    }
}

/// Incremental row echelon form over F2. Each row packs the unknown bits of
/// `x` above bit 0, which stands for the message.
#[derive(Default)]
struct Echelon {
    rows: Vec<(u64, u8)>,
}

impl Echelon {
    fn reduce(&self, mut v: u64, mut rhs: u8) -> (u64, u8) {
        for &(row, r) in &self.rows {
            let pivot = 63 - row.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= row;
                rhs ^= r;
            }
        }
        (v, rhs)
    }

    fn insert(&mut self, v: u64, rhs: u8) {
        let (v, rhs) = self.reduce(v, rhs);
        if v != 0 {
            let pos = self.rows.partition_point(|&(r, _)| r.leading_zeros() < v.leading_zeros());
            self.rows.insert(pos, (v, rhs));
        }
    }

    /// Value of the message variable if the rows determine it.
    fn message(&self) -> Option<u8> {
        let (v, rhs) = self.reduce(1, 0);
        (v == 0).then_some(rhs)
    }
}

struct GaussianResponder;

impl Responder for GaussianResponder {
    fn respond(
        &self,
        k: &WeakUEKey,
        copies: Vec<PureState>,
        local: &mut LocalAccess<'_>,
        rng: &mut RandomStream,
    ) -> Result<u8> {
        let n = k.n();
        let (known_mask, known) = match local.classical(KEY_MEASURED) {
            Some(m) => {
                let mask = !k.hadamard_mask() & ((1 << n) - 1);
                (mask, m as usize & mask)
            }
            None => (0, 0),
        };
        let unknown: Vec<usize> = (0..n).map(|i| 1 << i).filter(|b| known_mask & b == 0).collect();
        let mut system = Echelon::default();
        for copy in &copies {
            let (y, c) = measure_copy(copy, rng)?;
            let mut row = 1u64;
            for (j, &b) in unknown.iter().enumerate() {
                if y & b != 0 {
                    row |= 1 << (j + 1);
                }
            }
            system.insert(row, c ^ inner_bit(y & known_mask, known) as u8);
        }
        Ok(match system.message() {
            Some(m) => m,
            None => local.classical(KEY_COIN).map_or_else(|| rng.bit(), |c| c as u8),
        } ^ pad_of(local))
    }
}

/// Per-qubit splitter measurement in the basis rotated by `angle` from the
/// computational one.
struct RotatedSplitter {
    angle: f64,
}

fn rotation(angle: f64) -> DMatrix<C64> {
    let (c, s) = (C64::new(angle.cos(), 0.0), C64::new(angle.sin(), 0.0));
    DMatrix::from_row_slice(2, 2, &[c, s, -s, c])
}

impl Splitter for RotatedSplitter {
    fn split(&self, challenge: &PureState, pad: Option<u8>, rng: &mut RandomStream) -> Result<SplitState> {
        let labels = challenge_qubits(challenge);
        let mut st = challenge.clone();
        let u = rotation(self.angle);
        for l in &labels {
            st.apply_on(&[l], &u)?;
        }
        let (digits, _) = measure_computational(&st, &labels, rng)?;
        let measured = digits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        let mut s = ForwardPad.split(challenge, pad, rng)?;
        s.broadcast(KEY_MEASURED, measured);
        s.broadcast(KEY_COIN, rng.bit() as u64);
        Ok(s)
    }
}

/// Maximum a posteriori decoder: enumerates every `x` consistent with the
/// measured copies, weighted by the likelihood of the splitter's outcome.
struct PosteriorResponder {
    angle: f64,
}

impl PosteriorResponder {
    /// `P(outcome 0 | basis, bit)` for one rotated measurement.
    fn zero_probability(&self, basis: u8, bit: usize) -> f64 {
        let (c, s) = (self.angle.cos(), self.angle.sin());
        match (basis, bit) {
            (0, 0) => c * c,
            (0, _) => s * s,
            (_, 0) => (c + s).powi(2) / 2.0,
            _ => (c - s).powi(2) / 2.0,
        }
    }
}

impl Responder for PosteriorResponder {
    fn respond(
        &self,
        k: &WeakUEKey,
        copies: Vec<PureState>,
        local: &mut LocalAccess<'_>,
        rng: &mut RandomStream,
    ) -> Result<u8> {
        let n = k.n();
        let samples = copies.iter().map(|c| measure_copy(c, rng)).collect::<Result<Vec<_>>>()?;
        let measured = local.classical(KEY_MEASURED).map(|m| m as usize);
        let mut weight = [0.0f64; 2];
        for x in 0..1usize << n {
            let mut prior = 1.0;
            if let Some(mx) = measured {
                for i in 0..n {
                    let shift = n - 1 - i;
                    let p0 = self.zero_probability(k.bases[i], (x >> shift) & 1);
                    prior *= if (mx >> shift) & 1 == 0 { p0 } else { 1.0 - p0 };
                }
            }
            for m in 0..2u8 {
                if samples.iter().all(|&(y, c)| c == inner_bit(y, x) as u8 ^ m) {
                    weight[m as usize] += prior;
                }
            }
        }
        let m = if (weight[0] - weight[1]).abs() <= 1e-12 * (weight[0] + weight[1]) {
            local.classical(KEY_COIN).map_or_else(|| rng.bit(), |c| c as u8)
        } else {
            u8::from(weight[1] > weight[0])
        };
        Ok(m ^ pad_of(local))
    }
}

struct WrappedSplitter {
    inner: Arc<dyn Splitter>,
}

impl Splitter for WrappedSplitter {
    fn split(&self, challenge: &PureState, pad: Option<u8>, rng: &mut RandomStream) -> Result<SplitState> {
        if pad.is_some() {
            bail!(Parameter, "wrapped adversaries play the SDE game, which has no pad");
        }
        let b1 = rng.bit();
        let mut s = self.inner.split(challenge, Some(b1), rng)?;
        s.broadcast(KEY_WRAP_PAD, b1 as u64);
        Ok(s)
    }
}

struct WrappedResponder {
    inner: Arc<dyn Responder>,
}

impl Responder for WrappedResponder {
    fn respond(
        &self,
        k: &WeakUEKey,
        copies: Vec<PureState>,
        local: &mut LocalAccess<'_>,
        rng: &mut RandomStream,
    ) -> Result<u8> {
        let b1 = local.classical(KEY_WRAP_PAD).unwrap_or(0) as u8;
        Ok(self.inner.respond(k, copies, local, rng)? ^ b1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Sde,
    Ueq,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameReport {
    pub scheme: Scheme,
    pub adversary: String,
    pub n: usize,
    pub t_copies: usize,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub stderr: f64,
    pub warnings: Vec<String>,
}

/// Largest copy count outside the linear-algebra danger zone.
pub fn copy_danger_threshold(n: usize) -> usize {
    n / 2
}

fn run_game(scheme: Scheme, adv: &CloningAdversary, n: usize, t: usize, trials: usize, rng: &RandomStream) -> Result<GameReport> {
    if trials == 0 {
        bail!(Parameter, "need at least one trial");
    }
    if t == 0 {
        bail!(Parameter, "need at least one ciphertext copy per responder");
    }
    let hits = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<bool> {
            let mut r = rng.split(i as u64);
            let k = weakue_gen(n, &mut r)?;
            let x = random_bits(n, &mut r);
            let wiesner = weakue_enc(&k, &x)?;
            let psi = seeded_haar(n, r.next_seed())?;
            let b = r.bit();
            let (pad, gl_bit) = match scheme {
                Scheme::Sde => (None, b),
                Scheme::Ueq => {
                    let key_bit = r.bit();
                    (Some(key_bit ^ b), key_bit)
                }
            };
            let phi = gl_encode(&psi, bits_to_index(&x), gl_bit)?;
            let mut split = adv.splitter.split(&wiesner, pad, &mut r)?;
            let ob = adv.bob.respond(&k, vec![phi.clone(); t], &mut split.local(Party::Bob), &mut r)?;
            let oc = adv.charlie.respond(&k, vec![phi; t], &mut split.local(Party::Charlie), &mut r)?;
            Ok(ob == b && oc == b)
        })
        .collect::<Result<Vec<bool>>>()?;
    let successes = hits.iter().filter(|&&h| h).count();
    let (rate, stderr) = rate_stderr(successes, trials);
    let mut warnings = vec![];
    if t > copy_danger_threshold(n) {
        warnings.push(format!(
            "t = {t} copies exceeds n/2 = {}: measuring copies yields linear constraints on x",
            copy_danger_threshold(n)
        ));
    }
    Ok(GameReport { scheme, adversary: adv.name.clone(), n, t_copies: t, trials, successes, rate, stderr, warnings })
}

/// The identical-ciphertext cloning game: split `dk`, then give each
/// responder `t` copies of one ciphertext of a uniform bit. Returns the
/// empirical probability that both output the bit. Trial `i` uses
/// `rng.split(i)`.
pub fn sde_security_experiment(
    adv: &CloningAdversary,
    n: usize,
    t_copies: usize,
    trials: usize,
    rng: &RandomStream,
) -> Result<GameReport> {
    run_game(Scheme::Sde, adv, n, t_copies, trials, rng)
}

/// The UEQ cloning game: split the ciphertext, then give each responder `t`
/// copies of the decryption key.
pub fn ueq_security_experiment(
    adv: &CloningAdversary,
    n: usize,
    t_copies: usize,
    trials: usize,
    rng: &RandomStream,
) -> Result<GameReport> {
    run_game(Scheme::Ueq, adv, n, t_copies, trials, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::RegisterLayout;

    #[test]
    fn overlapping_split_rejected() {
        let s = PureState::uniform(RegisterLayout::qubits("w", 2).unwrap());
        assert!(SplitState::new(s.clone(), &["w0"], &["w0", "w1"]).is_err());
        assert!(SplitState::new(s.clone(), &["w0"], &[] as &[&str]).is_err());
        assert!(SplitState::new(s, &["w0"], &["w1"]).is_ok());
    }

    #[test]
    fn foreign_registers_refused() {
        let s = PureState::uniform(RegisterLayout::qubits("w", 2).unwrap());
        let mut split = SplitState::new(s, &["w0"], &["w1"]).unwrap();
        let mut r = RandomStream::from_seed(1);
        let mut bob = split.local(Party::Bob);
        assert_eq!(bob.labels(), vec!["w0".to_string()]);
        assert!(bob.measure(&["w1"], &mut r).is_err());
        assert!(bob.measure(&["w0"], &mut r).is_ok());
        assert!(bob.apply(&["w1"], &hadamard()).is_err());
    }

    #[test]
    fn echelon_determines_message() {
        let mut e = Echelon::default();
        e.insert(0b101, 1);
        assert_eq!(e.message(), None);
        e.insert(0b100, 0);
        assert_eq!(e.message(), Some(1));
        e.insert(0b001, 1);
        assert_eq!(e.message(), Some(1));
    }

    #[test]
    fn guessing_near_quarter() {
        let rep = sde_security_experiment(&CloningAdversary::random_guess(), 3, 1, 4000, &RandomStream::from_seed(3))
            .unwrap();
        assert!((rep.rate - 0.25).abs() < 3.0 * rep.stderr + 1e-3);
    }

    #[test]
    fn forward_to_bob_near_half() {
        let rep = sde_security_experiment(&CloningAdversary::forward_to_bob(), 4, 1, 3000, &RandomStream::from_seed(4))
            .unwrap();
        assert!(rep.rate > 0.4 && rep.rate < 0.62, "{}", rep.rate);
    }

    #[test]
    fn gaussian_elimination_breaks_many_copies() {
        let rep = sde_security_experiment(
            &CloningAdversary::gaussian_elimination(),
            4,
            6,
            2000,
            &RandomStream::from_seed(5),
        )
        .unwrap();
        assert!(rep.rate > 0.8, "{}", rep.rate);
        assert!(!rep.warnings.is_empty());
    }

    #[test]
    fn posterior_at_zero_angle_matches_echelon() {
        let rng = RandomStream::from_seed(8);
        let a = sde_security_experiment(&CloningAdversary::posterior_decoder(0.0), 4, 5, 1500, &rng).unwrap();
        let b = sde_security_experiment(&CloningAdversary::gaussian_elimination_computational(), 4, 5, 1500, &rng)
            .unwrap();
        assert_eq!(a.successes, b.successes);
    }

    #[test]
    fn wrapper_matches_ueq_game() {
        let adv = CloningAdversary::measure_and_forward();
        let rng = RandomStream::from_seed(6);
        let u = ueq_security_experiment(&adv, 3, 1, 3000, &rng).unwrap();
        let s = sde_security_experiment(&adv.wrap_ueq_for_sde(), 3, 1, 3000, &rng.split(99)).unwrap();
        let se = (u.stderr.powi(2) + s.stderr.powi(2)).sqrt();
        assert!((u.rate - s.rate).abs() < 3.0 * se, "{} vs {}", u.rate, s.rate);
    }
}
