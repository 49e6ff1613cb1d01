use nalgebra::DMatrix;

use super::{OperatorMatrix, PureState, RandomStream, RegisterLayout, C64};
use crate::error::{bail, Result};

const MEASURE_TOL: f64 = 1e-8;

fn check_measurement(state: &PureState, projectors: &[OperatorMatrix]) -> Result<Vec<String>> {
    let Some(first) = projectors.first() else {
        bail!(Measurement, "empty projector set");
    };
    let labels: Vec<String> = first.layout().labels().iter().map(|s| s.to_string()).collect();
    let sub = state.layout().positions(&labels)?;
    if state.layout().select(&sub)?.dims() != first.layout().dims() {
        bail!(Layout, "projector dimensions do not match the measured registers");
    }
    let d = first.dim();
    let mut sum = DMatrix::<C64>::zeros(d, d);
    for p in projectors {
        if p.layout() != first.layout() {
            bail!(Measurement, "projectors act on different registers");
        }
        if !p.is_hermitian(MEASURE_TOL) {
            bail!(Measurement, "measurement operator is not hermitian");
        }
        sum += p.entries();
    }
    if (sum - DMatrix::<C64>::identity(d, d)).iter().any(|z| z.norm() > MEASURE_TOL) {
        bail!(Measurement, "projectors do not sum to the identity");
    }
    for (i, p) in projectors.iter().enumerate() {
        for q in &projectors[i + 1..] {
            if (p.entries() * q.entries()).iter().any(|z| z.norm() > MEASURE_TOL) {
                bail!(Measurement, "projectors are not pairwise orthogonal");
            }
        }
    }
    Ok(labels)
}

/// Born probabilities of a projective measurement on some of the state's
/// registers.
pub fn born_probabilities(state: &PureState, projectors: &[OperatorMatrix]) -> Result<Vec<f64>> {
    let labels = check_measurement(state, projectors)?;
    projectors
        .iter()
        .map(|p| {
            let v = state.apply_raw(&labels, p.entries())?;
            Ok(v.iter().map(|a| a.norm_sqr()).sum())
        })
        .collect()
}

/// Samples an outcome by the Born rule and returns it with the renormalized
/// post-measurement state.
pub fn born_measure(
    state: &PureState,
    projectors: &[OperatorMatrix],
    rng: &mut RandomStream,
) -> Result<(usize, PureState)> {
    let labels = check_measurement(state, projectors)?;
    let images: Vec<_> = projectors
        .iter()
        .map(|p| state.apply_raw(&labels, p.entries()))
        .collect::<Result<_>>()?;
    let probs: Vec<f64> = images.iter().map(|v| v.iter().map(|a| a.norm_sqr()).sum()).collect();
    let k = rng.categorical(&probs);
    let post = PureState::normalized(state.layout().clone(), images[k].clone())?;
    Ok((k, post))
}

/// Measures the listed registers in the computational basis. Returns one
/// digit per listed register and the collapsed state.
pub fn measure_computational<S: AsRef<str>>(
    state: &PureState,
    labels: &[S],
    rng: &mut RandomStream,
) -> Result<(Vec<usize>, PureState)> {
    let layout = state.layout();
    let pos = layout.positions(labels)?;
    let sub = layout.offsets(&pos);
    let rest = layout.offsets(&layout.complement(&pos));
    let amps = state.amplitudes();
    let probs: Vec<f64> = sub
        .iter()
        .map(|&s| rest.iter().map(|&r| amps[s + r].norm_sqr()).sum())
        .collect();
    let k = rng.categorical(&probs);
    let mut v = nalgebra::DVector::zeros(state.dim());
    for &r in &rest {
        v[sub[k] + r] = amps[sub[k] + r];
    }
    let sub_layout = layout.select(&pos)?;
    Ok((sub_layout.digits(k), PureState::normalized(layout.clone(), v)?))
}

fn swap_map(layout: &RegisterLayout, a: &[usize], b: &[usize]) -> Result<Vec<usize>> {
    if a.iter().any(|p| b.contains(p)) {
        bail!(Layout, "swap groups overlap");
    }
    if layout.dim_of(a) != layout.dim_of(b) {
        bail!(Layout, "swap groups have different dimensions");
    }
    let oa = layout.offsets(a);
    let ob = layout.offsets(b);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    let rest = layout.offsets(&layout.complement(&both));
    let mut map = vec![0; layout.total_dim()];
    for &r in &rest {
        for (i, &x) in oa.iter().enumerate() {
            for (j, &y) in ob.iter().enumerate() {
                map[r + x + y] = r + oa[j] + ob[i];
            }
        }
    }
    Ok(map)
}

/// Operator exchanging the joint contents of two register groups.
pub fn swap_operator<S: AsRef<str>>(layout: &RegisterLayout, a: &[S], b: &[S]) -> Result<OperatorMatrix> {
    let map = swap_map(layout, &layout.positions(a)?, &layout.positions(b)?)?;
    let d = layout.total_dim();
    let mut m = DMatrix::zeros(d, d);
    for (i, &j) in map.iter().enumerate() {
        m[(j, i)] = C64::new(1.0, 0.0);
    }
    OperatorMatrix::with_roles(
        layout.clone(),
        m,
        super::Roles { hermitian: true, unitary: true, ..Default::default() },
    )
}

/// Pass probability `(1 + <psi|F|psi>)/2` of the SWAP test.
pub fn swap_test_pass_probability<S: AsRef<str>>(state: &PureState, a: &[S], b: &[S]) -> Result<f64> {
    let layout = state.layout();
    let map = swap_map(layout, &layout.positions(a)?, &layout.positions(b)?)?;
    let amps = state.amplitudes();
    let overlap: C64 = map.iter().enumerate().map(|(i, &j)| amps[j].conj() * amps[i]).sum();
    Ok(((1.0 + overlap.re) / 2.0).clamp(0.0, 1.0))
}

/// Runs one SWAP test; returns 1 on pass.
pub fn swap_test<S: AsRef<str>>(a: &[S], b: &[S], state: &PureState, rng: &mut RandomStream) -> Result<u8> {
    let p = swap_test_pass_probability(state, a, b)?;
    Ok(u8::from(rng.uniform() < p))
}
