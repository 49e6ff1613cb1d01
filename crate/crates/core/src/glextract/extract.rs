use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::adversary::{
    inner_bit, GLAdversary, BOB_COINS, BOB_OUT, BOB_WORK, CHARLIE_COINS, CHARLIE_OUT, CHARLIE_WORK,
};
use crate::error::{bail, Result};
use crate::qcore::{PureState, RegisterLayout, C64, MAX_TOTAL_DIM};

/// `|0>_BO |0>_CO ⊗ Phi` as a `(2 wb) x (2 wc)` amplitude matrix, outputs
/// most significant.
fn with_output(phi: &DMatrix<C64>) -> DMatrix<C64> {
    let (wb, wc) = phi.shape();
    let mut m = DMatrix::<C64>::zeros(2 * wb, 2 * wc);
    m.view_mut((0, 0), (wb, wc)).copy_from(phi);
    m
}

fn output_joint(psi: &DMatrix<C64>) -> [[f64; 2]; 2] {
    let (rb, rc) = (psi.nrows() / 2, psi.ncols() / 2);
    let mut p = [[0.0; 2]; 2];
    for i in 0..psi.nrows() {
        for j in 0..psi.ncols() {
            p[i / rb][j / rc] += psi[(i, j)].norm_sqr();
        }
    }
    p
}

/// `Pr[b ^ b' = <r, x> ^ <r', x>] - 1/2`, averaged exactly over all coin
/// pairs for the input `x`.
pub fn gl_advantage(adv: &GLAdversary, x: usize) -> Result<f64> {
    let r_count = 1usize << adv.n();
    if x >= r_count {
        bail!(Parameter, "x must be an {}-bit string", adv.n());
    }
    let phi = with_output(&adv.input_matrix(x));
    let total: f64 = (0..r_count)
        .into_par_iter()
        .map(|r| {
            let left = adv.bob_unitary(r).entries() * &phi;
            (0..r_count)
                .map(|rp| {
                    let psi = &left * adv.charlie_unitary(rp).entries().transpose();
                    let p = output_joint(&psi);
                    let target = inner_bit(r, x) ^ inner_bit(rp, x);
                    p[0][target] + p[1][target ^ 1]
                })
                .sum::<f64>()
        })
        .sum();
    Ok(total / (r_count * r_count) as f64 - 0.5)
}

/// `W_r = U_r^dagger Z_out U_r`.
fn reflected(u: &DMatrix<C64>) -> DMatrix<C64> {
    let d = u.nrows() / 2;
    let z = DMatrix::from_fn(2 * d, 2 * d, |i, j| {
        if i != j {
            C64::new(0.0, 0.0)
        } else if i < d {
            C64::new(1.0, 0.0)
        } else {
            C64::new(-1.0, 0.0)
        }
    });
    u.adjoint() * z * u
}

/// One side's extractor restricted to the coin outcome `x`, as a map from the
/// work register to `(out, work)`: `(1/R) sum_r (-1)^<r, x> W_r |0>_out`.
fn kraus(ws: &[DMatrix<C64>], x: usize) -> DMatrix<C64> {
    let d = ws[0].nrows() / 2;
    let mut k = DMatrix::<C64>::zeros(2 * d, d);
    for (r, w) in ws.iter().enumerate() {
        let s = if inner_bit(r, x) == 1 { -1.0 } else { 1.0 };
        k += w.columns(0, d) * C64::new(s, 0.0);
    }
    k / C64::new(ws.len() as f64, 0.0)
}

/// Per-input extractor figures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GLPoint {
    pub x: usize,
    pub epsilon: f64,
    /// `Pr[y = z = x]`.
    pub extraction: f64,
    /// Full-circuit statevector value, when within the dimension cap.
    pub circuit_extraction: Option<f64>,
    /// Fidelity of `(out, work)` after the uncompute step with `|0> phi_x |0>`.
    pub restoration_fidelity: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GLReport {
    pub n: usize,
    pub points: Vec<GLPoint>,
    /// Advantage averaged over uniform `x`.
    pub epsilon: f64,
    /// Extraction probability averaged over uniform `x`.
    pub extraction: f64,
    /// `4 epsilon^2`.
    pub bound: f64,
    pub holds: bool,
    /// Extractor description, Bob then Charlie.
    pub gates: Vec<String>,
}

/// Gate list of the coherent extractor.
pub fn extractor_gates(n: usize) -> Vec<String> {
    let mut g = vec![];
    for (party, coins, out, work) in [("B", BOB_COINS, BOB_OUT, BOB_WORK), ("C", CHARLIE_COINS, CHARLIE_OUT, CHARLIE_WORK)] {
        g.push(format!("H^{n} {coins}"));
        g.push(format!("CTRL[{coins}] U_{party}^r ({out}, {work})"));
        g.push(format!("Z {out}"));
        g.push(format!("CTRL[{coins}] U_{party}^r^dagger ({out}, {work})"));
        g.push(format!("H^{n} {coins}"));
        g.push(format!("MEASURE {coins}"));
    }
    g
}

fn hadamard_n(n: usize) -> DMatrix<C64> {
    let r = 1usize << n;
    let s = 1.0 / (r as f64).sqrt();
    DMatrix::from_fn(r, r, |i, j| C64::new(if inner_bit(i, j) == 1 { -s } else { s }, 0.0))
}

/// Runs the extractor circuit on the full register set and returns
/// `Pr[y = z = x]`, or `None` when the joint dimension exceeds the cap.
pub fn gl_circuit_extraction(adv: &GLAdversary, x: usize) -> Result<Option<f64>> {
    let n = adv.n();
    let r = 1usize << n;
    let (wb, wc) = adv.work_dims();
    let total = (r * 2 * wb).checked_mul(r * 2 * wc);
    if total.is_none_or(|t| t > MAX_TOTAL_DIM) {
        return Ok(None);
    }
    let layout = RegisterLayout::new([
        (BOB_COINS, r),
        (BOB_OUT, 2),
        (BOB_WORK, wb),
        (CHARLIE_COINS, r),
        (CHARLIE_OUT, 2),
        (CHARLIE_WORK, wc),
    ])?;
    let mut state = PureState::basis(RegisterLayout::new([(BOB_COINS, r), (BOB_OUT, 2), (CHARLIE_COINS, r), (CHARLIE_OUT, 2)])?, 0)?
        .tensor(adv.shared_input(x))?
        .permute_registers(&layout.labels())?;
    let h = hadamard_n(n);
    let z = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]));
    for (coins, out, work, us) in [
        (BOB_COINS, BOB_OUT, BOB_WORK, (0..r).map(|k| adv.bob_unitary(k).entries().clone()).collect::<Vec<_>>()),
        (CHARLIE_COINS, CHARLIE_OUT, CHARLIE_WORK, (0..r).map(|k| adv.charlie_unitary(k).entries().clone()).collect()),
    ] {
        let inv: Vec<DMatrix<C64>> = us.iter().map(|u| u.adjoint()).collect();
        state.apply_on(&[coins], &h)?;
        state.apply_controlled(coins, &[out, work], &us)?;
        state.apply_on(&[out], &z)?;
        state.apply_controlled(coins, &[out, work], &inv)?;
        state.apply_on(&[coins], &h)?;
    }
    let (pb, pc) = (layout.position(BOB_COINS)?, layout.position(CHARLIE_COINS)?);
    let p = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let d = layout.digits(*i);
            d[pb] == x && d[pc] == x
        })
        .map(|(_, a)| a.norm_sqr())
        .sum();
    Ok(Some(p))
}

/// Exact extraction probabilities and advantages for every input `x`, with
/// the `4 eps^2` check on the averages.
pub fn gl_extract(adv: &GLAdversary) -> Result<GLReport> {
    let n = adv.n();
    let r_count = 1usize << n;
    let wb_list: Vec<DMatrix<C64>> = (0..r_count).map(|r| reflected(adv.bob_unitary(r).entries())).collect();
    let wc_list: Vec<DMatrix<C64>> = (0..r_count).map(|r| reflected(adv.charlie_unitary(r).entries())).collect();
    let points = (0..r_count)
        .map(|x| -> Result<GLPoint> {
            let phi = adv.input_matrix(x);
            let kb = kraus(&wb_list, x);
            let kc = kraus(&wc_list, x);
            let amp = &kb * &phi * kc.transpose();
            let extraction = amp.iter().map(|a| a.norm_sqr()).sum();
            let phi0 = with_output(&phi);
            let mut fid = 0.0;
            for wb in &wb_list {
                let left = wb * &phi0;
                for wc in &wc_list {
                    let v = &left * wc.transpose();
                    fid += phi0.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum::<C64>().norm_sqr();
                }
            }
            Ok(GLPoint {
                x,
                epsilon: gl_advantage(adv, x)?,
                extraction,
                circuit_extraction: gl_circuit_extraction(adv, x)?,
                restoration_fidelity: fid / (r_count * r_count) as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let m = r_count as f64;
    let epsilon = points.iter().map(|p| p.epsilon).sum::<f64>() / m;
    let extraction = points.iter().map(|p| p.extraction).sum::<f64>() / m;
    let bound = 4.0 * epsilon * epsilon;
    Ok(GLReport { n, points, epsilon, extraction, bound, holds: extraction >= bound - 1e-9, gates: extractor_gates(n) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_adversary() {
        for n in 1..=3 {
            let adv = GLAdversary::perfect(n).unwrap();
            let rep = gl_extract(&adv).unwrap();
            assert!((rep.epsilon - 0.5).abs() < 1e-12);
            assert!((rep.extraction - 1.0).abs() < 1e-12);
            for p in &rep.points {
                assert!((p.restoration_fidelity - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_adversary() {
        let adv = GLAdversary::constant(3, true).unwrap();
        let rep = gl_extract(&adv).unwrap();
        for p in &rep.points[1..] {
            assert!(p.epsilon.abs() < 1e-12);
        }
        assert!(rep.holds);
    }

    #[test]
    fn noisy_adversary_values() {
        let adv = GLAdversary::noisy(3, 0.75, 0.75, 0b111).unwrap();
        let rep = gl_extract(&adv).unwrap();
        for p in &rep.points {
            assert!((p.epsilon - 0.125).abs() < 1e-12);
            assert!((p.extraction - 0.0625).abs() < 1e-12);
        }
        assert!(rep.holds);
        let flat = gl_extract(&GLAdversary::noisy(3, 0.75, 0.75, 0).unwrap()).unwrap();
        assert!((flat.extraction - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_matches_kraus_path() {
        for adv in [
            GLAdversary::perfect(2).unwrap(),
            GLAdversary::noisy(2, 0.8, 0.6, 0b10).unwrap(),
            GLAdversary::noisy(1, 0.9, 0.7, 1).unwrap(),
        ] {
            let rep = gl_extract(&adv).unwrap();
            for p in &rep.points {
                let c = p.circuit_extraction.expect("within cap");
                assert!((c - p.extraction).abs() < 1e-12, "{c} vs {}", p.extraction);
            }
        }
    }
}
