//! Rotation blocks, the `j_{s,t,θ}` representation into SL(3,R), and the
//! seeded stand-ins for Zariski-dense images.
//!
//! Zariski density is not decided. The heuristic rejects a generating set
//! whose images share an invariant line or an invariant hyperplane, found by
//! testing the real eigenvectors of one image (and of its transpose) against
//! the others. In dimension 3 those are all the proper subspaces.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::schottky::rotation;
use super::{Provenance, RepError, RepSpec};
use crate::linalg::{eigenvalues, SquareMatrix};
use crate::words::Alphabet;

/// Largest denominator tried when deciding whether `θ / π` is rational.
pub const MAX_DENOMINATOR: i64 = 1_000_000;
const RATIONAL_TOL: f64 = 1e-14;

/// Convergent `p/q` of `θ/π` with `q ≤ MAX_DENOMINATOR` that matches it
/// within `1e-14`, if any.
pub fn rational_multiple_of_pi(theta: f64) -> Option<(i64, i64)> {
    let x = theta / PI;
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut rest = x - x.floor();
    loop {
        if (x - p1 as f64 / q1 as f64).abs() <= RATIONAL_TOL * x.abs().max(1.0) {
            return Some((p1, q1));
        }
        if rest.abs() < RATIONAL_TOL {
            return None;
        }
        let inv = 1.0 / rest;
        let a = inv.floor();
        rest = inv - a;
        let a = a as i64;
        let (p2, q2) = (a.saturating_mul(p1).saturating_add(p0), a.saturating_mul(q1).saturating_add(q0));
        if q2 > MAX_DENOMINATOR || q2 <= 0 {
            return None;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
}

fn check_irrational(theta: f64) -> Result<(), RepError> {
    match rational_multiple_of_pi(theta) {
        Some((p, q)) => Err(RepError::Construction(format!("θ = {theta} is {p}/{q} times π"))),
        None => Ok(()),
    }
}

/// Rotation by `θ` on the `targets`, identity elsewhere.
pub fn rotation_block_rep(theta: f64, alphabet: &Alphabet, targets: &[&str]) -> Result<RepSpec, RepError> {
    check_irrational(theta)?;
    let mut images = vec![SquareMatrix::identity(2); alphabet.rank()];
    let mut inverses = images.clone();
    for t in targets {
        let g = alphabet.index_of(t)?;
        images[g] = rotation(theta);
        inverses[g] = rotation(theta).transpose();
    }
    RepSpec::with_inverses(alphabet.clone(), images, inverses, Provenance::named("rotation_block").with("theta", theta))
}

/// Product of elementary unipotents `I ± E_ij`; integral with determinant
/// exactly 1, inverse the reversed product of the inverse factors.
pub fn random_sl3z(rng: &mut ChaCha8Rng) -> (SquareMatrix, SquareMatrix) {
    let mut m = SquareMatrix::identity(3);
    let mut inv = SquareMatrix::identity(3);
    for _ in 0..8 {
        let i = rng.gen_range(0..3);
        let j = (i + rng.gen_range(1..3)) % 3;
        let c = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let mut e = SquareMatrix::identity(3);
        e.0[(i, j)] = c;
        let mut ei = SquareMatrix::identity(3);
        ei.0[(i, j)] = -c;
        m = m.mul(&e);
        inv = ei.mul(&inv);
    }
    (m, inv)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZariskiReport {
    pub heuristic: String,
    pub common_line: bool,
    pub common_hyperplane: bool,
    pub passes: bool,
}

/// Real eigenvectors of `m`, one per real eigenvalue.
fn real_eigenvectors(m: &SquareMatrix) -> Vec<DMatrix<f64>> {
    let n = m.dim();
    let ev = match eigenvalues(m) {
        Ok(ev) => ev,
        Err(_) => return Vec::new(),
    };
    let scale = m.max_abs().max(1.0);
    let mut out = Vec::new();
    for z in ev {
        if z.im.abs() > 1e-9 * scale {
            continue;
        }
        let shifted = &m.0 - DMatrix::identity(n, n) * z.re;
        let svd = shifted.svd(false, true);
        let Some(vt) = svd.v_t else { continue };
        let k = (0..n).min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b])).unwrap();
        out.push(DMatrix::from_iterator(n, 1, vt.row(k).iter().copied()));
    }
    out
}

/// Whether some real eigenline of the first matrix is invariant under all.
fn shares_line(mats: &[&DMatrix<f64>]) -> bool {
    let first = SquareMatrix(mats[0].clone());
    real_eigenvectors(&first).iter().any(|v| {
        mats.iter().all(|m| {
            let mv = *m * v;
            let along = (v.transpose() * &mv)[(0, 0)];
            let resid = (&mv - v * along).norm();
            resid <= 1e-9 * m.norm().max(1.0)
        })
    })
}

pub fn zariski_heuristic(mats: &[SquareMatrix]) -> ZariskiReport {
    let direct: Vec<&DMatrix<f64>> = mats.iter().map(|m| &m.0).collect();
    let transposed: Vec<DMatrix<f64>> = mats.iter().map(|m| m.0.transpose()).collect();
    let dual: Vec<&DMatrix<f64>> = transposed.iter().collect();
    let common_line = !mats.is_empty() && shares_line(&direct);
    let common_hyperplane = !mats.is_empty() && shares_line(&dual);
    ZariskiReport {
        heuristic: "no common invariant line or hyperplane among the images".into(),
        common_line,
        common_hyperplane,
        passes: !mats.is_empty() && !common_line && !common_hyperplane,
    }
}

fn rotation_scaling(r: f64, theta: f64) -> (SquareMatrix, SquareMatrix) {
    let (s, c) = theta.sin_cos();
    let m = SquareMatrix::from_rows(&[vec![r * c, -r * s, 0.0], vec![r * s, r * c, 0.0], vec![0.0, 0.0, 1.0 / (r * r)]]);
    let inv = SquareMatrix::from_rows(&[vec![c / r, s / r, 0.0], vec![-s / r, c / r, 0.0], vec![0.0, 0.0, r * r]]);
    (m.expect("3x3"), inv.expect("3x3"))
}

/// `a1, a2` to rotation-scalings by `s` and `t`, the remaining generators
/// of `alphabet` to seeded integral matrices passing the Zariski heuristic.
pub fn j_stheta_rep(alphabet: &Alphabet, s: f64, t: f64, theta: f64, seed: u64) -> Result<(RepSpec, ZariskiReport), RepError> {
    if !(s > 0.0 && t > 0.0) {
        return Err(RepError::Construction("s and t must be positive".into()));
    }
    check_irrational(theta)?;
    let (ga, gb) = (alphabet.index_of("a1")?, alphabet.index_of("a2")?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rest: Vec<usize> = (0..alphabet.rank()).filter(|&g| g != ga && g != gb).collect();
    let mut images = vec![SquareMatrix::identity(3); alphabet.rank()];
    let mut inverses = images.clone();
    (images[ga], inverses[ga]) = rotation_scaling(s, theta);
    (images[gb], inverses[gb]) = rotation_scaling(t, theta);
    let mut report = zariski_heuristic(&[]);
    for _ in 0..100 {
        let draws: Vec<(SquareMatrix, SquareMatrix)> = rest.iter().map(|_| random_sl3z(&mut rng)).collect();
        report = zariski_heuristic(&draws.iter().map(|d| d.0.clone()).collect::<Vec<_>>());
        if report.passes || rest.is_empty() {
            for (&g, (m, mi)) in rest.iter().zip(draws) {
                images[g] = m;
                inverses[g] = mi;
            }
            break;
        }
    }
    if !report.passes && !rest.is_empty() {
        return Err(RepError::Construction("no seeded draw passed the Zariski heuristic".into()));
    }
    let prov = Provenance { seed, ..Provenance::named("j_stheta").with("s", s).with("t", t).with("theta", theta) };
    Ok((RepSpec::with_inverses(alphabet.clone(), images, inverses, prov)?, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectrum;

    #[test]
    fn rational_angles_are_rejected() {
        assert_eq!(rational_multiple_of_pi(PI / 3.0), Some((1, 3)));
        assert_eq!(rational_multiple_of_pi(0.0), Some((0, 1)));
        assert!(rational_multiple_of_pi(1.0).is_none());
        let a = Alphabet::paired(2);
        assert!(rotation_block_rep(PI * 2.0 / 7.0, &a, &["a1"]).is_err());
        let r = rotation_block_rep(1.0, &a, &["a1", "a2"]).unwrap();
        assert_eq!(r.image(a.index_of("b1").unwrap()), &SquareMatrix::identity(2));
    }

    #[test]
    fn j_images_have_the_displayed_spectra() {
        let a = Alphabet::new(["a1", "a2", "a3", "a4"]).unwrap();
        let (j, report) = j_stheta_rep(&a, 3.0, 0.5, 1.0, 7).unwrap();
        assert!(report.passes);
        let ev = spectrum(j.image(0)).unwrap().eigenvalues;
        assert!((ev[0].norm() - 3.0).abs() < 1e-12 && (ev[0].im.abs() - 3.0 * 1f64.sin()).abs() < 1e-12);
        assert!((ev[2].re - 1.0 / 9.0).abs() < 1e-12);
        for k in 0..4 {
            assert!((j.image(k).det() - 1.0).abs() < 1e-12);
            assert!(j.image(k).mul(j.inverse_image(k)).approx_eq(&SquareMatrix::identity(3), 1e-12));
        }
        let (again, _) = j_stheta_rep(&a, 3.0, 0.5, 1.0, 7).unwrap();
        assert_eq!(again, j);
    }

    #[test]
    fn reducible_sets_fail_the_heuristic() {
        let d = SquareMatrix::diag(&[2.0, 1.0, 0.5]);
        let u = SquareMatrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let r = zariski_heuristic(&[d, u]);
        assert!(!r.passes && r.common_line);
    }
}
