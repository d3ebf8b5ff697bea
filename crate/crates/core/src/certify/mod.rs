//! Finite-scale diagnostics for singular-value gaps and for the
//! quasi-isometric embedding property, over word balls.
//!
//! A pass at radius `L` is evidence, never a certificate: the defining
//! inequalities quantify over the whole group. Word length is measured in
//! the free surrogate alphabet of a pulled-back representation.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{use_precise, walk};
use crate::linalg::dd::Dd;
use crate::linalg::real;
use crate::obstruct::sign::least_squares;
use crate::reps::RepSpec;
use crate::words::ball_size;

pub const LABEL: &str = "finite-scale diagnostic, not a proof";
pub const DEFAULT_SLOPE_THRESHOLD: f64 = 0.05;
/// Largest ball evaluated before the profile is truncated.
pub const DEFAULT_MAX_WORDS: u128 = 200_000;
const MONOTONE_SLACK: f64 = 1e-9;

/// Default radius: 6 for small bases, 4 from dimension 12 on.
pub fn default_radius(dim: usize) -> usize {
    if dim >= 12 { 4 } else { 6 }
}

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("invalid input: {0}")]
    Input(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthSample {
    pub length: usize,
    pub words: usize,
    pub min: f64,
    pub max: f64,
}

/// `log statistic ≈ log_c + slope * length`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub log_c: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapProfile {
    pub label: String,
    pub index: usize,
    pub dim: usize,
    pub requested_radius: usize,
    /// Radius actually evaluated; smaller than requested when the ball
    /// exceeded the budget.
    pub radius: usize,
    pub length_alphabet: Vec<String>,
    pub slope_threshold: f64,
    pub samples: Vec<LengthSample>,
    pub fit: Option<Fit>,
    pub monotone: bool,
    pub verdict: Verdict,
    /// Verdicts of the prefixes of radius 3, 4, ..., in order; a pass that
    /// turns into a fail is noted in `relabels`.
    pub verdict_by_radius: Vec<(usize, Verdict)>,
    pub relabels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QiProfile {
    pub label: String,
    pub dim: usize,
    pub requested_radius: usize,
    pub radius: usize,
    pub length_alphabet: Vec<String>,
    pub slope_threshold: f64,
    pub samples: Vec<LengthSample>,
    pub lower_fit: Option<Fit>,
    pub upper_fit: Option<Fit>,
    /// `(1/K) e^{|γ|/J} ≤ σ1/σd ≤ K e^{J|γ|}` on the sampled lengths.
    pub j: Option<f64>,
    pub k: Option<f64>,
    pub monotone: bool,
    pub verdict: Verdict,
}

/// CSV with header `length,min_log_gap,max_log_gap`.
pub fn samples_csv(samples: &[LengthSample]) -> String {
    let mut out = String::from("length,min_log_gap,max_log_gap\n");
    for s in samples {
        out.push_str(&format!("{},{:e},{:e}\n", s.length, s.min, s.max));
    }
    out
}

impl GapProfile {
    pub fn to_csv(&self) -> String {
        samples_csv(&self.samples)
    }
}

impl QiProfile {
    pub fn to_csv(&self) -> String {
        samples_csv(&self.samples)
    }
}

/// `ln σ_k`, descending. Each `σ_k` is read from the product or, via
/// `σ_k(g) = 1/σ_{d+1-k}(g^-1)`, from the inverse, whichever resolves it
/// better.
fn two_sided(direct: &[f64], inverse: &[f64]) -> Vec<f64> {
    let d = direct.len();
    let (top, bottom) = (direct[0], -inverse[0]);
    (0..d)
        .map(|k| {
            let from_inv = -inverse[d - 1 - k];
            if 2.0 * direct[k] >= top + bottom { direct[k] } else { from_inv }
        })
        .collect()
}

/// A power of two bringing the largest entry near one, so `m mᵗ` stays
/// inside the exponent range; returns `(factor, ln(1/factor))`.
fn pow2_scale(max_abs: f64) -> (f64, f64) {
    if max_abs == 0.0 || !max_abs.is_finite() {
        return (1.0, 0.0);
    }
    let e = max_abs.log2().round() as i32;
    (2f64.powi(-e), e as f64 * std::f64::consts::LN_2)
}

fn ln_sv_dd(m: &[Dd], n: usize) -> Vec<f64> {
    let (f, shift) = pow2_scale(m.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max));
    let scaled: Vec<Dd> = m.iter().map(|&x| x * Dd::new(f)).collect();
    real::singular_values(&scaled, n).iter().map(|s| s.to_f64().ln() + shift).collect()
}

fn ln_sv_f64(m: &[f64], n: usize) -> Vec<f64> {
    let (f, shift) = pow2_scale(m.iter().map(|x| x.abs()).fold(0.0, f64::max));
    let mut sv: Vec<f64> = DMatrix::from_row_slice(n, n, m).scale(f).singular_values().iter().map(|s| s.ln() + shift).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// The per-length minima and maxima of `stat(ln σ)` over the ball.
fn sweep(r: &RepSpec, radius: usize, stat: &dyn Fn(&[f64]) -> f64) -> Vec<LengthSample> {
    let n = r.dim();
    let mut samples: Vec<LengthSample> =
        (1..=radius).map(|length| LengthSample { length, words: 0, min: f64::INFINITY, max: f64::NEG_INFINITY }).collect();
    let mut record = |len: usize, v: f64| {
        let s = &mut samples[len - 1];
        s.words += 1;
        s.min = s.min.min(v);
        s.max = s.max.max(v);
    };
    if use_precise(n) {
        walk::<Dd>(&[r], radius, true, &mut |w, nodes| {
            if !w.is_empty() {
                let sv = two_sided(&ln_sv_dd(nodes[0].product, n), &ln_sv_dd(nodes[0].inverse.expect("requested"), n));
                record(w.len(), stat(&sv));
            }
            true
        });
    } else {
        walk::<f64>(&[r], radius, true, &mut |w, nodes| {
            if !w.is_empty() {
                let sv = two_sided(&ln_sv_f64(nodes[0].product, n), &ln_sv_f64(nodes[0].inverse.expect("requested"), n));
                record(w.len(), stat(&sv));
            }
            true
        });
    }
    samples
}

/// Largest radius not above `requested` whose ball fits the budget.
fn budget_radius(rank: usize, requested: usize, max_words: u128) -> usize {
    (0..=requested).rev().find(|&l| ball_size(rank, l) <= max_words).unwrap_or(0)
}

fn fit_from(samples: &[LengthSample], pick: fn(&LengthSample) -> f64) -> Option<Fit> {
    let pts: Vec<(f64, f64)> = samples.iter().filter(|s| s.length >= 2 && s.words > 0).map(|s| (s.length as f64, pick(s))).collect();
    if pts.len() < 2 {
        return None;
    }
    let (log_c, slope) = least_squares(&pts);
    Some(Fit { log_c, slope })
}

/// Per-length minima nondecreasing from length 2 on.
fn monotone(samples: &[LengthSample]) -> bool {
    samples
        .windows(2)
        .filter(|p| p[0].length >= 2)
        .all(|p| p[1].min >= p[0].min - MONOTONE_SLACK * p[0].min.abs().max(1.0))
}

fn verdict(samples: &[LengthSample], threshold: f64) -> (Option<Fit>, bool, Verdict) {
    let fit = fit_from(samples, |s| s.min);
    let mono = monotone(samples);
    let v = match fit {
        None => Verdict::Inconclusive,
        Some(f) if f.slope > threshold && mono => Verdict::Pass,
        Some(_) => Verdict::Fail,
    };
    (fit, mono, v)
}

fn check_radius(radius: usize) -> Result<(), CertifyError> {
    if radius == 0 {
        return Err(CertifyError::Input("radius must be positive".into()));
    }
    Ok(())
}

pub fn gap_profile(r: &RepSpec, i: usize, radius: usize, slope_threshold: f64) -> Result<GapProfile, CertifyError> {
    gap_profile_with_budget(r, i, radius, slope_threshold, DEFAULT_MAX_WORDS)
}

pub fn gap_profile_with_budget(
    r: &RepSpec,
    i: usize,
    radius: usize,
    slope_threshold: f64,
    max_words: u128,
) -> Result<GapProfile, CertifyError> {
    check_radius(radius)?;
    let base = r.free_surrogate();
    let d = base.dim();
    if i == 0 || i > d / 2 {
        return Err(CertifyError::Input(format!("index {i} outside 1..={}", d / 2)));
    }
    let evaluated = budget_radius(base.alphabet().rank(), radius, max_words);
    let samples = if evaluated == 0 { Vec::new() } else { sweep(base, evaluated, &|sv| sv[i - 1] - sv[i]) };
    let (fit, mono, mut v) = verdict(&samples, slope_threshold);
    let mut verdict_by_radius = Vec::new();
    let mut relabels = Vec::new();
    for l in 3..=evaluated {
        let (_, _, vl) = verdict(&samples[..l], slope_threshold);
        if let Some(&(pl, Verdict::Pass)) = verdict_by_radius.last() {
            if vl == Verdict::Fail {
                relabels.push(format!("pass at radius {pl} relabeled fail at radius {l}"));
            }
        }
        verdict_by_radius.push((l, vl));
    }
    if evaluated < radius {
        v = Verdict::Inconclusive;
    }
    Ok(GapProfile {
        label: LABEL.into(),
        index: i,
        dim: d,
        requested_radius: radius,
        radius: evaluated,
        length_alphabet: base.alphabet().names().to_vec(),
        slope_threshold,
        samples,
        fit,
        monotone: mono,
        verdict: v,
        verdict_by_radius,
        relabels,
    })
}

pub fn qi_profile(r: &RepSpec, radius: usize, slope_threshold: f64) -> Result<QiProfile, CertifyError> {
    qi_profile_with_budget(r, radius, slope_threshold, DEFAULT_MAX_WORDS)
}

pub fn qi_profile_with_budget(r: &RepSpec, radius: usize, slope_threshold: f64, max_words: u128) -> Result<QiProfile, CertifyError> {
    check_radius(radius)?;
    let base = r.free_surrogate();
    let d = base.dim();
    let evaluated = budget_radius(base.alphabet().rank(), radius, max_words);
    let samples = if evaluated == 0 { Vec::new() } else { sweep(base, evaluated, &|sv| sv[0] - sv[d - 1]) };
    // The two-sided bound tolerates a bounded dip in the minima, so unlike
    // the gap profile the verdict does not require them to be monotone.
    let (lower_fit, mono, _) = verdict(&samples, slope_threshold);
    let mut v = match lower_fit {
        None => Verdict::Inconclusive,
        Some(f) if f.slope > slope_threshold => Verdict::Pass,
        Some(_) => Verdict::Fail,
    };
    let upper_fit = fit_from(&samples, |s| s.max);
    let (mut j, mut k) = (None, None);
    if let (Some(lo), Some(hi)) = (lower_fit, upper_fit) {
        if lo.slope > 0.0 {
            let jj = (1.0 / lo.slope).max(hi.slope).max(1.0);
            let log_k = samples
                .iter()
                .filter(|s| s.words > 0)
                .map(|s| (s.length as f64 / jj - s.min).max(s.max - jj * s.length as f64))
                .fold(0.0f64, f64::max);
            j = Some(jj);
            k = Some(log_k.exp());
        }
    }
    if evaluated < radius {
        v = Verdict::Inconclusive;
    }
    Ok(QiProfile {
        label: LABEL.into(),
        dim: d,
        requested_radius: radius,
        radius: evaluated,
        length_alphabet: base.alphabet().names().to_vec(),
        slope_threshold,
        samples,
        lower_fit,
        upper_fit,
        j,
        k,
        monotone: mono,
        verdict: v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SquareMatrix;
    use crate::reps::{schottky_sl2r, Provenance};

    #[test]
    fn schottky_passes_and_identity_generator_fails() {
        let r = schottky_sl2r(2, 4.0).unwrap();
        let p = gap_profile(&r, 1, 6, DEFAULT_SLOPE_THRESHOLD).unwrap();
        assert_eq!(p.verdict, Verdict::Pass);
        assert!(p.fit.unwrap().slope > 0.5);
        assert_eq!(p.samples.iter().map(|s| s.words).sum::<usize>() as u128, ball_size(2, 6) - 1);
        let mut ims = r.images().to_vec();
        ims[1] = SquareMatrix::identity(2);
        let degenerate = RepSpec::new(r.alphabet().clone(), ims, Provenance::named("degenerate")).unwrap();
        assert_eq!(gap_profile(&degenerate, 1, 6, DEFAULT_SLOPE_THRESHOLD).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn budget_truncates_to_inconclusive() {
        let r = schottky_sl2r(2, 4.0).unwrap();
        let p = gap_profile_with_budget(&r, 1, 6, DEFAULT_SLOPE_THRESHOLD, 200).unwrap();
        assert_eq!(p.verdict, Verdict::Inconclusive);
        assert!(p.radius < 6 && p.radius >= 3);
    }

    #[test]
    fn qi_of_trivial_and_schottky() {
        let r = schottky_sl2r(2, 4.0).unwrap();
        let q = qi_profile(&r, 5, DEFAULT_SLOPE_THRESHOLD).unwrap();
        assert_eq!(q.verdict, Verdict::Pass);
        assert!(q.samples.iter().all(|s| s.min <= s.max));
        let t = RepSpec::trivial(r.alphabet().clone(), 3);
        let q = qi_profile(&t, 4, DEFAULT_SLOPE_THRESHOLD).unwrap();
        assert_eq!(q.verdict, Verdict::Fail);
        assert!(q.samples.iter().all(|s| s.min.abs() < 1e-12));
    }

    #[test]
    fn two_sided_prefers_the_better_end() {
        // direct resolves the top, the inverse the bottom.
        let direct = [10.0, 0.0, -3.0];
        let inverse = [10.0, 0.0, -10.0];
        assert_eq!(two_sided(&direct, &inverse), vec![10.0, 0.0, -10.0]);
    }
}
