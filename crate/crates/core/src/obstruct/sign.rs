//! Sign-flip search in SL(2,R): a word `w0^n a` whose top eigenvalue is
//! negative, and the two limit formulas behind its existence.
//!
//! If `w0` is hyperbolic with `tr < -2` and its fixed lines are transverse
//! to those of `a`, then `λ1(w0^n a) / λ1(w0)^n` tends to
//! `<h^-1 a h e1, e1>`, with `h` the eigenframe of `w0`. The sign of
//! `λ1(w0^n a)` therefore alternates with the parity of `n` for large `n`.

use serde::{Deserialize, Serialize};

use super::ObstructError;
use crate::reps::RepSpec;
use crate::words::{commutator, Letter, Word};

/// Caps on the search: commutator candidates tried and largest power of
/// `w0` scanned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub candidates: usize,
    pub max_power: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { candidates: 200, max_power: 64 }
    }
}

/// Below this, `<h^-1 a h e1, e1> / |a|` counts as a transversality failure.
pub const TRANSVERSALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub word: String,
    pub trace: f64,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignWitness {
    pub word: String,
    pub w0: String,
    pub coset: String,
    pub power: u32,
    pub lambda1: f64,
    pub trace_w0: f64,
    pub candidates_examined: usize,
    pub search_trace: Vec<CandidateRecord>,
    #[serde(skip)]
    pub witness: Word,
    #[serde(skip)]
    pub w0_word: Word,
}

fn check_dim(r: &RepSpec) -> Result<(), ObstructError> {
    if r.dim() != 2 {
        return Err(ObstructError::Input(format!("sign search needs a 2x2 representation, got dimension {}", r.dim())));
    }
    Ok(())
}

pub fn trace2(r: &RepSpec, w: &Word) -> f64 {
    r.eval_precise(w).trace().to_f64()
}

/// Top eigenvalue of a determinant-one 2x2 matrix with trace `t`, or
/// `None` when `|t| <= 2`.
pub fn lambda1_from_trace(t: f64) -> Option<f64> {
    if !(t.abs() > 2.0) || !t.is_finite() {
        return None;
    }
    let a = t.abs();
    let h = a / 2.0;
    let root = if h < 1e100 { ((h - 1.0) * (h + 1.0)).sqrt() } else { h };
    let l = h + root;
    Some(l.copysign(t))
}

/// Unit eigenvector for eigenvalue `l` of `[[a, b], [c, d]]`.
fn eigvec(m: [f64; 4], l: f64) -> [f64; 2] {
    let (a, b, c, d) = (m[0], m[1], m[2], m[3]);
    let v1 = [b, l - a];
    let v2 = [l - d, c];
    let v = if v1[0].hypot(v1[1]) >= v2[0].hypot(v2[1]) { v1 } else { v2 };
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

/// `(λ1, <h^-1 a h e1, e1> / |a|)` for eigenframe `h` of `g`.
fn frame_coefficient(g: [f64; 4], a: [f64; 4]) -> Option<(f64, f64)> {
    let l = lambda1_from_trace(g[0] + g[3])?;
    let u = eigvec(g, l);
    let v = eigvec(g, 1.0 / l);
    let det = u[0] * v[1] - v[0] * u[1];
    // first row of h^-1 is (v1, -v0) / det
    let au = [a[0] * u[0] + a[1] * u[1], a[2] * u[0] + a[3] * u[1]];
    let coeff = (v[1] * au[0] - v[0] * au[1]) / det;
    let norm = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Some((l, coeff / norm))
}

fn entries(r: &RepSpec, w: &Word) -> [f64; 4] {
    let m = r.eval(w);
    [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)]
}

/// Commutators of words over `among`: first of single letters, then of
/// reduced words of length two, in shortlex order, without repeats.
pub fn commutator_candidates(among: &[usize], cap: usize) -> Vec<Word> {
    let mut ranks: Vec<usize> = among.iter().flat_map(|&g| [2 * g, 2 * g + 1]).collect();
    ranks.sort_unstable();
    let singles: Vec<Word> = ranks.iter().map(|&r| Word::reduce([Letter::from_rank(r)])).collect();
    let doubles: Vec<Word> = ranks
        .iter()
        .flat_map(|&x| ranks.iter().filter(move |&&y| y != x ^ 1).map(move |&y| Word::reduce([Letter::from_rank(x), Letter::from_rank(y)])))
        .collect();
    let mut out: Vec<Word> = Vec::new();
    for level in [singles, doubles] {
        let mut words = level;
        words.sort();
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                let c = commutator(&words[i], &words[j]);
                if !c.is_empty() && !out.contains(&c) {
                    out.push(c);
                    if out.len() >= cap {
                        return out;
                    }
                }
            }
        }
    }
    out
}

/// Search for `w = w0^n a` with `λ1(r(w)) < 0`, `w0` a commutator over the
/// generators `among` (all generators when `None`) with `tr r(w0) < -2`.
pub fn find_negative_lambda(
    r: &RepSpec,
    coset: &Word,
    among: Option<&[usize]>,
    budget: SearchBudget,
) -> Result<SignWitness, ObstructError> {
    check_dim(r)?;
    r.alphabet().check(coset)?;
    let all: Vec<usize> = (0..r.alphabet().rank()).collect();
    let among = among.unwrap_or(&all);
    let fmt = |w: &Word| r.alphabet().format(w);
    let a = entries(r, coset);
    let mut trace_log = Vec::new();
    let mut min_trace = f64::INFINITY;
    for w0 in commutator_candidates(among, budget.candidates) {
        let t = trace2(r, &w0);
        min_trace = min_trace.min(t);
        if !(t < -2.0) {
            trace_log.push(CandidateRecord { word: fmt(&w0), trace: t, outcome: "trace not below -2".into() });
            continue;
        }
        match frame_coefficient(entries(r, &w0), a) {
            Some((_, c)) if c.abs() >= TRANSVERSALITY_TOL => {}
            _ => {
                trace_log.push(CandidateRecord { word: fmt(&w0), trace: t, outcome: "not transverse to the coset element".into() });
                continue;
            }
        }
        let mut power = w0.clone();
        for n in 1..=budget.max_power {
            let w = power.mul(coset);
            let tw = trace2(r, &w);
            if !tw.is_finite() {
                break;
            }
            if let Some(l) = lambda1_from_trace(tw) {
                if l < 0.0 {
                    trace_log.push(CandidateRecord { word: fmt(&w0), trace: t, outcome: format!("witness at power {n}") });
                    return Ok(SignWitness {
                        word: fmt(&w),
                        w0: fmt(&w0),
                        coset: fmt(coset),
                        power: n,
                        lambda1: l,
                        trace_w0: t,
                        candidates_examined: trace_log.len(),
                        search_trace: trace_log,
                        witness: w,
                        w0_word: w0,
                    });
                }
            }
            power = power.mul(&w0);
        }
        trace_log.push(CandidateRecord { word: fmt(&w0), trace: t, outcome: "no sign flip within the power cap".into() });
    }
    Err(ObstructError::SearchFailed { examined: trace_log.len(), min_trace })
}

/// Whether a stored witness still evaluates to a proximal image with
/// negative top eigenvalue.
pub fn revalidate_witness(r: &RepSpec, w: &SignWitness) -> Result<bool, ObstructError> {
    let word = r.alphabet().parse(&w.word)?;
    Ok(lambda1_from_trace(trace2(r, &word)).map_or(false, |l| l < 0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSample {
    pub n: u32,
    /// `λ1(w0^n a) / λ1(w0)^n`
    pub ratio: f64,
    /// `λ1(w0^{n+1} a) / λ1(w0^n a)`
    pub consecutive: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub lambda1_w0: f64,
    /// `<h^-1 a h e1, e1>`
    pub predicted: f64,
    pub samples: Vec<LimitSample>,
    /// Relative error of the last ratio against `predicted`.
    pub ratio_error: f64,
    /// Relative error of the last consecutive ratio against `λ1(w0)`.
    pub consecutive_error: f64,
    /// Fitted `log |ratio(n) - predicted|` slope per step; negative when
    /// the error decays geometrically.
    pub log_error_slope: Option<f64>,
    pub accuracy: f64,
    pub converged: bool,
}

/// Ratios `λ1(w0^n a) / λ1(w0)^n` and `λ1(w0^{n+1} a) / λ1(w0^n a)` for
/// `n <= n_max`, against their predicted limits.
pub fn limit_formula_check(r: &RepSpec, w0: &Word, a: &Word, n_max: u32) -> Result<LimitReport, ObstructError> {
    check_dim(r)?;
    let g = entries(r, w0);
    let am = entries(r, a);
    let (lam, coeff) = frame_coefficient(g, am).ok_or_else(|| ObstructError::Input("w0 is not proximal".into()))?;
    if coeff.abs() < TRANSVERSALITY_TOL {
        return Err(ObstructError::Degenerate(format!("<h^-1 a h e1, e1> / |a| = {coeff:.3e}")));
    }
    let scale = am.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let predicted = coeff * scale;
    let l_of = |n: u32| lambda1_from_trace(trace2(r, &w0.pow(n as i64).mul(a)));
    let mut samples = Vec::new();
    let mut prev = l_of(1);
    for n in 1..=n_max {
        let next = l_of(n + 1);
        let (Some(ln), Some(ln1)) = (prev, next) else {
            prev = next;
            continue;
        };
        samples.push(LimitSample { n, ratio: ln / lam.powi(n as i32), consecutive: ln1 / ln });
        prev = next;
    }
    let last = samples.last().ok_or_else(|| ObstructError::Degenerate("no proximal samples".into()))?;
    let ratio_error = (last.ratio - predicted).abs() / predicted.abs();
    let consecutive_error = (last.consecutive - lam).abs() / lam.abs();
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter_map(|s| {
            let e = (s.ratio - predicted).abs() / predicted.abs();
            (e > 1e-13).then(|| (s.n as f64, e.ln()))
        })
        .collect();
    let log_error_slope = (pts.len() >= 3).then(|| least_squares(&pts).1);
    let accuracy = 1e-4;
    Ok(LimitReport {
        lambda1_w0: lam,
        predicted,
        samples,
        ratio_error,
        consecutive_error,
        log_error_slope,
        accuracy,
        converged: ratio_error < accuracy && consecutive_error < accuracy,
    })
}

/// `(intercept, slope)` of the least-squares line through `pts`.
pub fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (my - slope * mx, slope)
}
