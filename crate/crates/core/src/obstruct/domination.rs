//! Empirical `ℓ1(upper(γ)) ≥ ℓ1(lower(γ))^c` over a word ball.
//!
//! `ℓ1` is a conjugacy invariant and every word of the ball is conjugate to
//! a cyclically reduced word of no greater length, so only cyclically
//! reduced words are evaluated. Evaluating a long non-reduced conjugate
//! `u w u^-1` would invite cancellation that has nothing to do with `w`.

use serde::{Deserialize, Serialize};

use super::ObstructError;
use crate::ball::walk;
use crate::linalg::dd::Dd;
use crate::linalg::real;
use crate::reps::RepSpec;
use crate::words::Word;

/// Margins within this of zero (in log scale) are reported as boundary
/// cases and do not pass.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationReport {
    pub radius: usize,
    pub exponent: f64,
    pub words_checked: usize,
    /// `min log ℓ1(upper) - exponent * log ℓ1(lower)` over the checked words.
    pub min_log_margin: f64,
    pub worst_word: String,
    pub boundary: bool,
    pub passes: bool,
}

pub fn is_cyclically_reduced(w: &Word) -> bool {
    match (w.letters().first(), w.letters().last()) {
        (Some(a), Some(b)) => w.len() == 1 || a.inverse() != *b,
        _ => true,
    }
}

/// `log ℓ1` of a row-major double-double matrix; 2x2 matrices are assumed
/// unimodular and handled through the trace.
pub fn log_l1(m: &[Dd], n: usize) -> f64 {
    if n == 2 {
        let t = (m[0] + m[3]).to_f64().abs();
        if t <= 2.0 {
            return 0.0;
        }
        let h = t / 2.0;
        let root = if h < 1e100 { ((h - 1.0) * (h + 1.0)).sqrt() } else { h };
        return (h + root).ln();
    }
    let top = m.iter().fold(0.0f64, |a, x| a.max(x.hi.abs()));
    if top == 0.0 {
        return f64::NEG_INFINITY;
    }
    let scale = 2f64.powi(top.log2().round() as i32);
    let inv = Dd::new(1.0 / scale);
    let scaled: Vec<Dd> = m.iter().map(|x| *x * inv).collect();
    match real::eigenvalues(&scaled, n) {
        Ok(ev) => {
            let r = ev.iter().map(|(re, im)| re.to_f64().hypot(im.to_f64())).fold(0.0, f64::max);
            r.ln() + scale.ln()
        }
        Err(_) => f64::NAN,
    }
}

pub fn check_domination(upper: &RepSpec, lower: &RepSpec, exponent: f64, radius: usize) -> Result<DominationReport, ObstructError> {
    if upper.alphabet() != lower.alphabet() {
        return Err(ObstructError::Input("domination needs representations of the same alphabet".into()));
    }
    let mut min = f64::INFINITY;
    let mut worst = Word::empty();
    let mut count = 0usize;
    let mut bad = false;
    walk::<Dd>(&[upper, lower], radius, false, &mut |w, nodes| {
        if w.is_empty() || !is_cyclically_reduced(w) {
            return true;
        }
        count += 1;
        let m = log_l1(nodes[0].product, nodes[0].dim) - exponent * log_l1(nodes[1].product, nodes[1].dim);
        if m.is_nan() {
            bad = true;
            return false;
        }
        if m < min {
            min = m;
            worst = w.clone();
        }
        true
    });
    if bad {
        return Err(ObstructError::Numerical("eigenvalue iteration failed during the domination sweep".into()));
    }
    let boundary = min.abs() <= BOUNDARY_TOL;
    Ok(DominationReport {
        radius,
        exponent,
        words_checked: count,
        min_log_margin: min,
        worst_word: upper.alphabet().format(&worst),
        boundary,
        passes: min > BOUNDARY_TOL,
    })
}
