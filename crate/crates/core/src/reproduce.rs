//! Evaluation of a build's goldens and of its certificate.
//!
//! Goldens are instantiated from the quantities the build recorded, so a
//! changed parameter changes the expected values with it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::exterior::ExteriorClass;
use crate::linalg::{classify_exterior, LinalgError, PreciseMatrix, Realness, Truth};
use crate::obstruct::{certify_with_assumptions, ObstructError, ObstructionCertificate};
use crate::reps::named::{angle_distance, Golden, GoldenCheck, Monomial, NamedBuild};
use crate::reps::RepError;
use crate::words::WordError;

#[derive(Debug, Error)]
pub enum ReproduceError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Obstruct(#[from] ObstructError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenOutcome {
    pub claim: String,
    pub word: String,
    pub passes: bool,
    /// The classification needed fell in the ambiguous band.
    pub indeterminate: bool,
    pub detail: String,
    /// Measured and expected moduli, when the check compares moduli.
    pub measured: Vec<f64>,
    pub expected: Vec<f64>,
    pub max_rel_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproduceReport {
    pub name: String,
    pub tol: f64,
    pub goldens: Vec<GoldenOutcome>,
    pub certificate: ObstructionCertificate,
    pub passes: bool,
    pub indeterminate: bool,
}

/// Sign of a monomial read with signed quantities; only odd integral
/// exponents carry a sign.
fn monomial_sign(m: &Monomial, q: &std::collections::BTreeMap<String, f64>) -> f64 {
    m.factors.iter().fold(1.0, |acc, (name, e)| {
        let v = q.get(name).copied().unwrap_or(1.0);
        if v < 0.0 && e.fract() == 0.0 && (*e as i64) % 2 != 0 {
            -acc
        } else {
            acc
        }
    })
}

fn moduli_outcome(claim: &str, word: &str, measured_ln: &[f64], expected_ln: &[f64], rel_tol: f64) -> GoldenOutcome {
    let mut worst = 0.0f64;
    let mut ok = measured_ln.len() >= expected_ln.len();
    for (m, e) in measured_ln.iter().zip(expected_ln) {
        let rel = (m - e).exp_m1().abs();
        worst = worst.max(rel);
        ok &= rel <= rel_tol;
    }
    GoldenOutcome {
        claim: claim.to_string(),
        word: word.to_string(),
        passes: ok,
        indeterminate: false,
        detail: if measured_ln.len() < expected_ln.len() {
            format!("only {} moduli available for {} expected", measured_ln.len(), expected_ln.len())
        } else {
            format!("largest relative error {worst:e} against {rel_tol:e}")
        },
        measured: measured_ln.iter().map(|v| v.exp()).collect(),
        expected: expected_ln.iter().map(|v| v.exp()).collect(),
        max_rel_error: Some(worst),
    }
}

fn truth_outcome(claim: &str, word: &str, t: Truth, want: Truth, detail: String) -> GoldenOutcome {
    GoldenOutcome {
        claim: claim.to_string(),
        word: word.to_string(),
        passes: t == want,
        indeterminate: t == Truth::Indeterminate,
        detail,
        measured: vec![],
        expected: vec![],
        max_rel_error: None,
    }
}

fn negative_top(e: &ExteriorClass, multiplicity: usize) -> Truth {
    let c = &e.class.top_cluster;
    if c.iter().any(|m| m.realness == Realness::Ambiguous) {
        return Truth::Indeterminate;
    }
    if c.len() == multiplicity && c.iter().all(|m| m.realness == Realness::Real && m.rel[0] < 0.0) {
        Truth::Yes
    } else {
        Truth::No
    }
}

/// Evaluate one golden against the build.
pub fn check_golden(build: &NamedBuild, g: &Golden, tol: f64) -> Result<GoldenOutcome, ReproduceError> {
    let q = &build.manifest.quantities;
    let alphabet = &build.presentation.alphabet;
    let word_of = |s: &str| -> Result<PreciseMatrix, ReproduceError> { Ok(build.rep.eval_precise(&alphabet.parse(s)?)) };
    let claim = g.claim.as_str();
    Ok(match &g.check {
        GoldenCheck::TopModuli { word, index, expected, rel_tol } => {
            // Displayed eigenvalue lists can span more than 32 digits, so
            // the base spectrum is found in 448-bit arithmetic.
            let measured: Vec<f64> = if *index == 1 {
                build.rep.eval_mp(&alphabet.parse(word)?).eigenvalues_polar()?.iter().map(|p| p.0).collect()
            } else {
                let m = word_of(word)?;
                classify_exterior(&m, *index, tol)?.log10_top_moduli.iter().map(|l| l * std::f64::consts::LN_10).collect()
            };
            let expected: Vec<f64> = expected.iter().map(|e| e.ln_value(q)).collect::<Result<_, _>>()?;
            moduli_outcome(claim, word, &measured, &expected, *rel_tol)
        }
        GoldenCheck::NotPositivelySemiproximal { word, indices } => {
            let m = word_of(word)?;
            let mut worst = Truth::No;
            let mut failing = Vec::new();
            for &i in indices {
                let t = classify_exterior(&m, i, tol)?.class.positively_semiproximal;
                if t != Truth::No {
                    failing.push(i);
                    if worst != Truth::Yes {
                        worst = t;
                    }
                }
            }
            truth_outcome(claim, word, worst, Truth::No, format!("positively semiproximal or undecided at {failing:?}"))
        }
        GoldenCheck::ProximalNegative { word, indices } => {
            let m = word_of(word)?;
            let mut verdict = Truth::Yes;
            let mut failing = Vec::new();
            for &i in indices {
                let e = classify_exterior(&m, i, tol)?;
                let t = if !e.class.is_proximal(1) { Truth::No } else { negative_top(&e, 1) };
                if t != Truth::Yes {
                    failing.push(i);
                    if verdict != Truth::No {
                        verdict = t;
                    }
                }
            }
            truth_outcome(claim, word, verdict, Truth::Yes, format!("not proximal with negative top eigenvalue at {failing:?}"))
        }
        GoldenCheck::NegativeCluster { word, index, multiplicity } => {
            let e = classify_exterior(&word_of(word)?, *index, tol)?;
            let t = negative_top(&e, *multiplicity);
            let detail = format!("top cluster {:?}", e.class.top_cluster.iter().map(|c| c.rel).collect::<Vec<_>>());
            truth_outcome(claim, word, t, Truth::Yes, detail)
        }
        GoldenCheck::NonRealPair { word, index, modulus, angle, rel_tol } => {
            let e = classify_exterior(&word_of(word)?, *index, tol)?;
            let theta = *q.get(angle).ok_or_else(|| RepError::Construction(format!("golden uses unknown quantity `{angle}`")))?;
            let sign = monomial_sign(modulus, q);
            let expected_ln = modulus.ln_value(q)?;
            let measured_ln = e.class.log10_top_modulus * std::f64::consts::LN_10;
            let rel = (measured_ln - expected_ln).exp_m1().abs();
            let pair = e.class.leading_nonreal_pair();
            let ang = e
                .class
                .top_cluster
                .first()
                .map(|c| Complex64::new(c.rel[0] * sign, c.rel[1]).arg().abs())
                .unwrap_or(f64::NAN);
            let ang_err = (ang - angle_distance(theta, 0.0)).abs();
            let ambiguous = e.class.top_cluster.iter().any(|c| c.realness == Realness::Ambiguous);
            GoldenOutcome {
                claim: claim.to_string(),
                word: word.clone(),
                passes: pair && rel <= *rel_tol && ang_err <= *rel_tol * std::f64::consts::PI,
                indeterminate: ambiguous,
                detail: format!("pair {pair}, modulus relative error {rel:e}, angle error {ang_err:e}"),
                measured: vec![measured_ln.exp()],
                expected: vec![expected_ln.exp()],
                max_rel_error: Some(rel),
            }
        }
    })
}

/// Goldens and the certificate of a build.
pub fn reproduce(build: &NamedBuild, tol: f64) -> Result<ReproduceReport, ReproduceError> {
    let goldens = build.manifest.goldens.iter().map(|g| check_golden(build, g, tol)).collect::<Result<Vec<_>, _>>()?;
    let certificate = certify_with_assumptions(
        &build.rep,
        &build.witnesses,
        &build.manifest.requested_indices,
        &build.presentation,
        tol,
        &build.manifest.assumptions,
    )?;
    let cert_ok = certificate.uncovered.is_empty();
    let undecided = certificate.uncovered.iter().any(|i| certificate.indeterminate.iter().any(|(j, _)| j == i));
    let indeterminate = goldens.iter().any(|g| g.indeterminate && !g.passes) || undecided;
    Ok(ReproduceReport {
        name: build.manifest.name.clone(),
        tol,
        passes: cert_ok && goldens.iter().all(|g| g.passes),
        indeterminate,
        goldens,
        certificate,
    })
}
