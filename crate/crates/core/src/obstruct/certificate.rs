//! Non-limit certificates.
//!
//! If `ρ` were a limit of `P_i`-Anosov representations and `Δ` a
//! quasiconvex subgroup of infinite index with connected boundary, every
//! element of the index-two core `Δ_2` would have a positively
//! semiproximal `∧^i` image. A certificate exhibits, for each covered
//! index, one element of the core whose `∧^i` image is not positively
//! semiproximal. The geometric hypotheses are recorded, not checked.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ObstructError;
use crate::linalg::{classify_exterior, ExteriorRoute, ProximalityClass, Truth};
use crate::reps::{Provenance, RepSpec};
use crate::words::{ParityEvidence, Presentation, Word};

pub const SCHEMA_VERSION: u32 = 1;

/// What a certificate claims, stored with it.
pub const SEMANTICS: &str = "If this representation were a limit of P_i-Anosov representations, then, under the listed \
assumptions on the subgroup containing the witnesses, the image of every element of its index-two core under the \
i-th exterior power would be positively semiproximal. For each covered index i the recorded witness lies in the \
index-two core and its i-th exterior power image is not positively semiproximal at the recorded tolerance. Nothing \
is claimed for uncovered indices, and the listed assumptions are not verified.";

pub const DEFAULT_ASSUMPTIONS: [&str; 3] = [
    "the subgroup containing the witnesses is quasiconvex in the ambient group",
    "the subgroup has connected Gromov boundary",
    "the subgroup has infinite index in the ambient group",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub word: String,
    pub parity: ParityEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexFailure {
    pub index: usize,
    pub witness: String,
    pub route: ExteriorRoute,
    pub class: ProximalityClass,
    /// Leading log10 moduli of `∧^i` of the witness image, at most eight.
    pub log10_top_moduli: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionCertificate {
    pub schema_version: u32,
    pub construction: Provenance,
    /// SHA-256 of the representation JSON.
    pub manifest_hash: String,
    pub dim: usize,
    pub tol: f64,
    pub witnesses: Vec<WitnessRecord>,
    pub requested: Vec<usize>,
    pub failures: Vec<IndexFailure>,
    pub uncovered: Vec<usize>,
    /// `(index, witness)` pairs whose classification was indeterminate.
    pub indeterminate: Vec<(usize, String)>,
    /// Whether every index `1..=dim/2` is covered.
    pub complete: bool,
    pub assumptions: Vec<String>,
    pub semantics: String,
}

impl ObstructionCertificate {
    pub fn covered(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.failures.iter().map(|f| f.index).collect();
        c.sort_unstable();
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain document")
    }

    pub fn from_json(text: &str) -> Result<Self, ObstructError> {
        Ok(serde_json::from_str(text).map_err(|e| ObstructError::Input(e.to_string()))?)
    }
}

pub fn rep_hash(r: &RepSpec) -> String {
    let digest = Sha256::digest(r.to_json().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn certify_not_limit(
    r: &RepSpec,
    witnesses: &[Word],
    indices: &[usize],
    p: &Presentation,
    tol: f64,
) -> Result<ObstructionCertificate, ObstructError> {
    certify_with_assumptions(r, witnesses, indices, p, tol, &DEFAULT_ASSUMPTIONS.map(String::from))
}

pub fn certify_with_assumptions(
    r: &RepSpec,
    witnesses: &[Word],
    indices: &[usize],
    p: &Presentation,
    tol: f64,
    assumptions: &[String],
) -> Result<ObstructionCertificate, ObstructError> {
    if witnesses.is_empty() {
        return Err(ObstructError::Input("no witnesses supplied".into()));
    }
    if r.alphabet() != &p.alphabet {
        return Err(ObstructError::Input("presentation and representation alphabets differ".into()));
    }
    let d = r.dim();
    for &i in indices {
        if i == 0 || i > d / 2 {
            return Err(ObstructError::Input(format!("index {i} outside 1..={}", d / 2)));
        }
    }
    let mut records = Vec::new();
    for w in witnesses {
        let parity = p
            .index_two_evidence(w)
            .ok_or_else(|| ObstructError::NotInCore(p.alphabet.format(w)))?;
        records.push(WitnessRecord { word: p.alphabet.format(w), parity });
    }
    let mut failures = Vec::new();
    let mut indeterminate = Vec::new();
    let mut open: Vec<usize> = indices.to_vec();
    for (w, rec) in witnesses.iter().zip(&records) {
        if open.is_empty() {
            break;
        }
        let m = r.eval_precise(w);
        let mut still = Vec::new();
        for &i in &open {
            let e = classify_exterior(&m, i, tol)?;
            match e.class.positively_semiproximal {
                Truth::No => failures.push(IndexFailure {
                    index: i,
                    witness: rec.word.clone(),
                    route: e.route,
                    class: e.class,
                    log10_top_moduli: e.log10_top_moduli,
                }),
                Truth::Indeterminate => {
                    indeterminate.push((i, rec.word.clone()));
                    still.push(i);
                }
                Truth::Yes => still.push(i),
            }
        }
        open = still;
    }
    failures.sort_by_key(|f| f.index);
    let covered: Vec<usize> = failures.iter().map(|f| f.index).collect();
    let complete = (1..=d / 2).all(|i| covered.contains(&i));
    Ok(ObstructionCertificate {
        schema_version: SCHEMA_VERSION,
        construction: r.provenance.clone(),
        manifest_hash: rep_hash(r),
        dim: d,
        tol,
        witnesses: records,
        requested: indices.to_vec(),
        failures,
        uncovered: open,
        indeterminate,
        complete,
        assumptions: assumptions.to_vec(),
        semantics: SEMANTICS.to_string(),
    })
}

/// Recompute every recorded failure from the representation alone.
pub fn revalidate(cert: &ObstructionCertificate, r: &RepSpec, p: &Presentation) -> Result<bool, ObstructError> {
    if rep_hash(r) != cert.manifest_hash {
        return Ok(false);
    }
    for rec in &cert.witnesses {
        let w = p.alphabet.parse(&rec.word)?;
        if p.index_two_evidence(&w).as_ref() != Some(&rec.parity) {
            return Ok(false);
        }
    }
    for f in &cert.failures {
        let w = p.alphabet.parse(&f.witness)?;
        let e = classify_exterior(&r.eval_precise(&w), f.index, cert.tol)?;
        if !e.class.positively_semiproximal.is_no() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    #[test]
    fn identity_rep_covers_nothing() {
        let a = Alphabet::paired(1);
        let r = RepSpec::trivial(a.clone(), 4);
        let p = Presentation::free(a.clone());
        let w = a.parse("a1 b1 a1^-1 b1^-1").unwrap();
        let c = certify_not_limit(&r, &[w], &[1, 2], &p, 1e-6).unwrap();
        assert!(c.failures.is_empty() && c.uncovered == vec![1, 2] && !c.complete);
    }

    #[test]
    fn odd_witness_is_rejected() {
        let a = Alphabet::paired(1);
        let r = RepSpec::trivial(a.clone(), 2);
        let p = Presentation::free(a.clone());
        let err = certify_not_limit(&r, &[a.parse("a1").unwrap()], &[1], &p, 1e-6).unwrap_err();
        assert!(matches!(err, ObstructError::NotInCore(_)));
    }

    #[test]
    fn sign_witness_is_covered_and_revalidates() {
        let r = crate::reps::schottky_sl2r(2, 4.0).unwrap();
        let a = r.alphabet().clone();
        let p = Presentation::free(a.clone());
        let coset = a.parse("a1 a1").unwrap();
        let sw = crate::obstruct::find_negative_lambda(&r, &coset, None, Default::default()).unwrap();
        let c = certify_not_limit(&r, &[sw.witness.clone()], &[1], &p, 1e-6).unwrap();
        assert_eq!(c.covered(), vec![1]);
        assert!(c.complete);
        assert!(c.failures[0].class.lambda1.unwrap()[0] < 0.0);
        assert!(revalidate(&c, &r, &p).unwrap());
        let back = ObstructionCertificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}
