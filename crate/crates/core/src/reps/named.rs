//! The named constructions, assembled from Schottky surrogates.
//!
//! Every build is carried out on a free group and then pulled back to the
//! ambient group along a retraction, so relators of the ambient
//! presentation evaluate to the identity exactly. The inequality gates of
//! each construction are evaluated and recorded; a failing gate is an
//! error naming the inequality. Spectral claims are stored as symbolic
//! goldens in the build's quantities and checked by `reproduce`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::character::{character_block_sum, Character, ScaledBlock};
use super::schottky::{integral_base, integral_dominating, schottky_sl2r_on, sl2_l1};
use super::spin::{spin_so31, tau2_realify, ComplexRep2};
use super::zariski::{j_stheta_rep, random_sl3z, rotation_block_rep, zariski_heuristic, ZariskiReport};
use super::{block_sum, pull_back, tensor_rep, Provenance, RepError, RepSpec};
use crate::linalg::SquareMatrix;
use crate::obstruct::certificate::DEFAULT_ASSUMPTIONS;
use crate::obstruct::sign::lambda1_from_trace;
use crate::obstruct::{check_domination, find_negative_lambda, DominationReport, ObstructError, SearchBudget, SignWitness};
use crate::words::{commutator, Alphabet, GeneratorMap, Presentation, Word};

pub const NAMES: [&str; 7] = ["thm1i_d5", "thm1i_d6", "thm1i_dge7", "thm1ii_d12", "thm41_pattern", "prop42_sl4", "prop42_sl6"];

/// Ball radius for the empirical domination checks.
pub const DEFAULT_DOMINATION_RADIUS: usize = 6;

/// `|q_1|^{e_1} ... |q_k|^{e_k}` over named build quantities, with the
/// text it was transcribed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub text: String,
    pub factors: Vec<(String, f64)>,
}

impl Monomial {
    pub fn new(text: &str, factors: &[(&str, f64)]) -> Self {
        Monomial { text: text.to_string(), factors: factors.iter().map(|(q, e)| (q.to_string(), *e)).collect() }
    }

    /// Value in log scale, so that huge quantities do not overflow.
    pub fn ln_value(&self, quantities: &BTreeMap<String, f64>) -> Result<f64, RepError> {
        self.factors.iter().try_fold(0.0, |acc, (q, e)| {
            let v = quantities.get(q).ok_or_else(|| RepError::Construction(format!("golden uses unknown quantity `{q}`")))?;
            Ok(acc + e * v.abs().ln())
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GoldenCheck {
    /// The leading eigenvalue moduli of `∧^index` of the word's image, in order.
    TopModuli { word: String, index: usize, expected: Vec<Monomial>, rel_tol: f64 },
    /// `∧^i` is not positively semiproximal for each listed `i`.
    NotPositivelySemiproximal { word: String, indices: Vec<usize> },
    /// `∧^i` is proximal with negative real top eigenvalue for each listed `i`.
    ProximalNegative { word: String, indices: Vec<usize> },
    /// The top-modulus cluster of `∧^index` has exactly `multiplicity`
    /// members, all real and negative.
    NegativeCluster { word: String, index: usize, multiplicity: usize },
    /// The top-modulus cluster of `∧^index` is one non-real conjugate pair
    /// `modulus · e^{±i angle}`.
    NonRealPair { word: String, index: usize, modulus: Monomial, angle: String, rel_tol: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Golden {
    pub claim: String,
    pub check: GoldenCheck,
}

/// `lhs > rhs`, evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
    pub passes: bool,
}

impl GateRecord {
    pub fn new(inequality: &str, lhs: f64, rhs: f64) -> Self {
        GateRecord { inequality: inequality.to_string(), lhs, rhs, passes: lhs > rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub label: String,
    pub word: String,
    pub purpose: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationEntry {
    pub claim: String,
    pub report: DominationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildManifest {
    pub name: String,
    /// Effective parameters, defaults included.
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    pub presentation: String,
    pub free_alphabet: Vec<String>,
    pub quantities: BTreeMap<String, f64>,
    pub gates: Vec<GateRecord>,
    pub witnesses: Vec<WitnessEntry>,
    pub sign_searches: Vec<SignWitness>,
    pub characters: Vec<Character>,
    pub dominations: Vec<DominationEntry>,
    pub zariski: Vec<ZariskiReport>,
    pub conventions: Vec<String>,
    pub assumptions: Vec<String>,
    pub requested_indices: Vec<usize>,
    pub goldens: Vec<Golden>,
}

#[derive(Debug, Clone)]
pub struct NamedBuild {
    pub rep: RepSpec,
    pub presentation: Presentation,
    /// Witness words over the presentation's alphabet, in certificate order.
    pub witnesses: Vec<Word>,
    pub manifest: BuildManifest,
}

impl NamedBuild {
    pub fn manifest_json(&self) -> String {
        serde_json::to_string_pretty(&self.manifest).expect("plain document")
    }
}

/// Effective parameters: defaults overridden by `given`, which may only
/// name known keys.
struct Params {
    values: BTreeMap<String, f64>,
}

impl Params {
    fn new(name: &str, given: &BTreeMap<String, f64>, defaults: &[(&str, Option<f64>)]) -> Result<Self, RepError> {
        for k in given.keys() {
            if !defaults.iter().any(|(d, _)| d == k) {
                let known: Vec<&str> = defaults.iter().map(|(d, _)| *d).collect();
                return Err(RepError::Construction(format!("`{name}` has no parameter `{k}` (known: {})", known.join(", "))));
            }
        }
        let mut values = BTreeMap::new();
        for (k, v) in defaults {
            if let Some(v) = given.get(*k).copied().or(*v) {
                if !v.is_finite() {
                    return Err(RepError::Construction(format!("parameter `{k}` is not finite")));
                }
                values.insert(k.to_string(), v);
            }
        }
        Ok(Params { values })
    }

    fn get(&self, k: &str) -> Option<f64> {
        self.values.get(k).copied()
    }

    fn req(&self, k: &str) -> f64 {
        self.values[k]
    }

    fn count(&self, k: &str, min: usize, max: usize) -> Result<usize, RepError> {
        let v = self.req(k);
        if v.fract() != 0.0 || v < min as f64 || v > max as f64 {
            return Err(RepError::Construction(format!("parameter `{k}` must be an integer in {min}..={max}, got {v}")));
        }
        Ok(v as usize)
    }

    fn set(&mut self, k: &str, v: f64) {
        self.values.insert(k.to_string(), v);
    }
}

fn check_gates(gates: &[GateRecord]) -> Result<(), RepError> {
    match gates.iter().find(|g| !g.passes) {
        Some(g) => Err(RepError::Gate { inequality: g.inequality.clone(), detail: format!("{:e} is not greater than {:e}", g.lhs, g.rhs) }),
        None => Ok(()),
    }
}

fn search(r: &RepSpec, coset: &str, among: Option<&[&str]>) -> Result<SignWitness, RepError> {
    let coset = r.alphabet().parse(coset)?;
    let among = among.map(|names| names.iter().map(|n| r.alphabet().index_of(n)).collect::<Result<Vec<_>, _>>()).transpose()?;
    find_negative_lambda(r, &coset, among.as_deref(), SearchBudget::default()).map_err(|e| RepError::Search(e.to_string()))
}

fn domination(upper: &RepSpec, lower: &RepSpec, exponent: f64, radius: usize, claim: &str) -> Result<DominationEntry, RepError> {
    let report = check_domination(upper, lower, exponent, radius).map_err(|e| match e {
        ObstructError::Input(s) => RepError::AlphabetMismatch(s),
        other => RepError::Construction(other.to_string()),
    })?;
    if !report.passes {
        return Err(RepError::Gate {
            inequality: claim.to_string(),
            detail: format!("minimum log margin {:e} at `{}` on the radius-{radius} ball", report.min_log_margin, report.worst_word),
        });
    }
    Ok(DominationEntry { claim: claim.to_string(), report })
}

/// Rewrites `w` letter by letter into an alphabet with the same labels.
fn relabel(w: &Word, from: &Alphabet, to: &Alphabet) -> Result<Word, RepError> {
    Ok(to.parse(&from.format(w))?)
}

fn spin_of(i: &RepSpec, name: &str) -> Result<RepSpec, RepError> {
    ComplexRep2::from_real(i)?.realify(spin_so31, Provenance::named(name))
}

fn ratio(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

/// Largest modulus of a determinant-one 2x2 image.
fn ell(r: &RepSpec, w: &Word) -> f64 {
    sl2_l1(&r.eval(w))
}

fn lambda(r: &RepSpec, w: &Word) -> f64 {
    lambda1_from_trace(r.eval_precise(w).trace().to_f64()).unwrap_or(f64::NAN)
}

fn base_manifest(name: &str, params: &Params, seed: u64, p: &str, free: &Alphabet) -> BuildManifest {
    BuildManifest {
        name: name.to_string(),
        params: params.values.clone(),
        seed,
        presentation: p.to_string(),
        free_alphabet: free.names().to_vec(),
        quantities: BTreeMap::new(),
        gates: Vec::new(),
        witnesses: Vec::new(),
        sign_searches: Vec::new(),
        characters: Vec::new(),
        dominations: Vec::new(),
        zariski: Vec::new(),
        conventions: Vec::new(),
        assumptions: Vec::new(),
        requested_indices: Vec::new(),
        goldens: Vec::new(),
    }
}

fn provenance(name: &str, params: &Params, seed: u64) -> Provenance {
    Provenance { name: name.to_string(), params: params.values.clone(), seed }
}

fn finish(
    rep: RepSpec,
    presentation: Presentation,
    witnesses: Vec<(String, Word, String)>,
    mut manifest: BuildManifest,
) -> Result<NamedBuild, RepError> {
    for (label, w, purpose) in &witnesses {
        manifest.witnesses.push(WitnessEntry { label: label.clone(), word: presentation.alphabet.format(w), purpose: purpose.clone() });
    }
    if manifest.requested_indices.is_empty() {
        manifest.requested_indices = (1..=rep.dim() / 2).collect();
    }
    Ok(NamedBuild { rep, presentation, witnesses: witnesses.into_iter().map(|(_, w, _)| w).collect(), manifest })
}

/// `|λ| > x³ > |λ|/μ² > 1`.
pub fn d12_gates(lambda_abs: f64, mu: f64, x: f64) -> Vec<GateRecord> {
    vec![
        GateRecord::new("|λ| > x³", lambda_abs, x.powi(3)),
        GateRecord::new("x³ > |λ|/μ²", x.powi(3), lambda_abs / (mu * mu)),
        GateRecord::new("|λ|/μ² > 1", lambda_abs / (mu * mu), 1.0),
    ]
}

pub fn build_named(name: &str, params: &BTreeMap<String, f64>, seed: u64) -> Result<NamedBuild, RepError> {
    match name {
        "thm1i_d5" => thm1i_d5(params, seed),
        "thm1i_d6" => thm1i_d6(params, seed),
        "thm1i_dge7" => thm1i_dge7(params, seed),
        "thm1ii_d12" => thm1ii_d12(params, seed),
        "thm41_pattern" => thm41_pattern(params, seed),
        "prop42_sl4" => prop42_sl4(params, seed),
        "prop42_sl6" => prop42_sl6(params, seed),
        _ => Err(RepError::Construction(format!("unknown construction `{name}` (known: {})", NAMES.join(", ")))),
    }
}

const INDEX_TWO_CONVENTION: &str = "witnesses have even exponent sums and so lie in the index-two core of the ambient presentation";

fn book_conventions(g: usize) -> Vec<String> {
    vec![
        format!("assembled on F = <a1,b1,...,a{g},b{g}> and pulled back to the book group along the retraction R"),
        "the convex cocompact representation into SL(2,C) is replaced by a Schottky surrogate on F".into(),
        INDEX_TWO_CONVENTION.into(),
    ]
}

fn book_assumptions() -> Vec<String> {
    let mut a: Vec<String> = DEFAULT_ASSUMPTIONS.iter().map(|s| s.to_string()).collect();
    a.push("the witnesses lie in a surface subgroup Delta of the book group, taken to be quasiconvex of infinite index with connected boundary".into());
    a
}

// ---- thm1i: surface groups in d = 5, 6, >= 7 ----

/// ρ = diag(ε^{-1/4} τ2(i), ε) with ε(a1) = √x, ε(b1) = 1.
fn thm1i_d5(given: &BTreeMap<String, f64>, seed: u64) -> Result<NamedBuild, RepError> {
    let mut params = Params::new("thm1i_d5", given, &[("spread", Some(4.0)), ("x", None)])?;
    let f = Alphabet::paired(1);
    let i = schottky_sl2r_on(&f, params.req("spread"))?;
    let rho1 = ComplexRep2::from_real(&i)?.realify(tau2_realify, Provenance::named("tau2"))?;
    let sw = search(&i, "a1 a1", None)?;
    let w_big = sw.witness.clone();
    let h = sw.w0_word.clone();
    let l1 = lambda(&i, &w_big);
    let x = params.get("x").unwrap_or_else(|| (2.0 * l1.abs()).powf(0.8));
    params.set("x", x);
    let mut m = base_manifest("thm1i_d5", &params, seed, "book(1)", &f);
    m.gates.push(GateRecord::new("x^{5/4} > ℓ1(ρ1(w a1²))", x.powf(1.25), l1.abs()));
    check_gates(&m.gates)?;
    let eps = Character::on("eps", &f, &[("a1", x.sqrt())])?;
    let rho_f = character_block_sum(&[ScaledBlock::new(rho1, vec![ratio(-1, 4)]), ScaledBlock::scalar(&f, vec![ratio(1, 1)])], std::slice::from_ref(&eps))?;
    let r = GeneratorMap::book_to_free(1);
    let rep = pull_back(&rho_f, &r)?.with_provenance(provenance("thm1i_d5", &params, seed));
    let p = Presentation::book(1);
    let wg = relabel(&w_big, &f, &p.alphabet)?;
    let hg = relabel(&h, &f, &p.alphabet)?;
    let (ws, hs) = (p.alphabet.format(&wg), p.alphabet.format(&hg));
    m.quantities.insert("x".into(), x);
    m.quantities.insert("lambda1".into(), l1);
    m.quantities.insert("lambda1_h".into(), lambda(&i, &h));
    m.quantities.insert("eps_w".into(), eps.eval(&w_big));
    m.quantities.insert("eps_h".into(), eps.eval(&h));
    m.characters.push(eps);
    m.sign_searches.push(sw);
    m.conventions = book_conventions(1);
    m.conventions.push("the character is normalized by ε(w a1²) = ε(a1²) = x".into());
    m.conventions.push("the gate is read with ρ1 in place of ρ, since the first block of ρ is what x must dominate".into());
    m.assumptions = book_assumptions();
    m.goldens = vec![
        Golden {
            claim: "the first 3 eigenvalues of ρ(w a1²) are x, x^{-1/4}λ1(ρ1(w a1²)) twice".into(),
            check: GoldenCheck::TopModuli {
                word: ws.clone(),
                index: 1,
                expected: vec![
                    Monomial::new("x", &[("x", 1.0)]),
                    Monomial::new("x^{-1/4}|λ1|", &[("x", -0.25), ("lambda1", 1.0)]),
                    Monomial::new("x^{-1/4}|λ1|", &[("x", -0.25), ("lambda1", 1.0)]),
                ],
                rel_tol: 1e-6,
            },
        },
        Golden {
            claim: "∧²ρ(w a1²) is not positively semiproximal".into(),
            check: GoldenCheck::NotPositivelySemiproximal { word: ws.clone(), indices: vec![2] },
        },
        Golden {
            claim: "h with ε(h) = 1 and λ1(ρ1(h)) < 0".into(),
            check: GoldenCheck::NegativeCluster { word: hs.clone(), index: 1, multiplicity: 2 },
        },
    ];
    finish(
        rep,
        p,
        vec![
            ("w a1^2".into(), wg, "∧² not positively semiproximal".into()),
            ("h".into(), hg, "ε(h) = 1 and negative top eigenvalue".into()),
        ],
        m,
    )
}

/// Schottky factory `i`, `ρ0 = S∘i` and an integral `j` dominating `ρ0²`,
/// all on `F = <a1, b1>`.
fn rank_two_setup(params: &Params) -> Result<(Alphabet, RepSpec, RepSpec, RepSpec, DominationEntry), RepError> {
    let f = Alphabet::paired(1);
    let i = schottky_sl2r_on(&f, params.req("spread"))?;
    let rho0 = spin_of(&i, "spin")?;
    let j = integral_dominating(&i, 4.0, 2.0, &[7, 5])?;
    let radius = params.count("radius", 1, 12)?;
    let dom = domination(&j, &rho0, 2.0, radius, "ℓ1(j(γ)) ≥ ℓ1(ρ0(γ))²")?;
    Ok((f, i, rho0, j, dom))
}

fn thm1i_d6(given: &BTreeMap<String, f64>, seed: u64) -> Result<NamedBuild, RepError> {
    let params = Params::new("thm1i_d6", given, &[("spread", Some(4.0)), ("radius", Some(DEFAULT_DOMINATION_RADIUS as f64))])?;
    let (f, _i, rho0, j, dom) = rank_two_setup(&params)?;
    let sw = search(&j, "", None)?;
    let w = sw.witness.clone();
    let mut m = base_manifest("thm1i_d6", &params, seed, "book(1)", &f);
    let lj = lambda(&j, &w);
    let l0 = crate::obstruct::domination::log_l1(rho0.eval_precise(&w).entries(), 4).exp();
    m.gates.push(GateRecord::new("ℓ1(j(w)) > ℓ1(ρ0(w))", lj.abs(), l0));
    check_gates(&m.gates)?;
    let rho_f = block_sum(&[&rho0, &j])?;
    let rep = pull_back(&rho_f, &GeneratorMap::book_to_free(1))?.with_provenance(provenance("thm1i_d6", &params, seed));
    let p = Presentation::book(1);
    let wg = relabel(&w, &f, &p.alphabet)?;
    let ws = p.alphabet.format(&wg);
    m.quantities.insert("lambda_j".into(), lj);
    m.quantities.insert("ell0".into(), l0);
    m.sign_searches.push(sw);
    m.dominations.push(dom);
    m.conventions = book_conventions(1);
    m.assumptions = book_assumptions();
    m.goldens = vec![
        Golden {
            claim: "ρ(w) and ∧²ρ(w) are proximal with λ1 < 0".into(),
            check: GoldenCheck::ProximalNegative { word: ws.clone(), indices: vec![1, 2] },
        },
        Golden {
            claim: "∧³ρ(w) has λ1(j(w))ℓ1(ρ0(w)) < 0 as eigenvalue of maximum modulus and multiplicity two".into(),
            check: GoldenCheck::NegativeCluster { word: ws.clone(), index: 3, multiplicity: 2 },
        },
        Golden {
            claim: "top modulus of ∧³ρ(w) is |λ1(j(w))|ℓ1(ρ0(w)), twice".into(),
            check: GoldenCheck::TopModuli {
                word: ws.clone(),
                index: 3,
                expected: vec![
                    Monomial::new("|λ1(j(w))|ℓ1(ρ0(w))", &[("lambda_j", 1.0), ("ell0", 1.0)]),
                    Monomial::new("|λ1(j(w))|ℓ1(ρ0(w))", &[("lambda_j", 1.0), ("ell0", 1.0)]),
                ],
                rel_tol: 1e-6,
            },
        },
    ];
    finish(rep, p, vec![("w".into(), wg, "negative λ1 under j".into())], m)
}

/// Integers `m_1 > ... > m_k` spread evenly with `2 m_i` strictly inside
/// `(lo, hi)` (log2 scale).
fn chain_exponents(lo: f64, hi: f64, k: usize) -> Option<Vec<i64>> {
    let out: Vec<i64> = (1..=k).map(|c| ((hi - (hi - lo) * c as f64 / (k + 1) as f64) / 2.0).round() as i64).collect();
    let inside = out.iter().all(|&m| (2 * m) as f64 > lo && ((2 * m) as f64) < hi);
    let strict = out.windows(2).all(|p| p[0] > p[1]);
    (inside && strict).then_some(out)
}

fn thm1i_dge7(given: &BTreeMap<String, f64>, seed: u64) -> Result<NamedBuild, RepError> {
    let params = Params::new(
        "thm1i_dge7",
        given,
        &[("d", Some(7.0)), ("spread", Some(4.0)), ("radius", Some(DEFAULT_DOMINATION_RADIUS as f64))],
    )?;
    let d = params.count("d", 7, 40)?;
    let (f, _i, rho0, j, dom) = rank_two_setup(&params)?;
    let sw = search(&j, "a1 a1", None)?;
    let w = sw.witness.clone();
    let lj = ell(&j, &w);
    let l0 = crate::obstruct::domination::log_l1(rho0.eval_precise(&w).entries(), 4).exp();
    let k = d - 6;
    let mut m = base_manifest("thm1i_dge7", &params, seed, "book(1)", &f);
    let exps = chain_exponents(l0.log2(), lj.log2(), k).ok_or_else(|| RepError::Gate {
        inequality: "ℓ1(j(w a1²)) > ε1(a1²) > ... > ε_{d-6}(a1²) > ℓ1(ρ0(w a1²))".into(),
        detail: format!("no room for {k} distinct powers of two between {l0:e} and {lj:e}"),
    })?;
    let mut chars = Vec::new();
    for (c, &e) in exps.iter().enumerate() {
        chars.push(Character::on(&format!("eps{}", c + 1), &f, &[("a1", 2f64.powi(e as i32))])?);
    }
    m.gates.push(GateRecord::new("ℓ1(j(w a1²)) > ε1(a1²)", lj, chars[0].eval(&w)));
    for c in 1..k {
        m.gates.push(GateRecord::new(&format!("ε{}(a1²) > ε{}(a1²)", c, c + 1), chars[c - 1].eval(&w), chars[c].eval(&w)));
    }
    m.gates.push(GateRecord::new(&format!("ε{k}(a1²) > ℓ1(ρ0(w a1²))"), chars[k - 1].eval(&w), l0));
    check_gates(&m.gates)?;
    // Every block is scaled by det^{-1/d}; block c additionally by ε_c.
    let norm = ratio(-1, d as i64);
    let mut blocks = vec![ScaledBlock::new(rho0, vec![norm; k]), ScaledBlock::new(j.clone(), vec![norm; k])];
    for c in 0..k {
        let mut e = vec![norm; k];
        e[c] += ratio(1, 1);
        blocks.push(ScaledBlock::scalar(&f, e));
    }
    let rho_f = character_block_sum(&blocks, &chars)?;
    let rep = pull_back(&rho_f, &GeneratorMap::book_to_free(1))?.with_provenance(provenance("thm1i_dge7", &params, seed));
    let p = Presentation::book(1);
    let wg = relabel(&w, &f, &p.alphabet)?;
    let ws = p.alphabet.format(&wg);
    m.quantities.insert("ell_j".into(), lj);
    m.quantities.insert("ell0".into(), l0);
    for (c, e) in exps.iter().enumerate() {
        m.quantities.insert(format!("log2_eps{}_a1", c + 1), *e as f64);
    }
    m.characters = chars;
    m.sign_searches.push(sw);
    m.dominations.push(dom);
    m.conventions = book_conventions(1);
    m.conventions.push("the ε chain uses powers of two evenly spaced in log scale between the two bounds".into());
    m.conventions.push("ρ is normalized by det^{-1/d}, realized as exponent -1/d of every ε_c on every block".into());
    m.conventions.push("the witness is sought for j on <a1,b1> directly; the ι1' in the sign condition is read as a citation slip".into());
    m.assumptions = book_assumptions();
    m.goldens = vec![Golden {
        claim: format!("∧^i ρ(w a1²) is proximal but not positively proximal for i = 1..{}", d - 4),
        check: GoldenCheck::ProximalNegative { word: ws.clone(), indices: (1..=d - 4).collect() },
    }];
    finish(rep, p, vec![("w a1^2".into(), wg, "proximal, negative, for i up to d - 4".into())], m)
}

// ---- thm1ii: the d = 12 construction ----

/// An injective map of `F_8` into the rank-4 integral base, onto a free
/// factor of an index-three subgroup.
pub fn schreier_map() -> GeneratorMap {
    let x = integral_base().alphabet().clone();
    let assign = [
        ("a1", "x1"),
        ("b1", "x2"),
        ("a2", "x3"),
        ("b2", "x4 x1 x4^-1"),
        ("a3", "x4 x2 x4^-1"),
        ("b3", "x4 x3 x4^-1"),
        ("a4", "x4 x4 x1 x4^-1 x4^-1"),
        ("b4", "x4 x4 x4"),
    ];
    GeneratorMap::from_labels(Alphabet::paired(4), x, &assign).expect("labels exist")
}

fn thm1ii_d12(given: &BTreeMap<String, f64>, seed: u64) -> Result<NamedBuild, RepError> {
    let mut params = Params::new("thm1ii_d12", given, &[("x", None), ("radius", Some(DEFAULT_DOMINATION_RADIUS as f64))])?;
    let radius = params.count("radius", 1, 12)?;
    let f = Alphabet::paired(4);
    let i = pull_back(&integral_base(), &schreier_map())?;
    let rho0 = spin_of(&i, "spin")?;
    let sub1 = f.restrict(&["a1", "b1", "a2"])?;
    let sub2 = f.restrict(&["b2", "a3", "b3"])?;
    let sub3 = f.restrict(&["a4", "b4"])?;
    let iota1 = integral_dominating(&i.restrict(&sub1)?, 6.0, 30.0, &[7, 5, 6])?;
    let iota2 = integral_dominating(&i.restrict(&sub2)?, 10.0, 30.0, &[7, 5, 6])?;
    let dom1 = domination(&iota1, &rho0.restrict(&sub1)?, 3.0, radius, "ℓ1(ι1(g)) ≥ ℓ1(S(g))³")?;
    let dom2 = domination(&iota2, &rho0.restrict(&sub2)?, 5.0, radius, "ℓ1(ι2(h)) ≥ ℓ1(S(h))⁵")?;
    let sw = search(&iota1, "a2 a2", Some(&["a1", "b1"]))?;
    let sz = search(&iota2, "b3 b3", Some(&["b2", "a3"]))?;
    let w_big = relabel(&sw.witness, &sub1, &f)?;
    let z_big = relabel(&sz.witness, &sub2, &f)?;
    let lam = lambda(&iota1, &sw.witness);
    let s = lambda(&iota2, &sz.witness);
    let mu = ell(&i, &w_big);
    let nu = ell(&i, &z_big);
    let x = params.get("x").unwrap_or_else(|| 4f64.powi(((lam.abs() / mu).ln() / 3.0 / 4f64.ln()).round() as i32));
    params.set("x", x);
    let mut m = base_manifest("thm1ii_d12", &params, seed, "book(4)", &f);
    m.gates = d12_gates(lam.abs(), mu, x);
    m.gates.push(GateRecord::new("|s| > ν⁴", s.abs(), nu.powi(4)));
    check_gates(&m.gates)?;
    let eps = Character::on("eps", &sub1, &[("a2", x)])?;
    let iota1p = character_block_sum(&[ScaledBlock::new(iota1, vec![ratio(-1, 2)]), ScaledBlock::scalar(&sub1, vec![ratio(1, 1)])], std::slice::from_ref(&eps))?;
    let iota2p = block_sum(&[&iota2, &RepSpec::trivial(sub2.clone(), 1)])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut zar = zariski_heuristic(&[]);
    let mut a3 = None;
    for _ in 0..100 {
        let (g1, g1i) = random_sl3z(&mut rng);
        let (g2, g2i) = random_sl3z(&mut rng);
        zar = zariski_heuristic(&[g1.clone(), g2.clone()]);
        if zar.passes {
            a3 = Some(RepSpec::with_inverses(sub3.clone(), vec![g1, g2], vec![g1i, g2i], Provenance::named("seeded_sl3z"))?);
            break;
        }
    }
    let a3 = a3.ok_or_else(|| RepError::Construction("no seeded SL(3,Z) pair passed the Zariski heuristic".into()))?;
    let a = RepSpec::join(&f, &[&iota1p, &iota2p, &a3], Provenance::named("A"))?;
    let zar_all = zariski_heuristic(a.images());
    let rho_f = tensor_rep(&rho0, &a)?;
    let rep = pull_back(&rho_f, &GeneratorMap::book_to_free(4))?.with_provenance(provenance("thm1ii_d12", &params, seed));
    let p = Presentation::book(4);
    let wg = relabel(&w_big, &f, &p.alphabet)?;
    let zg = relabel(&z_big, &f, &p.alphabet)?;
    let (ws, zs) = (p.alphabet.format(&wg), p.alphabet.format(&zg));
    for (k, v) in [("lambda", lam), ("mu", mu), ("x", x), ("s", s), ("nu", nu), ("eps_w", eps.eval(&sw.witness))] {
        m.quantities.insert(k.into(), v);
    }
    m.characters.push(eps);
    m.sign_searches = vec![sw, sz];
    m.dominations = vec![dom1, dom2];
    m.zariski = vec![zar, zar_all];
    m.conventions = book_conventions(4);
    m.conventions.extend([
        "the base i is an integral rank-4 Schottky group pulled back to F along an injective Schreier-type map".into(),
        "ι1 and ι2 are integral Schottky groups whose generator traces dominate the required powers of ℓ1(S)".into(),
        "μ and ν denote ℓ1(i(w a2²)) and ℓ1(i(z b3²)), so that ρ0 of the witnesses is conjugate to diag(μ², 1, 1, μ⁻²)".into(),
        "ε(a2) = x, so ε(w a2²) = x²".into(),
        "A on <a4,b4> is a seeded SL(3,Z) pair passing the Zariski heuristic, in place of the stated <a3,b4,...>".into(),
    ]);
    m.assumptions = book_assumptions();
    m.assumptions.push("A(<a4,b4>) is Zariski dense in SL(3,R) (heuristic only)".into());
    let golden7 = vec![
        Monomial::new("|λ|μ²/x", &[("lambda", 1.0), ("mu", 2.0), ("x", -1.0)]),
        Monomial::new("x²μ²", &[("x", 2.0), ("mu", 2.0)]),
        Monomial::new("|λ|/x", &[("lambda", 1.0), ("x", -1.0)]),
        Monomial::new("|λ|/x", &[("lambda", 1.0), ("x", -1.0)]),
        Monomial::new("x²", &[("x", 2.0)]),
        Monomial::new("x²", &[("x", 2.0)]),
        Monomial::new("|λ|/(xμ²)", &[("lambda", 1.0), ("x", -1.0), ("mu", -2.0)]),
    ];
    let five = Monomial::new("|λ|³μ⁴x", &[("lambda", 3.0), ("mu", 4.0), ("x", 1.0)]);
    m.goldens = vec![
        Golden {
            claim: "the first 7 eigenvalues of g in decreasing order of moduli".into(),
            check: GoldenCheck::TopModuli { word: ws.clone(), index: 1, expected: golden7, rel_tol: 1e-9 },
        },
        Golden {
            claim: "∧^i g is not positively semiproximal for i = 1, 2, 4, 5, 6".into(),
            check: GoldenCheck::NotPositivelySemiproximal { word: ws.clone(), indices: vec![1, 2, 4, 5, 6] },
        },
        Golden {
            claim: "∧⁵g has λ³μ⁴x < 0 as eigenvalue of maximum modulus and multiplicity 2".into(),
            check: GoldenCheck::NegativeCluster { word: ws.clone(), index: 5, multiplicity: 2 },
        },
        Golden {
            claim: "∧⁵g top modulus |λ|³μ⁴x".into(),
            check: GoldenCheck::TopModuli { word: ws.clone(), index: 5, expected: vec![five.clone(), five], rel_tol: 1e-6 },
        },
        Golden {
            claim: "the first 5 eigenvalues of h in decreasing order of moduli".into(),
            check: GoldenCheck::TopModuli {
                word: zs.clone(),
                index: 1,
                expected: vec![
                    Monomial::new("|s|ν²", &[("s", 1.0), ("nu", 2.0)]),
                    Monomial::new("|s|", &[("s", 1.0)]),
                    Monomial::new("|s|", &[("s", 1.0)]),
                    Monomial::new("|s|/ν²", &[("s", 1.0), ("nu", -2.0)]),
                    Monomial::new("ν²", &[("nu", 2.0)]),
                ],
                rel_tol: 1e-9,
            },
        },
        Golden {
            claim: "∧³h is proximal with first eigenvalue s³ν² < 0".into(),
            check: GoldenCheck::ProximalNegative { word: zs.clone(), indices: vec![3] },
        },
        Golden {
            claim: "∧³h top modulus |s|³ν²".into(),
            check: GoldenCheck::TopModuli {
                word: zs.clone(),
                index: 3,
                expected: vec![Monomial::new("|s|³ν²", &[("s", 3.0), ("nu", 2.0)])],
                rel_tol: 1e-6,
            },
        },
    ];
    finish(
        rep,
        p,
        vec![
            ("w a2^2".into(), wg, "covers i = 1, 2, 4, 5, 6".into()),
            ("z b3^2".into(), zg, "covers i = 3".into()),
        ],
        m,
    )
}

// ---- thm41: the 3n-dimensional pattern ----

/// `(P, P^-1, D, D^-1)` with `P D P^-1 D^-1 = diag(g)`: `P` a signed
/// cyclic permutation of determinant 1 and `D` diagonal of determinant 1.
/// Needs `prod g = 1`; the diagonal is reordered internally to keep the
/// entries of `D` moderate, so the commutator is `diag(g)` up to a
/// permutation of the basis.
pub fn commutator_realization(g: &[f64]) -> Result<[SquareMatrix; 4], RepError> {
    let n = g.len();
    let log_det: f64 = g.iter().map(|v| v.abs().ln()).sum();
    let negatives = g.iter().filter(|v| **v < 0.0).count();
    if n < 2 || log_det.abs() > 1e-9 * n as f64 || negatives % 2 == 1 || g.iter().any(|v| *v == 0.0) {
        return Err(RepError::Construction("a commutator pattern needs a nonzero diagonal of determinant 1".into()));
    }
    // Greedy order keeping partial products of 1/g near 1 in log scale.
    let mut rest: Vec<f64> = g.to_vec();
    let mut order = Vec::with_capacity(n);
    let mut acc = 0.0f64;
    while !rest.is_empty() {
        let k = (0..rest.len()).min_by(|&a, &b| (acc - rest[a].abs().ln()).abs().total_cmp(&(acc - rest[b].abs().ln()).abs())).unwrap();
        acc -= rest[k].abs().ln();
        order.push(rest.remove(k));
    }
    // P e_k = σ_k e_{k+1}; then P D P^-1 = diag(d_{k-1}) and g_k = d_{k-1} / d_k.
    let mut d = vec![1.0f64; n];
    for k in 1..n {
        d[k] = d[k - 1] / order[k];
    }
    let det: f64 = d.iter().map(|v| v.abs().ln()).sum();
    let sign_d = d.iter().filter(|v| **v < 0.0).count() % 2;
    let mut c = (-det / n as f64).exp();
    if sign_d == 1 {
        if n % 2 == 0 {
            return Err(RepError::Construction("even dimension with negative determinant pattern".into()));
        }
        c = -c;
    }
    let d: Vec<f64> = d.iter().map(|v| v * c).collect();
    let mut p = SquareMatrix::identity(n).scale(0.0);
    let cycle_sign = if n % 2 == 0 { -1.0 } else { 1.0 };
    for k in 0..n {
        p.0[((k + 1) % n, k)] = if k == 0 { cycle_sign } else { 1.0 };
    }
    let pinv = p.transpose();
    let dm = SquareMatrix::diag(&d);
    let dinv = SquareMatrix::diag(&d.iter().map(|v| 1.0 / v).collect::<Vec<_>>());
    Ok([p, pinv, dm, dinv])
}

fn tensor_pattern(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut left = vec![a * a];
    left.extend(std::iter::repeat(1.0).take(n - 2));
    left.push(1.0 / (a * a));
    left.iter().flat_map(|l| [l * b, *l, l / b]).collect()
}

fn thm41_pattern(given: &BTreeMap<String, f64>, seed: u64) -> Result<NamedBuild, RepError> {
    let params = Params::new("thm41_pattern", given, &[("n", Some(5.0)), ("s", Some(-3.0)), ("p", Some(2.0)), ("q", Some(-2000.0))])?;
    let n = params.count("n", 3, 101)?;
    let (s, pp, q) = (params.req("s"), params.req("p"), params.req("q"));
    let mut m = base_manifest("thm41_pattern", &params, seed, "free(a1,b1,a2,b2)", &Alphabet::paired(2));
    m.gates = vec![
        GateRecord::new("n odd, n ≥ 5", if n % 2 == 1 { n as f64 } else { 0.0 }, 4.0),
        GateRecord::new("|s| > 1", s.abs(), 1.0),
        GateRecord::new("p > 1", pp, 1.0),
        GateRecord::new("0 > q", 0.0, q),
        GateRecord::new("|q| > p^10", q.abs(), pp.powi(10)),
        GateRecord::new("0 > s", 0.0, s),
    ];
    check_gates(&m.gates)?;
    let f = Alphabet::paired(2);
    let [p1, p1i, d1, d1i] = commutator_realization(&tensor_pattern(s, s, n))?;
    let [p2, p2i, d2, d2i] = commutator_realization(&tensor_pattern(pp, q, n))?;
    let rep = RepSpec::with_inverses(f.clone(), vec![p1, d1, p2, d2], vec![p1i, d1i, p2i, d2i], provenance("thm41_pattern", &params, seed))?;
    let pres = Presentation::free(f.clone());
    let w = commutator(&Word::gen(0), &Word::gen(1));
    let w2 = commutator(&Word::gen(2), &Word::gen(3));
    let (ws, w2s) = (f.format(&w), f.format(&w2));
    for (k, v) in [("s", s), ("p", pp), ("q", q)] {
        m.quantities.insert(k.into(), v);
    }
    m.quantities.insert("one".into(), 1.0);
    m.conventions = vec![
        "parametric surrogate: [a1,b1] realizes g = diag(s², I_{n-2}, s⁻²) ⊗ diag(s, 1, 1/s) and [a2,b2] realizes h = diag(p², I_{n-2}, p⁻²) ⊗ diag(q, 1, 1/q), each as P D P⁻¹ D⁻¹".into(),
        "the bending construction of the ambient representation is not built".into(),
        INDEX_TWO_CONVENTION.into(),
    ];
    m.assumptions = DEFAULT_ASSUMPTIONS.iter().map(|s| s.to_string()).collect();
    let mut first = vec![Monomial::new("|s|³", &[("s", 3.0)]), Monomial::new("s²", &[("s", 2.0)])];
    first.extend(std::iter::repeat(Monomial::new("|s|", &[("s", 1.0)])).take(n - 1));
    first.extend(std::iter::repeat(Monomial::new("1", &[("one", 1.0)])).take(n - 2));
    let mut hfirst = vec![Monomial::new("|q|p²", &[("q", 1.0), ("p", 2.0)])];
    hfirst.extend(std::iter::repeat(Monomial::new("|q|", &[("q", 1.0)])).take(n - 2));
    hfirst.push(Monomial::new("|q|/p²", &[("q", 1.0), ("p", -2.0)]));
    hfirst.push(Monomial::new("p²", &[("p", 2.0)]));
    let half = 3 * n / 2;
    m.requested_indices = (1..=half).collect();
    m.goldens = vec![
        Golden {
            claim: format!("the first {} eigenvalues of g are s³, s², s ({}×), 1 ({}×)", 2 * n - 1, n - 1, n - 2),
            check: GoldenCheck::TopModuli { word: ws.clone(), index: 1, expected: first, rel_tol: 1e-9 },
        },
        Golden {
            claim: "∧^i g is not positively semiproximal for even i ≤ n+1 and for n+1 ≤ i ≤ 3n/2".into(),
            check: GoldenCheck::NotPositivelySemiproximal {
                word: ws.clone(),
                indices: (1..=half).filter(|i| (i % 2 == 0 && *i <= n + 1) || *i >= n + 1).collect(),
            },
        },
        Golden {
            claim: "the first n+1 eigenvalues of h are qp², q (n-2 times), q/p², p²".into(),
            check: GoldenCheck::TopModuli { word: w2s.clone(), index: 1, expected: hfirst, rel_tol: 1e-9 },
        },
        Golden {
            claim: "∧^i h is not positively semiproximal for odd i ≤ n+1".into(),
            check: GoldenCheck::NotPositivelySemiproximal { word: w2s.clone(), indices: (1..=n + 1).filter(|i| i % 2 == 1).collect() },
        },
    ];
    finish(
        rep,
        pres,
        vec![("w".into(), w, "even indices up to n+1 and beyond".into()), ("w'".into(), w2, "odd indices up to n+1".into())],
        m,
    )
}

// ---- prop42: the SL(4) and SL(6) surrogates ----

/// `π: a_i -> a_i, b_i -> e` from the genus-4 surface onto `<a1,...,a4>`.
pub fn surface_projection() -> GeneratorMap {
    let s = Alphabet::paired(4);
    let t = Alphabet::new(["a1", "a2", "a3", "a4"]).expect("distinct labels");
    let images = s.names().iter().map(|n| if n.starts_with('a') { t.parse(n).expect("label exists") } else { Word::empty() }).collect();
    GeneratorMap::new(s, t, images).expect("images over the target")
}

fn prop42_base(params: &Params) -> Result<(Alphabet, RepSpec, f64, f64), RepError> {
    let t = surface_projection().target;
    let rho1 = schottky_sl2r_on(&t, params.req("spread"))?;
    let lam = lambda(&rho1, &Word::gen(0));
    let mu = lambda(&rho1, &Word::gen(1));
    Ok((t, rho1, lam, mu))
}

fn prop42_conventions() -> Vec<String> {
    vec![
        "the quasi-isometric embedding ρ1 of the surface group is replaced by a Schottky surrogate on <a1,...,a4> composed with π".into(),
        "π sends a_i to a_i and b_i to the identity".into(),
        INDEX_TWO_CONVENTION.into(),
        "the certificate uses the squares a1², a2², which lie in the index-two core".into(),
    ]
}

fn surface_assumptions() -> Vec<String> {
    let mut a: Vec<String> = DEFAULT_ASSUMPTIONS.iter().map(|s| s.to_string()).collect();
    a.push("the index-two core of the surface group itself is used, as for a closed surface group".into());
    a
}

fn prop42_sl4(given: &BTreeMap<String, f64>, seed: u64) -> Result<NamedBuild, RepError> {
    let mut params = Params::new("prop42_sl4", given, &[("spread", Some(4.0)), ("theta", Some(1.0)), ("x", None), ("y", None)])?;
    let (t, rho1, lam, mu) = prop42_base(&params)?;
    let theta = params.req("theta");
    let x = params.get("x").unwrap_or((2.0 * lam.abs()).sqrt());
    let y = params.get("y").unwrap_or((mu.abs() / 2.0).sqrt());
    params.set("x", x);
    params.set("y", y);
    let mut m = base_manifest("prop42_sl4", &params, seed, "surface(4)", &t);
    m.gates = vec![
        GateRecord::new("x² > |λ|", x * x, lam.abs()),
        GateRecord::new("|μ| > y²", mu.abs(), y * y),
        GateRecord::new("x > 0", x, 0.0),
        GateRecord::new("y > 0", y, 0.0),
    ];
    check_gates(&m.gates)?;
    let rot = rotation_block_rep(theta, &t, &["a1", "a2"])?;
    let eps = Character::on("eps", &t, &[("a1", x), ("a2", y)])?;
    let psi_f = character_block_sum(&[ScaledBlock::new(rho1, vec![ratio(-1, 1)]), ScaledBlock::new(rot, vec![ratio(1, 1)])], std::slice::from_ref(&eps))?;
    let rep = pull_back(&psi_f, &surface_projection())?.with_provenance(provenance("prop42_sl4", &params, seed));
    let p = Presentation::surface(4);
    for (k, v) in [("lambda", lam), ("mu", mu), ("x", x), ("y", y), ("theta", theta)] {
        m.quantities.insert(k.into(), v);
    }
    m.characters.push(eps);
    m.conventions = prop42_conventions();
    m.assumptions = surface_assumptions();
    m.goldens = vec![
        Golden {
            claim: "ψ(a1) has x e^{±iθ} as eigenvalues of maximum modulus".into(),
            check: GoldenCheck::NonRealPair { word: "a1".into(), index: 1, modulus: Monomial::new("x", &[("x", 1.0)]), angle: "theta".into(), rel_tol: 1e-9 },
        },
        Golden {
            claim: "∧²ψ(a2) has μ e^{±iθ} as eigenvalues of maximum modulus".into(),
            check: GoldenCheck::NonRealPair { word: "a2".into(), index: 2, modulus: Monomial::new("|μ|", &[("mu", 1.0)]), angle: "theta".into(), rel_tol: 1e-9 },
        },
    ];
    let a1 = p.alphabet.parse("a1 a1")?;
    let a2 = p.alphabet.parse("a2 a2")?;
    finish(rep, p, vec![("a1^2".into(), a1, "i = 1".into()), ("a2^2".into(), a2, "i = 2".into())], m)
}

fn prop42_sl6(given: &BTreeMap<String, f64>, seed: u64) -> Result<NamedBuild, RepError> {
    let params = Params::new("prop42_sl6", given, &[("spread", Some(4.0)), ("theta", Some(1.0)), ("s", Some(3.0)), ("t", Some(0.5))])?;
    let (tal, rho1, lam, mu) = prop42_base(&params)?;
    let (theta, s, t) = (params.req("theta"), params.req("s"), params.req("t"));
    let mut m = base_manifest("prop42_sl6", &params, seed, "surface(4)", &tal);
    m.gates = vec![
        GateRecord::new("s > |λ|^{2/3}", s, lam.abs().powf(2.0 / 3.0)),
        GateRecord::new("t > |μ|^{-2/3}", t, mu.abs().powf(-2.0 / 3.0)),
        GateRecord::new("1 > t", 1.0, t),
    ];
    check_gates(&m.gates)?;
    let (j, zar) = j_stheta_rep(&tal, s, t, theta, seed)?;
    let rho_f = tensor_rep(&rho1, &j)?;
    let rep = pull_back(&rho_f, &surface_projection())?.with_provenance(provenance("prop42_sl6", &params, seed));
    let p = Presentation::surface(4);
    for (k, v) in [("lambda", lam), ("mu", mu), ("s", s), ("t", t), ("theta", theta)] {
        m.quantities.insert(k.into(), v);
    }
    m.zariski.push(zar);
    m.conventions = prop42_conventions();
    m.conventions.push("j on <a3,a4> is a seeded SL(3,Z) pair passing the Zariski heuristic".into());
    m.assumptions = surface_assumptions();
    m.assumptions.push("j(<a3,a4>) is Zariski dense in SL(3,R) (heuristic only)".into());
    let g_moduli = vec![
        Monomial::new("λs", &[("lambda", 1.0), ("s", 1.0)]),
        Monomial::new("λs", &[("lambda", 1.0), ("s", 1.0)]),
        Monomial::new("s/λ", &[("s", 1.0), ("lambda", -1.0)]),
        Monomial::new("s/λ", &[("s", 1.0), ("lambda", -1.0)]),
        Monomial::new("λ/s²", &[("lambda", 1.0), ("s", -2.0)]),
        Monomial::new("1/(λs²)", &[("lambda", -1.0), ("s", -2.0)]),
    ];
    let h_moduli = vec![
        Monomial::new("μ/t²", &[("mu", 1.0), ("t", -2.0)]),
        Monomial::new("μt", &[("mu", 1.0), ("t", 1.0)]),
        Monomial::new("μt", &[("mu", 1.0), ("t", 1.0)]),
        Monomial::new("1/(μt²)", &[("mu", -1.0), ("t", -2.0)]),
        Monomial::new("t/μ", &[("t", 1.0), ("mu", -1.0)]),
        Monomial::new("t/μ", &[("t", 1.0), ("mu", -1.0)]),
    ];
    m.goldens = vec![
        Golden {
            claim: "eigenvalues of g = ρ1(a1) ⊗ j(a1) in decreasing order of moduli".into(),
            check: GoldenCheck::TopModuli { word: "a1".into(), index: 1, expected: g_moduli, rel_tol: 1e-9 },
        },
        Golden {
            claim: "g has λs e^{±iθ} as eigenvalues of maximum modulus".into(),
            check: GoldenCheck::NonRealPair { word: "a1".into(), index: 1, modulus: Monomial::new("λs", &[("lambda", 1.0), ("s", 1.0)]), angle: "theta".into(), rel_tol: 1e-9 },
        },
        Golden {
            claim: "∧³g has its eigenvalues of maximum modulus non-real".into(),
            check: GoldenCheck::NonRealPair { word: "a1".into(), index: 3, modulus: Monomial::new("λs³", &[("lambda", 1.0), ("s", 3.0)]), angle: "theta".into(), rel_tol: 1e-9 },
        },
        Golden {
            claim: "eigenvalues of h = ρ1(a2) ⊗ j(a2) in decreasing order of moduli".into(),
            check: GoldenCheck::TopModuli { word: "a2".into(), index: 1, expected: h_moduli, rel_tol: 1e-9 },
        },
        Golden {
            claim: "∧²h has its eigenvalues of maximum modulus non-real".into(),
            check: GoldenCheck::NonRealPair { word: "a2".into(), index: 2, modulus: Monomial::new("μ²/t", &[("mu", 2.0), ("t", -1.0)]), angle: "theta".into(), rel_tol: 1e-9 },
        },
    ];
    let a1 = p.alphabet.parse("a1 a1")?;
    let a2 = p.alphabet.parse("a2 a2")?;
    finish(rep, p, vec![("a1^2".into(), a1, "i = 1, 3".into()), ("a2^2".into(), a2, "i = 2".into())], m)
}

/// Angles below are compared modulo `2π` with sign.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}
