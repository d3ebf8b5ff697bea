//! Representations as data: generator images, evaluation on words,
//! and the ways the constructions combine them (block sums, character
//! scalings, tensor products, pullbacks).
//!
//! Each generator carries its image and the inverse image. Builders derive
//! inverses structurally (adjugates, block and tensor inverses), because
//! images of integral Schottky generators are far too ill-conditioned to
//! invert numerically.

pub mod character;
pub mod named;
pub mod schottky;
pub mod spin;
pub mod zariski;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::precise::PreciseMatrix;
use crate::linalg::real;
use crate::linalg::{binomial, kronecker, LinalgError, MpMatrix, SquareMatrix, MAX_DIM};
use crate::words::{Alphabet, GeneratorMap, Letter, Presentation, Word, WordError};

pub use character::{character_block_sum, scale_by_character, Character, ScaledBlock};
pub use named::{build_named, BuildManifest, NamedBuild};
pub use schottky::{integral_base, integral_dominating, ping_pong_gap, schottky_sl2c, schottky_sl2r, schottky_sl2r_on};
pub use spin::{spin_so31, tau2_realify, ComplexRep2};
pub use zariski::{j_stheta_rep, random_sl3z, rotation_block_rep, zariski_heuristic};

#[derive(Debug, Error)]
pub enum RepError {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("expected {expected} generator images of dimension {dim}, found {found}")]
    Shape { expected: usize, dim: usize, found: String },
    #[error("image of `{gen}` has determinant {det}, not 1 within {tol}")]
    NotUnimodular { gen: String, det: f64, tol: f64 },
    #[error("inequality `{inequality}` fails: {detail}")]
    Gate { inequality: String, detail: String },
    #[error("construction error: {0}")]
    Construction(String),
    #[error("character exponents do not cancel: {0}")]
    Bookkeeping(String),
    #[error("witness search failed: {0}")]
    Search(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl Provenance {
    pub fn named(name: &str) -> Self {
        Provenance { name: name.to_string(), ..Default::default() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

/// `r` evaluated through a generator map; kept so that words are reduced in
/// the target group before multiplying, which makes relators of the source
/// presentation evaluate to the identity exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Pullback {
    pub map: GeneratorMap,
    pub base: RepSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepSpec {
    alphabet: Alphabet,
    dim: usize,
    images: Vec<SquareMatrix>,
    inverses: Vec<SquareMatrix>,
    precise: Vec<PreciseMatrix>,
    precise_inv: Vec<PreciseMatrix>,
    pub provenance: Provenance,
    /// `(d, k)` when the images are Kronecker products of a `d`- and a
    /// `k`-dimensional factor.
    pub tensor_factors: Option<(usize, usize)>,
    factors_through: Option<Box<Pullback>>,
}

/// Inverse of `m`, exact when `m` is 2x2 with exact determinant one.
pub fn structural_inverse(m: &SquareMatrix) -> Result<SquareMatrix, RepError> {
    if m.dim() == 2 {
        let det = crate::linalg::exact::exact_det(m);
        let adj = SquareMatrix::from_rows(&[vec![m.get(1, 1), -m.get(0, 1)], vec![-m.get(1, 0), m.get(0, 0)]])?;
        return Ok(if det == 1.0 { adj } else { adj.scale(1.0 / det) });
    }
    let p = PreciseMatrix::from_matrix(m);
    let data = real::inverse(p.entries(), m.dim()).ok_or(LinalgError::Singular)?;
    Ok(SquareMatrix::from_row_slice(m.dim(), &data.iter().map(|x| x.to_f64()).collect::<Vec<_>>())?)
}

impl RepSpec {
    /// Images are checked for unimodularity; inverses are derived.
    pub fn new(alphabet: Alphabet, images: Vec<SquareMatrix>, provenance: Provenance) -> Result<Self, RepError> {
        let inverses = images.iter().map(structural_inverse).collect::<Result<Vec<_>, _>>()?;
        Self::with_inverses(alphabet, images, inverses, provenance)
    }

    pub fn with_inverses(
        alphabet: Alphabet,
        images: Vec<SquareMatrix>,
        inverses: Vec<SquareMatrix>,
        provenance: Provenance,
    ) -> Result<Self, RepError> {
        let dim = images.first().map(|m| m.dim()).unwrap_or(0);
        if images.len() != alphabet.rank()
            || inverses.len() != alphabet.rank()
            || images.iter().chain(&inverses).any(|m| m.dim() != dim)
        {
            return Err(RepError::Shape {
                expected: alphabet.rank(),
                dim,
                found: format!("{} images and {} inverses", images.len(), inverses.len()),
            });
        }
        for (g, m) in images.iter().enumerate() {
            if let Err(LinalgError::NotUnimodular { det, tol }) = m.check_unimodular() {
                return Err(RepError::NotUnimodular { gen: alphabet.label(g).to_string(), det, tol });
            }
        }
        let precise = images.iter().map(PreciseMatrix::from_matrix).collect();
        let precise_inv = inverses.iter().map(PreciseMatrix::from_matrix).collect();
        Ok(RepSpec {
            alphabet,
            dim,
            images,
            inverses,
            precise,
            precise_inv,
            provenance,
            tensor_factors: None,
            factors_through: None,
        })
    }

    /// Every generator to the identity.
    pub fn trivial(alphabet: Alphabet, dim: usize) -> Self {
        let id = vec![SquareMatrix::identity(dim); alphabet.rank()];
        Self::with_inverses(alphabet, id.clone(), id, Provenance::named("trivial")).expect("identity is unimodular")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, gen: usize) -> &SquareMatrix {
        &self.images[gen]
    }

    pub fn inverse_image(&self, gen: usize) -> &SquareMatrix {
        &self.inverses[gen]
    }

    pub fn images(&self) -> &[SquareMatrix] {
        &self.images
    }

    pub fn factors_through(&self) -> Option<&Pullback> {
        self.factors_through.as_deref()
    }

    /// The representation words should be measured in: the free base of a
    /// pullback, or `self`.
    pub fn free_surrogate(&self) -> &RepSpec {
        match &self.factors_through {
            Some(pb) => pb.base.free_surrogate(),
            None => self,
        }
    }

    pub fn precise_letter(&self, l: Letter) -> &PreciseMatrix {
        if l.inv { &self.precise_inv[l.gen] } else { &self.precise[l.gen] }
    }

    /// Product of generator images in double-double.
    pub fn eval_precise(&self, w: &Word) -> PreciseMatrix {
        if let Some(pb) = &self.factors_through {
            return pb.base.eval_precise(&pb.map.apply(w));
        }
        let mut letters = w.letters().iter();
        let Some(first) = letters.next() else {
            return PreciseMatrix::identity(self.dim);
        };
        letters.fold(self.precise_letter(*first).clone(), |acc, l| acc.mul(self.precise_letter(*l)))
    }

    /// Product of generator images in 448-bit arithmetic, from the exact
    /// double images.
    pub fn eval_mp(&self, w: &Word) -> MpMatrix {
        if let Some(pb) = &self.factors_through {
            return pb.base.eval_mp(&pb.map.apply(w));
        }
        w.letters().iter().fold(MpMatrix::identity(self.dim), |acc, l| {
            let m = if l.inv { &self.inverses[l.gen] } else { &self.images[l.gen] };
            acc.mul(&MpMatrix::from_matrix(m))
        })
    }

    pub fn eval(&self, w: &Word) -> SquareMatrix {
        self.eval_precise(w).to_matrix().expect("products of finite matrices are finite")
    }

    /// Restriction to the generators named in `sub`.
    pub fn restrict(&self, sub: &Alphabet) -> Result<RepSpec, RepError> {
        let idx = sub.names().iter().map(|n| self.alphabet.index_of(n)).collect::<Result<Vec<_>, _>>()?;
        let mut r = RepSpec::with_inverses(
            sub.clone(),
            idx.iter().map(|&k| self.images[k].clone()).collect(),
            idx.iter().map(|&k| self.inverses[k].clone()).collect(),
            self.provenance.clone(),
        )?;
        r.tensor_factors = self.tensor_factors;
        if let Some(pb) = &self.factors_through {
            let map = GeneratorMap::new(sub.clone(), pb.map.target.clone(), idx.iter().map(|&k| pb.map.image(k).clone()).collect())?;
            r.factors_through = Some(Box::new(Pullback { map, base: pb.base.clone() }));
        }
        Ok(r)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Representation of `alphabet` assembled from representations of
    /// disjoint sub-alphabets that together cover it.
    pub fn join(alphabet: &Alphabet, parts: &[&RepSpec], provenance: Provenance) -> Result<RepSpec, RepError> {
        let dim = parts.first().map(|p| p.dim).unwrap_or(0);
        let mut images = vec![None; alphabet.rank()];
        for p in parts {
            if p.dim != dim {
                return Err(RepError::AlphabetMismatch("joined parts differ in dimension".into()));
            }
            for (k, name) in p.alphabet.names().iter().enumerate() {
                let g = alphabet.index_of(name)?;
                if images[g].is_some() {
                    return Err(RepError::AlphabetMismatch(format!("`{name}` assigned twice")));
                }
                images[g] = Some((p.images[k].clone(), p.inverses[k].clone()));
            }
        }
        let mut ims = Vec::new();
        let mut invs = Vec::new();
        for (g, slot) in images.into_iter().enumerate() {
            let (m, mi) = slot.ok_or_else(|| RepError::AlphabetMismatch(format!("`{}` not assigned", alphabet.label(g))))?;
            ims.push(m);
            invs.push(mi);
        }
        RepSpec::with_inverses(alphabet.clone(), ims, invs, provenance)
    }

    /// `∧^i` of every image.
    /// `∧^i` of every image, with the minors formed in double-double and
    /// rounded once. Rounding can move the determinant of a wide-range
    /// image visibly off 1, so unimodularity is inherited rather than
    /// rechecked.
    pub fn exterior(&self, i: usize) -> Result<RepSpec, RepError> {
        if i == 0 || i > self.dim {
            return Err(RepError::Linalg(LinalgError::IndexOutOfRange { i, dim: self.dim }));
        }
        let size = binomial(self.dim, i);
        if size > MAX_DIM as u128 {
            return Err(RepError::Linalg(LinalgError::TooLarge(size.min(usize::MAX as u128) as usize)));
        }
        let wedge = |ms: &[PreciseMatrix]| ms.iter().map(|m| m.exterior_power(i).to_matrix()).collect::<Result<Vec<_>, _>>();
        let (ims, invs) = (wedge(&self.precise)?, wedge(&self.precise_inv)?);
        let mut prov = self.provenance.clone();
        prov.params.insert("exterior_index".into(), i as f64);
        let dim = ims.first().map(|m| m.dim()).unwrap_or(0);
        Ok(RepSpec {
            alphabet: self.alphabet.clone(),
            dim,
            precise: ims.iter().map(PreciseMatrix::from_matrix).collect(),
            precise_inv: invs.iter().map(PreciseMatrix::from_matrix).collect(),
            images: ims,
            inverses: invs,
            provenance: prov,
            tensor_factors: None,
            factors_through: None,
        })
    }

    /// Deviation `max |eval(w) - eval(u) eval(v)|` relative to the norms of
    /// the factors, for `w = uv`.
    pub fn homomorphism_defect(&self, u: &Word, v: &Word) -> f64 {
        let a = self.eval(u);
        let b = self.eval(v);
        let ab = self.eval(&u.mul(v));
        let direct = a.mul(&b);
        let scale = a.max_abs() * b.max_abs() * self.dim as f64;
        (0..self.dim)
            .flat_map(|i| (0..self.dim).map(move |j| (i, j)))
            .map(|(i, j)| (ab.get(i, j) - direct.get(i, j)).abs())
            .fold(0.0, f64::max)
            / scale.max(f64::MIN_POSITIVE)
    }
}

pub fn block_sum(parts: &[&RepSpec]) -> Result<RepSpec, RepError> {
    let first = parts.first().ok_or_else(|| RepError::Construction("empty block sum".into()))?;
    for p in parts {
        if p.alphabet != first.alphabet {
            return Err(RepError::AlphabetMismatch("block sum over different alphabets".into()));
        }
    }
    let rank = first.alphabet.rank();
    let ims = (0..rank).map(|g| SquareMatrix::block_diag(&parts.iter().map(|p| &p.images[g]).collect::<Vec<_>>())).collect();
    let invs = (0..rank).map(|g| SquareMatrix::block_diag(&parts.iter().map(|p| &p.inverses[g]).collect::<Vec<_>>())).collect();
    RepSpec::with_inverses(first.alphabet.clone(), ims, invs, Provenance::named("block_sum"))
}

pub fn tensor_rep(r1: &RepSpec, r2: &RepSpec) -> Result<RepSpec, RepError> {
    if r1.alphabet != r2.alphabet {
        return Err(RepError::AlphabetMismatch("tensor product over different alphabets".into()));
    }
    let rank = r1.alphabet.rank();
    let ims = (0..rank).map(|g| kronecker(&r1.images[g], &r2.images[g])).collect::<Result<Vec<_>, _>>()?;
    let invs = (0..rank).map(|g| kronecker(&r1.inverses[g], &r2.inverses[g])).collect::<Result<Vec<_>, _>>()?;
    let mut r = RepSpec::with_inverses(r1.alphabet.clone(), ims, invs, Provenance::named("tensor"))?;
    r.tensor_factors = Some((r1.dim, r2.dim));
    Ok(r)
}

/// `g -> r(m(g))`. Pullbacks of pullbacks collapse to a single map.
pub fn pull_back(r: &RepSpec, m: &GeneratorMap) -> Result<RepSpec, RepError> {
    if m.target != r.alphabet {
        return Err(RepError::AlphabetMismatch("pullback map target differs from the representation's alphabet".into()));
    }
    let (map, base) = match &r.factors_through {
        Some(pb) => (m.compose(&pb.map)?, pb.base.clone()),
        None => (m.clone(), r.clone()),
    };
    let rank = m.source.rank();
    let ims = (0..rank).map(|g| base.eval(map.image(g))).collect();
    let invs = (0..rank).map(|g| base.eval(&map.image(g).inverse())).collect();
    let mut out = RepSpec::with_inverses(m.source.clone(), ims, invs, r.provenance.clone())?;
    out.tensor_factors = r.tensor_factors;
    out.factors_through = Some(Box::new(Pullback { map, base }));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelatorDeviation {
    pub relator: String,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomomorphismReport {
    pub tol: f64,
    pub relators: Vec<RelatorDeviation>,
    pub passes: bool,
}

/// `max |eval(relator) - I|` for each relator.
pub fn validate_homomorphism(r: &RepSpec, p: &Presentation, tol: f64) -> Result<HomomorphismReport, RepError> {
    if r.alphabet != p.alphabet {
        return Err(RepError::AlphabetMismatch("presentation and representation alphabets differ".into()));
    }
    let relators: Vec<RelatorDeviation> = p
        .relators
        .iter()
        .map(|rel| {
            let m = r.eval(rel);
            let id = SquareMatrix::identity(r.dim);
            let dev = (0..r.dim)
                .flat_map(|i| (0..r.dim).map(move |j| (i, j)))
                .map(|(i, j)| (m.get(i, j) - id.get(i, j)).abs())
                .fold(0.0, f64::max);
            RelatorDeviation { relator: p.alphabet.format(rel), deviation: dev }
        })
        .collect();
    let passes = relators.iter().all(|d| d.deviation <= tol);
    Ok(HomomorphismReport { tol, relators, passes })
}

// ---- serialization ----

#[derive(Serialize, Deserialize)]
struct PullbackDoc {
    map: BTreeMap<String, String>,
    base: Box<RepDoc>,
}

#[derive(Serialize, Deserialize)]
struct RepDoc {
    alphabet: Alphabet,
    dim: usize,
    images: BTreeMap<String, SquareMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inverses: Option<BTreeMap<String, SquareMatrix>>,
    provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tensor_factors: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    factors_through: Option<PullbackDoc>,
}

impl RepSpec {
    fn to_doc(&self) -> RepDoc {
        let named = |ms: &[SquareMatrix]| {
            self.alphabet.names().iter().cloned().zip(ms.iter().cloned()).collect::<BTreeMap<_, _>>()
        };
        RepDoc {
            alphabet: self.alphabet.clone(),
            dim: self.dim,
            images: named(&self.images),
            inverses: Some(named(&self.inverses)),
            provenance: self.provenance.clone(),
            tensor_factors: self.tensor_factors,
            factors_through: self.factors_through.as_ref().map(|pb| PullbackDoc {
                map: (0..pb.map.source.rank())
                    .map(|g| (pb.map.source.label(g).to_string(), pb.map.target.format(pb.map.image(g))))
                    .collect(),
                base: Box::new(pb.base.to_doc()),
            }),
        }
    }

    fn from_doc(doc: RepDoc) -> Result<Self, RepError> {
        let take = |m: &BTreeMap<String, SquareMatrix>| {
            doc.alphabet
                .names()
                .iter()
                .map(|n| m.get(n).cloned().ok_or_else(|| RepError::AlphabetMismatch(format!("no image for `{n}`"))))
                .collect::<Result<Vec<_>, _>>()
        };
        let images = take(&doc.images)?;
        let mut r = match &doc.inverses {
            Some(inv) => RepSpec::with_inverses(doc.alphabet.clone(), images, take(inv)?, doc.provenance.clone())?,
            None => RepSpec::new(doc.alphabet.clone(), images, doc.provenance.clone())?,
        };
        if r.dim != doc.dim {
            return Err(RepError::Shape { expected: doc.alphabet.rank(), dim: doc.dim, found: format!("dimension {}", r.dim) });
        }
        r.tensor_factors = doc.tensor_factors;
        if let Some(pb) = doc.factors_through {
            let base = RepSpec::from_doc(*pb.base)?;
            let images = doc
                .alphabet
                .names()
                .iter()
                .map(|n| {
                    let text = pb.map.get(n).ok_or_else(|| RepError::AlphabetMismatch(format!("no map image for `{n}`")))?;
                    Ok(base.alphabet.parse(text)?)
                })
                .collect::<Result<Vec<_>, RepError>>()?;
            let map = GeneratorMap::new(doc.alphabet.clone(), base.alphabet.clone(), images)?;
            r.factors_through = Some(Box::new(Pullback { map, base }));
        }
        Ok(r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("plain document")
    }

    pub fn from_json(text: &str) -> Result<Self, RepError> {
        Self::from_doc(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_rep(entries: &[&[f64]]) -> RepSpec {
        let alphabet = Alphabet::new((1..=entries.len()).map(|k| format!("x{k}"))).unwrap();
        RepSpec::new(alphabet, entries.iter().map(|d| SquareMatrix::diag(d)).collect(), Provenance::named("diag")).unwrap()
    }

    #[test]
    fn block_sum_of_diagonals() {
        let a = diag_rep(&[&[2.0, 0.5]]);
        let b = diag_rep(&[&[3.0, 1.0 / 3.0]]);
        let s = block_sum(&[&a, &b]).unwrap();
        assert!(s.image(0).approx_eq(&SquareMatrix::diag(&[2.0, 0.5, 3.0, 1.0 / 3.0]), 0.0));
    }

    #[test]
    fn non_unimodular_images_are_rejected() {
        let alphabet = Alphabet::new(["x"]).unwrap();
        let err = RepSpec::new(alphabet, vec![SquareMatrix::diag(&[2.0, 1.0])], Provenance::named("bad")).unwrap_err();
        assert!(matches!(err, RepError::NotUnimodular { .. }));
    }

    #[test]
    fn json_round_trip_keeps_pullback() {
        let base = diag_rep(&[&[2.0, 0.5], &[4.0, 0.25]]);
        let src = Alphabet::new(["y"]).unwrap();
        let m = GeneratorMap::new(src, base.alphabet().clone(), vec![base.alphabet().parse("x1 x2^-1").unwrap()]).unwrap();
        let r = pull_back(&base, &m).unwrap();
        assert!(r.image(0).approx_eq(&SquareMatrix::diag(&[0.5, 2.0]), 0.0));
        let back = RepSpec::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), r.to_json());
    }
}
