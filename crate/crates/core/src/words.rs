//! Free-group words over named alphabets: reduction, shortlex balls, parity
//! in the index-two core, and generator substitutions.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown generator label `{0}`")]
    UnknownLabel(String),
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("duplicate generator label `{0}`")]
    DuplicateLabel(String),
    #[error("generator labels must be nonempty and contain no whitespace")]
    BadLabel,
    #[error("generator index {index} outside an alphabet of rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("generator map {0}")]
    BadMap(String),
}

/// Ordered list of generator labels. The order is the shortlex order.
#[derive(Debug, Clone)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}
impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self, WordError> {
        let mut out = Alphabet { names: Vec::new(), index: HashMap::new() };
        for name in names {
            let name = name.as_ref();
            if name.is_empty() || name.chars().any(char::is_whitespace) || name.contains('^') {
                return Err(WordError::BadLabel);
            }
            if out.index.insert(name.to_string(), out.names.len()).is_some() {
                return Err(WordError::DuplicateLabel(name.to_string()));
            }
            out.names.push(name.to_string());
        }
        Ok(out)
    }

    /// `a1, b1, ..., a_g, b_g`: the free group F, and also the surface alphabet.
    pub fn paired(genus: usize) -> Self {
        Self::new((1..=genus).flat_map(|i| [format!("a{i}"), format!("b{i}")])).expect("distinct labels")
    }

    /// Generators of the book-of-I-bundles group with `2g`-handled pages:
    /// `a1, b1, ..., a2g, b2g, c1, d1, ..., c2g, d2g`.
    pub fn book(g: usize) -> Self {
        let ab = (1..=2 * g).flat_map(|i| [format!("a{i}"), format!("b{i}")]);
        let cd = (1..=2 * g).flat_map(|i| [format!("c{i}"), format!("d{i}")]);
        Self::new(ab.chain(cd)).expect("distinct labels")
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, gen: usize) -> &str {
        &self.names[gen]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, WordError> {
        self.index.get(name).copied().ok_or_else(|| WordError::UnknownLabel(name.to_string()))
    }

    pub fn letter(&self, name: &str) -> Result<Letter, WordError> {
        Ok(Letter::pos(self.index_of(name)?))
    }

    /// Sub-alphabet holding the listed labels, in this alphabet's order.
    pub fn restrict(&self, labels: &[&str]) -> Result<Alphabet, WordError> {
        let mut idx = labels.iter().map(|l| self.index_of(l)).collect::<Result<Vec<_>, _>>()?;
        idx.sort_unstable();
        idx.dedup();
        Alphabet::new(idx.into_iter().map(|i| self.names[i].clone()))
    }

    /// Parse `a1 b1 a1^-1 b1^-1`. Tokens may carry any integer exponent.
    pub fn parse(&self, text: &str) -> Result<Word, WordError> {
        let mut raw = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "e" && self.index_of("e").is_err() {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| WordError::MalformedToken(tok.to_string()))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let gen = self.index_of(name)?;
            let letter = Letter { gen, inv: exp < 0 };
            for _ in 0..exp.unsigned_abs() {
                raw.push(letter);
            }
        }
        Ok(Word::reduce(raw))
    }

    pub fn format(&self, w: &Word) -> String {
        if w.is_empty() {
            return "e".to_string();
        }
        w.letters
            .iter()
            .map(|l| if l.inv { format!("{}^-1", self.names[l.gen]) } else { self.names[l.gen].clone() })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn check(&self, w: &Word) -> Result<(), WordError> {
        match w.letters.iter().find(|l| l.gen >= self.rank()) {
            Some(l) => Err(WordError::IndexOutOfRange { index: l.gen, rank: self.rank() }),
            None => Ok(()),
        }
    }

    /// Every reduced word of length at most `radius`, in shortlex order.
    pub fn ball(&self, radius: usize) -> BallIter {
        BallIter::new(self.rank(), radius)
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.names.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let names = Vec::<String>::deserialize(d)?;
        Alphabet::new(names).map_err(serde::de::Error::custom)
    }
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter { gen, inv: false }
    }
    pub fn neg(gen: usize) -> Self {
        Letter { gen, inv: true }
    }
    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }
    /// Position in the shortlex letter order `x1 < x1^-1 < x2 < x2^-1 < ...`.
    pub fn rank(self) -> usize {
        2 * self.gen + self.inv as usize
    }
    pub fn from_rank(r: usize) -> Self {
        Letter { gen: r / 2, inv: r % 2 == 1 }
    }
}

/// A freely reduced word. Reduction happens on every construction path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn gen(gen: usize) -> Self {
        Word { letters: vec![Letter::pos(gen)] }
    }

    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            if letters.last() == Some(&l.inverse()) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Shortlex comparison key.
    pub fn shortlex_key(&self) -> (usize, Vec<usize>) {
        (self.len(), self.letters.iter().map(|l| l.rank()).collect())
    }

    /// Exponent sum of each generator, reduced mod 2.
    pub fn parity_vector(&self, rank: usize) -> Vec<bool> {
        let mut v = vec![false; rank];
        for l in &self.letters {
            v[l.gen] ^= true;
        }
        v
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.shortlex_key().cmp(&other.shortlex_key())
    }
}

pub fn commutator(u: &Word, v: &Word) -> Word {
    u.mul(v).mul(&u.inverse()).mul(&v.inverse())
}

pub fn word_length(w: &Word) -> usize {
    w.len()
}

/// Closed-form size of the radius-`radius` ball in the free group of rank `rank`.
pub fn ball_size(rank: usize, radius: usize) -> u128 {
    match rank {
        0 => 1,
        1 => 1 + 2 * radius as u128,
        k => {
            let k = k as u128;
            1 + 2 * k * ((2 * k - 1).pow(radius as u32) - 1) / (2 * k - 2)
        }
    }
}

/// Shortlex stream over a ball, driven as an odometer on letter ranks.
pub struct BallIter {
    letters: usize,
    radius: usize,
    current: Option<Vec<usize>>,
}

impl BallIter {
    fn new(rank: usize, radius: usize) -> Self {
        BallIter { letters: 2 * rank, radius, current: None }
    }

    fn smallest_after(prev: Option<usize>) -> usize {
        match prev {
            Some(1) => 1,
            _ => 0,
        }
    }

    fn first_of_length(len: usize) -> Vec<usize> {
        // x1 x1 ... x1 is reduced and lexicographically least.
        vec![0; len]
    }

    fn advance(&self, cur: &[usize]) -> Option<Vec<usize>> {
        let mut w = cur.to_vec();
        let mut pos = w.len();
        while pos > 0 {
            pos -= 1;
            let prev = if pos == 0 { None } else { Some(w[pos - 1]) };
            let mut r = w[pos] + 1;
            if prev.map_or(false, |p| r == p ^ 1) {
                r += 1;
            }
            if r < self.letters {
                w[pos] = r;
                for k in pos + 1..w.len() {
                    w[k] = Self::smallest_after(Some(w[k - 1]));
                }
                return Some(w);
            }
        }
        None
    }
}

impl Iterator for BallIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let next = match &self.current {
            None => Some(Vec::new()),
            Some(cur) => match self.advance(cur) {
                Some(w) => Some(w),
                None if cur.len() < self.radius && self.letters > 0 => Some(Self::first_of_length(cur.len() + 1)),
                None => None,
            },
        };
        self.current = next.clone();
        next.map(|ranks| Word { letters: ranks.into_iter().map(Letter::from_rank).collect() })
    }
}

/// Finitely presented group. The words module never identifies elements
/// modulo relators; relator checks happen numerically on representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub alphabet: Alphabet,
    pub relators: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct PresentationDoc {
    generators: Vec<String>,
    relators: Vec<String>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self, WordError> {
        for r in &relators {
            alphabet.check(r)?;
        }
        Ok(Presentation { alphabet, relators })
    }

    pub fn free(alphabet: Alphabet) -> Self {
        Presentation { alphabet, relators: Vec::new() }
    }

    /// Product of commutators `[a1,b1]...[a_g,b_g]`.
    pub fn surface(genus: usize) -> Self {
        let alphabet = Alphabet::paired(genus);
        let rel = commutator_product(&alphabet, "a", "b", 1..=genus);
        Presentation { alphabet, relators: vec![rel] }
    }

    /// The book of I-bundles group on `a_i, b_i, c_i, d_i` (`i <= 2g`) with
    /// the three relators `prod [a_i,b_i]`, `prod [c_i,d_i]` over `i <= 2g`
    /// and `prod_{i<=g} [a_i,b_i] prod_{i<=g} [c_i,d_i]`.
    pub fn book(g: usize) -> Self {
        let alphabet = Alphabet::book(g);
        let r1 = commutator_product(&alphabet, "a", "b", 1..=2 * g);
        let r2 = commutator_product(&alphabet, "c", "d", 1..=2 * g);
        let r3 = commutator_product(&alphabet, "a", "b", 1..=g).mul(&commutator_product(&alphabet, "c", "d", 1..=g));
        Presentation { alphabet, relators: vec![r1, r2, r3] }
    }

    pub fn from_json(text: &str) -> Result<Self, PresentationLoadError> {
        let doc: PresentationDoc = serde_json::from_str(text)?;
        let alphabet = Alphabet::new(&doc.generators)?;
        let relators = doc.relators.iter().map(|r| alphabet.parse(r)).collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation::new(alphabet, relators)?)
    }

    pub fn to_json(&self) -> String {
        let doc = PresentationDoc {
            generators: self.alphabet.names().to_vec(),
            relators: self.relators.iter().map(|r| self.alphabet.format(r)).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain document")
    }

    /// Parity evidence for `w` lying in the index-two core, or `None`.
    pub fn index_two_evidence(&self, w: &Word) -> Option<ParityEvidence> {
        let rank = self.alphabet.rank();
        let target = w.parity_vector(rank);
        // Gaussian elimination over GF(2), tracking which relators combine.
        let mut basis: Vec<(Vec<bool>, Vec<bool>)> = Vec::new();
        for (k, r) in self.relators.iter().enumerate() {
            let mut v = r.parity_vector(rank);
            let mut combo = vec![false; self.relators.len()];
            combo[k] = true;
            for (bv, bc) in &basis {
                let pivot = bv.iter().position(|&b| b).expect("basis rows are nonzero");
                if v[pivot] {
                    xor_into(&mut v, bv);
                    xor_into(&mut combo, bc);
                }
            }
            if v.iter().any(|&b| b) {
                basis.push((v, combo));
            }
        }
        let mut v = target.clone();
        let mut combo = vec![false; self.relators.len()];
        for (bv, bc) in &basis {
            let pivot = bv.iter().position(|&b| b).expect("basis rows are nonzero");
            if v[pivot] {
                xor_into(&mut v, bv);
                xor_into(&mut combo, bc);
            }
        }
        if v.iter().any(|&b| b) {
            return None;
        }
        Some(ParityEvidence {
            exponent_parity: target.iter().map(|&b| b as u8).collect(),
            relator_combination: combo.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k).collect(),
        })
    }
}

fn xor_into(a: &mut [bool], b: &[bool]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= *y;
    }
}

fn commutator_product(alphabet: &Alphabet, x: &str, y: &str, range: impl Iterator<Item = usize>) -> Word {
    range.fold(Word::empty(), |acc, i| {
        let u = Word::gen(alphabet.index_of(&format!("{x}{i}")).expect("generated label"));
        let v = Word::gen(alphabet.index_of(&format!("{y}{i}")).expect("generated label"));
        acc.mul(&commutator(&u, &v))
    })
}

#[derive(Debug, Error)]
pub enum PresentationLoadError {
    #[error("invalid presentation JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Why a word dies in every map to the two-element group: its mod-2 exponent
/// vector equals the sum of the listed relators' vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityEvidence {
    pub exponent_parity: Vec<u8>,
    pub relator_combination: Vec<usize>,
}

pub fn in_index_two_core(w: &Word, p: &Presentation) -> bool {
    p.index_two_evidence(w).is_some()
}

/// Homomorphism between free groups given on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMap {
    pub source: Alphabet,
    pub target: Alphabet,
    images: Vec<Word>,
}

impl GeneratorMap {
    pub fn new(source: Alphabet, target: Alphabet, images: Vec<Word>) -> Result<Self, WordError> {
        if images.len() != source.rank() {
            return Err(WordError::BadMap(format!(
                "has {} images for {} generators",
                images.len(),
                source.rank()
            )));
        }
        for w in &images {
            target.check(w)?;
        }
        Ok(GeneratorMap { source, target, images })
    }

    /// Build from `(source label, target word text)` pairs; unlisted
    /// generators map to the same-named target generator.
    pub fn from_labels(source: Alphabet, target: Alphabet, assign: &[(&str, &str)]) -> Result<Self, WordError> {
        let mut images = Vec::with_capacity(source.rank());
        for name in source.names() {
            let w = match assign.iter().find(|(s, _)| s == name) {
                Some((_, t)) => target.parse(t)?,
                None => Word::gen(target.index_of(name)?),
            };
            images.push(w);
        }
        for (s, _) in assign {
            source.index_of(s)?;
        }
        GeneratorMap::new(source, target, images)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let images = (0..alphabet.rank()).map(Word::gen).collect();
        GeneratorMap { source: alphabet.clone(), target: alphabet, images }
    }

    pub fn image(&self, gen: usize) -> &Word {
        &self.images[gen]
    }

    pub fn apply(&self, w: &Word) -> Word {
        Word::reduce(w.letters().iter().flat_map(|l| {
            let img = &self.images[l.gen];
            if l.inv { img.inverse().letters } else { img.letters.clone() }
        }))
    }

    pub fn compose(&self, after: &GeneratorMap) -> Result<GeneratorMap, WordError> {
        if self.target != after.source {
            return Err(WordError::BadMap("composition alphabets do not match".into()));
        }
        let images = self.images.iter().map(|w| after.apply(w)).collect();
        GeneratorMap::new(self.source.clone(), after.target.clone(), images)
    }

    /// The retraction of the book group onto `F = <a1,b1,...,ag,bg>`,
    /// regarded as an endomorphism of the book alphabet. It fixes F,
    /// folds the second half of the surface onto the first, and sends every
    /// relator to the empty word.
    pub fn book_retraction(g: usize) -> Self {
        let alphabet = Alphabet::book(g);
        let a = |i: usize| format!("a{i}");
        let b = |i: usize| format!("b{i}");
        let mut assign: Vec<(String, String)> = Vec::new();
        for i in 1..=g {
            assign.push((a(g + i), b(g - i + 1)));
            assign.push((b(g + i), a(g - i + 1)));
            assign.push((format!("c{i}"), b(g - i + 1)));
            assign.push((format!("d{i}"), a(g - i + 1)));
            assign.push((format!("c{}", g + i), a(i)));
            assign.push((format!("d{}", g + i), b(i)));
        }
        let pairs: Vec<(&str, &str)> = assign.iter().map(|(s, t)| (s.as_str(), t.as_str())).collect();
        GeneratorMap::from_labels(alphabet.clone(), alphabet, &pairs).expect("labels exist")
    }

    /// `R` with its target cut down to F.
    pub fn book_to_free(g: usize) -> Self {
        let endo = Self::book_retraction(g);
        let f = Alphabet::paired(g);
        // Indices of a1..bg agree between the two alphabets.
        GeneratorMap::new(endo.source, f, endo.images).expect("image letters lie in F")
    }

    /// `a -> b^k a b^k`, `b -> a^k b a^k`, identity on the other generators.
    pub fn phi(alphabet: &Alphabet, a: &str, b: &str, k: usize) -> Result<Self, WordError> {
        let ia = alphabet.index_of(a)?;
        let ib = alphabet.index_of(b)?;
        let mut images: Vec<Word> = (0..alphabet.rank()).map(Word::gen).collect();
        let wa = Word::gen(ia);
        let wb = Word::gen(ib);
        images[ia] = wb.pow(k as i64).mul(&wa).mul(&wb.pow(k as i64));
        images[ib] = wa.pow(k as i64).mul(&wb).mul(&wa.pow(k as i64));
        GeneratorMap::new(alphabet.clone(), alphabet.clone(), images)
    }

    /// Inclusion of a sub-alphabet by label.
    pub fn inclusion(source: &Alphabet, target: &Alphabet) -> Result<Self, WordError> {
        GeneratorMap::from_labels(source.clone(), target.clone(), &[])
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}{}", self.gen + 1, if self.inv { "^-1" } else { "" })
    }
}
