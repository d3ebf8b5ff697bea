//! Positive characters and character-scaled block sums.
//!
//! A scaled block is a representation multiplied by a product of rational
//! powers of characters. The block sum is unimodular exactly when, for each
//! character, the dimension-weighted exponents add up to zero; that sum is
//! checked in rational arithmetic before any matrix is formed.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{Provenance, RepError, RepSpec};
use crate::linalg::SquareMatrix;
use crate::words::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Character {
    pub name: String,
    pub alphabet: Alphabet,
    pub values: Vec<f64>,
}

impl Character {
    pub fn new(name: &str, alphabet: Alphabet, values: Vec<f64>) -> Result<Self, RepError> {
        if values.len() != alphabet.rank() {
            return Err(RepError::Construction(format!("character `{name}` needs {} values", alphabet.rank())));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(RepError::Construction(format!("character `{name}` must be positive")));
        }
        Ok(Character { name: name.to_string(), alphabet, values })
    }

    /// Value `v` on the named generators, 1 elsewhere.
    pub fn on(name: &str, alphabet: &Alphabet, assign: &[(&str, f64)]) -> Result<Self, RepError> {
        let mut values = vec![1.0; alphabet.rank()];
        for (g, v) in assign {
            values[alphabet.index_of(g)?] = *v;
        }
        Self::new(name, alphabet.clone(), values)
    }

    pub fn eval(&self, w: &Word) -> f64 {
        // Sum integer exponents per generator first so that exact values
        // (powers of two) stay exact.
        let mut exps = vec![0i64; self.values.len()];
        for l in w.letters() {
            exps[l.gen] += if l.inv { -1 } else { 1 };
        }
        exps.iter().zip(&self.values).map(|(&e, &v)| power(v, Ratio::from_integer(e))).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1.0)
    }
}

/// `v^r`, exact when `v` is a power of two and `r log2 v` is an integer.
pub fn power(v: f64, r: Ratio<i64>) -> f64 {
    if *r.numer() == 0 {
        return 1.0;
    }
    let (m, e) = frexp(v);
    if m == 0.5 {
        let k = Ratio::from_integer(e as i64 - 1) * r;
        if k.is_integer() && k.numer().abs() < 1000 {
            return 2f64.powi(*k.numer() as i32);
        }
    }
    if r.is_integer() {
        return v.powi(*r.numer() as i32);
    }
    v.powf(*r.numer() as f64 / *r.denom() as f64)
}

fn frexp(v: f64) -> (f64, i32) {
    if v == 0.0 || !v.is_finite() {
        return (v, 0);
    }
    let e = v.abs().log2().floor() as i32 + 1;
    let m = v / 2f64.powi(e);
    // Guard against log2 rounding at exact powers of two.
    if m.abs() >= 1.0 {
        (m / 2.0, e + 1)
    } else if m.abs() < 0.5 {
        (m * 2.0, e - 1)
    } else {
        (m, e)
    }
}

#[derive(Debug, Clone)]
pub struct ScaledBlock {
    pub rep: RepSpec,
    /// One exponent per character of the block sum.
    pub exponents: Vec<Ratio<i64>>,
}

impl ScaledBlock {
    pub fn new(rep: RepSpec, exponents: Vec<Ratio<i64>>) -> Self {
        ScaledBlock { rep, exponents }
    }

    /// A one-dimensional block `prod eps_c^{e_c}`.
    pub fn scalar(alphabet: &Alphabet, exponents: Vec<Ratio<i64>>) -> Self {
        ScaledBlock { rep: RepSpec::trivial(alphabet.clone(), 1), exponents }
    }
}

/// Block-diagonal representation `diag(prod_c eps_c^{e_bc} r_b)`,
/// after checking `sum_b dim_b e_bc = 0` for every character `c`.
pub fn character_block_sum(blocks: &[ScaledBlock], characters: &[Character]) -> Result<RepSpec, RepError> {
    let first = blocks.first().ok_or_else(|| RepError::Construction("empty block sum".into()))?;
    let alphabet = first.rep.alphabet().clone();
    for b in blocks {
        if b.rep.alphabet() != &alphabet {
            return Err(RepError::AlphabetMismatch("scaled blocks over different alphabets".into()));
        }
        if b.exponents.len() != characters.len() {
            return Err(RepError::Bookkeeping("every block needs one exponent per character".into()));
        }
    }
    for (c, ch) in characters.iter().enumerate() {
        if ch.alphabet != alphabet {
            return Err(RepError::AlphabetMismatch(format!("character `{}` lives on another alphabet", ch.name)));
        }
        let total: Ratio<i64> = blocks.iter().map(|b| b.exponents[c] * Ratio::from_integer(b.rep.dim() as i64)).sum();
        if total != Ratio::from_integer(0) {
            return Err(RepError::Bookkeeping(format!("character `{}` contributes det^{}", ch.name, total)));
        }
    }
    let mut images = Vec::new();
    let mut inverses = Vec::new();
    for g in 0..alphabet.rank() {
        let scale = |b: &ScaledBlock, sign: i64| -> f64 {
            characters
                .iter()
                .zip(&b.exponents)
                .map(|(ch, &e)| power(ch.values[g], e * Ratio::from_integer(sign)))
                .product()
        };
        let ims: Vec<SquareMatrix> = blocks.iter().map(|b| b.rep.image(g).scale(scale(b, 1))).collect();
        let invs: Vec<SquareMatrix> = blocks.iter().map(|b| b.rep.inverse_image(g).scale(scale(b, -1))).collect();
        images.push(SquareMatrix::block_diag(&ims.iter().collect::<Vec<_>>()));
        inverses.push(SquareMatrix::block_diag(&invs.iter().collect::<Vec<_>>()));
    }
    RepSpec::with_inverses(alphabet, images, inverses, Provenance::named("character_block_sum"))
}

/// `diag(eps^e r, eps^{-dim(r) e})`.
pub fn scale_by_character(r: &RepSpec, eps: &Character, exponent: Ratio<i64>) -> Result<RepSpec, RepError> {
    let tail = -exponent * Ratio::from_integer(r.dim() as i64);
    character_block_sum(
        &[ScaledBlock::new(r.clone(), vec![exponent]), ScaledBlock::scalar(r.alphabet(), vec![tail])],
        std::slice::from_ref(eps),
    )
}
