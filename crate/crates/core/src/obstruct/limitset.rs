//! Sampling the proximal limit set of a tensor product.
//!
//! The attracting line of `g ⊗ h` is the tensor of the attracting lines of
//! `g` and `h`, so the representative vector reshaped to a `d x k` matrix
//! has rank one. The ratio `σ2 / σ1` of that matrix is the rank-1 defect.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ObstructError;
use crate::linalg::dd::Dd;
use crate::linalg::precise::PreciseMatrix;
use crate::linalg::{classify_eigenvalues, DEFAULT_TOL};
use crate::reps::RepSpec;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitPoint {
    pub word: String,
    pub coords: Vec<f64>,
    pub rank_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSetReport {
    pub factors: (usize, usize),
    pub seed: u64,
    pub requested: usize,
    pub attempts: usize,
    pub points: Vec<LimitPoint>,
    pub max_rank_defect: f64,
    /// Mean over points of the largest cosine between the left factor line
    /// and the left factor lines of the other points; a clustering
    /// statistic only.
    pub left_factor_spread: f64,
}

impl LimitSetReport {
    pub fn to_csv(&self) -> String {
        let n = self.factors.0 * self.factors.1;
        let mut out = String::from("word");
        for k in 0..n {
            out.push_str(&format!(",x{k}"));
        }
        out.push_str(",rank_defect\n");
        for p in &self.points {
            out.push_str(&p.word);
            for c in &p.coords {
                out.push_str(&format!(",{c:e}"));
            }
            out.push_str(&format!(",{:e}\n", p.rank_defect));
        }
        out
    }
}

/// A reduced word of random length in `3..=8`.
pub fn random_word(rng: &mut ChaCha8Rng, rank: usize) -> Word {
    let len = rng.gen_range(3..=8);
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::from_rank(rng.gen_range(0..2 * rank));
        if letters.last().map_or(true, |p| p.inverse() != l) {
            letters.push(l);
        }
    }
    Word::reduce(letters)
}

fn normalize(m: &PreciseMatrix) -> PreciseMatrix {
    m.normalized().1
}

/// Attracting vector of a proximal matrix by repeated squaring.
pub fn attracting_vector(m: &PreciseMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut p = normalize(m);
    let mut prev: Option<Vec<f64>> = None;
    for _ in 0..64 {
        p = normalize(&p.mul(&p));
        let col = (0..n)
            .max_by(|&a, &b| col_norm(&p, a).total_cmp(&col_norm(&p, b)))
            .expect("nonempty matrix");
        let norm = col_norm(&p, col);
        let mut v: Vec<f64> = (0..n).map(|r| (p.get(r, col) / Dd::new(norm)).to_f64()).collect();
        let pivot = v.iter().fold(0.0f64, |a, x| if x.abs() > a.abs() { *x } else { a });
        if pivot < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        if let Some(q) = &prev {
            if q.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-15) {
                return v;
            }
        }
        prev = Some(v);
    }
    prev.expect("at least one squaring")
}

fn col_norm(p: &PreciseMatrix, c: usize) -> f64 {
    (0..p.dim()).map(|r| p.get(r, c).to_f64().powi(2)).sum::<f64>().sqrt()
}

/// `σ2 / σ1` of `v` reshaped row-major as a `d x k` matrix.
pub fn rank_one_defect(v: &[f64], d: usize, k: usize) -> f64 {
    let m = DMatrix::from_row_slice(d, k, v);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    if sv.len() < 2 || sv[0] == 0.0 { 0.0 } else { sv[1] / sv[0] }
}

/// Left singular vector of the reshaped representative: the `d`-factor line.
fn left_factor(v: &[f64], d: usize, k: usize) -> Vec<f64> {
    let m = DMatrix::from_row_slice(d, k, v);
    let svd = m.svd(true, false);
    let u = svd.u.expect("requested");
    let top = (0..svd.singular_values.len()).max_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b])).unwrap();
    u.column(top).iter().copied().collect()
}

pub fn sample_limit_set(r: &RepSpec, samples: usize, seed: u64) -> Result<LimitSetReport, ObstructError> {
    let (d, k) = r
        .tensor_factors
        .ok_or_else(|| ObstructError::Input("limit-set sampling needs a tensor-product representation".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = r.alphabet().rank();
    let mut points = Vec::new();
    let mut lefts = Vec::new();
    let mut attempts = 0;
    while points.len() < samples && attempts < 20 * samples {
        attempts += 1;
        let w = random_word(&mut rng, rank);
        let m = r.eval_precise(&w);
        let ev = m.eigenvalues()?;
        if !classify_eigenvalues(&ev, DEFAULT_TOL).is_proximal(1) {
            continue;
        }
        let v = attracting_vector(&m);
        let defect = rank_one_defect(&v, d, k);
        lefts.push(left_factor(&v, d, k));
        points.push(LimitPoint { word: r.alphabet().format(&w), coords: v, rank_defect: defect });
    }
    if points.len() < samples {
        return Err(ObstructError::Sampling { found: points.len(), requested: samples });
    }
    let max_rank_defect = points.iter().map(|p| p.rank_defect).fold(0.0, f64::max);
    let left_factor_spread = if lefts.len() > 1 {
        lefts
            .iter()
            .enumerate()
            .map(|(i, a)| {
                lefts
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>().abs())
                    .fold(0.0, f64::max)
            })
            .sum::<f64>()
            / lefts.len() as f64
    } else {
        1.0
    };
    Ok(LimitSetReport { factors: (d, k), seed, requested: samples, attempts, points, max_rank_defect, left_factor_spread })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kronecker, SquareMatrix};

    #[test]
    fn pure_tensor_has_rank_one_attracting_vector() {
        let g = SquareMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let h = SquareMatrix::from_rows(&[vec![3.0, 1.0, 0.0], vec![1.0, 1.0, 0.5], vec![0.0, 0.5, 1.0]]).unwrap();
        let v = attracting_vector(&PreciseMatrix::from_matrix(&kronecker(&g, &h).unwrap()));
        assert!(rank_one_defect(&v, 2, 3) < 1e-8);
        let scaled: Vec<f64> = v.iter().map(|x| -7.5 * x).collect();
        assert!((rank_one_defect(&scaled, 2, 3) - rank_one_defect(&v, 2, 3)).abs() < 1e-15);
        assert!(rank_one_defect(&[1.0, 0.0, 0.0, 1.0], 2, 2) == 1.0);
    }
}
