//! Exterior powers in the lexicographic basis of i-subsets.

use std::collections::{BinaryHeap, HashSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::precise::PreciseMatrix;
use super::real::{det_in_place, Real};
use super::{classify_polar, eigenvalues, to_polar, LinalgError, ProximalityClass, SquareMatrix, MAX_DIM};

/// Exterior powers up to this dimension are formed explicitly.
pub const DENSE_EXTERIOR_LIMIT: usize = 1000;
/// Below this dimension the eigenvalues are found in double-double.
const PRECISE_EIGEN_LIMIT: usize = 64;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut j = k;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if cur[j] < n - k + j {
                break;
            }
        }
        cur[j] += 1;
        for t in j + 1..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

/// Row-major `C(n,i) x C(n,i)` matrix of `i x i` minors.
pub fn minors<T: Real>(a: &[T], n: usize, i: usize) -> Vec<T> {
    let sets = subsets(n, i);
    let m = sets.len();
    let mut out = vec![T::zero(); m * m];
    let mut buf = vec![T::zero(); i * i];
    for (r, rows) in sets.iter().enumerate() {
        for (c, cols) in sets.iter().enumerate() {
            for (p, &ri) in rows.iter().enumerate() {
                for (q, &cj) in cols.iter().enumerate() {
                    buf[p * i + q] = a[ri * n + cj];
                }
            }
            out[r * m + c] = det_in_place(&mut buf, i);
        }
    }
    out
}

pub fn exterior_power(m: &SquareMatrix, i: usize) -> Result<SquareMatrix, LinalgError> {
    let n = m.dim();
    if i == 0 || i > n {
        return Err(LinalgError::IndexOutOfRange { i, dim: n });
    }
    let dim = binomial(n, i);
    if dim > MAX_DIM as u128 {
        return Err(LinalgError::TooLarge(dim.min(usize::MAX as u128) as usize));
    }
    SquareMatrix::from_row_slice(dim as usize, &minors(&m.row_major(), n, i))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExteriorRoute {
    /// The matrix of minors was formed and its spectrum computed.
    Dense,
    /// The leading spectrum was assembled from i-subset products of the
    /// base eigenvalues; used when the exterior power is too large to form.
    Spectral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExteriorClass {
    pub index: usize,
    pub route: ExteriorRoute,
    pub class: ProximalityClass,
    /// Leading log10 moduli of the exterior power, at most eight.
    pub log10_top_moduli: Vec<f64>,
}

/// Classify `wedge^i` of a double-double matrix.
pub fn classify_exterior(m: &PreciseMatrix, i: usize, tol: f64) -> Result<ExteriorClass, LinalgError> {
    let n = m.dim();
    if i == 0 || i > n {
        return Err(LinalgError::IndexOutOfRange { i, dim: n });
    }
    let dim = binomial(n, i);
    let (scale, normalized) = m.normalized();
    let polar: Vec<(f64, Complex64)> = if dim <= DENSE_EXTERIOR_LIMIT as u128 {
        let w = normalized.exterior_power(i);
        let ev = if (dim as usize) <= PRECISE_EIGEN_LIMIT {
            w.eigenvalues()?
        } else {
            eigenvalues(&w.to_matrix()?)?
        };
        to_polar(&ev, i as f64 * scale.ln())
    } else {
        let base = if n <= PRECISE_EIGEN_LIMIT { normalized.eigenvalues()? } else { eigenvalues(&normalized.to_matrix()?)? };
        let base = to_polar(&base, scale.ln());
        let floor = (1.0 - tol).ln();
        top_subset_products(&base, i, 9, floor)
    };
    let route = if dim <= DENSE_EXTERIOR_LIMIT as u128 { ExteriorRoute::Dense } else { ExteriorRoute::Spectral };
    let mut class = classify_polar(&polar, tol);
    class.dim = dim.min(usize::MAX as u128) as usize;
    let mut logs: Vec<f64> = polar.iter().map(|p| p.0 / std::f64::consts::LN_10).collect();
    logs.sort_by(|a, b| b.total_cmp(a));
    logs.truncate(8);
    Ok(ExteriorClass { index: i, route, class, log10_top_moduli: logs })
}

/// Leading i-subset products of eigenvalues in polar form. Returns at least
/// `min_count` products (when that many exist) and every product within
/// the relative `floor` (a log ratio) of the largest.
pub fn top_subset_products(base: &[(f64, Complex64)], i: usize, min_count: usize, floor: f64) -> Vec<(f64, Complex64)> {
    let mut ev = base.to_vec();
    ev.sort_by(|a, b| b.0.total_cmp(&a.0));
    let n = ev.len();
    if i == 0 || i > n {
        return Vec::new();
    }
    #[derive(PartialEq)]
    struct Node(f64, Vec<usize>);
    impl Eq for Node {}
    impl PartialOrd for Node {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Node {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&o.0).then_with(|| o.1.cmp(&self.1))
        }
    }
    let sum = |s: &[usize]| s.iter().map(|&k| ev[k].0).sum::<f64>();
    let start: Vec<usize> = (0..i).collect();
    let top = sum(&start);
    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    seen.insert(start.clone());
    heap.push(Node(top, start));
    let mut out = Vec::new();
    while let Some(Node(s, set)) = heap.pop() {
        if out.len() >= min_count && s - top < floor {
            break;
        }
        let phase = set.iter().fold(Complex64::new(1.0, 0.0), |acc, &k| acc * ev[k].1);
        out.push((s, phase / phase.norm()));
        for j in 0..i {
            let limit = if j + 1 < i { set[j + 1] } else { n };
            if set[j] + 1 < limit {
                let mut next = set.clone();
                next[j] += 1;
                if seen.insert(next.clone()) {
                    heap.push(Node(sum(&next), next));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(12, 6).len() as u128, binomial(12, 6));
    }

    #[test]
    fn exterior_examples() {
        let m = SquareMatrix::from_rows(&[vec![1.0, 2.0, 0.5], vec![0.0, 3.0, 1.0], vec![4.0, 1.0, 2.0]]).unwrap();
        assert!(exterior_power(&m, 1).unwrap().approx_eq(&m, 0.0));
        let top = exterior_power(&m, 3).unwrap();
        assert_eq!(top.dim(), 1);
        assert!((top.get(0, 0) - m.det()).abs() < 1e-12);
        let d = exterior_power(&SquareMatrix::diag(&[3.0, 2.0, 1.0]), 2).unwrap();
        assert!(d.approx_eq(&SquareMatrix::diag(&[6.0, 3.0, 2.0]), 1e-14));
        assert!(matches!(exterior_power(&m, 4), Err(LinalgError::IndexOutOfRange { .. })));
        assert!(matches!(exterior_power(&m, 0), Err(LinalgError::IndexOutOfRange { .. })));
    }

    #[test]
    fn spectral_route_matches_dense_route() {
        let m = SquareMatrix::from_rows(&[
            vec![3.0, 1.0, 0.0, 0.2],
            vec![0.5, -2.0, 1.0, 0.0],
            vec![0.0, 0.3, 1.5, 0.4],
            vec![0.1, 0.0, 0.2, 0.7],
        ])
        .unwrap();
        let p = PreciseMatrix::from_matrix(&m);
        let ev = to_polar(&p.eigenvalues().unwrap(), 0.0);
        for i in 1..=4 {
            let dense = classify_exterior(&p, i, 1e-6).unwrap();
            let spectral = top_subset_products(&ev, i, 9, (1.0 - 1e-6f64).ln());
            let mut logs: Vec<f64> = spectral.iter().map(|q| q.0 / std::f64::consts::LN_10).collect();
            logs.truncate(8);
            for (a, b) in dense.log10_top_moduli.iter().zip(&logs) {
                assert!((a - b).abs() < 1e-10, "i={i}");
            }
        }
    }

    #[test]
    fn large_powers_take_the_spectral_route() {
        let d: Vec<f64> = (0..27).map(|k| 2f64.powi(13 - k)).collect();
        let p = PreciseMatrix::from_matrix(&SquareMatrix::diag(&d));
        let c = classify_exterior(&p, 10, 1e-6).unwrap();
        assert_eq!(c.route, ExteriorRoute::Spectral);
        assert_eq!(c.class.dim as u128, binomial(27, 10));
        let want: f64 = (0..10).map(|k| (13 - k) as f64).sum::<f64>() * 2f64.log10();
        assert!((c.log10_top_moduli[0] - want).abs() < 1e-9);
        assert!(c.class.is_proximal(1));
    }
}
