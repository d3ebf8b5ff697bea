//! Spectrum algebra used as a test oracle: block sums are unions, tensor
//! products are pairwise products and exterior powers are subset products.

use num_complex::Complex64;

use super::exterior::subsets;
use super::sort_eigenvalues;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumExpr {
    Literal(Vec<Complex64>),
    Union(Vec<SpectrumExpr>),
    Tensor(Box<SpectrumExpr>, Box<SpectrumExpr>),
    Exterior(Box<SpectrumExpr>, usize),
}

impl SpectrumExpr {
    pub fn real(values: &[f64]) -> Self {
        SpectrumExpr::Literal(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }
    pub fn tensor(a: SpectrumExpr, b: SpectrumExpr) -> Self {
        SpectrumExpr::Tensor(Box::new(a), Box::new(b))
    }
    pub fn exterior(a: SpectrumExpr, i: usize) -> Self {
        SpectrumExpr::Exterior(Box::new(a), i)
    }
}

/// The multiset denoted by `expr`, sorted like a numerical spectrum.
pub fn predicted_spectrum(expr: &SpectrumExpr) -> Vec<Complex64> {
    let mut out = eval(expr);
    sort_eigenvalues(&mut out);
    out
}

fn eval(expr: &SpectrumExpr) -> Vec<Complex64> {
    match expr {
        SpectrumExpr::Literal(v) => v.clone(),
        SpectrumExpr::Union(parts) => parts.iter().flat_map(eval).collect(),
        SpectrumExpr::Tensor(a, b) => {
            let (a, b) = (eval(a), eval(b));
            a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
        }
        SpectrumExpr::Exterior(a, i) => {
            let a = eval(a);
            subsets(a.len(), *i)
                .iter()
                .map(|s| s.iter().fold(Complex64::new(1.0, 0.0), |acc, &k| acc * a[k]))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moduli(v: &[Complex64]) -> Vec<f64> {
        v.iter().map(|z| z.norm()).collect()
    }

    #[test]
    fn tensor_and_exterior() {
        let t = predicted_spectrum(&SpectrumExpr::tensor(SpectrumExpr::real(&[2.0, 5.0]), SpectrumExpr::real(&[3.0])));
        assert_eq!(moduli(&t), vec![15.0, 6.0]);
        let e = predicted_spectrum(&SpectrumExpr::exterior(SpectrumExpr::real(&[3.0, 2.0, 1.0]), 2));
        assert_eq!(moduli(&e), vec![6.0, 3.0, 2.0]);
    }

    #[test]
    fn tensor_pattern_with_negative_base() {
        let (s, n) = (-3.0f64, 5usize);
        let mut left = vec![s * s];
        left.extend(std::iter::repeat(1.0).take(n - 2));
        left.push(1.0 / (s * s));
        let g = predicted_spectrum(&SpectrumExpr::tensor(SpectrumExpr::real(&left), SpectrumExpr::real(&[s, 1.0, 1.0 / s])));
        let m = moduli(&g);
        let want = [27.0, 9.0, 3.0, 3.0, 3.0, 3.0, 1.0, 1.0, 1.0];
        for (a, b) in m.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(g[0].re < 0.0);
    }
}
