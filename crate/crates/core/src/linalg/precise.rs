//! Double-double matrices for witness images whose spectra span many
//! orders of magnitude.
//!
//! Products of representation images are formed with about 32 significant
//! digits; an eigenvalue of modulus `l_k` is then resolved to relative
//! accuracy roughly `1e-32 * l_1 / l_k` instead of `1e-16 * l_1 / l_k`.

use num_complex::Complex64;

use super::dd::Dd;
use super::exterior::minors;
use super::real;
use super::{sort_eigenvalues, LinalgError, SquareMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct PreciseMatrix {
    n: usize,
    data: Vec<Dd>,
}

impl PreciseMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Dd::new(0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Dd::new(1.0);
        }
        PreciseMatrix { n, data }
    }

    pub fn from_matrix(m: &SquareMatrix) -> Self {
        PreciseMatrix { n: m.dim(), data: m.row_major().into_iter().map(Dd::new).collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Dd {
        self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[Dd] {
        &self.data
    }

    pub fn trace(&self) -> Dd {
        (0..self.n).fold(Dd::ZERO, |acc, i| acc + self.data[i * self.n + i])
    }

    pub fn to_matrix(&self) -> Result<SquareMatrix, LinalgError> {
        SquareMatrix::from_row_slice(self.n, &self.data.iter().map(|x| x.to_f64()).collect::<Vec<_>>())
    }

    pub fn mul(&self, other: &PreciseMatrix) -> PreciseMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        PreciseMatrix { n: self.n, data: real::matmul(&self.data, &other.data, self.n) }
    }

    pub fn inverse(&self) -> Result<PreciseMatrix, LinalgError> {
        let data = real::inverse(&self.data, self.n).ok_or(LinalgError::Singular)?;
        Ok(PreciseMatrix { n: self.n, data })
    }

    pub fn det(&self) -> Dd {
        real::det_in_place(&mut self.data.clone(), self.n)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.hi.abs()))
    }

    /// Divide by a power of two near the largest entry; exact. Returns the
    /// scale and the scaled matrix.
    pub fn normalized(&self) -> (f64, PreciseMatrix) {
        let m = self.max_abs();
        if m == 0.0 || !m.is_finite() {
            return (1.0, self.clone());
        }
        let scale = 2f64.powi(m.log2().round() as i32);
        let inv = Dd::new(1.0 / scale);
        (scale, PreciseMatrix { n: self.n, data: self.data.iter().map(|x| *x * inv).collect() })
    }

    pub fn exterior_power(&self, i: usize) -> PreciseMatrix {
        let data = minors(&self.data, self.n, i);
        PreciseMatrix { n: super::binomial(self.n, i) as usize, data }
    }

    /// Eigenvalues rounded to double, sorted as in [`super::Spectrum`].
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>, LinalgError> {
        let (scale, m) = self.normalized();
        let ev = real::eigenvalues(&m.data, self.n)
            .map_err(|_| LinalgError::NoConvergence { hash: m.to_matrix().map(|x| x.hash()).unwrap_or_default() })?;
        let mut out: Vec<Complex64> =
            ev.iter().map(|(re, im)| Complex64::new(re.to_f64() * scale, im.to_f64() * scale)).collect();
        sort_eigenvalues(&mut out);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_keep_small_eigenvalues() {
        // g = P diag(1e4, 1e-4) P^-1; g^2 has eigenvalues 1e8 and 1e-8.
        let p = SquareMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let pi = p.inverse().unwrap();
        let g = p.mul(&SquareMatrix::diag(&[1e4, 1e-4])).mul(&pi);
        let gp = PreciseMatrix::from_matrix(&p)
            .mul(&PreciseMatrix::from_matrix(&SquareMatrix::diag(&[1e4, 1e-4])))
            .mul(&PreciseMatrix::from_matrix(&p).inverse().unwrap());
        let ev = gp.mul(&gp).eigenvalues().unwrap();
        assert!((ev[0].re / 1e8 - 1.0).abs() < 1e-12);
        assert!((ev[1].re / 1e-8 - 1.0).abs() < 1e-12, "{ev:?}");
        // Double precision alone resolves it far less accurately.
        let ev64 = super::super::eigenvalues(&g.mul(&g)).unwrap();
        assert!((ev64[1].re / 1e-8 - 1.0).abs() > 1e-12);
    }

    #[test]
    fn determinant_and_exterior() {
        let m = SquareMatrix::from_rows(&[vec![2.0, 1.0, 0.0], vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0]]).unwrap();
        let p = PreciseMatrix::from_matrix(&m);
        assert!((p.det().to_f64() - m.det()).abs() < 1e-14);
        let w = p.exterior_power(2).to_matrix().unwrap();
        assert!(w.approx_eq(&super::super::exterior_power(&m, 2).unwrap(), 1e-14));
    }
}
