//! Dense real matrices, spectra, Kronecker and exterior powers, and the
//! proximality classifiers.

pub mod dd;
pub mod exterior;
pub mod exact;
pub mod expr;
pub mod mp;
pub mod precise;
pub mod real;

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use exterior::{binomial, classify_exterior, exterior_power, subsets, ExteriorRoute};
pub use mp::MpMatrix;
pub use precise::PreciseMatrix;

/// Largest dimension for which dense kernels are run.
pub const MAX_DIM: usize = 2000;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not square or has ragged rows")]
    NotSquare,
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("dimension {0} exceeds the dense limit {MAX_DIM}")]
    TooLarge(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("exterior index {i} out of range for dimension {dim}")]
    IndexOutOfRange { i: usize, dim: usize },
    #[error("determinant {det} is not 1 within {tol}")]
    NotUnimodular { det: f64, tol: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("eigen-solver did not converge on matrix {hash}")]
    NoConvergence { hash: String },
}

/// Dense real square matrix in double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix(pub(crate) DMatrix<f64>);

impl SquareMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LinalgError::NotSquare);
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(SquareMatrix(DMatrix::from_fn(n, n, |i, j| rows[i][j])))
    }

    pub fn from_row_slice(n: usize, data: &[f64]) -> Result<Self, LinalgError> {
        if data.len() != n * n {
            return Err(LinalgError::NotSquare);
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(SquareMatrix(DMatrix::from_row_slice(n, n, data)))
    }

    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare);
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(SquareMatrix(m))
    }

    pub fn identity(n: usize) -> Self {
        SquareMatrix(DMatrix::identity(n, n))
    }

    pub fn diag(d: &[f64]) -> Self {
        SquareMatrix(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(d)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| self.0.row(i).iter().copied().collect()).collect()
    }

    pub fn row_major(&self) -> Vec<f64> {
        let n = self.dim();
        let mut v = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                v.push(self.0[(i, j)]);
            }
        }
        v
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        SquareMatrix(&self.0 * &other.0)
    }

    pub fn scale(&self, c: f64) -> SquareMatrix {
        SquareMatrix(&self.0 * c)
    }

    pub fn transpose(&self) -> SquareMatrix {
        SquareMatrix(self.0.transpose())
    }

    pub fn det(&self) -> f64 {
        real::det_in_place(&mut self.row_major(), self.dim())
    }

    pub fn inverse(&self) -> Result<SquareMatrix, LinalgError> {
        let inv = real::inverse(&self.row_major(), self.dim()).ok_or(LinalgError::Singular)?;
        SquareMatrix::from_row_slice(self.dim(), &inv)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }

    /// `|det - 1| <= 1e-8 * dim`, with the determinant of the stored
    /// entries computed exactly.
    pub fn check_unimodular(&self) -> Result<(), LinalgError> {
        let det = exact::exact_det(self);
        let tol = 1e-8 * self.dim() as f64;
        if (det - 1.0).abs() <= tol {
            Ok(())
        } else {
            Err(LinalgError::NotUnimodular { det, tol })
        }
    }

    pub fn block_diag(blocks: &[&SquareMatrix]) -> SquareMatrix {
        let n: usize = blocks.iter().map(|b| b.dim()).sum();
        let mut m = DMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            let k = b.dim();
            m.view_mut((off, off), (k, k)).copy_from(&b.0);
            off += k;
        }
        SquareMatrix(m)
    }

    /// Content hash of the entries, used to identify matrices in errors.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.dim() as u64).to_le_bytes());
        for x in self.row_major() {
            h.update(x.to_bits().to_le_bytes());
        }
        let digest = h.finalize();
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn approx_eq(&self, other: &SquareMatrix, tol: f64) -> bool {
        self.dim() == other.dim() && (&self.0 - &other.0).iter().all(|x| x.abs() <= tol)
    }
}

impl Serialize for SquareMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquareMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        SquareMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

pub fn kronecker(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix, LinalgError> {
    let n = a.dim() * b.dim();
    if n > MAX_DIM {
        return Err(LinalgError::TooLarge(n));
    }
    Ok(SquareMatrix(a.0.kronecker(&b.0)))
}

/// Eigenvalues sorted by modulus desc, then real part desc, then imaginary
/// part desc; singular values sorted desc.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub moduli: Vec<f64>,
    pub singular_values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SpectrumDoc {
    eigenvalues: Vec<[f64; 2]>,
    moduli: Vec<f64>,
    singular_values: Vec<f64>,
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpectrumDoc {
            eigenvalues: self.eigenvalues.iter().map(|z| [z.re, z.im]).collect(),
            moduli: self.moduli.clone(),
            singular_values: self.singular_values.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Spectrum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = SpectrumDoc::deserialize(d)?;
        Ok(Spectrum {
            eigenvalues: doc.eigenvalues.iter().map(|z| Complex64::new(z[0], z[1])).collect(),
            moduli: doc.moduli,
            singular_values: doc.singular_values,
        })
    }
}

pub fn eigen_order(a: &Complex64, b: &Complex64) -> Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then(b.re.total_cmp(&a.re))
        .then(b.im.total_cmp(&a.im))
}

pub fn sort_eigenvalues(ev: &mut [Complex64]) {
    ev.sort_by(eigen_order);
}

pub fn eigenvalues(m: &SquareMatrix) -> Result<Vec<Complex64>, LinalgError> {
    let n = m.dim();
    if n > MAX_DIM {
        return Err(LinalgError::TooLarge(n));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = nalgebra::linalg::Schur::try_new(m.0.clone(), f64::EPSILON, 100 * n.max(10))
        .ok_or_else(|| LinalgError::NoConvergence { hash: m.hash() })?;
    let mut ev: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinalgError::NoConvergence { hash: m.hash() });
    }
    sort_eigenvalues(&mut ev);
    Ok(ev)
}

pub fn singular_values(m: &SquareMatrix) -> Result<Vec<f64>, LinalgError> {
    let n = m.dim();
    if n > MAX_DIM {
        return Err(LinalgError::TooLarge(n));
    }
    let svd = m
        .0
        .clone()
        .try_svd(false, false, f64::EPSILON, 200 * n.max(10))
        .ok_or_else(|| LinalgError::NoConvergence { hash: m.hash() })?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

pub fn spectrum(m: &SquareMatrix) -> Result<Spectrum, LinalgError> {
    let eigenvalues = eigenvalues(m)?;
    let moduli = eigenvalues.iter().map(|z| z.norm()).collect();
    let singular_values = singular_values(m)?;
    Ok(Spectrum { eigenvalues, moduli, singular_values })
}

/// Three-valued answer for classifications that can be numerically
/// undecidable at the working tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    Yes,
    No,
    Indeterminate,
}

impl Truth {
    pub fn is_yes(self) -> bool {
        self == Truth::Yes
    }
    pub fn is_no(self) -> bool {
        self == Truth::No
    }
}

/// Imaginary parts between `tol * l1` and `GRAY * tol * l1` are neither
/// clearly real nor clearly non-real.
const GRAY: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Realness {
    Real,
    NonReal,
    Ambiguous,
}

/// An eigenvalue whose modulus lies within relative `tol` of the top
/// modulus, stored relative to it: `value = top_modulus * rel`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterMember {
    pub rel: [f64; 2],
    pub realness: Realness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProximalityClass {
    pub tol: f64,
    pub dim: usize,
    /// Entry `k` answers P_{k+1}-proximality.
    pub proximal: Vec<bool>,
    pub semiproximal: Truth,
    pub positively_semiproximal: Truth,
    /// Set when P_1-proximal.
    pub lambda1: Option<[f64; 2]>,
    pub log10_top_modulus: f64,
    pub top_cluster: Vec<ClusterMember>,
    pub indeterminate: bool,
}

impl ProximalityClass {
    pub fn is_proximal(&self, i: usize) -> bool {
        i >= 1 && i <= self.proximal.len() && self.proximal[i - 1]
    }

    /// Multiplicity of the top modulus, counted within tolerance.
    pub fn top_multiplicity(&self) -> usize {
        self.top_cluster.len()
    }

    /// Top cluster is a single non-real conjugate pair.
    pub fn leading_nonreal_pair(&self) -> bool {
        self.top_cluster.len() == 2
            && self.top_cluster.iter().all(|c| c.realness == Realness::NonReal)
            && (self.top_cluster[0].rel[1] + self.top_cluster[1].rel[1]).abs() <= 1e-6
    }
}

/// Classify from eigenvalues given as `(log |z|, z / |z|)`, which keeps
/// exterior powers of wide-range matrices representable.
pub fn classify_polar(polar: &[(f64, Complex64)], tol: f64) -> ProximalityClass {
    let mut ev = polar.to_vec();
    ev.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.re.total_cmp(&a.1.re)).then(b.1.im.total_cmp(&a.1.im)));
    let dim = ev.len();
    if dim == 0 {
        return ProximalityClass {
            tol,
            dim,
            proximal: vec![],
            semiproximal: Truth::No,
            positively_semiproximal: Truth::No,
            lambda1: None,
            log10_top_modulus: f64::NEG_INFINITY,
            top_cluster: vec![],
            indeterminate: false,
        };
    }
    let log_gap = (1.0 + tol).ln();
    let proximal = (0..dim.saturating_sub(1)).map(|k| ev[k].0 - ev[k + 1].0 > log_gap).collect::<Vec<bool>>();
    let top = ev[0].0;
    let floor = (1.0 - tol).ln();
    let mut cluster = Vec::new();
    for (lm, phase) in &ev {
        let rel_mod = (lm - top).exp();
        if lm - top < floor {
            break;
        }
        let z = phase * rel_mod;
        let realness = if z.im.abs() <= tol {
            Realness::Real
        } else if z.im.abs() > GRAY * tol {
            Realness::NonReal
        } else {
            Realness::Ambiguous
        };
        cluster.push(ClusterMember { rel: [z.re, z.im], realness });
    }
    let any_real = cluster.iter().any(|c| c.realness == Realness::Real);
    let any_ambiguous = cluster.iter().any(|c| c.realness == Realness::Ambiguous);
    let semiproximal = if any_real {
        Truth::Yes
    } else if any_ambiguous {
        Truth::Indeterminate
    } else {
        Truth::No
    };
    let positively_semiproximal = if cluster.iter().any(|c| c.realness == Realness::Real && c.rel[0] > 0.0) {
        Truth::Yes
    } else if cluster.iter().any(|c| c.realness == Realness::Ambiguous && c.rel[0] > 0.0) {
        Truth::Indeterminate
    } else {
        Truth::No
    };
    let lambda1 = if proximal.first().copied().unwrap_or(true) {
        let m = top.exp();
        Some([ev[0].1.re * m, ev[0].1.im * m])
    } else {
        None
    };
    ProximalityClass {
        tol,
        dim,
        proximal,
        semiproximal,
        positively_semiproximal,
        lambda1,
        log10_top_modulus: top / std::f64::consts::LN_10,
        top_cluster: cluster,
        indeterminate: semiproximal == Truth::Indeterminate || positively_semiproximal == Truth::Indeterminate,
    }
}

pub fn to_polar(ev: &[Complex64], log_scale: f64) -> Vec<(f64, Complex64)> {
    ev.iter()
        .map(|z| {
            let r = z.norm();
            let phase = if r > 0.0 { z / r } else { Complex64::new(1.0, 0.0) };
            (r.ln() + log_scale, phase)
        })
        .collect()
}

pub fn classify_eigenvalues(ev: &[Complex64], tol: f64) -> ProximalityClass {
    classify_polar(&to_polar(ev, 0.0), tol)
}

pub fn classify(m: &SquareMatrix, tol: f64) -> Result<ProximalityClass, LinalgError> {
    let scale = m.max_abs();
    if scale == 0.0 {
        return Ok(classify_eigenvalues(&vec![Complex64::new(0.0, 0.0); m.dim()], tol));
    }
    let ev = eigenvalues(&m.scale(1.0 / scale))?;
    Ok(classify_polar(&to_polar(&ev, scale.ln()), tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn diagonal_spectrum() {
        let s = spectrum(&SquareMatrix::diag(&[4.0, 1.0, 1.0, 0.25])).unwrap();
        for (got, want) in s.moduli.iter().zip([4.0, 1.0, 1.0, 0.25]) {
            assert!(close(*got, want, 1e-12));
        }
    }

    #[test]
    fn rotation_spectrum() {
        let t: f64 = 0.7;
        let m = SquareMatrix::from_rows(&[vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]).unwrap();
        let s = spectrum(&m).unwrap();
        assert!(close(s.eigenvalues[0].im, t.sin(), 1e-12));
        assert!(close(s.eigenvalues[1].im, -t.sin(), 1e-12));
        assert!(s.singular_values.iter().all(|x| close(*x, 1.0, 1e-12)));
    }

    #[test]
    fn tensor_top_eigenvalue() {
        let a = SquareMatrix::diag(&[9.0, 1.0, 1.0, 1.0 / 9.0]);
        let b = SquareMatrix::diag(&[-3.0, 1.0, -1.0 / 3.0]);
        let s = spectrum(&kronecker(&a, &b).unwrap()).unwrap();
        assert!(close(s.moduli[0], 27.0, 1e-12));
        assert!(close(s.eigenvalues[0].re, -27.0, 1e-12));
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(&SquareMatrix::identity(2), &SquareMatrix::identity(3)).unwrap(), SquareMatrix::identity(6));
        let k = kronecker(&SquareMatrix::diag(&[2.0, 0.5]), &SquareMatrix::diag(&[3.0, 1.0, 1.0 / 3.0])).unwrap();
        let d: Vec<f64> = (0..6).map(|i| k.get(i, i)).collect();
        for (got, want) in d.iter().zip([6.0, 2.0, 2.0 / 3.0, 1.5, 0.5, 1.0 / 6.0]) {
            assert!(close(*got, want, 1e-14));
        }
        let big = SquareMatrix::identity(50);
        assert_eq!(kronecker(&big, &big), Err(LinalgError::TooLarge(2500)));
    }

    #[test]
    fn classify_examples() {
        let id = classify(&SquareMatrix::identity(4), DEFAULT_TOL).unwrap();
        assert_eq!(id.positively_semiproximal, Truth::Yes);
        assert!(id.proximal.iter().all(|p| !p));
        let c = classify(&SquareMatrix::diag(&[-5.0, 2.0, 0.5, -0.1]), DEFAULT_TOL).unwrap();
        assert!(c.is_proximal(1));
        assert!(close(c.lambda1.unwrap()[0], -5.0, 1e-12));
        assert_eq!(c.semiproximal, Truth::Yes);
        assert_eq!(c.positively_semiproximal, Truth::No);
    }

    #[test]
    fn ambiguous_realness_is_flagged() {
        let ev = [Complex64::new(-1.0, 1e-5), Complex64::new(-1.0, -1e-5), Complex64::new(0.5, 0.0)];
        let c = classify_eigenvalues(&ev, DEFAULT_TOL);
        assert!(c.indeterminate);
        assert_eq!(c.semiproximal, Truth::Indeterminate);
        // A negative ambiguous pair cannot make the matrix positively semiproximal.
        assert_eq!(c.positively_semiproximal, Truth::No);
        let ev = [Complex64::new(1.0, 1e-5), Complex64::new(1.0, -1e-5)];
        assert_eq!(classify_eigenvalues(&ev, DEFAULT_TOL).positively_semiproximal, Truth::Indeterminate);
    }

    #[test]
    fn non_unimodular_is_rejected() {
        assert!(SquareMatrix::diag(&[2.0, 1.0]).check_unimodular().is_err());
        assert!(SquareMatrix::diag(&[2.0, 0.5]).check_unimodular().is_ok());
        assert_eq!(SquareMatrix::from_rows(&[vec![1.0, f64::NAN], vec![0.0, 1.0]]), Err(LinalgError::NonFinite));
        assert_eq!(SquareMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0]]), Err(LinalgError::NotSquare));
    }

    #[test]
    fn json_round_trip() {
        let m = SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.5]]).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, "[[1.0,2.0],[3.0,4.5]]");
        assert_eq!(serde_json::from_str::<SquareMatrix>(&text).unwrap(), m);
        let s = spectrum(&m).unwrap();
        let back: Spectrum = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
