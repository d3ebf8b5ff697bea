//! Fixed 448-bit binary floating point, for witness spectra whose moduli
//! span more than the 32 digits of double-double.
//!
//! A value is `±mant · 2^exp` with the mantissa normalized to exactly
//! `PREC` bits. Sums are formed exactly and rounded once, so the
//! convergence tests of the QR sweep (`u + v == v`) behave as in IEEE
//! arithmetic. There are no infinities; division by zero gives zero and
//! is never reached by the kernels that use this type.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::Float;

use super::real::{self, Real};
use super::{sort_eigenvalues, LinalgError, SquareMatrix};

pub const PREC: u64 = 448;
const LIMBS: usize = (PREC / 32) as usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mp {
    neg: bool,
    exp: i64,
    mant: [u32; LIMBS],
}

impl Mp {
    pub const ZERO: Mp = Mp { neg: false, exp: 0, mant: [0; LIMBS] };

    fn big(&self) -> BigUint {
        BigUint::from_slice(&self.mant)
    }

    fn is_zero_mant(&self) -> bool {
        self.mant.iter().all(|&d| d == 0)
    }

    /// Rounds `±m · 2^exp` to `PREC` bits, ties away from zero.
    fn normalize(neg: bool, m: BigUint, exp: i64) -> Mp {
        let bits = m.bits();
        if bits == 0 {
            return Mp::ZERO;
        }
        let (mut m, mut exp) = match bits.cmp(&PREC) {
            Ordering::Greater => {
                let shift = bits - PREC;
                let round = m.bit(shift - 1);
                let mut q = m >> shift;
                if round {
                    q += 1u32;
                }
                (q, exp + shift as i64)
            }
            Ordering::Less => (m << (PREC - bits), exp - (PREC - bits) as i64),
            Ordering::Equal => (m, exp),
        };
        if m.bits() > PREC {
            m >>= 1;
            exp += 1;
        }
        let digits = m.to_u32_digits();
        let mut mant = [0u32; LIMBS];
        mant[..digits.len()].copy_from_slice(&digits);
        Mp { neg, exp, mant }
    }

    /// Binary exponent of the leading bit.
    fn top_exp(&self) -> i64 {
        self.exp + PREC as i64 - 1
    }
}

impl From<f64> for Mp {
    fn from(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Mp::ZERO;
        }
        let (m, e, s) = x.integer_decode();
        Mp::normalize(s < 0, BigUint::from(m), e as i64)
    }
}

impl PartialOrd for Mp {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        let (za, zb) = (self.is_zero_mant(), o.is_zero_mant());
        let sign = |z: bool, neg: bool| if z { 0 } else if neg { -1 } else { 1 };
        let (sa, sb) = (sign(za, self.neg), sign(zb, o.neg));
        if sa != sb || sa == 0 {
            return Some(sa.cmp(&sb));
        }
        let mag = self.exp.cmp(&o.exp).then_with(|| self.mant.iter().rev().cmp(o.mant.iter().rev()));
        Some(if sa > 0 { mag } else { mag.reverse() })
    }
}

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        if self.is_zero_mant() {
            self
        } else {
            Mp { neg: !self.neg, ..self }
        }
    }
}

impl Add for Mp {
    type Output = Mp;
    fn add(self, o: Mp) -> Mp {
        if self.is_zero_mant() {
            return o;
        }
        if o.is_zero_mant() {
            return self;
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let d = (hi.exp - lo.exp) as u64;
        if d > 2 * PREC + 4 {
            return hi;
        }
        let a = hi.big() << d;
        let b = lo.big();
        if hi.neg == lo.neg {
            Mp::normalize(hi.neg, a + b, lo.exp)
        } else if a >= b {
            Mp::normalize(hi.neg, a - b, lo.exp)
        } else {
            Mp::normalize(lo.neg, b - a, lo.exp)
        }
    }
}

impl Sub for Mp {
    type Output = Mp;
    fn sub(self, o: Mp) -> Mp {
        self + (-o)
    }
}

impl Mul for Mp {
    type Output = Mp;
    fn mul(self, o: Mp) -> Mp {
        if self.is_zero_mant() || o.is_zero_mant() {
            return Mp::ZERO;
        }
        Mp::normalize(self.neg != o.neg, self.big() * o.big(), self.exp + o.exp)
    }
}

impl Div for Mp {
    type Output = Mp;
    fn div(self, o: Mp) -> Mp {
        if self.is_zero_mant() || o.is_zero_mant() {
            return Mp::ZERO;
        }
        let shift = PREC + 2;
        Mp::normalize(self.neg != o.neg, (self.big() << shift) / o.big(), self.exp - o.exp - shift as i64)
    }
}

impl AddAssign for Mp {
    fn add_assign(&mut self, o: Mp) {
        *self = *self + o;
    }
}

impl SubAssign for Mp {
    fn sub_assign(&mut self, o: Mp) {
        *self = *self - o;
    }
}

impl MulAssign for Mp {
    fn mul_assign(&mut self, o: Mp) {
        *self = *self * o;
    }
}

impl Real for Mp {
    fn from_f64(x: f64) -> Self {
        Mp::from(x)
    }

    fn to_f64(self) -> f64 {
        if self.is_zero_mant() {
            return 0.0;
        }
        let top = (self.big() >> (PREC - 64)).iter_u64_digits().next().unwrap_or(0) as f64;
        let e = self.exp + PREC as i64 - 64;
        let e = e.clamp(-4000, 4000) as i32;
        let v = top * 2f64.powi(e / 2) * 2f64.powi(e - e / 2);
        if self.neg { -v } else { v }
    }

    fn abs(self) -> Self {
        Mp { neg: false, ..self }
    }

    fn sqrt(self) -> Self {
        if self.is_zero_mant() || self.neg {
            return Mp::ZERO;
        }
        let (mut m, mut e) = (self.big(), self.exp);
        if e.rem_euclid(2) == 1 {
            m <<= 1;
            e -= 1;
        }
        let shift = PREC + 2;
        Mp::normalize(false, (m << shift).sqrt(), (e - shift as i64) / 2)
    }

    fn eps() -> f64 {
        2f64.powi(-(PREC as i32) + 1)
    }

    fn is_zero(self) -> bool {
        self.is_zero_mant()
    }
}

/// Natural log of `|x|`, valid far outside the `f64` range.
pub fn ln_abs(x: Mp) -> f64 {
    if x.is_zero_mant() {
        return f64::NEG_INFINITY;
    }
    let top = x.top_exp();
    let scaled = Mp { neg: false, exp: x.exp - top, mant: x.mant };
    scaled.to_f64().ln() + top as f64 * std::f64::consts::LN_2
}

/// Row-major multiprecision square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MpMatrix {
    n: usize,
    data: Vec<Mp>,
}

impl MpMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Mp::ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = Mp::from(1.0);
        }
        MpMatrix { n, data }
    }

    /// Exact: every double is representable.
    pub fn from_matrix(m: &SquareMatrix) -> Self {
        MpMatrix { n: m.dim(), data: m.row_major().into_iter().map(Mp::from).collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, o: &MpMatrix) -> MpMatrix {
        let n = self.n;
        let mut data = vec![Mp::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero_mant() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        MpMatrix { n, data }
    }

    /// Eigenvalues as `(ln |z|, z / |z|)`, largest modulus first.
    pub fn eigenvalues_polar(&self) -> Result<Vec<(f64, Complex64)>, LinalgError> {
        let ev = real::eigenvalues(&self.data, self.n).map_err(|_| LinalgError::NoConvergence { hash: String::from("multiprecision") })?;
        let mut out: Vec<(f64, Complex64)> = ev
            .into_iter()
            .map(|(re, im)| {
                let r = (re * re + im * im).sqrt();
                let phase = if r.is_zero_mant() { Complex64::new(1.0, 0.0) } else { Complex64::new((re / r).to_f64(), (im / r).to_f64()) };
                (ln_abs(r), phase)
            })
            .collect();
        out.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.re.total_cmp(&a.1.re)).then(b.1.im.total_cmp(&a.1.im)));
        Ok(out)
    }

    /// Eigenvalues rounded to double; only for spectra inside the `f64` range.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>, LinalgError> {
        let mut out: Vec<Complex64> = self.eigenvalues_polar()?.into_iter().map(|(l, p)| p * l.exp()).collect();
        sort_eigenvalues(&mut out);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_round_trips() {
        let a = Mp::from(3.0);
        let b = Mp::from(7.0);
        assert_eq!((a * b).to_f64(), 21.0);
        assert_eq!((b - a).to_f64(), 4.0);
        assert_eq!((a - b).to_f64(), -4.0);
        assert!(((a / b) * b - a).abs().to_f64() < 1e-130);
        assert!((Mp::from(2.0).sqrt() * Mp::from(2.0).sqrt() - Mp::from(2.0)).abs().to_f64() < 1e-130);
        assert!(Mp::from(-1.0) < Mp::from(0.5) && Mp::from(0.5) < Mp::from(2.0) && Mp::from(-3.0) < Mp::from(-2.0));
        // 1 + 2^-400 is distinguishable, 1 + 2^-460 is not.
        let one = Mp::from(1.0);
        assert!(one + Mp::from(2f64.powi(-400)) != one);
        assert!(one + Mp::from(2f64.powi(-460)) == one);
        assert!((ln_abs(Mp::from(1e300) * Mp::from(1e300)) - 600.0 * 10f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn resolves_a_spread_beyond_double_double() {
        // P diag(1e40, 1, 1e-40) P^-1 with P unimodular.
        let p = SquareMatrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]]).unwrap();
        let pi = p.inverse().unwrap();
        let mp = MpMatrix::from_matrix(&p);
        let pim = MpMatrix::from_matrix(&pi);
        let mut d = MpMatrix::identity(3);
        d.data[0] = Mp::from(1e40);
        d.data[8] = Mp::from(1e-40);
        let g = mp.mul(&d).mul(&pim);
        let ev = g.eigenvalues_polar().unwrap();
        assert!((ev[1].0).abs() < 1e-12, "{ev:?}");
        assert!((ev[2].0 + 40.0 * 10f64.ln()).abs() < 1e-9, "{ev:?}");
    }
}
