//! Exact determinants of double-precision matrices.
//!
//! Every finite double is a dyadic rational, so `2^e * m` is an integer
//! matrix for a common exponent `e` and its determinant can be found by
//! fraction-free elimination over big integers. Unimodularity checks use
//! this: images built from integral Schottky generators carry entries near
//! `1e10` and a floating LU determinant of those is meaningless.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::SquareMatrix;

/// Split a finite nonzero double into `(mantissa, exponent)` with
/// `x = mantissa * 2^exponent` exactly.
fn decompose(x: f64) -> (i64, i32) {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & 0x000f_ffff_ffff_ffff;
    let (mant, exp) = if exp_bits == 0 { (frac, -1074) } else { (frac | (1 << 52), exp_bits - 1075) };
    (sign * mant as i64, exp)
}

/// Exact determinant of `m` rounded to the nearest double (the rounding
/// happens once, at the end).
pub fn exact_det(m: &SquareMatrix) -> f64 {
    let n = m.dim();
    let entries = m.row_major();
    let parts: Vec<Option<(i64, i32)>> = entries.iter().map(|&x| if x == 0.0 { None } else { Some(decompose(x)) }).collect();
    let emin = parts.iter().flatten().map(|p| p.1).min();
    let Some(emin) = emin else {
        return if n == 0 { 1.0 } else { 0.0 };
    };
    let mut a: Vec<BigInt> = parts
        .iter()
        .map(|p| match p {
            None => BigInt::zero(),
            Some((mant, e)) => BigInt::from(*mant) << ((e - emin) as usize),
        })
        .collect();
    // Bareiss elimination: every intermediate is an exact minor.
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let pivot = (k..n).find(|&r| !a[r * n + k].is_zero());
        let Some(p) = pivot else {
            return 0.0;
        };
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
        }
        prev = a[k * n + k].clone();
    }
    let det = &a[(n - 1) * n + n - 1] * sign;
    to_f64_scaled(&det, emin as i64 * n as i64)
}

/// `x * 2^shift` as a double, without overflow in the intermediate.
fn to_f64_scaled(x: &BigInt, shift: i64) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let bits = x.bits() as i64;
    // Keep 64 significant bits, then apply the remaining power of two.
    let drop = (bits - 64).max(0);
    let top = (x.abs() >> drop as usize).to_f64().expect("fits in a double");
    let e = drop + shift;
    let v = top * pow2(e / 2) * pow2(e - e / 2);
    if x.is_negative() { -v } else { v }
}

fn pow2(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else if e < -1022 {
        2f64.powi(-1022) * 2f64.powi((e + 1022) as i32)
    } else {
        2f64.powi(e as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_determinants_are_exact() {
        // det = 1 with entries far beyond where LU in doubles is reliable.
        let m = SquareMatrix::from_rows(&[
            vec![23420135017.0, -9758223801.0],
            vec![-9758223801.0, 4065857506.0],
        ])
        .unwrap();
        assert_eq!(exact_det(&m), 1.0);
        assert!((m.det() - 1.0).abs() > 1e-8);
    }

    #[test]
    fn dyadic_entries() {
        let m = SquareMatrix::from_rows(&[vec![0.5, 0.25, 0.0], vec![3.0, -1.5, 2.0], vec![0.125, 0.0, 8.0]]).unwrap();
        assert_eq!(exact_det(&m), m.det());
        assert_eq!(exact_det(&SquareMatrix::diag(&[2f64.powi(-600), 2f64.powi(600), 3.0])), 3.0);
        assert_eq!(exact_det(&SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap()), 0.0);
    }
}
