//! Scalar-generic dense kernels shared by the double and double-double paths.
//!
//! The nonsymmetric eigenvalue routine is the classical balance, Gaussian
//! Hessenberg reduction and Francis double-shift QR sequence.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use super::dd::Dd;

pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    /// Unit roundoff.
    fn eps() -> f64;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn is_zero(self) -> bool {
        self.to_f64() == 0.0
    }
    /// `|a|` with the sign of `b`.
    fn sign_of(a: Self, b: Self) -> Self {
        if b >= Self::zero() { a.abs() } else { -a.abs() }
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn eps() -> f64 {
        f64::EPSILON / 2.0
    }
}

impl Real for Dd {
    fn from_f64(x: f64) -> Self {
        Dd::new(x)
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn abs(self) -> Self {
        Dd::abs(self)
    }
    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }
    fn eps() -> f64 {
        4.93e-32
    }
    fn is_zero(self) -> bool {
        self.hi == 0.0
    }
}

/// Determinant by Gaussian elimination with partial pivoting. `a` is
/// row-major `n x n` and is overwritten.
pub fn det_in_place<T: Real>(a: &mut [T], n: usize) -> T {
    let mut det = T::one();
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for r in col + 1..n {
            let v = a[r * n + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best.is_zero() {
            return T::zero();
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f.is_zero() {
                continue;
            }
            for c in col + 1..n {
                let v = a[col * n + c];
                a[r * n + c] -= f * v;
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn inverse<T: Real>(a: &[T], n: usize) -> Option<Vec<T>> {
    let mut m = a.to_vec();
    let mut inv = vec![T::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = T::one();
    }
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r * n + col].abs() > m[piv * n + col].abs() {
                piv = r;
            }
        }
        if m[piv * n + col].is_zero() {
            return None;
        }
        for c in 0..n {
            m.swap(col * n + c, piv * n + c);
            inv.swap(col * n + c, piv * n + c);
        }
        let p = m[col * n + col];
        for c in 0..n {
            m[col * n + c] = m[col * n + c] / p;
            inv[col * n + c] = inv[col * n + c] / p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r * n + col];
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let (mv, iv) = (m[col * n + c], inv[col * n + c]);
                m[r * n + c] -= f * mv;
                inv[r * n + c] -= f * iv;
            }
        }
    }
    Some(inv)
}

pub fn matmul<T: Real>(a: &[T], b: &[T], n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoConvergence;

/// Eigenvalues of a real square matrix as `(re, im)` pairs, unsorted.
pub fn eigenvalues<T: Real>(a: &[T], n: usize) -> Result<Vec<(T, T)>, NoConvergence> {
    // One-based storage keeps the QR sweep readable.
    let mut h = vec![T::zero(); (n + 1) * (n + 1)];
    for i in 0..n {
        for j in 0..n {
            h[(i + 1) * (n + 1) + j + 1] = a[i * n + j];
        }
    }
    balance(&mut h, n);
    hessenberg(&mut h, n);
    for i in 1..=n {
        for j in 1..i.saturating_sub(1) {
            h[i * (n + 1) + j] = T::zero();
        }
    }
    hqr(&mut h, n)
}

fn balance<T: Real>(a: &mut [T], n: usize) {
    let w = n + 1;
    let radix = T::from_f64(2.0);
    let sqrdx = T::from_f64(4.0);
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = T::zero();
            let mut c = T::zero();
            for j in 1..=n {
                if j != i {
                    c += a[j * w + i].abs();
                    r += a[i * w + j].abs();
                }
            }
            if c.is_zero() || r.is_zero() {
                continue;
            }
            let mut g = r / radix;
            let mut f = T::one();
            let s = c + r;
            while c < g {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while c > g {
                f = f / radix;
                c = c / sqrdx;
            }
            if (c + r) / f < T::from_f64(0.95) * s {
                done = false;
                let g = T::one() / f;
                for j in 1..=n {
                    a[i * w + j] *= g;
                }
                for j in 1..=n {
                    a[j * w + i] *= f;
                }
            }
        }
    }
}

fn hessenberg<T: Real>(a: &mut [T], n: usize) {
    let w = n + 1;
    if n < 3 {
        return;
    }
    for m in 2..n {
        let mut x = T::zero();
        let mut i = m;
        for j in m..=n {
            if a[j * w + m - 1].abs() > x.abs() {
                x = a[j * w + m - 1];
                i = j;
            }
        }
        if i != m {
            for j in m - 1..=n {
                a.swap(i * w + j, m * w + j);
            }
            for j in 1..=n {
                a.swap(j * w + i, j * w + m);
            }
        }
        if !x.is_zero() {
            for i in m + 1..=n {
                let mut y = a[i * w + m - 1];
                if !y.is_zero() {
                    y = y / x;
                    a[i * w + m - 1] = y;
                    for j in m..=n {
                        let v = a[m * w + j];
                        a[i * w + j] -= y * v;
                    }
                    for j in 1..=n {
                        let v = a[j * w + i];
                        a[j * w + m] += y * v;
                    }
                }
            }
        }
    }
}

fn hqr<T: Real>(a: &mut [T], n: usize) -> Result<Vec<(T, T)>, NoConvergence> {
    let w = n + 1;
    let at = |i: isize, j: isize| (i as usize) * w + j as usize;
    let mut wr = vec![T::zero(); n + 1];
    let mut wi = vec![T::zero(); n + 1];
    let mut anorm = T::zero();
    for i in 1..=n {
        for j in i.max(2) - 1..=n {
            anorm += a[i * w + j].abs();
        }
    }
    let mut nn = n as isize;
    let mut t = T::zero();
    let half = T::from_f64(0.5);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[at(l - 1, l - 1)].abs() + a[at(l, l)].abs();
                if s.is_zero() {
                    s = anorm;
                }
                if a[at(l, l - 1)].abs() + s == s {
                    a[at(l, l - 1)] = T::zero();
                    break;
                }
                l -= 1;
            }
            let mut x = a[at(nn, nn)];
            if l == nn {
                wr[nn as usize] = x + t;
                wi[nn as usize] = T::zero();
                nn -= 1;
            } else {
                let mut y = a[at(nn - 1, nn - 1)];
                let mut ww = a[at(nn, nn - 1)] * a[at(nn - 1, nn)];
                if l == nn - 1 {
                    let p = half * (y - x);
                    let q = p * p + ww;
                    let z = q.abs().sqrt();
                    x += t;
                    let (k0, k1) = ((nn - 1) as usize, nn as usize);
                    if q >= T::zero() {
                        let z = p + T::sign_of(z, p);
                        wr[k0] = x + z;
                        wr[k1] = x + z;
                        if !z.is_zero() {
                            wr[k1] = x - ww / z;
                        }
                        wi[k0] = T::zero();
                        wi[k1] = T::zero();
                    } else {
                        wr[k0] = x + p;
                        wr[k1] = x + p;
                        wi[k0] = -z;
                        wi[k1] = z;
                    }
                    nn -= 2;
                } else {
                    if its == 90 {
                        return Err(NoConvergence);
                    }
                    if its % 10 == 0 && its > 0 {
                        t += x;
                        for i in 1..=nn {
                            a[at(i, i)] -= x;
                        }
                        let s = a[at(nn, nn - 1)].abs() + a[at(nn - 1, nn - 2)].abs();
                        x = T::from_f64(0.75) * s;
                        y = x;
                        ww = T::from_f64(-0.4375) * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    let (mut p, mut q, mut r);
                    let mut z;
                    loop {
                        z = a[at(m, m)];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - ww) / a[at(m + 1, m)] + a[at(m, m + 1)];
                        q = a[at(m + 1, m + 1)] - z - r - s;
                        r = a[at(m + 2, m + 1)];
                        let s = p.abs() + q.abs() + r.abs();
                        p = p / s;
                        q = q / s;
                        r = r / s;
                        if m == l {
                            break;
                        }
                        let u = a[at(m, m - 1)].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[at(m - 1, m - 1)].abs() + z.abs() + a[at(m + 1, m + 1)].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m + 2..=nn {
                        a[at(i, i - 2)] = T::zero();
                        if i != m + 2 {
                            a[at(i, i - 3)] = T::zero();
                        }
                    }
                    let mut k = m;
                    while k <= nn - 1 {
                        if k != m {
                            p = a[at(k, k - 1)];
                            q = a[at(k + 1, k - 1)];
                            r = T::zero();
                            if k != nn - 1 {
                                r = a[at(k + 2, k - 1)];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if !x.is_zero() {
                                p = p / x;
                                q = q / x;
                                r = r / x;
                            }
                        }
                        let s = T::sign_of((p * p + q * q + r * r).sqrt(), p);
                        if !s.is_zero() {
                            if k == m {
                                if l != m {
                                    a[at(k, k - 1)] = -a[at(k, k - 1)];
                                }
                            } else {
                                a[at(k, k - 1)] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q = q / p;
                            r = r / p;
                            for j in k..=nn {
                                let mut pp = a[at(k, j)] + q * a[at(k + 1, j)];
                                if k != nn - 1 {
                                    pp += r * a[at(k + 2, j)];
                                    a[at(k + 2, j)] -= pp * z;
                                }
                                a[at(k + 1, j)] -= pp * y;
                                a[at(k, j)] -= pp * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                let mut pp = x * a[at(i, k)] + y * a[at(i, k + 1)];
                                if k != nn - 1 {
                                    pp += z * a[at(i, k + 2)];
                                    a[at(i, k + 2)] -= pp * r;
                                }
                                a[at(i, k + 1)] -= pp * q;
                                a[at(i, k)] -= pp;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    Ok((1..=n).map(|k| (wr[k], wi[k])).collect())
}

/// Singular values by one-sided Jacobi rotations on the columns of a
/// row-major `n x n` matrix, sorted descending. Column norms converge to the
/// singular values with absolute error near `eps * sigma_1`.
pub fn singular_values<T: Real>(a: &[T], n: usize) -> Vec<T> {
    let mut u = a.to_vec();
    let tol = T::eps() * n as f64;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                for r in 0..n {
                    let (x, y) = (u[r * n + p], u[r * n + q]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma.is_zero() || gamma.abs().to_f64() <= tol * (alpha * beta).sqrt().to_f64() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::from_f64(2.0) * gamma);
                // For huge zeta, zeta² would overflow; t ≈ 1/(2 zeta) there.
                let t = if zeta.abs().to_f64() > 1e100 {
                    T::one() / (T::from_f64(2.0) * zeta)
                } else {
                    T::sign_of(T::one(), zeta) / (zeta.abs() + (T::one() + zeta * zeta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for r in 0..n {
                    let (x, y) = (u[r * n + p], u[r * n + q]);
                    u[r * n + p] = c * x - s * y;
                    u[r * n + q] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<T> = (0..n)
        .map(|c| {
            let mut s = T::zero();
            for r in 0..n {
                s += u[r * n + c] * u[r * n + c];
            }
            s.sqrt()
        })
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    sv
}
