//! Schottky surrogates in SL(2,R) and SL(2,C).
//!
//! Two families. The factory conjugates `diag(s^k, s^-k)` by a rotation of
//! angle `k pi / (2 rank)`. Its images are irrational, which is harmless at
//! small spreads but not for generators with eigenvalues near `1e10`: the
//! rounded entries of such a matrix have a determinant visibly different
//! from 1. Generators that must dominate another representation are
//! therefore built integrally, as `M H(N) M^-1` with `H(N) = [[N^2+1, N],
//! [N, 1]]` and `M` a Gaussian-integer rotation-scaling matrix of norm `n`
//! dividing `N`; the conjugate is integral with determinant exactly 1 and
//! axes close to the direction of `M`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::spin::ComplexRep2;
use super::{Provenance, RepError, RepSpec};
use crate::linalg::SquareMatrix;
use crate::words::Alphabet;

pub fn rotation(t: f64) -> SquareMatrix {
    let (s, c) = t.sin_cos();
    SquareMatrix::from_rows(&[vec![c, -s], vec![s, c]]).expect("2x2")
}

/// The first `rank` labels of `a1, b1, a2, b2`.
pub fn standard_alphabet(rank: usize) -> Alphabet {
    let names = ["a1", "b1", "a2", "b2"];
    Alphabet::new(&names[..rank.min(4)]).expect("distinct labels")
}

pub fn schottky_sl2r(rank: usize, spread: f64) -> Result<RepSpec, RepError> {
    if !(2..=4).contains(&rank) {
        return Err(RepError::Construction(format!("Schottky factory supports ranks 2..4, not {rank}")));
    }
    schottky_sl2r_on(&standard_alphabet(rank), spread)
}

/// Generator `k` (from 1) is `diag(spread^k, spread^-k)` conjugated by the
/// rotation by `k pi / (2 rank)`.
pub fn schottky_sl2r_on(alphabet: &Alphabet, spread: f64) -> Result<RepSpec, RepError> {
    let rank = alphabet.rank();
    if !(2..=4).contains(&rank) {
        return Err(RepError::Construction(format!("Schottky factory supports ranks 2..4, not {rank}")));
    }
    if !(spread >= 2.0) {
        return Err(RepError::Construction(format!("spread {spread} is below 2")));
    }
    let mut images = Vec::new();
    for k in 1..=rank {
        let t = k as f64 * PI / (2.0 * rank as f64);
        let l = spread.powi(k as i32);
        images.push(rotation(t).mul(&SquareMatrix::diag(&[l, 1.0 / l])).mul(&rotation(-t)));
    }
    if ping_pong_gap(&images).is_none() {
        return Err(RepError::Construction(format!("spread {spread} too small for ping-pong separation at rank {rank}")));
    }
    let prov = Provenance::named("schottky_sl2r").with("rank", rank as f64).with("spread", spread);
    RepSpec::new(alphabet.clone(), images, prov)
}

/// Loxodromic generators `diag(z, 1/z)` with `|z| = spread^k`,
/// `arg z = k pi / (3 rank)`, conjugated as in the real factory.
///
/// Rotations act isometrically on the Riemann sphere and the modulus of `z`
/// alone fixes how far a generator pushes caps around its fixed points, so
/// the ping-pong check of the real factory with the same moduli applies.
pub fn schottky_sl2c(rank: usize, spread: f64) -> Result<ComplexRep2, RepError> {
    let real = schottky_sl2r(rank, spread)?;
    let mut images = Vec::new();
    for k in 1..=rank {
        let t = k as f64 * PI / (2.0 * rank as f64);
        let z = Complex64::from_polar(spread.powi(k as i32), k as f64 * PI / (3.0 * rank as f64));
        let (s, c) = t.sin_cos();
        let r = nalgebra::Matrix2::new(Complex64::from(c), Complex64::from(-s), Complex64::from(s), Complex64::from(c));
        let d = nalgebra::Matrix2::new(z, Complex64::from(0.0), Complex64::from(0.0), 1.0 / z);
        images.push(r * d * r.transpose());
    }
    ComplexRep2::new(real.alphabet().clone(), images)
}

// ---- ping-pong ----

fn arc_dist(p: f64, q: f64) -> f64 {
    let d = (p - q).rem_euclid(PI);
    d.min(PI - d)
}

/// Angle in `[0, pi)` of the line spanned by `(x, y)`.
fn line_angle(x: f64, y: f64) -> f64 {
    y.atan2(x).rem_euclid(PI)
}

/// Attracting and repelling lines of a hyperbolic 2x2 matrix.
pub fn fixed_lines(g: &SquareMatrix) -> Option<(f64, f64)> {
    let (a, b, c, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    let t = a + d;
    let det = a * d - b * c;
    let disc = t * t - 4.0 * det;
    if !(disc > 0.0) {
        return None;
    }
    let l = (t + t.signum() * disc.sqrt()) / 2.0;
    let small = det / l;
    let vec = |lam: f64| {
        let (v1, v2) = ((b, lam - a), (lam - d, c));
        if v1.0.abs() + v1.1.abs() >= v2.0.abs() + v2.1.abs() { line_angle(v1.0, v1.1) } else { line_angle(v2.0, v2.1) }
    };
    Some((vec(l), vec(small)))
}

fn act(g: &SquareMatrix, phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    line_angle(g.get(0, 0) * c + g.get(0, 1) * s, g.get(1, 0) * c + g.get(1, 1) * s)
}

/// `(center, half-width)`.
type Arc = (f64, f64);

/// Arcs `(I+, I-)` for a repelling half-width `w`: `I-` is centred on the
/// repelling line and `I+` covers the image of its complement.
fn arcs(g: &SquareMatrix, lines: (f64, f64), w: f64) -> (Arc, Arc) {
    let (pp, pm) = lines;
    let half = arc_dist(act(g, pm + w), pp).max(arc_dist(act(g, pm - w), pp));
    ((pp, half), (pm, w))
}

fn gap(a: Arc, b: Arc) -> f64 {
    arc_dist(a.0, b.0) - a.1 - b.1
}

/// Smallest separation between the ping-pong arcs of the generators, or
/// `None` when no admissible choice of arcs on the search grid is pairwise
/// disjoint. A positive value certifies freeness and discreteness.
pub fn ping_pong_gap(images: &[SquareMatrix]) -> Option<f64> {
    let grid: Vec<f64> = (1..=350).map(|k| 0.002 * k as f64).collect();
    let mut options: Vec<Vec<(Arc, Arc)>> = Vec::new();
    for g in images {
        let lines = fixed_lines(g)?;
        let opts: Vec<(Arc, Arc)> =
            grid.iter().map(|&w| arcs(g, lines, w)).filter(|(p, m)| p.1 < PI / 2.0 && gap(*p, *m) > 0.0).collect();
        if opts.is_empty() {
            return None;
        }
        options.push(opts);
    }
    // Start from the most compact arcs for each generator, then improve one
    // generator at a time.
    let mut choice: Vec<usize> = options
        .iter()
        .map(|o| (0..o.len()).min_by(|&i, &j| o[i].0 .1.max(o[i].1 .1).total_cmp(&o[j].0 .1.max(o[j].1 .1))).unwrap())
        .collect();
    let score = |choice: &[usize]| -> f64 {
        let all: Vec<Arc> = choice.iter().zip(&options).flat_map(|(&c, o)| [o[c].0, o[c].1]).collect();
        let mut m = f64::INFINITY;
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                m = m.min(gap(all[i], all[j]));
            }
        }
        m
    };
    let mut best = score(&choice);
    for _ in 0..3 {
        for k in 0..choice.len() {
            for c in 0..options[k].len() {
                let mut trial = choice.clone();
                trial[k] = c;
                let s = score(&trial);
                if s > best {
                    best = s;
                    choice = trial;
                }
            }
        }
    }
    (best > 0.0).then_some(best)
}

// ---- integral generators ----

/// Gaussian integers `a + bi` whose directions approximate `k pi / 8`.
const SLOTS: [(i64, i64); 8] = [(1, 0), (12, 5), (1, 1), (5, 12), (0, 1), (-5, 12), (-1, 1), (-12, 5)];

/// Integral hyperbolic matrix with trace at least `min_trace`, attracting
/// line near `slot * pi / 8` and repelling line orthogonal to it.
pub fn integral_hyperbolic(slot: usize, min_trace: f64) -> Result<[i64; 4], RepError> {
    let (a, b) = SLOTS[slot % 8];
    let n = a * a + b * b;
    let root = (min_trace - 2.0).max(1.0).sqrt();
    if !(root < 1e12) {
        return Err(RepError::Construction(format!("trace {min_trace} out of range for an integral generator")));
    }
    let big_n = n * (root / n as f64).ceil() as i64;
    // g = I + M K M^T / n with K = [[N^2, N], [N, 0]] and M = [[a, -b], [b, a]].
    let (a, b, n, nn) = (a as i128, b as i128, n as i128, big_n as i128);
    let k = [nn * nn, nn, nn, 0];
    let m = [a, -b, b, a];
    let mk = [m[0] * k[0] + m[1] * k[2], m[0] * k[1] + m[1] * k[3], m[2] * k[0] + m[3] * k[2], m[2] * k[1] + m[3] * k[3]];
    // times M^T = [[a, b], [-b, a]]
    let full = [mk[0] * a - mk[1] * b, mk[0] * b + mk[1] * a, mk[2] * a - mk[3] * b, mk[2] * b + mk[3] * a];
    let mut g = [0i64; 4];
    for (i, v) in full.iter().enumerate() {
        debug_assert_eq!(v % n, 0);
        let e = v / n + if i == 0 || i == 3 { 1 } else { 0 };
        if e.abs() >= 1 << 53 {
            return Err(RepError::Construction(format!("integral generator entry {e} exceeds 2^53")));
        }
        g[i] = e as i64;
    }
    debug_assert_eq!(g[0] as i128 * g[3] as i128 - g[1] as i128 * g[2] as i128, 1);
    Ok(g)
}

fn int_matrix(g: [i64; 4]) -> SquareMatrix {
    SquareMatrix::from_rows(&[vec![g[0] as f64, g[1] as f64], vec![g[2] as f64, g[3] as f64]]).expect("2x2")
}

/// Spectral radius of a 2x2 matrix of determinant 1 from its trace.
pub fn sl2_l1(g: &SquareMatrix) -> f64 {
    let t = (g.get(0, 0) + g.get(1, 1)).abs();
    if t <= 2.0 { 1.0 } else { (t + (t * t - 4.0).sqrt()) / 2.0 }
}

/// Integral Schottky generators on the alphabet of `base`, generator `k`
/// having trace at least `multiplier * l1(base_k)^exponent` and axes at
/// `slots[k] * pi / 8`. Domination over the whole group is not implied and
/// must be checked on a ball.
pub fn integral_dominating(base: &RepSpec, exponent: f64, multiplier: f64, slots: &[usize]) -> Result<RepSpec, RepError> {
    if base.dim() != 2 || slots.len() != base.alphabet().rank() {
        return Err(RepError::Construction("integral domination needs a 2x2 base and one slot per generator".into()));
    }
    let images = (0..slots.len())
        .map(|k| integral_hyperbolic(slots[k], multiplier * sl2_l1(base.image(k)).powf(exponent)).map(int_matrix))
        .collect::<Result<Vec<_>, _>>()?;
    if ping_pong_gap(&images).is_none() {
        return Err(RepError::Construction("integral generators fail the ping-pong check".into()));
    }
    let mut prov = Provenance::named("integral_schottky").with("exponent", exponent).with("multiplier", multiplier);
    for (k, s) in slots.iter().enumerate() {
        prov.params.insert(format!("slot_{}", base.alphabet().label(k)), *s as f64);
    }
    RepSpec::new(base.alphabet().clone(), images, prov)
}

/// A fixed integral rank-4 Schottky group on `x1..x4`, with traces 8, 8,
/// 6, 6 and ping-pong arcs separated by about 0.07 radians.
pub fn integral_base() -> RepSpec {
    let alphabet = Alphabet::new(["x1", "x2", "x3", "x4"]).expect("distinct labels");
    let images = [[7, -1, -6, 1], [7, 1, 6, 1], [7, 4, -2, -1], [7, -4, 2, -1]].into_iter().map(int_matrix).collect();
    RepSpec::new(alphabet, images, Provenance::named("integral_base")).expect("integral base is unimodular")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factory_moduli_and_ping_pong() {
        let r = schottky_sl2r(2, 4.0).unwrap();
        assert!((sl2_l1(r.image(0)) - 4.0).abs() < 1e-12);
        assert!((sl2_l1(r.image(1)) - 16.0).abs() < 1e-12);
        assert!(ping_pong_gap(r.images()).unwrap() > 0.0);
        assert!(schottky_sl2r(5, 4.0).is_err());
        assert!(schottky_sl2r(2, 1.5).is_err());
    }

    #[test]
    fn integral_generators_are_exactly_unimodular() {
        for slot in 0..8 {
            let g = integral_hyperbolic(slot, 1e9).unwrap();
            assert_eq!(g[0] as i128 * g[3] as i128 - g[1] as i128 * g[2] as i128, 1);
            assert!((g[0] + g[3]) as f64 >= 1e9);
            let (pp, pm) = fixed_lines(&int_matrix(g)).unwrap();
            assert!((arc_dist(pp, pm) - PI / 2.0).abs() < 1e-3);
            assert!(arc_dist(pp, slot as f64 * PI / 8.0) < 0.01);
        }
    }

    #[test]
    fn integral_base_is_schottky() {
        let b = integral_base();
        let gap = ping_pong_gap(b.images()).unwrap();
        assert!(gap > 0.05, "{gap}");
    }

    #[test]
    fn overlapping_axes_fail_ping_pong() {
        let g = rotation(0.3).mul(&SquareMatrix::diag(&[3.0, 1.0 / 3.0])).mul(&rotation(-0.3));
        let h = rotation(0.35).mul(&SquareMatrix::diag(&[3.0, 1.0 / 3.0])).mul(&rotation(-0.35));
        assert!(ping_pong_gap(&[g, h]).is_none());
    }
}
