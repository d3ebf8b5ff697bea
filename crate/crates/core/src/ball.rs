//! Depth-first evaluation of representations over a word ball.
//!
//! Each reduced word is reached by appending one letter to its parent, so a
//! word costs one matrix product instead of one per letter. The inverse of
//! the product is carried along as `g^-1 P^-1`, built from the stored
//! structural inverses, which keeps the smallest singular values usable.

use crate::linalg::dd::Dd;
use crate::linalg::real::{matmul, Real};
use crate::reps::RepSpec;
use crate::words::{Letter, Word};

/// Dimensions up to this are walked in double-double.
pub const PRECISE_WALK_LIMIT: usize = 24;

/// Products of one representation at the current word. `inverse` is
/// present when requested.
pub struct Node<'a, T> {
    pub dim: usize,
    pub product: &'a [T],
    pub inverse: Option<&'a [T]>,
}

struct Letters<T> {
    dim: usize,
    direct: Vec<Vec<T>>,
    inverse: Vec<Vec<T>>,
}

fn letters<T: Real>(r: &RepSpec) -> Letters<T> {
    let conv = |l: Letter| -> Vec<T> {
        r.precise_letter(l).entries().iter().map(|x| T::from_f64(x.hi) + T::from_f64(x.lo)).collect()
    };
    let rank = r.alphabet().rank();
    Letters {
        dim: r.dim(),
        direct: (0..2 * rank).map(|k| conv(Letter::from_rank(k))).collect(),
        inverse: (0..2 * rank).map(|k| conv(Letter::from_rank(k).inverse())).collect(),
    }
}

fn identity<T: Real>(n: usize) -> Vec<T> {
    let mut m = vec![T::zero(); n * n];
    for i in 0..n {
        m[i * n + i] = T::one();
    }
    m
}

/// Visit every reduced word of length at most `radius` over the common
/// alphabet of `reps`, with the products of each representation. Stops
/// early (returning `false`) when `visit` returns `false`.
pub fn walk<T: Real>(
    reps: &[&RepSpec],
    radius: usize,
    with_inverse: bool,
    visit: &mut dyn FnMut(&Word, &[Node<'_, T>]) -> bool,
) -> bool {
    let Some(first) = reps.first() else { return true };
    let rank = first.alphabet().rank();
    let tables: Vec<Letters<T>> = reps.iter().map(|r| letters(r)).collect();
    let mut stack: Vec<(Vec<Vec<T>>, Vec<Vec<T>>)> = vec![(
        tables.iter().map(|t| identity(t.dim)).collect(),
        tables.iter().map(|t| if with_inverse { identity(t.dim) } else { Vec::new() }).collect(),
    )];
    let mut ranks: Vec<usize> = Vec::new();
    let mut word = Word::empty();
    fn emit<T: Real>(
        tables: &[Letters<T>],
        top: &(Vec<Vec<T>>, Vec<Vec<T>>),
        word: &Word,
        with_inverse: bool,
        visit: &mut dyn FnMut(&Word, &[Node<'_, T>]) -> bool,
    ) -> bool {
        let nodes: Vec<Node<'_, T>> = tables
            .iter()
            .enumerate()
            .map(|(k, t)| Node { dim: t.dim, product: &top.0[k], inverse: with_inverse.then(|| &top.1[k][..]) })
            .collect();
        visit(word, &nodes)
    }
    if !emit(&tables, &stack[0], &word, with_inverse, visit) {
        return false;
    }
    // Iterative DFS: `next[d]` is the next letter rank to try at depth d.
    let mut next = vec![0usize];
    while let Some(cand) = next.last_mut() {
        let depth = ranks.len();
        if depth == radius || *cand >= 2 * rank {
            next.pop();
            if ranks.pop().is_some() {
                stack.pop();
                word = Word::reduce(word.letters()[..word.len() - 1].iter().copied());
            }
            continue;
        }
        let r = *cand;
        *cand += 1;
        if ranks.last().map_or(false, |&p| p ^ 1 == r) {
            continue;
        }
        let top = stack.last().expect("stack holds the parent");
        let prod: Vec<Vec<T>> = tables.iter().enumerate().map(|(k, t)| matmul(&top.0[k], &t.direct[r], t.dim)).collect();
        let inv: Vec<Vec<T>> = if with_inverse {
            tables.iter().enumerate().map(|(k, t)| matmul(&t.inverse[r], &top.1[k], t.dim)).collect()
        } else {
            tables.iter().map(|_| Vec::new()).collect()
        };
        stack.push((prod, inv));
        ranks.push(r);
        word = Word::reduce(word.letters().iter().copied().chain([Letter::from_rank(r)]));
        if !emit(&tables, stack.last().unwrap(), &word, with_inverse, visit) {
            return false;
        }
        next.push(0);
    }
    true
}

/// Whether the walk should use double-double for representations of this
/// dimension.
pub fn use_precise(dim: usize) -> bool {
    dim <= PRECISE_WALK_LIMIT
}

/// Converts a walked product to double-double regardless of the scalar.
pub fn to_dd<T: Real>(m: &[T]) -> Vec<Dd> {
    m.iter().map(|x| Dd::new(x.to_f64())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::schottky_sl2r;
    use crate::words::ball_size;

    #[test]
    fn walk_visits_the_ball_once_with_correct_products() {
        let r = schottky_sl2r(2, 4.0).unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut worst: f64 = 0.0;
        walk::<f64>(&[&r], 3, true, &mut |w, nodes| {
            assert!(seen.insert(w.clone()));
            let direct = r.eval(w);
            for i in 0..2 {
                for j in 0..2 {
                    worst = worst.max((nodes[0].product[i * 2 + j] - direct.get(i, j)).abs() / direct.max_abs());
                }
            }
            let id = matmul(nodes[0].product, nodes[0].inverse.unwrap(), 2);
            assert!((id[0] - 1.0).abs() < 1e-9 && id[1].abs() < 1e-9);
            true
        });
        assert_eq!(seen.len() as u128, ball_size(2, 3));
        assert!(worst < 1e-14);
    }
}
