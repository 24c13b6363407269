//! Order complexes and their reduced rational homology.
//!
//! Boundary ranks are first computed over the prime field `F_p`,
//! `p = 2^31 - 1`, with column reduction and clearing. Rational Betti numbers
//! never exceed the `F_p` ones and both share the same Euler characteristic,
//! so when the `F_p` vector has at most one nonzero entry it *is* the rational
//! vector. Otherwise the ranks are recomputed by exact elimination over `Q`.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::FinitePoset;

const PRIME: u64 = 2_147_483_647;

/// All chains of a finite poset, graded by dimension.
#[derive(Debug, Clone)]
pub struct OrderComplex {
    /// Vertex `i` is the poset element `vertices[i]`.
    pub vertices: Vec<usize>,
    /// `faces[k]` lists the `k`-dimensional faces as increasing chains of
    /// vertex positions, sorted lexicographically.
    pub faces: Vec<Vec<Vec<u32>>>,
}

/// Reduced rational Betti numbers `ranks[i] = dim H̃_i`.
///
/// The empty complex has no dimensions; its only reduced homology sits in
/// degree −1 and is reported through `minus_one`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub ranks: Vec<usize>,
    pub minus_one: usize,
}

impl BettiVector {
    /// `Σ (−1)^i dim H̃_i`, including the degree −1 term.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        let mut chi = -(self.minus_one as i64);
        for (i, &b) in self.ranks.iter().enumerate() {
            if i % 2 == 0 {
                chi += b as i64;
            } else {
                chi -= b as i64;
            }
        }
        chi
    }

    /// Whether all reduced homology (including degree −1) lies in `degree`.
    pub fn concentrated_in(&self, degree: isize) -> bool {
        if degree == -1 {
            return self.ranks.iter().all(|&b| b == 0);
        }
        self.minus_one == 0
            && self
                .ranks
                .iter()
                .enumerate()
                .all(|(i, &b)| b == 0 || i as isize == degree)
    }

    pub fn is_zero(&self) -> bool {
        self.minus_one == 0 && self.ranks.iter().all(|&b| b == 0)
    }

    fn nonzero_degrees(&self) -> usize {
        usize::from(self.minus_one > 0) + self.ranks.iter().filter(|&&b| b > 0).count()
    }
}

impl OrderComplex {
    pub(crate) fn of(poset: &FinitePoset) -> Self {
        let order = poset.topological_order().to_vec();
        let n = order.len();
        let mut pos = vec![0u32; n];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i as u32;
        }
        // strictly-above lists in vertex positions
        let above: Vec<Vec<u32>> = order
            .iter()
            .map(|&x| {
                let mut v: Vec<u32> =
                    poset.up_set(x).ones().filter(|&y| y != x).map(|y| pos[y]).collect();
                v.sort_unstable();
                v
            })
            .collect();

        let mut faces: Vec<Vec<Vec<u32>>> = Vec::new();
        let mut stack: Vec<u32> = Vec::new();
        fn extend(
            above: &[Vec<u32>],
            stack: &mut Vec<u32>,
            faces: &mut Vec<Vec<Vec<u32>>>,
        ) {
            let dim = stack.len() - 1;
            if faces.len() <= dim {
                faces.push(Vec::new());
            }
            faces[dim].push(stack.clone());
            let last = *stack.last().unwrap() as usize;
            for &y in &above[last] {
                stack.push(y);
                extend(above, stack, faces);
                stack.pop();
            }
        }
        for v in 0..n as u32 {
            stack.push(v);
            extend(&above, &mut stack, &mut faces);
            stack.pop();
        }
        for level in &mut faces {
            level.sort_unstable();
        }
        Self { vertices: order, faces }
    }

    /// Dimension of the complex, `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn face_count(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    /// Reduced rational homology ranks.
    pub fn homology_ranks(&self) -> BettiVector {
        let modular = self.betti_with(rank_mod_p);
        if modular.nonzero_degrees() <= 1 {
            return modular;
        }
        self.betti_with(|cols, _rows, _cleared| rank_rational(cols))
    }

    /// Betti numbers over `F_p` (`p = 2^31 − 1`), without the rational
    /// fallback.
    pub fn homology_ranks_mod_p(&self) -> BettiVector {
        self.betti_with(rank_mod_p)
    }

    /// Generic driver: `rank(columns, row_count, cleared)` returns the rank of
    /// a boundary matrix and the pivot rows of its reduced columns.
    fn betti_with<F>(&self, mut rank: F) -> BettiVector
    where
        F: FnMut(&[Vec<(u32, i64)>], usize, &[bool]) -> (usize, Vec<u32>),
    {
        let Some(dim) = self.dimension() else {
            return BettiVector { ranks: Vec::new(), minus_one: 1 };
        };
        // boundary_rank[k] = rank of ∂_k : C_k → C_{k-1}; ∂_0 is augmentation
        let mut boundary_rank = vec![0usize; dim + 2];
        boundary_rank[0] = 1;
        let mut cleared_next: Vec<bool> = Vec::new();
        for k in (1..=dim).rev() {
            let index: HashMap<&[u32], u32> = self.faces[k - 1]
                .iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i as u32))
                .collect();
            let cols: Vec<Vec<(u32, i64)>> = self.faces[k]
                .iter()
                .map(|face| {
                    let mut col: Vec<(u32, i64)> = (0..face.len())
                        .map(|i| {
                            let mut sub = face.clone();
                            sub.remove(i);
                            let sign = if i % 2 == 0 { 1 } else { -1 };
                            (index[sub.as_slice()], sign)
                        })
                        .collect();
                    col.sort_unstable_by_key(|e| e.0);
                    col
                })
                .collect();
            let cleared = if cleared_next.len() == cols.len() {
                cleared_next.clone()
            } else {
                vec![false; cols.len()]
            };
            let (r, pivots) = rank(&cols, self.faces[k - 1].len(), &cleared);
            boundary_rank[k] = r;
            cleared_next = vec![false; self.faces[k - 1].len()];
            for p in pivots {
                cleared_next[p as usize] = true;
            }
        }
        let ranks = (0..=dim)
            .map(|k| self.faces[k].len() - boundary_rank[k] - boundary_rank[k + 1])
            .collect();
        BettiVector { ranks, minus_one: 0 }
    }
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a % PRIME, PRIME - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % PRIME;
        }
        base = base * base % PRIME;
        exp >>= 1;
    }
    acc
}

/// Column reduction over `F_p`. Columns flagged in `cleared` are known to
/// reduce to zero and are skipped.
fn rank_mod_p(cols: &[Vec<(u32, i64)>], _rows: usize, cleared: &[bool]) -> (usize, Vec<u32>) {
    let mut pivot_of: HashMap<u32, Vec<(u32, u64)>> = HashMap::new();
    let mut pivots = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        if cleared[j] {
            continue;
        }
        let mut v: Vec<(u32, u64)> = col
            .iter()
            .map(|&(r, c)| (r, if c < 0 { PRIME - (-c) as u64 } else { c as u64 }))
            .collect();
        while let Some(&(low, coeff)) = v.last() {
            let Some(other) = pivot_of.get(&low) else { break };
            // v -= coeff * other (other is normalised to leading 1)
            v = axpy(&v, other, PRIME - coeff);
        }
        if let Some(&(low, coeff)) = v.last() {
            let inv = inv_mod(coeff);
            for e in &mut v {
                e.1 = e.1 * inv % PRIME;
            }
            pivot_of.insert(low, v);
            pivots.push(low);
        }
    }
    (pivots.len(), pivots)
}

/// `a + s * b` for sorted sparse vectors over `F_p`.
fn axpy(a: &[(u32, u64)], b: &[(u32, u64)], s: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, b[j].1 * s % PRIME));
            j += 1;
        } else {
            let v = (a[i].1 + b[j].1 * s) % PRIME;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact rank over `Q` by sparse elimination on rational columns.
fn rank_rational(cols: &[Vec<(u32, i64)>]) -> (usize, Vec<u32>) {
    let mut pivot_of: HashMap<u32, Vec<(u32, BigRational)>> = HashMap::new();
    let mut pivots = Vec::new();
    for col in cols {
        let mut v: Vec<(u32, BigRational)> =
            col.iter().map(|&(r, c)| (r, BigRational::from_integer(c.into()))).collect();
        while let Some((low, coeff)) = v.last().cloned() {
            let Some(other) = pivot_of.get(&low) else { break };
            v = axpy_q(&v, other, &-coeff);
        }
        if let Some((low, coeff)) = v.last().cloned() {
            for e in &mut v {
                e.1 = &e.1 / &coeff;
            }
            debug_assert!(v.last().unwrap().1.is_one());
            pivot_of.insert(low, v);
            pivots.push(low);
        }
    }
    (pivots.len(), pivots)
}

fn axpy_q(
    a: &[(u32, BigRational)],
    b: &[(u32, BigRational)],
    s: &BigRational,
) -> Vec<(u32, BigRational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, &b[j].1 * s));
            j += 1;
        } else {
            let v = &a[i].1 + &b[j].1 * s;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
