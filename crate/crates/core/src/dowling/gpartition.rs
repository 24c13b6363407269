use std::collections::BTreeSet;
use std::fmt;

use super::DowlingError;

/// A nonzero block: its support (ascending) and one label per support
/// element, with the label of the minimum normalised to `0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub support: Vec<usize>,
    pub labels: Vec<u32>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn first(&self) -> usize {
        self.support[0]
    }

    pub fn label_of(&self, element: usize) -> Option<u32> {
        self.support.iter().position(|&e| e == element).map(|i| self.labels[i])
    }

    /// Whether each residue class mod `k` holds the same number of labels.
    pub fn is_evenly_coloured(&self, k: u32) -> bool {
        if k <= 1 {
            return true;
        }
        if !self.len().is_multiple_of(k as usize) {
            return false;
        }
        let mut counts = vec![0usize; k as usize];
        for &l in &self.labels {
            counts[(l % k) as usize] += 1;
        }
        counts.iter().all(|&c| c == counts[0])
    }
}

/// Where an element sits inside a [`GPartition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    Zero,
    Block(usize, u32),
}

/// A canonical G-partition of `{1, …, n}` with labels in `Z/modulus`.
///
/// Canonical means: the minimum of every nonzero block has label `0`, and the
/// blocks are sorted by their minima. Two labelled partitions that differ by
/// a constant shift on each block have the same canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GPartition {
    n: usize,
    modulus: u32,
    zero: Vec<usize>,
    blocks: Vec<Block>,
}

impl GPartition {
    /// Canonicalises a raw labelled partition.
    ///
    /// `blocks` holds `(element, label)` pairs with arbitrary integer labels;
    /// together with `zero` the supports must partition `{1, …, n}`.
    pub fn new(
        n: usize,
        modulus: u32,
        zero: impl IntoIterator<Item = usize>,
        blocks: Vec<Vec<(usize, i64)>>,
    ) -> Result<Self, DowlingError> {
        if modulus == 0 {
            return Err(DowlingError::NotAPartition("modulus must be positive".into()));
        }
        let mut seen = vec![false; n + 1];
        let mut mark = |e: usize| -> Result<(), DowlingError> {
            if e == 0 || e > n {
                return Err(DowlingError::NotAPartition(format!("element {e} outside 1..={n}")));
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(DowlingError::NotAPartition(format!("element {e} appears twice")));
            }
            Ok(())
        };
        let mut zero: Vec<usize> = zero.into_iter().collect();
        for &e in &zero {
            mark(e)?;
        }
        let m = i64::from(modulus);
        let mut out_blocks = Vec::with_capacity(blocks.len());
        for mut raw in blocks {
            if raw.is_empty() {
                return Err(DowlingError::NotAPartition("empty nonzero block".into()));
            }
            for &(e, _) in &raw {
                mark(e)?;
            }
            raw.sort_unstable_by_key(|&(e, _)| e);
            let base = raw[0].1;
            out_blocks.push(Block {
                support: raw.iter().map(|&(e, _)| e).collect(),
                labels: raw.iter().map(|&(_, l)| (l - base).rem_euclid(m) as u32).collect(),
            });
        }
        if let Some(missing) = (1..=n).find(|&e| !seen[e]) {
            return Err(DowlingError::NotAPartition(format!("element {missing} not covered")));
        }
        zero.sort_unstable();
        out_blocks.sort_unstable_by_key(Block::first);
        Ok(Self { n, modulus, zero, blocks: out_blocks })
    }

    /// Trusted constructor for already canonical data.
    pub(crate) fn from_canonical(n: usize, modulus: u32, zero: Vec<usize>, blocks: Vec<Block>) -> Self {
        debug_assert!(blocks.windows(2).all(|w| w[0].first() < w[1].first()));
        debug_assert!(blocks.iter().all(|b| b.labels[0] == 0));
        Self { n, modulus, zero, blocks }
    }

    /// The minimum of `Q_n(modulus)`: all singletons, empty zero block.
    pub fn bottom(n: usize, modulus: u32) -> Self {
        let blocks = (1..=n).map(|e| Block { support: vec![e], labels: vec![0] }).collect();
        Self { n, modulus, zero: Vec::new(), blocks }
    }

    /// The maximum of `Q_n(modulus)`: everything in the zero block.
    pub fn top(n: usize, modulus: u32) -> Self {
        Self { n, modulus, zero: (1..=n).collect(), blocks: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn zero_block(&self) -> &[usize] {
        &self.zero
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Rank in the full Dowling lattice, `n − |π|`.
    pub fn dowling_rank(&self) -> usize {
        self.n - self.blocks.len()
    }

    pub(crate) fn slots(&self) -> Vec<Slot> {
        let mut slots = vec![Slot::Zero; self.n + 1];
        for (bi, b) in self.blocks.iter().enumerate() {
            for (&e, &l) in b.support.iter().zip(&b.labels) {
                slots[e] = Slot::Block(bi, l);
            }
        }
        slots
    }

    /// Canonical key, e.g. `I={3,5}|B1=(1:0,4:1,6:0)|B2=(2:0,7:1,8:1)`.
    pub fn key(&self) -> String {
        self.to_string()
    }

    /// Parses a key produced by [`GPartition::key`].
    pub fn parse_key(key: &str, modulus: u32) -> Result<Self, DowlingError> {
        let bad = || DowlingError::ParseKey(key.to_string());
        let mut parts = key.split('|');
        let zero_part = parts.next().ok_or_else(bad)?;
        let inner = zero_part.strip_prefix("I={").and_then(|s| s.strip_suffix('}')).ok_or_else(bad)?;
        let zero: Vec<usize> = if inner.is_empty() {
            Vec::new()
        } else {
            inner.split(',').map(|t| t.parse().map_err(|_| bad())).collect::<Result<_, _>>()?
        };
        let mut blocks = Vec::new();
        for (i, part) in parts.enumerate() {
            let prefix = format!("B{}=(", i + 1);
            let body = part.strip_prefix(&prefix).and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
            let mut raw = Vec::new();
            for item in body.split(',') {
                let (e, l) = item.split_once(':').ok_or_else(bad)?;
                raw.push((e.parse().map_err(|_| bad())?, l.parse::<i64>().map_err(|_| bad())?));
            }
            blocks.push(raw);
        }
        let n = zero.len() + blocks.iter().map(Vec::len).sum::<usize>();
        let g = Self::new(n, modulus, zero, blocks)?;
        if g.key() != key {
            return Err(bad());
        }
        Ok(g)
    }

    /// All elements covering `self` in `Q_n(modulus)`.
    ///
    /// Each nonzero block can be merged into the zero block, and each pair
    /// of nonzero blocks can be merged in `modulus` ways (the second block is
    /// shifted by `g` before the union).
    pub fn merges(&self) -> Vec<GPartition> {
        let mut out = BTreeSet::new();
        for i in 0..self.blocks.len() {
            let mut zero = self.zero.clone();
            zero.extend_from_slice(&self.blocks[i].support);
            zero.sort_unstable();
            let mut blocks = self.blocks.clone();
            blocks.remove(i);
            out.insert(Self::from_canonical(self.n, self.modulus, zero, blocks));
        }
        for i in 0..self.blocks.len() {
            for j in (i + 1)..self.blocks.len() {
                for g in 0..self.modulus {
                    out.insert(self.merge_pair(i, j, g));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Merges blocks `i < j`, shifting the labels of block `j` by `g`.
    pub(crate) fn merge_pair(&self, i: usize, j: usize, g: u32) -> GPartition {
        let (a, b) = (&self.blocks[i], &self.blocks[j]);
        let mut pairs: Vec<(usize, u32)> = a
            .support
            .iter()
            .copied()
            .zip(a.labels.iter().copied())
            .chain(b.support.iter().copied().zip(b.labels.iter().map(|&l| (l + g) % self.modulus)))
            .collect();
        pairs.sort_unstable();
        let merged = Block {
            support: pairs.iter().map(|p| p.0).collect(),
            labels: pairs.iter().map(|p| p.1).collect(),
        };
        let mut blocks: Vec<Block> = self
            .blocks
            .iter()
            .enumerate()
            .filter(|&(t, _)| t != i && t != j)
            .map(|(_, b)| b.clone())
            .collect();
        blocks.push(merged);
        blocks.sort_unstable_by_key(Block::first);
        Self::from_canonical(self.n, self.modulus, self.zero.clone(), blocks)
    }

    /// The order of `Q_n(modulus)`: `self ≤ other` iff `other` is reachable
    /// from `self` by merges.
    pub fn leq(&self, other: &GPartition) -> bool {
        if self.n != other.n || self.modulus != other.modulus {
            return false;
        }
        let slots = other.slots();
        if self.zero.iter().any(|&e| slots[e] != Slot::Zero) {
            return false;
        }
        self.blocks.iter().all(|b| match slots[b.support[0]] {
            Slot::Zero => b.support.iter().all(|&e| slots[e] == Slot::Zero),
            Slot::Block(target, base) => {
                b.support.iter().zip(&b.labels).all(|(&e, &l)| match slots[e] {
                    Slot::Block(t, lab) => {
                        t == target && (lab + self.modulus - base) % self.modulus == l
                    }
                    Slot::Zero => false,
                })
            }
        })
    }

    /// Least upper bound in `Q_n(modulus)`.
    ///
    /// Label constraints from both sides are collected in a union–find with
    /// offsets; a component with inconsistent offsets, or touching a zero
    /// block, collapses into the zero block.
    pub fn join(&self, other: &GPartition) -> GPartition {
        assert_eq!((self.n, self.modulus), (other.n, other.modulus), "join across different lattices");
        let m = self.modulus;
        let n = self.n;
        let mut parent: Vec<usize> = (0..=n).collect();
        let mut offset = vec![0u32; n + 1]; // label(e) - label(parent(e))
        let mut dead = vec![false; n + 1];

        fn find(parent: &mut [usize], offset: &mut [u32], m: u32, e: usize) -> (usize, u32) {
            let p = parent[e];
            if p == e {
                return (e, 0);
            }
            let (root, off_p) = find(parent, offset, m, p);
            parent[e] = root;
            offset[e] = (offset[e] + off_p) % m;
            (root, offset[e])
        }

        for x in [self, other] {
            for &e in &x.zero {
                let (r, _) = find(&mut parent, &mut offset, m, e);
                dead[r] = true;
            }
            for b in &x.blocks {
                let a0 = b.support[0];
                for (&e, &l) in b.support.iter().zip(&b.labels).skip(1) {
                    let (ra, pa) = find(&mut parent, &mut offset, m, a0);
                    let (rb, pb) = find(&mut parent, &mut offset, m, e);
                    // want label(e) - label(a0) = l
                    if ra == rb {
                        if (pb + m - pa) % m != l {
                            dead[ra] = true;
                        }
                    } else {
                        parent[rb] = ra;
                        offset[rb] = (pa + l + m - pb) % m;
                        dead[ra] |= dead[rb];
                    }
                }
            }
        }

        let mut zero = Vec::new();
        let mut groups: std::collections::BTreeMap<usize, Vec<(usize, i64)>> = Default::default();
        for e in 1..=n {
            let (r, off) = find(&mut parent, &mut offset, m, e);
            if dead[r] {
                zero.push(e);
            } else {
                groups.entry(r).or_default().push((e, i64::from(off)));
            }
        }
        Self::new(n, m, zero, groups.into_values().collect()).expect("join yields a partition")
    }

    /// The wreath-product action `(g; σ)·(i, a) = (σ(i), g_{σ(i)} + a)`.
    ///
    /// `sigma[i - 1] = σ(i)` and `g[j - 1] = g_j`, both 1-based in value.
    pub fn act(&self, g: &[u32], sigma: &[usize]) -> GPartition {
        assert_eq!(g.len(), self.n);
        assert_eq!(sigma.len(), self.n);
        let zero = self.zero.iter().map(|&e| sigma[e - 1]).collect::<Vec<_>>();
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.support
                    .iter()
                    .zip(&b.labels)
                    .map(|(&e, &l)| {
                        let t = sigma[e - 1];
                        (t, i64::from(g[t - 1]) + i64::from(l))
                    })
                    .collect()
            })
            .collect();
        Self::new(self.n, self.modulus, zero, blocks).expect("a permutation maps partitions to partitions")
    }
}

impl fmt::Display for GPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I={{")?;
        for (i, e) in self.zero.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")?;
        for (bi, b) in self.blocks.iter().enumerate() {
            write!(f, "|B{}=(", bi + 1)?;
            for (i, (e, l)) in b.support.iter().zip(&b.labels).enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}:{l}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_shift() {
        let g = GPartition::new(2, 6, [], vec![vec![(1, 3), (2, 5)]]).unwrap();
        assert_eq!(g.blocks()[0].labels, vec![0, 2]);
        let g = GPartition::new(3, 5, [3], vec![vec![(1, 4)], vec![(2, 1)]]).unwrap();
        assert_eq!(g.blocks()[0].labels, vec![0]);
        assert_eq!(g.key(), "I={3}|B1=(1:0)|B2=(2:0)");
    }

    #[test]
    fn equivalent_prepartitions_agree() {
        let a = GPartition::new(4, 3, [4], vec![vec![(3, 1), (1, 2)], vec![(2, 0)]]).unwrap();
        let b = GPartition::new(4, 3, [4], vec![vec![(2, 2)], vec![(1, 0), (3, 2)]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn not_a_partition() {
        assert!(GPartition::new(3, 2, [1], vec![vec![(2, 0)]]).is_err());
        assert!(GPartition::new(2, 2, [1], vec![vec![(1, 0), (2, 0)]]).is_err());
        assert!(GPartition::new(2, 2, [1, 2], vec![vec![]]).is_err());
    }

    #[test]
    fn key_round_trip() {
        let g = GPartition::new(8, 2, [3, 5], vec![vec![(1, 0), (4, 1), (6, 0)], vec![(2, 1), (7, 0), (8, 0)]])
            .unwrap();
        assert_eq!(g.key(), "I={3,5}|B1=(1:0,4:1,6:0)|B2=(2:0,7:1,8:1)");
        assert_eq!(GPartition::parse_key(&g.key(), 2).unwrap(), g);
        assert!(GPartition::parse_key("I={1}|B1=(2:1)", 2).is_err());
    }

    #[test]
    fn merges_of_q2_bottom() {
        let covers = GPartition::bottom(2, 2).merges();
        assert_eq!(covers.len(), 4);
        let zero_merges = covers.iter().filter(|c| c.zero_block().len() == 1).count();
        assert_eq!(zero_merges, 2);
    }

    #[test]
    fn single_block_has_one_cover() {
        let g = GPartition::new(2, 3, [], vec![vec![(1, 0), (2, 1)]]).unwrap();
        assert_eq!(g.merges(), vec![GPartition::top(2, 3)]);
        assert!(GPartition::top(2, 3).merges().is_empty());
    }

    #[test]
    fn order_examples() {
        let bot = GPartition::bottom(2, 2);
        let covers = bot.merges();
        for c in &covers {
            assert!(bot.leq(c));
        }
        for a in &covers {
            for b in &covers {
                assert_eq!(a.leq(b), a == b);
            }
        }
    }

    #[test]
    fn join_collapses_unbalanced_cycle() {
        let a = GPartition::new(2, 2, [], vec![vec![(1, 0), (2, 0)]]).unwrap();
        let b = GPartition::new(2, 2, [], vec![vec![(1, 0), (2, 1)]]).unwrap();
        assert_eq!(a.join(&b), GPartition::top(2, 2));
        assert_eq!(a.join(&a), a);
    }

    #[test]
    fn identity_action_and_bottom_invariance() {
        let x = GPartition::new(3, 4, [2], vec![vec![(1, 0), (3, 3)]]).unwrap();
        assert_eq!(x.act(&[0, 0, 0], &[1, 2, 3]), x);
        let bot = GPartition::bottom(3, 4);
        assert_eq!(bot.act(&[1, 2, 3], &[2, 3, 1]), bot);
    }

    #[test]
    fn swap_fixes_merged_pair() {
        let x = GPartition::new(2, 2, [], vec![vec![(1, 0), (2, 1)]]).unwrap();
        assert_eq!(x.act(&[0, 0], &[2, 1]), x);
    }

    #[test]
    fn even_colouring() {
        let b = Block { support: vec![1, 2, 3, 4], labels: vec![0, 1, 3, 2] };
        assert!(b.is_evenly_coloured(2));
        let b = Block { support: vec![1, 2], labels: vec![0, 2] };
        assert!(!b.is_evenly_coloured(2));
    }
}
