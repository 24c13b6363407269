//! Finite posets given by their covering relation.
//!
//! A [`FinitePoset`] stores the Hasse diagram together with up-set and
//! down-set bitsets for every element, so `leq` is a single bit test and
//! intervals are cheap to extract. Möbius functions are computed row by row
//! and memoized; [`FinitePoset::mobius_via_chains`] is an independent chain
//! counting route kept around as an oracle.

mod complex;
mod iso;
mod json;

pub use complex::{BettiVector, OrderComplex};
pub use iso::{is_order_isomorphism, IsoOutcome, DEFAULT_ISO_BUDGET};
pub use json::PosetJson;

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Errors raised by poset construction and order queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("cover relation contains a cycle")]
    CycleDetected,
    #[error("duplicate element key `{0}`")]
    DuplicateKey(String),
    #[error("element index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("elements {0} and {1} are not comparable as x <= y")]
    NotComparable(usize, usize),
    #[error("poset has no unique minimum and maximum")]
    NotBounded,
    #[error("rank function is inconsistent with the cover {0} -> {1}")]
    RankMismatch(usize, usize),
    #[error("unknown element key `{0}`")]
    UnknownKey(String),
}

/// An immutable finite poset.
///
/// Element `i` carries the key `keys()[i]`. The stored cover relation is
/// always the transitive reduction of whatever relation was supplied.
pub struct FinitePoset {
    keys: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    topo: Vec<usize>,
    upset: Vec<FixedBitSet>,
    downset: Vec<FixedBitSet>,
    rank: Option<Vec<usize>>,
    mobius_rows: Vec<OnceLock<Vec<i64>>>,
}

impl std::fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FinitePoset")
            .field("len", &self.len())
            .field("covers", &self.cover_count())
            .finish()
    }
}

impl Clone for FinitePoset {
    fn clone(&self) -> Self {
        Self {
            keys: self.keys.clone(),
            index: self.index.clone(),
            up: self.up.clone(),
            down: self.down.clone(),
            topo: self.topo.clone(),
            upset: self.upset.clone(),
            downset: self.downset.clone(),
            rank: self.rank.clone(),
            mobius_rows: (0..self.len()).map(|_| OnceLock::new()).collect(),
        }
    }
}

impl FinitePoset {
    /// Builds a poset from keys and a generating relation `(lower, upper)`.
    ///
    /// The pairs need not be covers: the stored relation is the transitive
    /// reduction of their transitive closure.
    pub fn from_covers<S: Into<String>>(
        keys: impl IntoIterator<Item = S>,
        cover_pairs: &[(usize, usize)],
    ) -> Result<Self, PosetError> {
        let keys: Vec<String> = keys.into_iter().map(Into::into).collect();
        let n = keys.len();
        let mut index = HashMap::with_capacity(n);
        for (i, k) in keys.iter().enumerate() {
            if index.insert(k.clone(), i).is_some() {
                return Err(PosetError::DuplicateKey(k.clone()));
            }
        }

        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in cover_pairs {
            if a >= n {
                return Err(PosetError::IndexOutOfRange(a));
            }
            if b >= n {
                return Err(PosetError::IndexOutOfRange(b));
            }
            if a == b {
                return Err(PosetError::CycleDetected);
            }
            succ[a].push(b);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }

        // Kahn's algorithm; smallest index first keeps the order deterministic.
        let mut indeg = vec![0usize; n];
        for s in &succ {
            for &b in s {
                indeg[b] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(a) = queue.pop_front() {
            topo.push(a);
            for &b in &succ[a] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    queue.push_back(b);
                }
            }
        }
        if topo.len() != n {
            return Err(PosetError::CycleDetected);
        }

        let mut upset = vec![FixedBitSet::with_capacity(n); n];
        for &a in topo.iter().rev() {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert(a);
            for &b in &succ[a] {
                row.union_with(&upset[b]);
            }
            upset[a] = row;
        }

        let mut up = vec![Vec::new(); n];
        for a in 0..n {
            let mut reach_above = FixedBitSet::with_capacity(n);
            for &b in &succ[a] {
                let mut strict = upset[b].clone();
                strict.set(b, false);
                reach_above.union_with(&strict);
            }
            up[a] = succ[a]
                .iter()
                .copied()
                .filter(|&b| !reach_above.contains(b))
                .collect();
        }
        Ok(Self::assemble(keys, index, up, topo, upset))
    }

    /// Builds a poset from an explicit order predicate `leq(i, j)`.
    ///
    /// The predicate must describe a partial order; it is evaluated on all
    /// ordered pairs, so this is meant for posets of moderate size.
    pub fn from_order_fn<S: Into<String>>(
        keys: impl IntoIterator<Item = S>,
        mut leq: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, PosetError> {
        let keys: Vec<String> = keys.into_iter().map(Into::into).collect();
        let n = keys.len();
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && leq(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Self::from_covers(keys, &pairs)
    }

    fn assemble(
        keys: Vec<String>,
        index: HashMap<String, usize>,
        up: Vec<Vec<usize>>,
        topo: Vec<usize>,
        upset: Vec<FixedBitSet>,
    ) -> Self {
        let n = keys.len();
        let mut down = vec![Vec::new(); n];
        for (a, ups) in up.iter().enumerate() {
            for &b in ups {
                down[b].push(a);
            }
        }
        let mut downset = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in upset[a].ones() {
                downset[b].insert(a);
            }
        }
        Self {
            keys,
            index,
            up,
            down,
            topo,
            upset,
            downset,
            rank: None,
            mobius_rows: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    /// Attaches a rank function, checking that every cover raises it by one.
    pub fn with_rank(mut self, rank: Vec<usize>) -> Result<Self, PosetError> {
        if rank.len() != self.len() {
            return Err(PosetError::IndexOutOfRange(rank.len()));
        }
        for a in 0..self.len() {
            for &b in &self.up[a] {
                if rank[b] != rank[a] + 1 {
                    return Err(PosetError::RankMismatch(a, b));
                }
            }
        }
        self.rank = Some(rank);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn key(&self, x: usize) -> &str {
        &self.keys[x]
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Elements covering `x`.
    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.up[x]
    }

    /// Elements covered by `x`.
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.down[x]
    }

    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.cover_count());
        for (a, ups) in self.up.iter().enumerate() {
            out.extend(ups.iter().map(|&b| (a, b)));
        }
        out
    }

    pub fn cover_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// A linear extension of the order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn rank_function(&self) -> Option<&[usize]> {
        self.rank.as_deref()
    }

    /// The set `{y : x <= y}`.
    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.upset[x]
    }

    /// The set `{y : y <= x}`.
    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.downset[x]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.upset[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.down[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.up[x].is_empty()).collect()
    }

    /// The unique minimum, if there is one.
    pub fn bottom(&self) -> Option<usize> {
        match self.minimal_elements().as_slice() {
            [b] => Some(*b),
            _ => None,
        }
    }

    /// The unique maximum, if there is one.
    pub fn top(&self) -> Option<usize> {
        match self.maximal_elements().as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.bottom().is_some() && self.top().is_some()
    }

    /// Atoms: covers of the unique minimum (empty if there is none).
    pub fn atoms(&self) -> Vec<usize> {
        self.bottom().map(|b| self.up[b].clone()).unwrap_or_default()
    }

    /// Coatoms: elements covered by the unique maximum.
    pub fn coatoms(&self) -> Vec<usize> {
        self.top().map(|t| self.down[t].clone()).unwrap_or_default()
    }

    /// Longest chain length from a minimal element to each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        for &a in &self.topo {
            for &b in &self.up[a] {
                h[b] = h[b].max(h[a] + 1);
            }
        }
        h
    }

    /// Longest chain length from each element to a maximal element.
    pub fn depths(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        for &a in self.topo.iter().rev() {
            for &b in &self.up[a] {
                h[a] = h[a].max(h[b] + 1);
            }
        }
        h
    }

    /// Length of the longest chain (number of elements minus one).
    pub fn length(&self) -> Option<usize> {
        self.heights().into_iter().max()
    }

    /// Returns the rank function if every maximal chain has the same length.
    pub fn grading(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut lo: Vec<usize> =
            (0..n).map(|x| if self.down[x].is_empty() { 0 } else { usize::MAX }).collect();
        let mut hi = vec![0usize; n];
        for &a in &self.topo {
            for &b in &self.up[a] {
                lo[b] = lo[b].min(lo[a] + 1);
                hi[b] = hi[b].max(hi[a] + 1);
            }
        }
        if lo != hi {
            return None;
        }
        let tops: Vec<usize> = self.maximal_elements().iter().map(|&m| hi[m]).collect();
        if tops.windows(2).any(|w| w[0] != w[1]) {
            return None;
        }
        Some(hi)
    }

    /// Whether all maximal chains have the same length.
    pub fn is_pure(&self) -> bool {
        self.grading().is_some()
    }

    /// The least upper bound of `x` and `y`, if it exists.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let mut common = self.upset[x].clone();
        common.intersect_with(&self.upset[y]);
        self.least_of(&common)
    }

    /// The greatest lower bound of `x` and `y`, if it exists.
    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        let mut common = self.downset[x].clone();
        common.intersect_with(&self.downset[y]);
        let candidate = common.ones().find(|&z| {
            let mut above = self.upset[z].clone();
            above.intersect_with(&common);
            above.count_ones(..) == 1
        })?;
        common.is_subset(&self.downset[candidate]).then_some(candidate)
    }

    fn least_of(&self, set: &FixedBitSet) -> Option<usize> {
        let candidate = set.ones().find(|&z| {
            let mut below = self.downset[z].clone();
            below.intersect_with(set);
            below.count_ones(..) == 1
        })?;
        set.is_subset(&self.upset[candidate]).then_some(candidate)
    }

    /// Bounded and every pair has a join.
    pub fn is_lattice(&self) -> bool {
        if self.is_empty() || !self.is_bounded() {
            return false;
        }
        let heights = self.heights();
        for x in 0..self.len() {
            for y in (x + 1)..self.len() {
                if self.comparable(x, y) {
                    continue;
                }
                let mut common = self.upset[x].clone();
                common.intersect_with(&self.upset[y]);
                let Some(z) = common.ones().min_by_key(|&z| heights[z]) else {
                    return false;
                };
                if !common.is_subset(&self.upset[z]) {
                    return false;
                }
            }
        }
        true
    }

    /// The subposet induced on `members` (any subset, not necessarily convex).
    pub fn induced(&self, members: &[usize]) -> FinitePoset {
        let n = self.len();
        let mut mask = FixedBitSet::with_capacity(n);
        for &m in members {
            mask.insert(m);
        }
        let members: Vec<usize> = mask.ones().collect();
        let local: HashMap<usize, usize> =
            members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut pairs = Vec::new();
        for &a in &members {
            let mut strict = self.upset[a].clone();
            strict.intersect_with(&mask);
            strict.set(a, false);
            for b in strict.ones() {
                let mut between = self.downset[b].clone();
                between.intersect_with(&strict);
                if between.count_ones(..) == 1 {
                    pairs.push((local[&a], local[&b]));
                }
            }
        }
        let keys: Vec<String> = members.iter().map(|&m| self.keys[m].clone()).collect();
        let induced = FinitePoset::from_covers(keys, &pairs)
            .expect("induced subposet of a poset is acyclic with distinct keys");
        match &self.rank {
            Some(rank) => {
                let sub: Vec<usize> = members.iter().map(|&m| rank[m]).collect();
                let base = sub.iter().copied().min().unwrap_or(0);
                let shifted: Vec<usize> = sub.iter().map(|r| r - base).collect();
                let plain = induced.clone();
                induced.with_rank(shifted).unwrap_or(plain)
            }
            None => induced,
        }
    }

    /// The closed interval `[x, y]`.
    pub fn interval(&self, x: usize, y: usize) -> Result<FinitePoset, PosetError> {
        self.check_index(x)?;
        self.check_index(y)?;
        if !self.leq(x, y) {
            return Err(PosetError::NotComparable(x, y));
        }
        let mut set = self.upset[x].clone();
        set.intersect_with(&self.downset[y]);
        let members: Vec<usize> = set.ones().collect();
        Ok(self.induced(&members))
    }

    /// Adds a new minimum below everything and a new maximum above everything.
    pub fn adjoin_bounds(&self) -> FinitePoset {
        let fresh = |base: &str| {
            let mut k = base.to_string();
            while self.index.contains_key(&k) {
                k.push('\'');
            }
            k
        };
        let bot_key = fresh("^0");
        let top_key = fresh("^1");
        let n = self.len();
        let mut keys = self.keys.clone();
        keys.push(bot_key);
        keys.push(top_key);
        let (bot, top) = (n, n + 1);
        let mut pairs = self.cover_pairs();
        for m in self.minimal_elements() {
            pairs.push((bot, m));
        }
        for m in self.maximal_elements() {
            pairs.push((m, top));
        }
        pairs.push((bot, top));
        let out = FinitePoset::from_covers(keys, &pairs).expect("adjoining bounds keeps acyclicity");
        match &self.rank {
            Some(rank) => {
                let top_rank = rank.iter().copied().max().map_or(1, |m| m + 2);
                let mut r: Vec<usize> = rank.iter().map(|x| x + 1).collect();
                r.push(0);
                r.push(top_rank);
                let plain = out.clone();
                out.with_rank(r).unwrap_or(plain)
            }
            None => out,
        }
    }

    /// Removes the unique minimum and maximum.
    pub fn proper_part(&self) -> Result<FinitePoset, PosetError> {
        let (Some(b), Some(t)) = (self.bottom(), self.top()) else {
            return Err(PosetError::NotBounded);
        };
        let members: Vec<usize> = (0..self.len()).filter(|&x| x != b && x != t).collect();
        Ok(self.induced(&members))
    }

    /// Removes the given elements.
    pub fn without(&self, drop: &[usize]) -> FinitePoset {
        let members: Vec<usize> = (0..self.len()).filter(|x| !drop.contains(x)).collect();
        self.induced(&members)
    }

    fn check_index(&self, x: usize) -> Result<(), PosetError> {
        if x < self.len() {
            Ok(())
        } else {
            Err(PosetError::IndexOutOfRange(x))
        }
    }

    /// `μ(x, y)`, or [`PosetError::NotComparable`] unless `x <= y`.
    pub fn mobius(&self, x: usize, y: usize) -> Result<i64, PosetError> {
        self.check_index(x)?;
        self.check_index(y)?;
        if !self.leq(x, y) {
            return Err(PosetError::NotComparable(x, y));
        }
        Ok(self.mobius_row(x)[y])
    }

    /// `μ(x, y)` extended by zero to non-comparable pairs.
    pub fn mobius_or_zero(&self, x: usize, y: usize) -> i64 {
        if self.leq(x, y) {
            self.mobius_row(x)[y]
        } else {
            0
        }
    }

    /// `μ(0̂, 1̂)` of a bounded poset.
    pub fn mobius_bounded(&self) -> Result<i64, PosetError> {
        let (Some(b), Some(t)) = (self.bottom(), self.top()) else {
            return Err(PosetError::NotBounded);
        };
        self.mobius(b, t)
    }

    /// `μ(x, ·)` over all elements; zero off the up-set of `x`.
    pub fn mobius_row(&self, x: usize) -> &[i64] {
        self.mobius_rows[x].get_or_init(|| {
            let mut row = vec![0i64; self.len()];
            row[x] = 1;
            let above = &self.upset[x];
            for &z in &self.topo {
                if z == x || !above.contains(z) {
                    continue;
                }
                let mut between = above.clone();
                between.intersect_with(&self.downset[z]);
                let s: i64 = between.ones().filter(|&w| w != z).map(|w| row[w]).sum();
                row[z] = -s;
            }
            row
        })
    }

    /// `μ(x, y)` by Philip Hall's theorem: the alternating count of chains
    /// `x = z_0 < z_1 < … < z_k = y`.
    pub fn mobius_via_chains(&self, x: usize, y: usize) -> Result<i64, PosetError> {
        self.check_index(x)?;
        self.check_index(y)?;
        if !self.leq(x, y) {
            return Err(PosetError::NotComparable(x, y));
        }
        Ok(self.chain_mobius_row(x)[y])
    }

    /// All values `μ(x, ·)` computed through chain counts.
    pub fn chain_mobius_row(&self, x: usize) -> Vec<i64> {
        let n = self.len();
        let members: Vec<usize> = self.topo.iter().copied().filter(|&z| self.leq(x, z)).collect();
        // counts[z] holds chains from x to z of the current length
        let mut counts = vec![0i128; n];
        counts[x] = 1;
        let mut total = vec![0i128; n];
        total[x] = 1;
        let mut sign = 1i128;
        loop {
            let mut next = vec![0i128; n];
            let mut any = false;
            for &w in &members {
                if counts[w] == 0 {
                    continue;
                }
                for z in self.upset[w].ones() {
                    if z != w {
                        next[z] += counts[w];
                        any = true;
                    }
                }
            }
            if !any {
                break;
            }
            sign = -sign;
            for &z in &members {
                total[z] += sign * next[z];
            }
            counts = next;
        }
        total.into_iter().map(|v| i64::try_from(v).expect("Möbius value fits in i64")).collect()
    }

    /// The order complex: every nonempty chain is a face.
    pub fn order_complex(&self) -> OrderComplex {
        OrderComplex::of(self)
    }

    /// Searches for an order isomorphism `self -> other` within `budget`
    /// search nodes.
    pub fn find_isomorphism(&self, other: &FinitePoset, budget: u64) -> IsoOutcome {
        iso::find_isomorphism(self, other, budget)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson::from_poset(self)
    }
}
