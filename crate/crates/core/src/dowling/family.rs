use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use super::gpartition::{Block, GPartition, Slot};
use super::DowlingError;
use crate::poset::FinitePoset;

/// Key of the adjoined minimum in family posets.
pub const BOT_KEY: &str = "BOT";

/// Parameters of `Q_n(r,d,k,J)`.
///
/// `forbidden` is the set `J` of disallowed zero-block sizes. With
/// `d = k = 1` and `J = ∅` this is the Dowling lattice `Q_n(r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub n: usize,
    pub r: u32,
    pub d: usize,
    pub k: usize,
    pub forbidden: BTreeSet<usize>,
}

impl FamilySpec {
    pub fn new(
        n: usize,
        r: u32,
        d: usize,
        k: usize,
        forbidden: impl IntoIterator<Item = usize>,
    ) -> Result<Self, DowlingError> {
        let spec = Self { n, r, d, k, forbidden: forbidden.into_iter().collect() };
        spec.validate()?;
        Ok(spec)
    }

    /// `Q_n(r)`.
    pub fn dowling(n: usize, r: u32) -> Self {
        Self { n, r, d: 1, k: 1, forbidden: BTreeSet::new() }
    }

    pub fn validate(&self) -> Result<(), DowlingError> {
        let bad = |m: String| Err(DowlingError::InvalidSpec(m));
        if self.r == 0 || self.d == 0 || self.k == 0 {
            return bad("r, d and k must be positive".into());
        }
        if !(self.r as usize).is_multiple_of(self.k) {
            return bad(format!("k={} does not divide r={}", self.k, self.r));
        }
        if !self.d.is_multiple_of(self.k) {
            return bad(format!("k={} does not divide d={}", self.k, self.d));
        }
        if let Some(&j) = self.forbidden.iter().find(|&&j| j > self.n) {
            return bad(format!("forbidden size {j} exceeds n={}", self.n));
        }
        Ok(())
    }

    /// Whether the all-singletons minimum of `Q_n(r)` is excluded, so that
    /// an artificial minimum is adjoined.
    pub fn has_artificial_bottom(&self) -> bool {
        self.d > 1 || self.forbidden.contains(&0)
    }

    /// The largest number of nonzero blocks of a member, if any member exists.
    pub fn max_blocks(&self) -> Option<usize> {
        (0..=self.n)
            .filter(|i| !self.forbidden.contains(i) && (self.n - i).is_multiple_of(self.d))
            .map(|i| (self.n - i) / self.d)
            .max()
    }

    /// Whether `x` satisfies the divisibility, colouring and zero-size filters.
    pub fn admits(&self, x: &GPartition) -> bool {
        x.n() == self.n
            && x.modulus() == self.r
            && !self.forbidden.contains(&x.zero_block().len())
            && x.blocks().iter().all(|b| b.len() % self.d == 0 && b.is_evenly_coloured(self.k as u32))
    }

    /// Lists all members (the artificial minimum excluded), sorted by key.
    pub fn members(&self) -> Vec<GPartition> {
        let mut out = Vec::new();
        Enumerator::new(self).run(&mut |g| out.push(g));
        out.sort_by_cached_key(GPartition::key);
        out
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}({}", self.n, self.r)?;
        if self.d > 1 || self.k > 1 {
            write!(f, ",{}", self.d)?;
            if self.k > 1 {
                write!(f, ",{}", self.k)?;
            }
        }
        if !self.forbidden.is_empty() {
            let j: Vec<String> = self.forbidden.iter().map(usize::to_string).collect();
            write!(f, ",{{{}}}", j.join(","))?;
        }
        write!(f, ")")
    }
}

/// Depth-first generator of family members.
///
/// Elements are placed in increasing order: into the zero block, into an
/// open block with a chosen label, or as the minimum (label 0) of a new
/// block. Every canonical G-partition is produced exactly once.
struct Enumerator<'a> {
    spec: &'a FamilySpec,
    block_count: Option<usize>,
    ceiling: Option<Vec<Slot>>,
    zero: Vec<usize>,
    blocks: Vec<Block>,
}

impl<'a> Enumerator<'a> {
    fn new(spec: &'a FamilySpec) -> Self {
        Self { spec, block_count: None, ceiling: None, zero: Vec::new(), blocks: Vec::new() }
    }

    fn with_block_count(mut self, b: usize) -> Self {
        self.block_count = Some(b);
        self
    }

    fn below(mut self, c: &GPartition) -> Self {
        self.ceiling = Some(c.slots());
        self
    }

    fn run(&mut self, emit: &mut dyn FnMut(GPartition)) {
        self.place(1, emit);
    }

    /// Elements a block still needs to reach a size divisible by `d` with
    /// every colour class of equal size.
    fn block_need(&self, b: &Block) -> usize {
        let (d, k) = (self.spec.d, self.spec.k);
        let mut counts = vec![0usize; k];
        for &l in &b.labels {
            counts[l as usize % k] += 1;
        }
        let floor = (k * counts.iter().copied().max().unwrap_or(0)).max(b.len());
        floor.div_ceil(d) * d - b.len()
    }

    fn feasible(&self, remaining: usize) -> bool {
        let need: usize = self.blocks.iter().map(|b| self.block_need(b)).sum();
        let unopened = match self.block_count {
            Some(t) if self.blocks.len() > t => return false,
            Some(t) => (t - self.blocks.len()) * self.spec.d,
            None => 0,
        };
        need + unopened <= remaining
    }

    fn place(&mut self, e: usize, emit: &mut dyn FnMut(GPartition)) {
        let n = self.spec.n;
        if !self.feasible(n + 1 - e) {
            return;
        }
        if e > n {
            if self.spec.forbidden.contains(&self.zero.len())
                || self.block_count.is_some_and(|t| t != self.blocks.len())
            {
                return;
            }
            // feasibility with zero remaining already forces d-divisibility
            // and even colouring of every block
            emit(GPartition::from_canonical(n, self.spec.r, self.zero.clone(), self.blocks.clone()));
            return;
        }
        let slot = self.ceiling.as_ref().map(|c| c[e]);
        let m = self.spec.r;

        if matches!(slot, None | Some(Slot::Zero)) {
            self.zero.push(e);
            self.place(e + 1, emit);
            self.zero.pop();
        }

        for bi in 0..self.blocks.len() {
            let labels: Vec<u32> = match (&self.ceiling, slot) {
                (None, _) => (0..m).collect(),
                (Some(c), Some(Slot::Zero)) => match c[self.blocks[bi].first()] {
                    Slot::Zero => (0..m).collect(),
                    Slot::Block(..) => Vec::new(),
                },
                (Some(c), Some(Slot::Block(t, l))) => match c[self.blocks[bi].first()] {
                    Slot::Block(t0, l0) if t0 == t => vec![(l + m - l0) % m],
                    _ => Vec::new(),
                },
                (Some(_), None) => unreachable!(),
            };
            for l in labels {
                self.blocks[bi].support.push(e);
                self.blocks[bi].labels.push(l);
                self.place(e + 1, emit);
                self.blocks[bi].support.pop();
                self.blocks[bi].labels.pop();
            }
        }

        self.blocks.push(Block { support: vec![e], labels: vec![0] });
        self.place(e + 1, emit);
        self.blocks.pop();
    }
}

/// A family poset together with the G-partition behind each element.
#[derive(Debug, Clone)]
pub struct FamilyPoset {
    spec: FamilySpec,
    poset: FinitePoset,
    members: Vec<Option<GPartition>>,
}

impl FamilyPoset {
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn into_poset(self) -> FinitePoset {
        self.poset
    }

    /// The G-partition at index `i`; `None` for the artificial minimum.
    pub fn element(&self, i: usize) -> Option<&GPartition> {
        self.members[i].as_ref()
    }

    pub fn artificial_bottom(&self) -> Option<usize> {
        self.members.iter().position(Option::is_none)
    }

    pub fn index_of(&self, x: &GPartition) -> Option<usize> {
        self.poset.index_of(&x.key())
    }
}

/// Builds `Q_n(r,d,k,J)` as a finite poset.
///
/// Members are listed by the generator; covers come from a breadth-first
/// search through `Q_n(r)` merges that stops at the first members reached.
/// When the natural minimum is excluded an element keyed [`BOT_KEY`] is
/// placed below all minimal members. The rank function is attached when
/// it is consistent with the covers.
pub fn build_family(spec: &FamilySpec) -> Result<FamilyPoset, DowlingError> {
    spec.validate()?;
    let members = spec.members();
    let bot = spec.has_artificial_bottom();
    let offset = usize::from(bot);
    let index: HashMap<&GPartition, usize> =
        members.iter().enumerate().map(|(i, g)| (g, i + offset)).collect();
    let closed_upward = spec.forbidden.is_empty();

    let mut covers = Vec::new();
    let mut has_lower = vec![false; members.len() + offset];
    for (i, x) in members.iter().enumerate() {
        let found: Vec<&GPartition> = if closed_upward {
            // merges of members stay in the family when no sizes are forbidden
            x.merges().into_iter().map(|y| index.get_key_value(&y).expect("merge closure").0).copied().collect()
        } else {
            upward_members(x, &index)
        };
        for y in found {
            let j = index[y];
            covers.push((i + offset, j));
            has_lower[j] = true;
        }
    }
    if bot {
        for j in offset..has_lower.len() {
            if !has_lower[j] {
                covers.push((0, j));
            }
        }
    }

    let mut keys = Vec::with_capacity(members.len() + offset);
    if bot {
        keys.push(BOT_KEY.to_string());
    }
    keys.extend(members.iter().map(GPartition::key));
    let poset = FinitePoset::from_covers(keys, &covers).expect("merge order is acyclic");

    let poset = match ranks(spec, &members) {
        Some(r) => poset.clone().with_rank(r).unwrap_or(poset),
        None => poset,
    };
    let mut stored: Vec<Option<GPartition>> = Vec::with_capacity(members.len() + offset);
    if bot {
        stored.push(None);
    }
    stored.extend(members.into_iter().map(Some));
    Ok(FamilyPoset { spec: spec.clone(), poset, members: stored })
}

/// Minimal members strictly above `x`, reached through non-members.
fn upward_members<'a>(x: &GPartition, index: &HashMap<&'a GPartition, usize>) -> Vec<&'a GPartition> {
    let mut seen: HashSet<GPartition> = HashSet::new();
    let mut queue: VecDeque<GPartition> = x.merges().into();
    let mut hits: Vec<&GPartition> = Vec::new();
    while let Some(y) = queue.pop_front() {
        if !seen.insert(y.clone()) {
            continue;
        }
        if let Some((k, _)) = index.get_key_value(&y) {
            hits.push(k);
        } else {
            queue.extend(y.merges());
        }
    }
    let minimal: Vec<&GPartition> = hits
        .iter()
        .filter(|&&y| !hits.iter().any(|&z| z != y && z.leq(y)))
        .copied()
        .collect();
    minimal
}

fn ranks(spec: &FamilySpec, members: &[GPartition]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(members.len() + 1);
    if spec.has_artificial_bottom() {
        out.push(0);
    }
    for x in members {
        out.push(rank_of(x, spec).ok()?);
    }
    Some(out)
}

/// Rank of a member: `maxblocks − |π|`, plus one when the artificial
/// minimum is present. For `Q_n(r)` this is `n − |π|`.
pub fn rank_of(x: &GPartition, spec: &FamilySpec) -> Result<usize, DowlingError> {
    if !spec.admits(x) {
        return Err(DowlingError::NotInFamily(x.key()));
    }
    let top = spec.max_blocks().expect("a member exists");
    Ok(top - x.blocks().len() + usize::from(spec.has_artificial_bottom()))
}

/// Number of atoms of `build_family(spec)`, counted without building it:
/// the members with the largest block count (other than the natural
/// minimum when that is present).
pub fn count_atoms(spec: &FamilySpec) -> Result<u64, DowlingError> {
    spec.validate()?;
    let Some(top) = spec.max_blocks() else { return Ok(0) };
    let start = if spec.has_artificial_bottom() { top } else { top.saturating_sub(1) };
    if !spec.has_artificial_bottom() && top == 0 {
        return Ok(0);
    }
    for b in (0..=start).rev() {
        let mut count = 0u64;
        Enumerator::new(spec).with_block_count(b).run(&mut |_| count += 1);
        if count > 0 {
            return Ok(count);
        }
    }
    Ok(0)
}

/// The element `c_n` of `Q_{dn}(r,d,k)`: one block `{1, …, dn}` whose
/// labels split it into `k` consecutive runs of equal length.
pub fn distinguished_element(n: usize, d: usize, k: usize, r: u32) -> GPartition {
    let size = d * n;
    let block: Vec<(usize, i64)> = (1..=size).map(|i| (i, (((i - 1) * k) / size) as i64)).collect();
    let blocks = if size == 0 { Vec::new() } else { vec![block] };
    GPartition::new(size, r, [], blocks).expect("single block partition")
}

/// Number of minimal members of the family below `c`.
pub fn count_minimal_below(c: &GPartition, spec: &FamilySpec) -> Result<u64, DowlingError> {
    spec.validate()?;
    if c.n() != spec.n || c.modulus() != spec.r {
        return Err(DowlingError::NotInFamily(c.key()));
    }
    let mut best = 0usize;
    let mut count = 0u64;
    Enumerator::new(spec).below(c).run(&mut |g| {
        let b = g.blocks().len();
        if b > best {
            best = b;
            count = 0;
        }
        if b == best {
            count += 1;
        }
    });
    Ok(count)
}
