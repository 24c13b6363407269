//! Recursive atom orderings: the lexicographic ordering of family posets,
//! a checker for a given ordering, and a search for one.
//!
//! All work happens on the bitset closure of the ambient bounded poset:
//! the upper interval `[x, 1̂]` has atoms `upper_covers(x)` and the up-set
//! of any of its elements is the same as in the ambient poset.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::dowling::{FamilyPoset, GPartition};
use crate::poset::FinitePoset;

pub const DEFAULT_SHELL_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShellError {
    #[error("poset is not bounded")]
    NotBounded,
    #[error("poset elements do not carry G-partitions")]
    NotAFamilyPoset,
    #[error("ordering is not a permutation of the atoms")]
    InvalidOrdering,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Lex,
    Supplied,
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomOrdering {
    pub order: Vec<usize>,
    pub provenance: Provenance,
}

/// The word of a G-partition: zero block ascending, then each nonzero
/// block (ascending) in order of minima.
pub fn word(g: &GPartition) -> Vec<usize> {
    let mut w = g.zero_block().to_vec();
    for b in g.blocks() {
        w.extend_from_slice(&b.support);
    }
    w
}

/// Orders the atoms of a family poset by word, then by zero block, then by
/// the list of `(support, labels)` blocks.
pub fn lex_atom_order(f: &FamilyPoset) -> Result<AtomOrdering, ShellError> {
    let p = f.poset();
    if !p.is_bounded() {
        return Err(ShellError::NotBounded);
    }
    let mut atoms = p.atoms();
    let mut keyed = Vec::with_capacity(atoms.len());
    for &a in &atoms {
        let g = f.element(a).ok_or(ShellError::NotAFamilyPoset)?;
        keyed.push((word(g), g.zero_block().to_vec(), g.blocks().to_vec(), a));
    }
    keyed.sort();
    atoms = keyed.into_iter().map(|t| t.3).collect();
    Ok(AtomOrdering { order: atoms, provenance: Provenance::Lex })
}

/// One recursion step: an ordering of the atoms of `[element, 1̂]` whose
/// prefix is `first_set`, with the sub-certificate of each atom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertNode {
    pub id: usize,
    pub element: String,
    pub first_set: Vec<String>,
    pub order: Vec<String>,
    pub children: Vec<usize>,
}

/// A recursive atom ordering as a DAG of [`CertNode`]s; node `root` covers
/// the whole poset. Shared sub-intervals appear once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub root: usize,
    pub nodes: Vec<CertNode>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialises")
    }

    /// Re-checks every node against `p`: each order lists the atoms of its
    /// interval with the first set as a prefix, condition (ii) holds, and
    /// each child certifies its atom with the right first set.
    pub fn verify(&self, p: &FinitePoset) -> bool {
        let idx = |k: &String| p.index_of(k);
        let Some(top) = p.top() else { return false };
        self.nodes.iter().enumerate().all(|(i, node)| {
            if node.id != i {
                return false;
            }
            let Some(x) = idx(&node.element) else { return false };
            let Some(order) = node.order.iter().map(idx).collect::<Option<Vec<_>>>() else { return false };
            let Some(first) = node.first_set.iter().map(idx).collect::<Option<Vec<_>>>() else { return false };
            let mut atoms = p.upper_covers(x).to_vec();
            let mut sorted = order.clone();
            atoms.sort_unstable();
            sorted.sort_unstable();
            if x == top || p.upper_covers(x) == [top] {
                return node.children.is_empty();
            }
            if atoms != sorted || node.children.len() != order.len() {
                return false;
            }
            let mut prefix: Vec<usize> = order[..first.len().min(order.len())].to_vec();
            let mut want = first.clone();
            prefix.sort_unstable();
            want.sort_unstable();
            if prefix != want {
                return false;
            }
            let mut earlier = FixedBitSet::with_capacity(p.len());
            order.iter().zip(&node.children).all(|(&a, &c)| {
                let f = first_set_of(p, a, &earlier);
                let ok = covering_condition(p, a, &earlier, &f).is_ok()
                    && self.nodes.get(c).is_some_and(|child| {
                        let mut got: Vec<Option<usize>> = child.first_set.iter().map(idx).collect();
                        got.sort_unstable();
                        let mut fs: Vec<Option<usize>> = f.iter().map(|&z| Some(z)).collect();
                        fs.sort_unstable();
                        child.element == p.key(a) && got == fs
                    });
                earlier.union_with(p.up_set(a));
                ok
            })
        })
    }
}

/// How an ordering fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Condition (ii): `y` lies above the earlier atom `earlier` and above
    /// `atom`, but above no atom of `[atom, 1̂]` that covers an earlier atom.
    Covering { earlier: String, atom: String, y: String },
    /// Condition (i): `[atom, 1̂]` has no recursive atom ordering starting
    /// with the required first set.
    NoSubordering { atom: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RaoOutcome {
    Certified(Certificate),
    Failed(Violation),
    Inconclusive,
}

impl RaoOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, RaoOutcome::Certified(_))
    }
}

/// Covers of `a` lying above an earlier atom.
fn first_set_of(p: &FinitePoset, a: usize, earlier: &FixedBitSet) -> Vec<usize> {
    p.upper_covers(a).iter().copied().filter(|&z| earlier.contains(z)).collect()
}

/// Condition (ii) for atom `a` given the union of earlier up-sets; on
/// failure returns an offending `y`.
fn covering_condition(p: &FinitePoset, a: usize, earlier: &FixedBitSet, first: &[usize]) -> Result<(), usize> {
    let mut need = p.up_set(a).clone();
    need.set(a, false);
    need.intersect_with(earlier);
    let mut have = FixedBitSet::with_capacity(p.len());
    for &z in first {
        have.union_with(p.up_set(z));
    }
    match need.difference(&have).next() {
        Some(y) => Err(y),
        None => Ok(()),
    }
}

struct Searcher<'a> {
    p: &'a FinitePoset,
    top: usize,
    memo: HashMap<(usize, Vec<usize>), Option<usize>>,
    nodes: Vec<CertNode>,
    steps: u64,
    budget: u64,
}

struct OutOfBudget;

impl Searcher<'_> {
    fn new(p: &FinitePoset, budget: u64) -> Searcher<'_> {
        Searcher { p, top: p.top().expect("bounded"), memo: HashMap::new(), nodes: Vec::new(), steps: 0, budget }
    }

    fn push_node(&mut self, x: usize, first: &[usize], order: &[usize], children: Vec<usize>) -> usize {
        let id = self.nodes.len();
        let key = |v: &[usize]| v.iter().map(|&i| self.p.key(i).to_string()).collect();
        self.nodes.push(CertNode {
            id,
            element: self.p.key(x).to_string(),
            first_set: key(first),
            order: key(order),
            children,
        });
        id
    }

    fn is_short(&self, x: usize) -> bool {
        x == self.top || self.p.upper_covers(x) == [self.top]
    }

    /// Certificate node for `[x, 1̂]` with atoms of `first` first, if any.
    fn solve(&mut self, x: usize, mut first: Vec<usize>) -> Result<Option<usize>, OutOfBudget> {
        first.sort_unstable();
        if let Some(&hit) = self.memo.get(&(x, first.clone())) {
            return Ok(hit);
        }
        let result = if self.is_short(x) {
            Some(self.push_node(x, &first, self.p.upper_covers(x), Vec::new()))
        } else {
            let atoms = self.p.upper_covers(x).to_vec();
            let rest: Vec<usize> = atoms.iter().copied().filter(|a| !first.contains(a)).collect();
            let mut order = Vec::with_capacity(atoms.len());
            let mut children = Vec::with_capacity(atoms.len());
            let earlier = FixedBitSet::with_capacity(self.p.len());
            if self.extend(&first, &rest, &mut order, &mut children, earlier)? {
                Some(self.push_node(x, &first, &order, children))
            } else {
                None
            }
        };
        self.memo.insert((x, first), result);
        Ok(result)
    }

    /// Backtracking over the next atom: members of `first` must all be
    /// placed before any member of `rest`.
    fn extend(
        &mut self,
        first: &[usize],
        rest: &[usize],
        order: &mut Vec<usize>,
        children: &mut Vec<usize>,
        earlier: FixedBitSet,
    ) -> Result<bool, OutOfBudget> {
        let placed_first = first.iter().filter(|a| order.contains(a)).count();
        let pool: Vec<usize> = if placed_first < first.len() {
            first.iter().copied().filter(|a| !order.contains(a)).collect()
        } else {
            rest.iter().copied().filter(|a| !order.contains(a)).collect()
        };
        if pool.is_empty() {
            return Ok(true);
        }
        for a in pool {
            self.steps += 1;
            if self.steps > self.budget {
                return Err(OutOfBudget);
            }
            let f = first_set_of(self.p, a, &earlier);
            if covering_condition(self.p, a, &earlier, &f).is_err() {
                continue;
            }
            let Some(child) = self.solve(a, f)? else { continue };
            let mut next = earlier.clone();
            next.union_with(self.p.up_set(a));
            order.push(a);
            children.push(child);
            if self.extend(first, rest, order, children, next)? {
                return Ok(true);
            }
            order.pop();
            children.pop();
        }
        Ok(false)
    }
}

/// Checks that `ord` is a recursive atom ordering of the bounded poset `p`.
///
/// Condition (ii) is checked directly; for condition (i) a suitable ordering
/// of each upper interval is searched for, within `budget` steps.
pub fn check_recursive_atom_ordering(
    p: &FinitePoset,
    ord: &AtomOrdering,
    budget: u64,
) -> Result<RaoOutcome, ShellError> {
    let (Some(bot), Some(_)) = (p.bottom(), p.top()) else { return Err(ShellError::NotBounded) };
    let mut atoms = p.atoms();
    let mut given = ord.order.clone();
    atoms.sort_unstable();
    given.sort_unstable();
    if atoms != given {
        return Err(ShellError::InvalidOrdering);
    }
    let mut s = Searcher::new(p, budget);
    if s.is_short(bot) {
        let root = s.push_node(bot, &[], &ord.order, Vec::new());
        return Ok(RaoOutcome::Certified(Certificate { root, nodes: s.nodes }));
    }
    let mut earlier = FixedBitSet::with_capacity(p.len());
    let mut children = Vec::with_capacity(ord.order.len());
    for &a in &ord.order {
        let f = first_set_of(p, a, &earlier);
        if let Err(y) = covering_condition(p, a, &earlier, &f) {
            let i = ord.order.iter().copied().find(|&b| p.leq(b, y) && earlier.contains(b)).expect("y is above an earlier atom");
            return Ok(RaoOutcome::Failed(Violation::Covering {
                earlier: p.key(i).to_string(),
                atom: p.key(a).to_string(),
                y: p.key(y).to_string(),
            }));
        }
        match s.solve(a, f) {
            Ok(Some(c)) => children.push(c),
            Ok(None) => return Ok(RaoOutcome::Failed(Violation::NoSubordering { atom: p.key(a).to_string() })),
            Err(OutOfBudget) => return Ok(RaoOutcome::Inconclusive),
        }
        earlier.union_with(p.up_set(a));
    }
    let root = s.push_node(bot, &[], &ord.order, children);
    Ok(RaoOutcome::Certified(Certificate { root, nodes: s.nodes }))
}

/// Searches for a recursive atom ordering of the bounded poset `p`.
pub fn admits_rao(p: &FinitePoset, budget: u64) -> Result<RaoOutcome, ShellError> {
    let (Some(bot), Some(_)) = (p.bottom(), p.top()) else { return Err(ShellError::NotBounded) };
    let mut s = Searcher::new(p, budget);
    match s.solve(bot, Vec::new()) {
        Ok(Some(root)) => Ok(RaoOutcome::Certified(Certificate { root, nodes: s.nodes })),
        Ok(None) => Ok(RaoOutcome::Failed(Violation::NoSubordering { atom: p.key(bot).to_string() })),
        Err(OutOfBudget) => Ok(RaoOutcome::Inconclusive),
    }
}

/// The ordering found by [`admits_rao`], if any.
pub fn search_atom_order(p: &FinitePoset, budget: u64) -> Result<Option<AtomOrdering>, ShellError> {
    Ok(match admits_rao(p, budget)? {
        RaoOutcome::Certified(c) => Some(AtomOrdering {
            order: c.nodes[c.root].order.iter().map(|k| p.index_of(k).unwrap()).collect(),
            provenance: Provenance::Search,
        }),
        _ => None,
    })
}
