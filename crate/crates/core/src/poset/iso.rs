//! Order-isomorphism search by backtracking over cover-preserving maps.
//!
//! Elements are matched only to elements with the same invariant signature
//! (height, depth, cover degrees, up-set and down-set sizes). A partial map
//! is extended one element at a time, most-connected element first; a
//! candidate must reproduce exactly the cover and order relations to
//! already-mapped elements, so a complete map is an order isomorphism.

use std::collections::HashMap;

use super::FinitePoset;

pub const DEFAULT_ISO_BUDGET: u64 = 2_000_000;

/// Result of an isomorphism search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    /// `map[i]` is the image of element `i`.
    Found(Vec<usize>),
    NotIsomorphic,
    /// The node budget ran out before the search finished.
    Inconclusive,
}

impl IsoOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, IsoOutcome::Found(_))
    }
}

type Signature = (usize, usize, usize, usize, usize, usize);

fn signatures(p: &FinitePoset) -> Vec<Signature> {
    let h = p.heights();
    let d = p.depths();
    (0..p.len())
        .map(|x| {
            (
                h[x],
                d[x],
                p.upper_covers(x).len(),
                p.lower_covers(x).len(),
                p.up_set(x).count_ones(..),
                p.down_set(x).count_ones(..),
            )
        })
        .collect()
}

struct Search<'a> {
    p: &'a FinitePoset,
    q: &'a FinitePoset,
    sig_p: Vec<Signature>,
    by_sig: HashMap<Signature, Vec<usize>>,
    sig_q: Vec<Signature>,
    order: Vec<usize>,
    fwd: Vec<Option<usize>>,
    mapped: Vec<usize>,
    back: Vec<Option<usize>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn consistent(&self, u: usize, v: usize) -> bool {
        if self.sig_p[u] != self.sig_q[v] {
            return false;
        }
        let mapped_up_u: Vec<usize> =
            self.p.upper_covers(u).iter().filter_map(|&w| self.fwd[w]).collect();
        let mapped_down_u: Vec<usize> =
            self.p.lower_covers(u).iter().filter_map(|&w| self.fwd[w]).collect();
        let up_v = self.q.upper_covers(v);
        let down_v = self.q.lower_covers(v);
        if mapped_up_u.iter().any(|w| !up_v.contains(w))
            || mapped_down_u.iter().any(|w| !down_v.contains(w))
        {
            return false;
        }
        let mapped_up_v = up_v.iter().filter(|&&w| self.back[w].is_some()).count();
        let mapped_down_v = down_v.iter().filter(|&&w| self.back[w].is_some()).count();
        mapped_up_v == mapped_up_u.len()
            && mapped_down_v == mapped_down_u.len()
            && self.mapped.iter().all(|&w| {
                let img = self.fwd[w].expect("mapped");
                self.p.leq(w, u) == self.q.leq(img, v) && self.p.leq(u, w) == self.q.leq(v, img)
            })
    }

    fn candidates(&self, u: usize) -> Vec<usize> {
        // any mapped neighbour narrows candidates to the neighbours of its image
        if let Some(w) = self.p.lower_covers(u).iter().find_map(|&w| self.fwd[w]) {
            return self.q.upper_covers(w).to_vec();
        }
        if let Some(w) = self.p.upper_covers(u).iter().find_map(|&w| self.fwd[w]) {
            return self.q.lower_covers(w).to_vec();
        }
        self.by_sig.get(&self.sig_p[u]).cloned().unwrap_or_default()
    }

    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn extend(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let u = self.order[depth];
        for v in self.candidates(u) {
            if self.back[v].is_some() || !self.consistent(u, v) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.fwd[u] = Some(v);
            self.back[v] = Some(u);
            self.mapped.push(u);
            match self.extend(depth + 1) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.mapped.pop();
            self.fwd[u] = None;
            self.back[v] = None;
        }
        Some(false)
    }
}

/// Visit order: repeatedly the unvisited element with the most visited
/// cover neighbours, so candidates are narrowed as early as possible.
fn visit_order(p: &FinitePoset) -> Vec<usize> {
    let n = p.len();
    let heights = p.heights();
    let mut seen = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&x| !seen[x])
            .max_by_key(|&x| (links[x], std::cmp::Reverse(heights[x]), std::cmp::Reverse(x)))
            .expect("an unvisited element remains");
        seen[next] = true;
        order.push(next);
        for &y in p.upper_covers(next).iter().chain(p.lower_covers(next)) {
            links[y] += 1;
        }
    }
    order
}

pub(super) fn find_isomorphism(p: &FinitePoset, q: &FinitePoset, budget: u64) -> IsoOutcome {
    if p.len() != q.len() || p.cover_count() != q.cover_count() {
        return IsoOutcome::NotIsomorphic;
    }
    let sig_p = signatures(p);
    let sig_q = signatures(q);
    let mut a = sig_p.clone();
    let mut b = sig_q.clone();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return IsoOutcome::NotIsomorphic;
    }
    let mut by_sig: HashMap<Signature, Vec<usize>> = HashMap::new();
    for (v, s) in sig_q.iter().enumerate() {
        by_sig.entry(*s).or_default().push(v);
    }
    let mut search = Search {
        p,
        q,
        sig_p,
        by_sig,
        sig_q,
        order: visit_order(p),
        fwd: vec![None; p.len()],
        mapped: Vec::with_capacity(p.len()),
        back: vec![None; q.len()],
        nodes: 0,
        budget,
    };
    match search.extend(0) {
        Some(true) => IsoOutcome::Found(search.fwd.into_iter().map(Option::unwrap).collect()),
        Some(false) => IsoOutcome::NotIsomorphic,
        None => IsoOutcome::Inconclusive,
    }
}

/// Checks that `map` is an order isomorphism `p -> q`.
pub fn is_order_isomorphism(p: &FinitePoset, q: &FinitePoset, map: &[usize]) -> bool {
    if p.len() != q.len() || map.len() != p.len() {
        return false;
    }
    let mut hit = vec![false; q.len()];
    for &v in map {
        if v >= q.len() || std::mem::replace(&mut hit[v], true) {
            return false;
        }
    }
    (0..p.len()).all(|x| (0..p.len()).all(|y| p.leq(x, y) == q.leq(map[x], map[y])))
}
