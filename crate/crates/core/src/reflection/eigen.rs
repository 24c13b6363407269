use std::collections::HashMap;

use super::{enumerate_coset, CosetKind, CosetParams, MonomialMap, ReflectionError, RootExp};
use crate::dowling::{FamilySpec, GPartition};
use crate::poset::FinitePoset;

/// The `ζ`-eigenspace of `x`, encoded as a G-partition over `x.modulus`.
///
/// A cycle `(j_1 … j_k)` of `σ` carries a one-dimensional space of
/// solutions exactly when `ζ^k` equals the product of the `Ω` along the
/// cycle; its coordinates are `z_{j_s} = ρ^{γ(j_s)} z_{j_1}` with
/// `γ(j_{s+1}) = γ(j_s) + Ω_{j_{s+1}} − ζ` on exponents. Other cycles are
/// forced to zero.
pub fn eigenspace(x: &MonomialMap, zeta: RootExp) -> Result<GPartition, ReflectionError> {
    let l = x.modulus;
    let z = zeta.lift(l).ok_or(ReflectionError::IncompatibleModulus(zeta.modulus(), l))?.num();
    let n = x.n();
    let mut seen = vec![false; n];
    let mut zero = Vec::new();
    let mut blocks = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            cycle.push(j);
            j = x.sigma[j];
        }
        let total: u64 = cycle.iter().map(|&j| x.diag[j]).sum::<u64>() % l;
        if total != (cycle.len() as u64 * z) % l {
            zero.extend(cycle.iter().map(|&j| j + 1));
            continue;
        }
        let mut label = 0i64;
        let mut block = vec![(cycle[0] + 1, 0i64)];
        for &j in &cycle[1..] {
            label = (label + x.diag[j] as i64 - z as i64).rem_euclid(l as i64);
            block.push((j + 1, label));
        }
        blocks.push(block);
    }
    Ok(GPartition::new(n, l as u32, zero, blocks).expect("cycles partition the coordinates"))
}

/// The map `τ` into `Q_n(dr)`, checking that the image lies in `Q_n(dr,d,d)`.
pub fn tau(space: &GPartition, params: &CosetParams) -> Result<GPartition, ReflectionError> {
    let d = params.d() as usize;
    let target = FamilySpec { n: space.n(), r: space.modulus(), d, k: d, forbidden: Default::default() };
    if space.modulus() as u64 != params.modulus() || !target.admits(space) {
        return Err(ReflectionError::ColouringViolation(space.key()));
    }
    Ok(space.clone())
}

/// Whether every basis vector of `space` is a `ζ`-eigenvector of `x`,
/// i.e. whether `space ⊆ V(x, ζ)`.
///
/// Works on the basis directly: each block contributes the vector whose
/// coordinates are `ρ^{label}` on the block and zero elsewhere.
pub fn space_within(space: &GPartition, x: &MonomialMap, zeta: RootExp) -> bool {
    let l = x.modulus;
    let Some(z) = zeta.lift(l) else { return false };
    let z = z.num();
    let n = x.n();
    space.blocks().iter().all(|b| {
        let mut v: Vec<Option<u64>> = vec![None; n];
        for (&e, &lab) in b.support.iter().zip(&b.labels) {
            v[e - 1] = Some(lab as u64);
        }
        let xv = x.apply(&v);
        (0..n).all(|j| xv[j] == v[j].map(|a| (a + z) % l))
    })
}

/// The poset of distinct `ζ`-eigenspaces of a coset under reverse inclusion.
#[derive(Debug, Clone)]
pub struct EigenPoset {
    pub params: CosetParams,
    /// Eigenspaces sorted by key; index `i` is element `i` of `poset`.
    pub spaces: Vec<GPartition>,
    /// For each space, the first coset element realising it.
    pub witnesses: Vec<MonomialMap>,
    pub poset: FinitePoset,
}

/// Builds `S_ζ(γG(r,p,n))`.
///
/// The order is computed from the linear algebra (`V(y) ⊆ V(x)` tested on
/// a basis of `V(y)` against a map realising `V(x)`), not from the
/// combinatorics of G-partitions.
pub fn build_eigenposet(params: &CosetParams) -> Result<EigenPoset, ReflectionError> {
    params.validate()?;
    if let CosetKind::Exceptional(_) = params.kind {
        return Err(ReflectionError::ExceptionalCosetUnsupported);
    }
    let zeta = params.zeta();
    let mut first: HashMap<GPartition, MonomialMap> = HashMap::new();
    for x in enumerate_coset(params)? {
        let v = eigenspace(&x, zeta)?;
        first.entry(v).or_insert(x);
    }
    let mut pairs: Vec<(GPartition, MonomialMap)> = first.into_iter().collect();
    pairs.sort_by_cached_key(|(g, _)| g.key());
    let (spaces, witnesses): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let poset = FinitePoset::from_order_fn(spaces.iter().map(GPartition::key), |a, b| {
        space_within(&spaces[b], &witnesses[a], zeta)
    })
    .expect("reverse inclusion is a partial order");
    Ok(EigenPoset { params: *params, spaces, witnesses, poset })
}
