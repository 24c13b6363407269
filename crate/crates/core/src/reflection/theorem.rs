use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::{build_eigenposet, tau, CosetKind, CosetParams, EigenPoset, ReflectionError};
use crate::dowling::{build_family, FamilySpec};
use crate::poset::{FinitePoset, IsoOutcome, DEFAULT_ISO_BUDGET};

/// The six cases of the eigenspace/Dowling isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::I => "i",
            Case::II => "ii",
            Case::III => "iii",
            Case::IV => "iv",
            Case::V => "v",
            Case::VI => "vi",
        };
        f.write_str(s)
    }
}

/// Predicted shape of `S_ζ(γG)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub case: Case,
    /// Family whose members (artificial minimum excluded) are the τ images.
    pub target: FamilySpec,
    /// Human-readable target, e.g. `Q_4(2,2,2)∖{0̂}`.
    pub description: String,
}

/// `(ζ^n ξ_{er/p}^{-1})^{r/p} = 1`.
pub fn twist_condition(params: &CosetParams) -> bool {
    let l = params.modulus();
    let z = params.zeta().num();
    let xi = params.xi().num();
    let base = (params.n as u64 % l * z % l + l - xi) % l;
    (base * (params.r / params.p)).is_multiple_of(l)
}

/// Whether the full space is an eigenspace (then it is the unique minimum).
pub fn full_space_present(params: &CosetParams) -> bool {
    twist_condition(params) && params.d() == 1
}

pub fn classify_case(params: &CosetParams) -> Result<Prediction, ReflectionError> {
    params.validate()?;
    let n = params.n;
    let d = params.d();
    let (r, p) = (params.r, params.p);
    let l = params.modulus();
    let cond = twist_condition(params);
    let spec = |r: u64, d: u64, j: &[usize]| FamilySpec {
        n,
        r: r as u32,
        d: d as usize,
        k: d as usize,
        forbidden: j.iter().copied().collect(),
    };
    let (case, target) = if d > 1 {
        if (n as u64).is_multiple_of(d) && !cond {
            (Case::I, spec(d * r, d, &[0]))
        } else {
            (Case::II, spec(d * r, d, &[]))
        }
    } else if !cond {
        (Case::III, spec(r, 1, &[0]))
    } else if r == p && r != 1 && (n as u64 * params.zeta().num()) % l == params.xi_e().num() {
        (Case::IV, spec(r, 1, &[1]))
    } else if r == 1 && p == 1 {
        (Case::V, spec(1, 1, &(1..=n).collect::<Vec<_>>()))
    } else {
        (Case::VI, spec(r, 1, &[]))
    };
    let description = match case {
        Case::I | Case::II | Case::III => format!("{target}∖{{0̂}}"),
        Case::V => format!("Q_{}(1) ≅ Π_{}", n - 1, n),
        Case::IV | Case::VI => target.to_string(),
    };
    Ok(Prediction { case, target, description })
}

/// Outcome of checking one coset against its predicted family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub params: CosetParams,
    /// `None` for `n = 1`, where no comparison is made.
    pub case: Option<String>,
    pub target: String,
    pub lhs_size: usize,
    pub rhs_size: usize,
    pub tau_bijective: bool,
    pub order_preserved: bool,
    pub iso: bool,
    /// `μ(0̂, 1̂)` of the hat-tilde poset.
    pub mobius: i64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.case.is_none() || (self.tau_bijective && self.order_preserved && self.iso)
    }
}

/// Builds both sides and checks that `τ` is an order isomorphism onto the
/// predicted family.
///
/// The eigenspace order comes from linear algebra, the family order from
/// merges of G-partitions; `τ` must match them pair by pair in both
/// directions. In case (v) the result is additionally matched against
/// `Q_{n−1}(1)` by an isomorphism search.
pub fn verify_theorem(params: &CosetParams) -> Result<VerifyReport, ReflectionError> {
    if let CosetKind::Exceptional(_) = params.kind {
        return Err(ReflectionError::ExceptionalCosetUnsupported);
    }
    let eig = build_eigenposet(params)?;
    let hat = hat_tilde(&eig.poset, params)?;
    let mobius = hat.mobius_bounded().expect("hat-tilde is bounded");
    if params.n == 1 {
        return Ok(VerifyReport {
            params: *params,
            case: None,
            target: "trivial (n = 1)".into(),
            lhs_size: eig.poset.len(),
            rhs_size: eig.poset.len(),
            tau_bijective: true,
            order_preserved: true,
            iso: true,
            mobius,
        });
    }
    let prediction = classify_case(params)?;
    let family = build_family(&prediction.target).map_err(|e| ReflectionError::InvalidParams(e.to_string()))?;
    let fp = family.poset();
    let members: Vec<usize> = (0..fp.len()).filter(|&i| family.element(i).is_some()).collect();

    let mut images = Vec::with_capacity(eig.spaces.len());
    for v in &eig.spaces {
        images.push(tau(v, params)?);
    }
    let image_idx: Vec<Option<usize>> = images.iter().map(|g| family.index_of(g)).collect();
    let distinct: HashSet<usize> = image_idx.iter().flatten().copied().collect();
    let tau_bijective = image_idx.iter().all(Option::is_some)
        && distinct.len() == images.len()
        && distinct.len() == members.len();

    let order_preserved = tau_bijective
        && (0..images.len()).all(|a| {
            (0..images.len()).all(|b| {
                eig.poset.leq(a, b) == fp.leq(image_idx[a].unwrap(), image_idx[b].unwrap())
            })
        });

    let iso = order_preserved
        && match prediction.case {
            Case::V => {
                let pi = build_family(&FamilySpec::dowling(params.n - 1, 1)).expect("valid spec");
                matches!(eig.poset.find_isomorphism(pi.poset(), DEFAULT_ISO_BUDGET), IsoOutcome::Found(_))
            }
            _ => true,
        };

    Ok(VerifyReport {
        params: *params,
        case: Some(prediction.case.to_string()),
        target: prediction.description,
        lhs_size: eig.poset.len(),
        rhs_size: members.len(),
        tau_bijective,
        order_preserved,
        iso,
        mobius,
    })
}

/// Removes the maximum, removes the minimum when it is the full space, and
/// adjoins fresh bounds.
pub fn hat_tilde(poset: &FinitePoset, params: &CosetParams) -> Result<FinitePoset, ReflectionError> {
    let top = poset.top().ok_or(ReflectionError::NoUniqueMax)?;
    let mut drop = vec![top];
    if full_space_present(params) {
        let bot = poset.bottom().expect("the full space lies below every eigenspace");
        if bot != top {
            drop.push(bot);
        }
    }
    Ok(poset.without(&drop).adjoin_bounds())
}

/// Whether the intersection of any two eigenspaces is again an eigenspace,
/// checked as closure of the τ image under the Dowling join.
pub fn intersections_closed(eig: &EigenPoset) -> bool {
    let set: HashSet<&_> = eig.spaces.iter().collect();
    eig.spaces.iter().enumerate().all(|(i, a)| eig.spaces[i..].iter().all(|b| set.contains(&a.join(b))))
}

/// All diagonal-coset parameters with `r ≤ rmax`, `p | r`, `e | p`,
/// `nmin ≤ n ≤ nmax`, `m ≤ mmax`, and every primitive `m`-th root `ζ`.
pub fn parameter_grid(rmax: u64, nmin: usize, nmax: usize, mmax: u64) -> Vec<CosetParams> {
    let mut out = Vec::new();
    for r in 1..=rmax {
        for p in (1..=r).filter(|p| r % p == 0) {
            for e in (1..=p).filter(|e| p % e == 0) {
                for n in nmin..=nmax {
                    for m in 1..=mmax {
                        for c in (0..m.max(1)).filter(|&c| num_integer::gcd(c, m) == 1) {
                            let params = CosetParams::new(r, p, n, e, m)
                                .and_then(|x| x.with_zeta_exp(c))
                                .expect("grid parameters are valid");
                            out.push(params);
                        }
                    }
                }
            }
        }
    }
    out
}
