use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{rat, RationalSeries, SeriesError};

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Denominator sequences of the structure `Q_{dn+e}(r,d,k)∖{0̂}` over the
/// exponential structure of lower ideals of `c_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureCounts {
    pub d: usize,
    pub k: usize,
    pub e: usize,
    pub r: u64,
}

impl StructureCounts {
    /// `M(n) = ((dn/k)!)^k / (n!·((d/k)!)^{kn})`, with `M(0) = 1`.
    pub fn m(&self, n: usize) -> BigRational {
        if n == 0 {
            return BigRational::one();
        }
        let (d, k) = (self.d, self.k);
        let num = factorial(d * n / k).pow(k as u32);
        let den = factorial(n) * factorial(d / k).pow((k * n) as u32);
        BigRational::new(num, den)
    }

    /// `N(n) = (dn+e)!·r^{(d−1)n} / (n!·e!·((d/k)!)^{kn}·k^{dn})`, with `N(0) = 1`.
    pub fn n(&self, n: usize) -> BigRational {
        if n == 0 {
            return BigRational::one();
        }
        let (d, k, e) = (self.d, self.k, self.e);
        let num = factorial(d * n + e) * BigInt::from(self.r).pow(((d - 1) * n) as u32);
        let den = factorial(n)
            * factorial(e)
            * factorial(d / k).pow((k * n) as u32)
            * BigInt::from(k).pow((d * n) as u32);
        BigRational::new(num, den)
    }

    /// `Σ x^n / (N(n)·n!)`, optionally restricted to `n ∈ keep`.
    fn n_series(&self, t: usize, keep: impl Fn(usize) -> bool) -> RationalSeries {
        RationalSeries::from_fn(t, |n| {
            if keep(n) {
                (self.n(n) * factorial(n)).recip()
            } else {
                BigRational::zero()
            }
        })
    }

    /// `Σ x^n / (M(n)·n!)`, optionally restricted to `n ∈ keep`.
    fn m_series(&self, t: usize, keep: impl Fn(usize) -> bool) -> RationalSeries {
        RationalSeries::from_fn(t, |n| {
            if keep(n) {
                (self.m(n) * factorial(n)).recip()
            } else {
                BigRational::zero()
            }
        })
    }
}

pub fn counts_general(d: usize, k: usize, e: usize, r: u64) -> Result<StructureCounts, SeriesError> {
    if d == 0 || k == 0 || r == 0 {
        return Err(SeriesError::InvalidParams("d, k and r must be positive".into()));
    }
    if !d.is_multiple_of(k) || !r.is_multiple_of(k as u64) {
        return Err(SeriesError::InvalidParams(format!("k={k} must divide d={d} and r={r}")));
    }
    Ok(StructureCounts { d, k, e, r })
}

/// Reads `μ_n = [x^n] series · N(n)·n!`, which must be an integer.
fn extract(series: &RationalSeries, counts: &StructureCounts) -> Result<Vec<BigInt>, SeriesError> {
    (0..=series.order())
        .map(|n| {
            let v = series.coeff(n) * counts.n(n) * factorial(n);
            if v.is_integer() {
                Ok(v.to_integer())
            } else {
                Err(SeriesError::NonIntegerMu { n, value: v.to_string() })
            }
        })
        .collect()
}

fn rhs(a: &RationalSeries, b: &RationalSeries, s: u64) -> Result<RationalSeries, SeriesError> {
    let b = b.dilate(&rat(s as i64, 1));
    Ok(-&(a * &b.pow_rational(&rat(-1, s as i64))?))
}

/// `μ(S_n ∪ {0̂})` for `n ≤ T` from
/// `Σ μ_n x^n/(N(n)n!) = −(Σ x^n/(N(n)n!))·(Σ (sx)^n/(M(n)n!))^{−1/s}`.
pub fn mobius_gf(counts: &StructureCounts, s: u64, t: usize) -> Result<Vec<BigInt>, SeriesError> {
    if s == 0 {
        return Err(SeriesError::InvalidParams("s must be positive".into()));
    }
    let series = rhs(&counts.n_series(t, |_| true), &counts.m_series(t, |_| true), s)?;
    extract(&series, counts)
}

/// `μ(Q_{dn+e}(dr,d,d))` for `n = 0, …, T`.
pub fn mobius_q_dde(r: u64, d: usize, e: usize, t: usize) -> Result<Vec<BigInt>, SeriesError> {
    let counts = counts_general(d, d, e, d as u64 * r)?;
    mobius_gf(&counts, d as u64 * r, t)
}

/// `μ(Q_{dn}(dr,d,d,{0}))` for `n = 0, …, T`; the `n = 0` entry is `0`
/// since `0 ∈ J` there.
pub fn mobius_q_dd0(r: u64, d: usize, t: usize) -> Result<Vec<BigInt>, SeriesError> {
    let counts = counts_general(d, d, 0, d as u64 * r)?;
    mobius_restricted(&counts, d as u64 * r, t, |_| true, |n| n >= 1)
}

/// Restricted form for a semigroup `I ⊆ ℕ` and `J ⊆ ℤ_{≥0}` with
/// `I + J ⊆ J`:
/// `Σ_{n∈J} μ_n x^n/(N(n)n!) = −(Σ_{n∈J} x^n/(N(n)n!))·(Σ_{n∈I∪{0}} (sx)^n/(M(n)n!))^{−1/s}`.
///
/// The hypotheses are checked for all sizes up to `T`.
pub fn mobius_restricted(
    counts: &StructureCounts,
    s: u64,
    t: usize,
    in_i: impl Fn(usize) -> bool,
    in_j: impl Fn(usize) -> bool,
) -> Result<Vec<BigInt>, SeriesError> {
    for a in 1..=t {
        if !in_i(a) {
            continue;
        }
        for b in 1..=t - a {
            if in_i(b) && !in_i(a + b) {
                return Err(SeriesError::HypothesisViolated(format!("{a}+{b} leaves I")));
            }
        }
        for b in 0..=t - a {
            if in_j(b) && !in_j(a + b) {
                return Err(SeriesError::HypothesisViolated(format!("{a}+{b} leaves J")));
            }
        }
    }
    let one = |_| BigRational::one();
    mobius_restricted_general(counts, s, t, in_i, in_j, one, one)
}

/// General restricted form with caller-supplied correction sequences:
/// `−(Σ_n x^n/(N n!) − Σ_{n∉J} p_n x^n/(N n!))·(Σ_n (sx)^n/(M n!) − Σ_{n≥1, n∉I} m_n (sx)^n/(M n!))^{−1/s}`.
pub fn mobius_restricted_general(
    counts: &StructureCounts,
    s: u64,
    t: usize,
    in_i: impl Fn(usize) -> bool,
    in_j: impl Fn(usize) -> bool,
    m_seq: impl Fn(usize) -> BigRational,
    p_seq: impl Fn(usize) -> BigRational,
) -> Result<Vec<BigInt>, SeriesError> {
    if s == 0 {
        return Err(SeriesError::InvalidParams("s must be positive".into()));
    }
    let full_n = counts.n_series(t, |_| true);
    let full_m = counts.m_series(t, |_| true);
    let a = RationalSeries::from_fn(t, |n| {
        let c = full_n.coeff(n).clone();
        if in_j(n) {
            c
        } else {
            &c - &c * p_seq(n)
        }
    });
    let b = RationalSeries::from_fn(t, |n| {
        let c = full_m.coeff(n).clone();
        if n == 0 || in_i(n) {
            c
        } else {
            &c - &c * m_seq(n)
        }
    });
    let mu = extract(&rhs(&a, &b, s)?, counts)?;
    if let Some(n) = (0..=t).find(|&n| !in_j(n) && !mu[n].is_zero()) {
        return Err(SeriesError::HypothesisViolated(format!("nonzero coefficient {} outside J at {n}", mu[n])));
    }
    Ok(mu)
}

/// `μ(R_n ∪ {0̂})` for `1 ≤ n ≤ T` from `−ln(Σ x^n/(M(n)n!))`; entry `0` is unused
/// and set to `0`.
pub fn mobius_exponential(m: impl Fn(usize) -> BigRational, t: usize) -> Result<Vec<BigInt>, SeriesError> {
    let f = RationalSeries::from_fn(t, |n| (m(n) * factorial(n)).recip());
    let l = -&f.ln()?;
    (0..=t)
        .map(|n| {
            let v = l.coeff(n) * m(n) * factorial(n);
            if v.is_integer() {
                Ok(v.to_integer())
            } else {
                Err(SeriesError::NonIntegerMu { n, value: v.to_string() })
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn worked_example_series() {
        let counts = counts_general(2, 2, 0, 2).unwrap();
        let a = counts.n_series(5, |_| true);
        let b = counts.m_series(5, |_| true);
        let series = rhs(&a, &b, 2).unwrap();
        let expected = [rat(-1, 1), rat(0, 1), rat(-1, 6), rat(4, 15), rat(-51, 140), rat(1364, 2835)];
        assert_eq!(series.coeffs(), &expected);
        assert_eq!(mobius_q_dde(1, 2, 0, 5).unwrap(), ints(&[-1, 0, -1, 24, -918, 54560]));
    }

    #[test]
    fn counts_plug_in() {
        let c = counts_general(1, 1, 0, 2).unwrap();
        assert_eq!(c.n(1), rat(1, 1));
        let c = counts_general(2, 2, 0, 2).unwrap();
        assert_eq!(c.n(1), rat(1, 1));
        assert_eq!(c.n(2), rat(3, 1));
        for n in 0..6 {
            assert_eq!(c.m(n), BigRational::from_integer(factorial(n)));
        }
        assert!(counts_general(3, 2, 0, 2).is_err());
        assert!(counts_general(2, 2, 0, 3).is_err());
    }

    #[test]
    fn d_one_has_a_doubled_bottom() {
        // with d = 1 the minimum of Q_n(r) survives, so adjoining 0̂ gives μ = 0
        for r in 1..=3 {
            let mu = mobius_q_dde(r, 1, 0, 6).unwrap();
            assert_eq!(mu[0], BigInt::from(-1));
            assert!(mu[1..].iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn unrestricted_restricted_agrees() {
        let counts = counts_general(2, 2, 1, 4).unwrap();
        let a = mobius_gf(&counts, 4, 5).unwrap();
        let b = mobius_restricted(&counts, 4, 5, |_| true, |_| true).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hypothesis_checks() {
        let counts = counts_general(1, 1, 0, 2).unwrap();
        assert!(matches!(
            mobius_restricted(&counts, 2, 5, |n| n == 1 || n == 3, |_| true),
            Err(SeriesError::HypothesisViolated(_))
        ));
        assert!(matches!(
            mobius_restricted(&counts, 2, 5, |_| true, |n| n == 0),
            Err(SeriesError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn partition_lattice_with_bottom() {
        let mu = mobius_exponential(|_| BigRational::one(), 5).unwrap();
        assert_eq!(mu, ints(&[0, -1, 0, 0, 0, 0]));
    }

    #[test]
    fn dd0_first_terms() {
        let mu = mobius_q_dd0(1, 2, 3).unwrap();
        assert_eq!(mu[0], BigInt::zero());
        assert_eq!(mu[1], BigInt::from(-1));
    }
}
