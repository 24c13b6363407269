//! Truncated power series over exact rationals and the Möbius generating
//! functions of exponential Dowling structures.

mod gf;

pub use gf::{
    counts_general, mobius_exponential, mobius_gf, mobius_q_dd0, mobius_q_dde, mobius_restricted,
    mobius_restricted_general, StructureCounts,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("constant term must be {expected} for this operation")]
    BadConstantTerm { expected: i64 },
    #[error("coefficient {n} does not give an integer Möbius value: {value}")]
    NonIntegerMu { n: usize, value: String },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// `Σ_{i ≤ T} c_i x^i` with `T = order()`; products and compositions are
/// truncated at the same order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl RationalSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Pads or truncates `coeffs` to length `order + 1`.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> BigRational) -> Self {
        Self { coeffs: (0..=order).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `f(c·x)`.
    pub fn dilate(&self, c: &BigRational) -> Self {
        let mut p = BigRational::one();
        let mut out = self.clone();
        for a in out.coeffs.iter_mut() {
            *a *= &p;
            p *= c;
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let t = self.order();
        Self::from_fn(t, |i| if i < t { &self.coeffs[i + 1] * BigInt::from(i + 1) } else { BigRational::zero() })
    }

    /// Antiderivative with zero constant term; the top coefficient is dropped.
    pub fn integral(&self) -> Self {
        Self::from_fn(self.order(), |i| {
            if i == 0 {
                BigRational::zero()
            } else {
                &self.coeffs[i - 1] / BigInt::from(i)
            }
        })
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::BadConstantTerm { expected: 1 });
        }
        let t = self.order();
        let inv0 = self.coeffs[0].recip();
        let mut g = vec![BigRational::zero(); t + 1];
        g[0] = inv0.clone();
        for n in 1..=t {
            let mut s = BigRational::zero();
            for k in 1..=n {
                s += &self.coeffs[k] * &g[n - k];
            }
            g[n] = -s * &inv0;
        }
        Ok(Self { coeffs: g })
    }

    /// `ln f` for `f(0) = 1`, as `∫ f'/f`.
    pub fn ln(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::BadConstantTerm { expected: 1 });
        }
        Ok((&self.derivative() * &self.inverse()?).integral())
    }

    /// `exp f` for `f(0) = 0`, from `g' = f' g`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::BadConstantTerm { expected: 0 });
        }
        let t = self.order();
        let mut g = vec![BigRational::zero(); t + 1];
        g[0] = BigRational::one();
        for n in 1..=t {
            let mut s = BigRational::zero();
            for k in 1..=n {
                s += &self.coeffs[k] * BigInt::from(k) * &g[n - k];
            }
            g[n] = s / BigInt::from(n);
        }
        Ok(Self { coeffs: g })
    }

    /// `f^q = exp(q ln f)` for `f(0) = 1`.
    pub fn pow_rational(&self, q: &BigRational) -> Result<Self, SeriesError> {
        self.ln()?.scale(q).exp()
    }
}

impl Add for &RationalSeries {
    type Output = RationalSeries;
    fn add(self, rhs: Self) -> RationalSeries {
        let t = self.order().min(rhs.order());
        RationalSeries::from_fn(t, |i| &self.coeffs[i] + &rhs.coeffs[i])
    }
}

impl Sub for &RationalSeries {
    type Output = RationalSeries;
    fn sub(self, rhs: Self) -> RationalSeries {
        let t = self.order().min(rhs.order());
        RationalSeries::from_fn(t, |i| &self.coeffs[i] - &rhs.coeffs[i])
    }
}

impl Mul for &RationalSeries {
    type Output = RationalSeries;
    fn mul(self, rhs: Self) -> RationalSeries {
        let t = self.order().min(rhs.order());
        RationalSeries::from_fn(t, |n| {
            let mut s = BigRational::zero();
            for k in 0..=n {
                s += &self.coeffs[k] * &rhs.coeffs[n - k];
            }
            s
        })
    }
}

impl Neg for &RationalSeries {
    type Output = RationalSeries;
    fn neg(self) -> RationalSeries {
        RationalSeries { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64], t: usize) -> RationalSeries {
        RationalSeries::from_coeffs(v.iter().map(|&a| rat(a, 1)).collect(), t)
    }

    #[test]
    fn log_of_geometric() {
        let t = 8;
        let geo = RationalSeries::from_fn(t, |_| rat(1, 1));
        let l = geo.ln().unwrap();
        for n in 1..=t {
            assert_eq!(l.coeff(n), &rat(1, n as i64));
        }
        assert!(l.coeff(0).is_zero());
    }

    #[test]
    fn square_root_squared() {
        let f = ints(&[1, 1], 7);
        let h = f.pow_rational(&rat(1, 2)).unwrap();
        assert_eq!(&h * &h, f);
        assert_eq!(h.coeff(2), &rat(-1, 8));
    }

    #[test]
    fn inverse_and_errors() {
        let f = ints(&[2, 3, 1], 6);
        let g = f.inverse().unwrap();
        assert_eq!(&f * &g, RationalSeries::one(6));
        assert!(ints(&[0, 1], 3).inverse().is_err());
        assert!(ints(&[2, 1], 3).ln().is_err());
        assert!(ints(&[1, 1], 3).exp().is_err());
    }

    #[test]
    fn dilation() {
        let f = ints(&[1, 1, 1], 2).dilate(&rat(3, 1));
        assert_eq!(f, ints(&[1, 3, 9], 2));
    }

    proptest! {
        #[test]
        fn exp_ln_round_trip(tail in proptest::collection::vec(-20i64..20, 6)) {
            let mut v = vec![1];
            v.extend(tail);
            let f = ints(&v, 6);
            prop_assert_eq!(f.ln().unwrap().exp().unwrap(), f);
        }
    }
}
