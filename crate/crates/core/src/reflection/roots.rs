use std::fmt;

use num_integer::Integer;

/// The root of unity `e^{2πi·num/modulus}`, kept as an exact exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootExp {
    num: u64,
    modulus: u64,
}

impl RootExp {
    pub fn new(num: i64, modulus: u64) -> Self {
        assert!(modulus > 0, "root-of-unity modulus must be positive");
        Self { num: num.rem_euclid(modulus as i64) as u64, modulus }
    }

    pub fn one(modulus: u64) -> Self {
        Self::new(0, modulus)
    }

    /// The primitive root `e^{2πi·c/m}` written over a modulus `L` with `m | L`.
    pub fn primitive(c: u64, m: u64, modulus: u64) -> Self {
        assert_eq!(modulus % m, 0, "{m} does not divide {modulus}");
        Self::new((c * (modulus / m)) as i64, modulus)
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_one(self) -> bool {
        self.num == 0
    }

    /// Multiplicative order.
    pub fn order(self) -> u64 {
        self.modulus / self.num.gcd(&self.modulus)
    }

    /// The same root written over a multiple of the current modulus.
    pub fn lift(self, modulus: u64) -> Option<Self> {
        modulus.is_multiple_of(self.modulus).then(|| Self::new((self.num * (modulus / self.modulus)) as i64, modulus))
    }

    /// Lowest-terms form: `(num', order)`.
    pub fn reduced(self) -> Self {
        let g = self.num.gcd(&self.modulus);
        Self { num: self.num / g, modulus: self.modulus / g }
    }

    pub fn mul(self, other: Self) -> Self {
        let l = self.modulus.lcm(&other.modulus);
        let a = self.lift(l).unwrap();
        let b = other.lift(l).unwrap();
        Self::new((a.num + b.num) as i64, l)
    }

    pub fn inv(self) -> Self {
        Self::new(-(self.num as i64), self.modulus)
    }

    pub fn pow(self, k: i64) -> Self {
        let m = self.modulus as i128;
        Self::new(((self.num as i128 * k as i128).rem_euclid(m)) as i64, self.modulus)
    }
}

impl fmt::Display for RootExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        write!(f, "e(2πi·{}/{})", r.num, r.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let i = RootExp::primitive(1, 4, 12);
        assert_eq!(i.num(), 3);
        assert_eq!(i.order(), 4);
        assert!(i.pow(4).is_one());
        assert!(i.mul(i.inv()).is_one());
        let w = RootExp::new(1, 3);
        assert_eq!(i.mul(w).modulus(), 12);
        assert_eq!(i.mul(w).order(), 12);
        assert_eq!(RootExp::new(6, 12).reduced(), RootExp::new(1, 2));
        assert_eq!(RootExp::new(1, 3).lift(4), None);
    }
}
