use itertools::Itertools;
use num_integer::Integer;
use serde::Serialize;

use super::{ReflectionError, RootExp};

/// Which coset representative twists `G(r,p,n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CosetKind {
    /// `γ = diag(ξ_{er/p}, 1, …, 1)`.
    Diagonal,
    /// One of the three non-diagonal cosets; recognised but not computed.
    Exceptional(u8),
}

/// Parameters `(r, p, n, e, m)` of a coset `γG(r,p,n)` and an eigenvalue
/// `ζ = e^{2πi·c/m}` with `gcd(c, m) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CosetParams {
    pub r: u64,
    pub p: u64,
    pub n: usize,
    pub e: u64,
    pub m: u64,
    pub zeta_exp: u64,
    pub kind: CosetKind,
}

impl CosetParams {
    /// Uses the primitive root `ζ = e^{2πi/m}`.
    pub fn new(r: u64, p: u64, n: usize, e: u64, m: u64) -> Result<Self, ReflectionError> {
        let params = Self { r, p, n, e, m, zeta_exp: u64::from(m > 1), kind: CosetKind::Diagonal };
        params.validate()?;
        Ok(params)
    }

    pub fn with_zeta_exp(mut self, c: u64) -> Result<Self, ReflectionError> {
        self.zeta_exp = c % self.m.max(1);
        self.validate()?;
        Ok(self)
    }

    pub fn exceptional(mut self, which: u8) -> Self {
        self.kind = CosetKind::Exceptional(which);
        self
    }

    /// `S_ζ(αγG) = S_{α⁻¹ζ}(γG)`: folds a scalar `α` into the eigenvalue.
    pub fn with_scalar(self, alpha: RootExp) -> Result<Self, ReflectionError> {
        let zeta = RootExp::primitive(self.zeta_exp, self.m, self.m);
        let shifted = alpha.inv().mul(zeta).reduced();
        let m = shifted.modulus();
        Self { m, zeta_exp: if m == 1 { 0 } else { shifted.num() }, ..self }.checked()
    }

    fn checked(self) -> Result<Self, ReflectionError> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ReflectionError> {
        let bad = |s: String| Err(ReflectionError::InvalidParams(s));
        if self.r == 0 || self.p == 0 || self.e == 0 || self.m == 0 || self.n == 0 {
            return bad("r, p, e, m and n must be positive".into());
        }
        if !self.r.is_multiple_of(self.p) {
            return bad(format!("p={} does not divide r={}", self.p, self.r));
        }
        if !self.p.is_multiple_of(self.e) {
            return bad(format!("e={} does not divide p={}", self.e, self.p));
        }
        if self.zeta_exp.gcd(&self.m) != 1 {
            return bad(format!("ζ exponent {} is not coprime to m={}", self.zeta_exp, self.m));
        }
        Ok(())
    }

    /// `d = m / gcd(m, r)`.
    pub fn d(&self) -> u64 {
        self.m / self.m.gcd(&self.r)
    }

    /// Common exponent modulus `L = dr = lcm(m, r)`.
    pub fn modulus(&self) -> u64 {
        self.d() * self.r
    }

    /// `ω`, a primitive `r`-th root.
    pub fn omega(&self) -> RootExp {
        RootExp::primitive(1, self.r, self.modulus())
    }

    pub fn zeta(&self) -> RootExp {
        RootExp::primitive(self.zeta_exp, self.m, self.modulus())
    }

    /// `ξ_{er/p}`.
    pub fn xi(&self) -> RootExp {
        RootExp::primitive(1, self.e * self.r / self.p, self.modulus())
    }

    /// `ξ_e`.
    pub fn xi_e(&self) -> RootExp {
        RootExp::primitive(1, self.e, self.modulus())
    }

    /// `r^n · n! / p`.
    pub fn coset_size(&self) -> u128 {
        let fact: u128 = (1..=self.n as u128).product();
        (self.r as u128).pow(self.n as u32) * fact / self.p as u128
    }
}

/// A monomial map `e_i ↦ Ω_{σ(i)} e_{σ(i)}`.
///
/// Coordinates are 0-based here: `sigma[i] = σ(i)` and `diag[j]` is the
/// exponent of `Ω_j` over `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialMap {
    pub sigma: Vec<usize>,
    pub diag: Vec<u64>,
    pub modulus: u64,
}

impl MonomialMap {
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        Self { sigma: (0..n).collect(), diag: vec![0; n], modulus }
    }

    /// `(x z)_j = Ω_j z_{σ⁻¹(j)}` on exponent vectors; `None` entries are zero
    /// coordinates.
    pub fn apply(&self, z: &[Option<u64>]) -> Vec<Option<u64>> {
        let mut out = vec![None; self.n()];
        for (i, &zi) in z.iter().enumerate() {
            let j = self.sigma[i];
            out[j] = zi.map(|a| (a + self.diag[j]) % self.modulus);
        }
        out
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &MonomialMap) -> MonomialMap {
        assert_eq!(self.modulus, other.modulus);
        let n = self.n();
        let mut sigma = vec![0; n];
        let mut diag = vec![0; n];
        for i in 0..n {
            let j = other.sigma[i];
            let k = self.sigma[j];
            sigma[i] = k;
            diag[k] = (other.diag[j] + self.diag[k]) % self.modulus;
        }
        MonomialMap { sigma, diag, modulus: self.modulus }
    }
}

/// Lists `γG(r,p,n)`: every `γ·(ω^a; σ)` with `Σ a ≡ 0 (mod p)`, ordered by
/// `σ` lexicographically and then by the exponent vector `a`.
pub fn enumerate_coset(params: &CosetParams) -> Result<Vec<MonomialMap>, ReflectionError> {
    params.validate()?;
    if let CosetKind::Exceptional(_) = params.kind {
        return Err(ReflectionError::ExceptionalCosetUnsupported);
    }
    let n = params.n;
    let l = params.modulus();
    let w = params.omega().num();
    let xi = params.xi().num();
    let vectors: Vec<Vec<u64>> = (0..n)
        .map(|_| 0..params.r)
        .multi_cartesian_product()
        .filter(|a| a.iter().sum::<u64>() % params.p == 0)
        .collect();
    let vectors = if n == 0 { vec![Vec::new()] } else { vectors };
    let mut out = Vec::with_capacity(params.coset_size() as usize);
    for sigma in (0..n).permutations(n) {
        for a in &vectors {
            let mut diag: Vec<u64> = a.iter().map(|&x| (x * w) % l).collect();
            diag[0] = (diag[0] + xi) % l;
            out.push(MonomialMap { sigma: sigma.clone(), diag, modulus: l });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_sizes() {
        let sym = enumerate_coset(&CosetParams::new(1, 1, 3, 1, 1).unwrap()).unwrap();
        assert_eq!(sym.len(), 6);
        assert!(sym.iter().all(|x| x.diag.iter().all(|&a| a == 0)));
        assert_eq!(enumerate_coset(&CosetParams::new(2, 1, 2, 1, 1).unwrap()).unwrap().len(), 8);
        let g = enumerate_coset(&CosetParams::new(2, 2, 2, 1, 1).unwrap()).unwrap();
        assert_eq!(g.len(), 4);
        // ξ_{er/p} = ξ_1 = 1 here, so the exponent sum of Ω is even
        assert!(g.iter().all(|x| x.diag.iter().sum::<u64>() % 2 == 0));
        for r in 1..=3 {
            for p in (1..=r).filter(|p| r % p == 0) {
                for n in 1..=4 {
                    let params = CosetParams::new(r, p, n, 1, 1).unwrap();
                    assert_eq!(enumerate_coset(&params).unwrap().len() as u128, params.coset_size());
                }
            }
        }
    }

    #[test]
    fn derived_quantities() {
        let c = CosetParams::new(3, 3, 2, 1, 4).unwrap();
        assert_eq!(c.d(), 4);
        assert_eq!(c.modulus(), 12);
        assert_eq!(c.zeta().order(), 4);
        assert_eq!(c.xi().order(), 1);
        let c = CosetParams::new(2, 2, 2, 2, 2).unwrap();
        assert_eq!(c.xi().order(), 2);
        assert_eq!(c.d(), 1);
    }

    #[test]
    fn invalid() {
        assert!(CosetParams::new(3, 2, 2, 1, 1).is_err());
        assert!(CosetParams::new(2, 2, 2, 3, 1).is_err());
        assert!(CosetParams::new(2, 2, 2, 1, 4).unwrap().with_zeta_exp(2).is_err());
        let ex = CosetParams::new(2, 2, 2, 1, 1).unwrap().exceptional(1);
        assert_eq!(enumerate_coset(&ex), Err(ReflectionError::ExceptionalCosetUnsupported));
    }

    #[test]
    fn scalar_folding() {
        // α = ζ turns the eigenvalue into 1
        let c = CosetParams::new(2, 1, 2, 1, 4).unwrap();
        let folded = c.with_scalar(RootExp::primitive(1, 4, 4)).unwrap();
        assert_eq!((folded.m, folded.zeta_exp), (1, 0));
        let folded = c.with_scalar(RootExp::new(1, 2)).unwrap();
        assert_eq!((folded.m, folded.zeta_exp), (4, 3));
    }

    #[test]
    fn compose_matches_apply() {
        let maps = enumerate_coset(&CosetParams::new(2, 1, 3, 1, 1).unwrap()).unwrap();
        let z: Vec<Option<u64>> = vec![Some(0), Some(1), None];
        let (x, y) = (&maps[5], &maps[30]);
        assert_eq!(x.compose(y).apply(&z), x.apply(&y.apply(&z)));
    }
}
