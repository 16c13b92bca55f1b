//! Scalar arithmetic: residues modulo a prime power, and exact elements of
//! the cyclotomic field Q(ζ_p).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible modulus. Products of two residues fit in a `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The ring Z/p^e Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawModulus", into = "RawModulus")]
pub struct ModulusContext {
    p: u64,
    e: u32,
    q: u64,
}

#[derive(Serialize, Deserialize)]
struct RawModulus {
    p: u64,
    e: u32,
}

impl TryFrom<RawModulus> for ModulusContext {
    type Error = Error;
    fn try_from(raw: RawModulus) -> Result<Self> {
        ModulusContext::new(raw.p, raw.e)
    }
}

impl From<ModulusContext> for RawModulus {
    fn from(ctx: ModulusContext) -> Self {
        RawModulus { p: ctx.p, e: ctx.e }
    }
}

impl ModulusContext {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidParameter("exponent must be at least 1".into()));
        }
        let q = p.checked_pow(e).filter(|&q| q <= MAX_MODULUS).ok_or(Error::ModulusTooLarge { p, e })?;
        Ok(ModulusContext { p, e, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// The modulus p^e.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The same prime at a different exponent.
    pub fn with_exponent(&self, e: u32) -> Result<Self> {
        ModulusContext::new(self.p, e)
    }

    pub fn normalize(&self, n: i64) -> Residue {
        Residue(n.rem_euclid(self.q as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        let s = a.0 as u64 + b.0 as u64;
        Residue(if s >= self.q { s - self.q } else { s } as u32)
    }

    #[inline]
    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        let (a, b) = (a.0 as u64, b.0 as u64);
        Residue(if a >= b { a - b } else { a + self.q - b } as u32)
    }

    #[inline]
    pub fn neg(&self, a: Residue) -> Residue {
        self.sub(Residue(0), a)
    }

    #[inline]
    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        Residue(((a.0 as u64 * b.0 as u64) % self.q) as u32)
    }

    pub fn pow(&self, a: Residue, mut k: u64) -> Residue {
        let mut base = a;
        let mut acc = self.normalize(1);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, x: Residue) -> bool {
        !(x.0 as u64).is_multiple_of(self.p)
    }

    pub fn unit_inverse(&self, x: Residue) -> Result<Residue> {
        if !self.is_unit(x) {
            return Err(Error::NotAUnit { value: x.0 as u64, modulus: self.q });
        }
        // Extended Euclid on (x, q).
        let (mut old_r, mut r) = (x.0 as i64, self.q as i64);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let quot = old_r / r;
            (old_r, r) = (r, old_r - quot * r);
            (old_s, s) = (s, old_s - quot * s);
        }
        debug_assert_eq!(old_r, 1);
        Ok(self.normalize(old_s))
    }

    /// Largest j ≤ e with p^j dividing x; zero has valuation e.
    pub fn p_valuation(&self, x: Residue) -> u32 {
        if x.0 == 0 {
            return self.e;
        }
        let mut v = 0;
        let mut n = x.0 as u64;
        while n.is_multiple_of(self.p) {
            n /= self.p;
            v += 1;
        }
        v
    }

    /// Generators of the unit group (Z/p^e)^×. Empty when the group is trivial.
    pub fn unit_group_generators(&self) -> Vec<Residue> {
        if self.p == 2 {
            return match self.e {
                1 => vec![],
                2 => vec![self.normalize(3)],
                _ => vec![self.normalize(-1), self.normalize(5)],
            };
        }
        // A primitive root g mod p with g^(p-1) ≢ 1 mod p^2 generates every level.
        let p = self.p;
        let mut factors = Vec::new();
        let mut m = p - 1;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                factors.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        let modp = ModulusContext { p, e: 1, q: p };
        let g = (2..p.max(3))
            .find(|&g| factors.iter().all(|&f| modp.pow(Residue(g as u32), (p - 1) / f).0 != 1))
            .unwrap_or(1);
        if self.e == 1 {
            return vec![Residue(g as u32)];
        }
        let p2 = ModulusContext { p, e: 2, q: p * p };
        let g = if p2.pow(Residue(g as u32), p - 1).0 == 1 { g + p } else { g };
        vec![self.normalize(g as i64)]
    }
}

impl fmt::Display for ModulusContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.e)
    }
}

/// Canonical representative in [0, p^e).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[repr(transparent)]
pub struct Residue(u32);

impl Residue {
    pub fn value(self) -> u64 {
        self.0 as u64
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Element of Q(ζ_p), stored as a polynomial in ζ of degree < p − 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicScalar {
    p: u64,
    coefficients: Vec<BigRational>,
}

impl CyclotomicScalar {
    pub fn zero(p: u64) -> Self {
        CyclotomicScalar { p, coefficients: vec![BigRational::zero(); (p - 1) as usize] }
    }

    pub fn from_integer(p: u64, n: i64) -> Self {
        Self::from_rational(p, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(p: u64, c: BigRational) -> Self {
        let mut s = Self::zero(p);
        s.coefficients[0] = c;
        s
    }

    pub fn one(p: u64) -> Self {
        Self::from_integer(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coefficients[0].is_one() && self.coefficients[1..].iter().all(Zero::is_zero)
    }

    /// Reduces a length-p vector of coefficients of 1, ζ, …, ζ^{p−1} using
    /// ζ^{p−1} = −(1 + ζ + … + ζ^{p−2}).
    fn from_full(p: u64, mut full: Vec<BigRational>) -> Self {
        debug_assert_eq!(full.len(), p as usize);
        let top = full.pop().expect("p >= 2");
        if !top.is_zero() {
            for c in &mut full {
                *c -= &top;
            }
        }
        CyclotomicScalar { p, coefficients: full }
    }

    fn to_full(&self) -> Vec<BigRational> {
        let mut full = self.coefficients.clone();
        full.push(BigRational::zero());
        full
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "cyclotomic fields differ");
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect();
        CyclotomicScalar { p: self.p, coefficients }
    }

    pub fn neg(&self) -> Self {
        CyclotomicScalar { p: self.p, coefficients: self.coefficients.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "cyclotomic fields differ");
        let p = self.p as usize;
        let mut full = vec![BigRational::zero(); p];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        Self::from_full(self.p, full)
    }

    /// Multiplies by ζ^k, which only rotates the power basis.
    pub fn mul_zeta_power(&self, k: i64) -> Self {
        let p = self.p as usize;
        let shift = k.rem_euclid(self.p as i64) as usize;
        if shift == 0 {
            return self.clone();
        }
        let full = self.to_full();
        let mut rotated = vec![BigRational::zero(); p];
        for (i, c) in full.into_iter().enumerate() {
            rotated[(i + shift) % p] = c;
        }
        Self::from_full(self.p, rotated)
    }
}

impl fmt::Display for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ζ")?,
                _ => write!(f, "({c})ζ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// ζ^k in Q(ζ_p).
pub fn zeta_power(k: i64, p: u64) -> CyclotomicScalar {
    CyclotomicScalar::one(p).mul_zeta_power(k)
}
