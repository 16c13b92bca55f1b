//! The twisted monomial algebra generated by z_1, …, z_{2r} with
//! z_{2i−1} z_{2i} = ζ z_{2i} z_{2i−1} and all other generator pairs
//! commuting. The central element z_j^p stands for the Laurent variable t_j,
//! so the centre's exponents are exactly pZ^{2r}.
//!
//! Monomials are written in the normal order z^a = z_1^{a_1} ⋯ z_{2r}^{a_{2r}}.
//! Moving z_{2i}^{a_{2i}} past z_{2i−1}^{b_{2i−1}} costs ζ^{−a_{2i} b_{2i−1}}, so
//!
//! ```text
//! z^a · z^b = ζ^{σ(a,b)} z^{a+b},   σ(a,b) = −Σ_i a_{2i} b_{2i−1}.
//! ```
//!
//! For r = 1: z_2 · z_1 has a = (0,1), b = (1,0), σ = −1, hence
//! z_2 z_1 = ζ^{−1} z_1 z_2, which is the defining relation read backwards.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use rand::Rng;

use crate::error::{Error, Result};
use crate::modring::{is_prime, zeta_power, CyclotomicScalar};
use crate::symplectic::SymplecticSpace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    p: u64,
    r: usize,
    zeta: CyclotomicScalar,
}

impl AlgebraPresentation {
    pub fn new(p: u64, r: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        Ok(AlgebraPresentation { p, r, zeta: zeta_power(1, p) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of generators, 2r.
    pub fn rank(&self) -> usize {
        2 * self.r
    }

    pub fn zeta(&self) -> &CyclotomicScalar {
        &self.zeta
    }

    fn check(&self, a: &ExponentVector) -> Result<()> {
        if a.len() != self.rank() {
            return Err(Error::DimensionMismatch { left: self.rank(), right: a.len() });
        }
        Ok(())
    }

    /// σ(a, b) mod p, the ζ-exponent picked up when z^a z^b is put in normal order.
    pub fn cocycle(&self, a: &ExponentVector, b: &ExponentVector) -> Result<u64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.cocycle_unchecked(a, b))
    }

    fn cocycle_unchecked(&self, a: &ExponentVector, b: &ExponentVector) -> u64 {
        let s: i64 = (0..self.r).map(|i| a.0[2 * i + 1] * b.0[2 * i]).sum();
        (-s).rem_euclid(self.p as i64) as u64
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement { p: self.p, r: self.r, terms: BTreeMap::new() }
    }

    pub fn one(&self) -> AlgebraElement {
        self.monomial(ExponentVector::zero(self.rank()), CyclotomicScalar::one(self.p))
            .expect("zero vector has the right length")
    }

    pub fn monomial(&self, a: ExponentVector, c: CyclotomicScalar) -> Result<AlgebraElement> {
        self.check(&a)?;
        let mut x = self.zero();
        if !c.is_zero() {
            x.terms.insert(a, c);
        }
        Ok(x)
    }

    /// The generator z_j, 1-based as in the presentation.
    pub fn generator(&self, j: usize) -> AlgebraElement {
        self.monomial(ExponentVector::unit(self.rank(), j - 1), CyclotomicScalar::one(self.p))
            .expect("unit vector has the right length")
    }

    /// The two-sided inverse of z^a: ζ^{−σ(a,−a)} z^{−a}.
    pub fn monomial_inverse(&self, a: &ExponentVector) -> Result<AlgebraElement> {
        self.check(a)?;
        let neg = -a;
        let k = self.cocycle_unchecked(a, &neg) as i64;
        self.monomial(neg, zeta_power(-k, self.p))
    }

    /// Returns k with z^a z^b z^{−a} z^{−b} = ζ^k, computed by multiplying out.
    pub fn commutator_pairing(&self, a: &ExponentVector, b: &ExponentVector) -> Result<u64> {
        self.check(a)?;
        self.check(b)?;
        let one = CyclotomicScalar::one(self.p);
        let x = self.monomial(a.clone(), one.clone())?;
        let y = self.monomial(b.clone(), one)?;
        let c = x.multiply(&y)?.multiply(&self.monomial_inverse(a)?)?.multiply(&self.monomial_inverse(b)?)?;
        let (exp, coeff) = match c.terms.iter().next() {
            Some((exp, coeff)) if c.terms.len() == 1 => (exp, coeff),
            _ => return Err(Error::NonScalarCommutator(format!("{c}"))),
        };
        if !exp.is_zero() {
            return Err(Error::NonScalarCommutator(format!("{c}")));
        }
        let k = (0..self.p)
            .find(|&k| zeta_power(k as i64, self.p) == *coeff)
            .ok_or_else(|| Error::NonScalarCommutator(format!("coefficient {coeff} is not a power of ζ")))?;
        let expected = (self.cocycle_unchecked(a, b) + self.p - self.cocycle_unchecked(b, a)) % self.p;
        if k != expected {
            return Err(Error::NonScalarCommutator(format!("ζ^{k} disagrees with the cocycle value ζ^{expected}")));
        }
        Ok(k)
    }

    /// Whether z^a is central, i.e. commutes with every generator.
    pub fn is_central_monomial(&self, a: &ExponentVector) -> Result<bool> {
        for j in 0..self.rank() {
            if self.commutator_pairing(a, &ExponentVector::unit(self.rank(), j))? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Index of the centre's exponent lattice pZ^{2r} in Z^{2r}, as the
    /// absolute determinant of its basis matrix.
    pub fn value_group_index(&self) -> u128 {
        let n = self.rank();
        let basis: Vec<Vec<i128>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { self.p as i128 } else { 0 }).collect()).collect();
        integer_determinant(basis).unsigned_abs()
    }

    /// Dimension of the algebra over its centre: one basis monomial per
    /// exponent class in (Z/p)^{2r}.
    pub fn degree_over_centre(&self) -> u128 {
        (self.p as u128).pow(self.rank() as u32)
    }

    /// A random element with between one and `max_terms` terms, exponents in
    /// [−range, range] and small integer ζ-polynomial coefficients.
    pub fn random_element<R: Rng>(&self, rng: &mut R, max_terms: usize, range: i64) -> AlgebraElement {
        loop {
            let mut x = self.zero();
            let terms = rng.gen_range(1..=max_terms);
            for _ in 0..terms {
                let a = ExponentVector((0..self.rank()).map(|_| rng.gen_range(-range..=range)).collect());
                let mut c = CyclotomicScalar::zero(self.p);
                for k in 0..self.p.min(3) {
                    let n = rng.gen_range(-3i64..=3);
                    c = c.add(&zeta_power(k as i64, self.p).mul(&CyclotomicScalar::from_integer(self.p, n)));
                }
                x = x.add(&self.monomial(a, c).expect("length matches")).expect("same presentation");
            }
            if !x.is_zero() {
                return x;
            }
        }
    }
}

/// Fraction-free Bareiss determinant over the integers.
fn integer_determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m.last().map_or(1, |row| row[n - 1])
}

/// An exponent vector in Z^{2r}.
///
/// Ordered lexicographically with the *last* coordinate most significant,
/// matching the iterated Laurent construction where t_{2r} is outermost.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn zero(len: usize) -> Self {
        ExponentVector(vec![0; len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        ExponentVector(self.0.iter().map(|x| x * k).collect())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;
    fn add(self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Neg for &ExponentVector {
    type Output = ExponentVector;
    fn neg(self) -> ExponentVector {
        ExponentVector(self.0.iter().map(|a| -a).collect())
    }
}

/// A finite sum of monomials with nonzero cyclotomic coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    p: u64,
    r: usize,
    terms: BTreeMap<ExponentVector, CyclotomicScalar>,
}

impl AlgebraElement {
    pub fn terms(&self) -> &BTreeMap<ExponentVector, CyclotomicScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.r != other.r {
            return Err(Error::PresentationMismatch);
        }
        Ok(())
    }

    fn accumulate(terms: &mut BTreeMap<ExponentVector, CyclotomicScalar>, a: ExponentVector, c: CyclotomicScalar) {
        match terms.get_mut(&a) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    terms.remove(&a);
                }
            }
            None => {
                if !c.is_zero() {
                    terms.insert(a, c);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (a, c) in &other.terms {
            Self::accumulate(&mut terms, a.clone(), c.clone());
        }
        Ok(AlgebraElement { p: self.p, r: self.r, terms })
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(a, c)| (a.clone(), c.neg())).collect();
        AlgebraElement { p: self.p, r: self.r, terms }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Bilinear extension of z^a z^b = ζ^{σ(a,b)} z^{a+b}.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = BTreeMap::new();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let s: i64 = (0..self.r).map(|i| a.0[2 * i + 1] * b.0[2 * i]).sum();
                let coeff = c.mul(d).mul_zeta_power(-s);
                Self::accumulate(&mut terms, a + b, coeff);
            }
        }
        Ok(AlgebraElement { p: self.p, r: self.r, terms })
    }

    /// The term of least exponent in the value-group order.
    pub fn leading_term(&self) -> Result<(&ExponentVector, &CyclotomicScalar)> {
        self.terms.iter().next().ok_or(Error::ZeroElement)
    }

    pub fn valuation(&self) -> Result<ExponentVector> {
        Ok(self.leading_term()?.0.clone())
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·z^{:?}", a.0)?;
        }
        Ok(())
    }
}

/// Maps the generator-adjacent index of z_{2i−1}, z_{2i} (0-based 2i, 2i+1)
/// to the split convention (i, i + r).
pub fn adjacent_to_split_permutation(r: usize) -> Vec<usize> {
    (0..2 * r).map(|k| if k % 2 == 0 { k / 2 } else { k / 2 + r }).collect()
}

/// Whether the commutator pairing agrees with the standard symplectic form
/// after relabelling basis vectors by `permutation`, on all basis pairs.
pub fn pairing_matches_standard_form(pres: &AlgebraPresentation, permutation: &[usize]) -> Result<bool> {
    let n = pres.rank();
    if permutation.len() != n {
        return Err(Error::DimensionMismatch { left: n, right: permutation.len() });
    }
    let space = SymplecticSpace::new(pres.p(), pres.r())?;
    for i in 0..n {
        for j in 0..n {
            let lhs = pres.commutator_pairing(&ExponentVector::unit(n, i), &ExponentVector::unit(n, j))?;
            let mut a = vec![0; n];
            let mut b = vec![0; n];
            a[permutation[i]] = 1;
            b[permutation[j]] = 1;
            if lhs != space.pairing(&a, &b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
