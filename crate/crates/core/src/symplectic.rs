//! The standard symplectic space F_p^{2r} and its totally isotropic and
//! Lagrangian subspaces.
//!
//! Coordinates use the split convention: basis vector i pairs with i + r.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::modring::is_prime;

/// Default cap on the estimated enumeration work p^{r² + 2r}.
pub const DEFAULT_LAGRANGIAN_WORK_CAP: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticSpace {
    p: u64,
    r: usize,
    gram: Vec<Vec<u64>>,
}

impl SymplecticSpace {
    pub fn new(p: u64, r: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        let dim = 2 * r;
        let mut gram = vec![vec![0; dim]; dim];
        for i in 0..r {
            gram[i][i + r] = 1;
            gram[i + r][i] = p - 1;
        }
        Ok(SymplecticSpace { p, r, gram })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        2 * self.r
    }

    pub fn gram(&self) -> &[Vec<u64>] {
        &self.gram
    }

    fn check_vector(&self, v: &[u64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: v.len() });
        }
        Ok(())
    }

    /// γ(a, b) = Σ_i (a_i b_{i+r} − a_{i+r} b_i) mod p.
    pub fn pairing(&self, a: &[u64], b: &[u64]) -> Result<u64> {
        self.check_vector(a)?;
        self.check_vector(b)?;
        Ok(self.pairing_unchecked(a, b))
    }

    fn pairing_unchecked(&self, a: &[u64], b: &[u64]) -> u64 {
        let p = self.p;
        let mut acc = 0;
        for i in 0..self.r {
            acc = (acc + a[i] % p * (b[i + self.r] % p)) % p;
            acc = (acc + p - a[i + self.r] % p * (b[i] % p) % p) % p;
        }
        acc
    }

    /// Every vector of F_p^{2r} in lexicographic order.
    pub fn vectors(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let total = self.p.pow(self.dim() as u32);
        (0..total).map(move |mut k| {
            let mut v = vec![0; self.dim()];
            for slot in v.iter_mut().rev() {
                *slot = k % self.p;
                k /= self.p;
            }
            v
        })
    }
}

/// Reduced row-echelon form over F_p; zero rows are dropped.
pub fn rref(p: u64, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(found) = (pivot_row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(pivot_row, found);
        let inv = inverse_mod_prime(m[pivot_row][col], p);
        for x in m[pivot_row].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = m[pivot_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            let f = row[col];
            if r != pivot_row && f != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == m.len() {
            break;
        }
    }
    m.truncate(pivot_row);
    m
}

fn inverse_mod_prime(x: u64, p: u64) -> u64 {
    // Fermat: x^{p−2}.
    let (mut base, mut k, mut acc) = (x % p, p - 2, 1);
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        k >>= 1;
    }
    acc
}

/// A subspace of the symplectic space keyed by its reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticSubspace {
    p: u64,
    r: usize,
    basis: Vec<Vec<u64>>,
}

impl SymplecticSubspace {
    pub fn zero(space: &SymplecticSpace) -> Self {
        SymplecticSubspace { p: space.p, r: space.r, basis: Vec::new() }
    }

    pub fn span(space: &SymplecticSpace, vectors: &[Vec<u64>]) -> Result<Self> {
        for v in vectors {
            space.check_vector(v)?;
        }
        Ok(SymplecticSubspace { p: space.p, r: space.r, basis: rref(space.p, vectors) })
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|row| row.iter().position(|&x| x != 0).expect("nonzero row")).collect()
    }

    /// Reduces `v` against the echelon basis; zero iff v lies in the subspace.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut v: Vec<u64> = v.iter().map(|x| x % p).collect();
        for (row, col) in self.basis.iter().zip(self.pivots()) {
            let f = v[col];
            if f != 0 {
                for (x, &b) in v.iter_mut().zip(row) {
                    *x = (*x + p - f * b % p) % p;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn with_vector(&self, v: &[u64]) -> Self {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        SymplecticSubspace { p: self.p, r: self.r, basis: rref(self.p, &rows) }
    }

    pub fn is_totally_isotropic(&self, space: &SymplecticSpace) -> bool {
        self.basis.iter().all(|a| self.basis.iter().all(|b| space.pairing_unchecked(a, b) == 0))
    }

    /// Nonzero vectors that are reduced against this subspace, have leading
    /// coefficient 1, and pair to zero with the whole subspace. Each isotropic
    /// one-step extension is generated by at least one of them.
    fn isotropic_extensions(&self, space: &SymplecticSpace) -> Vec<Vec<u64>> {
        let pivots = self.pivots();
        space
            .vectors()
            .filter(|v| {
                let lead = v.iter().find(|&&x| x != 0);
                lead == Some(&1)
                    && pivots.iter().all(|&c| v[c] == 0)
                    && self.basis.iter().all(|b| space.pairing_unchecked(b, v) == 0)
            })
            .collect()
    }

    /// Whether no vector outside the subspace keeps it totally isotropic.
    pub fn is_maximal_isotropic(&self, space: &SymplecticSpace) -> bool {
        self.is_totally_isotropic(space) && self.isotropic_extensions(space).is_empty()
    }
}

fn check_work(space: &SymplecticSpace, cap: u128) -> Result<()> {
    let r = space.r as u32;
    let work = (space.p as u128).saturating_pow(r * r + 2 * r);
    if work > cap {
        return Err(Error::SpaceTooLarge { work, cap });
    }
    Ok(())
}

/// All maximal totally isotropic subspaces, sorted by echelon basis.
///
/// Isotropic subspaces are grown one vector at a time from zero; a subspace
/// with no isotropic extension is recorded as maximal. Its dimension is not
/// assumed, so [`lagrangian_order_check`] tests it.
pub fn enumerate_lagrangians(space: &SymplecticSpace, cap: u128) -> Result<Vec<SymplecticSubspace>> {
    check_work(space, cap)?;
    let mut maximal = BTreeSet::new();
    let mut layer = BTreeSet::from([SymplecticSubspace::zero(space)]);
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for s in &layer {
            let ext = s.isotropic_extensions(space);
            if ext.is_empty() {
                maximal.insert(s.clone());
            }
            for v in ext {
                next.insert(s.with_vector(&v));
            }
        }
        layer = next;
    }
    Ok(maximal.into_iter().collect())
}

/// Totally isotropic subspaces of dimension exactly `k`, found by brute force
/// over increasing k-tuples of pairwise orthogonal independent vectors.
/// Shares nothing with [`enumerate_lagrangians`] beyond the echelon key.
pub fn isotropic_subspaces_of_dim(space: &SymplecticSpace, k: usize, cap: u128) -> Result<Vec<SymplecticSubspace>> {
    check_work(space, cap)?;
    fn grow(
        space: &SymplecticSpace,
        vectors: &[Vec<u64>],
        start: usize,
        chosen: &mut Vec<Vec<u64>>,
        k: usize,
        found: &mut BTreeSet<SymplecticSubspace>,
    ) {
        if chosen.len() == k {
            let s = SymplecticSubspace::span(space, chosen).expect("vectors have the right length");
            if s.dim() == k {
                found.insert(s);
            }
            return;
        }
        for i in start..vectors.len() {
            let v = &vectors[i];
            if chosen.iter().any(|c| space.pairing_unchecked(c, v) != 0) {
                continue;
            }
            chosen.push(v.clone());
            if rref(space.p, chosen).len() == chosen.len() {
                grow(space, vectors, i + 1, chosen, k, found);
            }
            chosen.pop();
        }
    }
    let vectors: Vec<Vec<u64>> = space.vectors().skip(1).collect();
    let mut found = BTreeSet::new();
    grow(space, &vectors, 0, &mut Vec::new(), k, &mut found);
    Ok(found.into_iter().collect())
}

/// Every enumerated Lagrangian has dimension r, and every totally isotropic
/// r-dimensional subspace is among them.
pub fn lagrangian_order_check(space: &SymplecticSpace, cap: u128) -> Result<bool> {
    let lagrangians = enumerate_lagrangians(space, cap)?;
    if lagrangians.iter().any(|l| l.dim() != space.r) {
        return Ok(false);
    }
    let listed: BTreeSet<&SymplecticSubspace> = lagrangians.iter().collect();
    let isotropic = isotropic_subspaces_of_dim(space, space.r, cap)?;
    Ok(isotropic.iter().all(|s| listed.contains(s)))
}

/// ∏_{i=1}^{r} (p^i + 1).
pub fn lagrangian_count_oracle(p: u64, r: usize) -> u128 {
    (1..=r as u32).map(|i| (p as u128).pow(i) + 1).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(dim: usize, i: usize) -> Vec<u64> {
        let mut v = vec![0; dim];
        v[i] = 1;
        v
    }

    #[test]
    fn gram_matches_pairing() {
        for (p, r) in [(2, 1), (3, 2), (5, 3)] {
            let s = SymplecticSpace::new(p, r).unwrap();
            for i in 0..2 * r {
                assert_eq!(s.gram()[i][i], 0);
                for j in 0..2 * r {
                    assert_eq!(s.pairing(&unit(2 * r, i), &unit(2 * r, j)).unwrap(), s.gram()[i][j]);
                    assert_eq!((s.gram()[i][j] + s.gram()[j][i]) % p, 0);
                }
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let s = SymplecticSpace::new(5, 2).unwrap();
        assert_eq!(s.pairing(&unit(4, 0), &unit(4, 2)).unwrap(), 1);
        assert_eq!(s.pairing(&unit(4, 2), &unit(4, 0)).unwrap(), 4);
        assert_eq!(s.pairing(&unit(4, 0), &unit(4, 1)).unwrap(), 0);
        assert_eq!(s.pairing(&[1, 2, 3, 4], &[1, 2, 3, 4]).unwrap(), 0);
        assert_eq!(s.pairing(&[1, 2, 3], &[1, 2, 3, 4]), Err(Error::DimensionMismatch { left: 4, right: 3 }));
    }

    #[test]
    fn bilinear_alternating_nondegenerate() {
        for (p, r) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
            let s = SymplecticSpace::new(p, r).unwrap();
            let vs: Vec<_> = s.vectors().collect();
            for a in &vs {
                assert_eq!(s.pairing(a, a).unwrap(), 0);
                if a.iter().any(|&x| x != 0) {
                    assert!((0..2 * r).any(|i| s.pairing(a, &unit(2 * r, i)).unwrap() != 0));
                }
                for b in &vs {
                    let ab = s.pairing(a, b).unwrap();
                    assert_eq!((ab + s.pairing(b, a).unwrap()) % p, 0);
                    // Linearity in the first slot against a fixed third vector.
                    let c = &vs[(a[0] as usize * 7 + b[0] as usize) % vs.len()];
                    let sum: Vec<u64> = a.iter().zip(c).map(|(x, y)| (x + y) % p).collect();
                    assert_eq!(s.pairing(&sum, b).unwrap(), (ab + s.pairing(c, b).unwrap()) % p);
                }
            }
        }
    }

    #[test]
    fn isotropy_examples() {
        let s = SymplecticSpace::new(3, 2).unwrap();
        let std_lag = SymplecticSubspace::span(&s, &[unit(4, 0), unit(4, 1)]).unwrap();
        assert!(std_lag.is_totally_isotropic(&s));
        assert!(std_lag.is_maximal_isotropic(&s));
        let hyperbolic = SymplecticSubspace::span(&s, &[unit(4, 0), unit(4, 2)]).unwrap();
        assert!(!hyperbolic.is_totally_isotropic(&s));
        assert!(SymplecticSubspace::zero(&s).is_totally_isotropic(&s));
    }

    #[test]
    fn small_lagrangian_counts() {
        for (p, r, n) in [(2, 1, 3), (3, 1, 4), (2, 2, 15)] {
            let s = SymplecticSpace::new(p, r).unwrap();
            let lags = enumerate_lagrangians(&s, DEFAULT_LAGRANGIAN_WORK_CAP).unwrap();
            assert_eq!(lags.len(), n);
            assert!(lagrangian_order_check(&s, DEFAULT_LAGRANGIAN_WORK_CAP).unwrap());
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(lagrangian_count_oracle(2, 2), 15);
        assert_eq!(lagrangian_count_oracle(3, 1), 4);
        assert_eq!(lagrangian_count_oracle(2, 3), 135);
    }

    #[test]
    fn refuses_large_spaces() {
        let s = SymplecticSpace::new(5, 3).unwrap();
        assert!(matches!(enumerate_lagrangians(&s, DEFAULT_LAGRANGIAN_WORK_CAP), Err(Error::SpaceTooLarge { .. })));
    }

    #[test]
    fn rref_examples() {
        assert_eq!(rref(3, &[vec![2, 2, 0], vec![1, 1, 0]]), vec![vec![1, 1, 0]]);
        assert_eq!(rref(5, &[vec![0, 3], vec![2, 1]]), vec![vec![1, 0], vec![0, 1]]);
        assert!(rref(2, &[vec![0, 0]]).is_empty());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn echelon_form_is_canonical(
                idx in 0usize..1000, perm_seed in 0usize..24, scales in prop::collection::vec(1u64..3, 2),
            ) {
                let s = SymplecticSpace::new(3, 2).unwrap();
                let lags = enumerate_lagrangians(&s, DEFAULT_LAGRANGIAN_WORK_CAP).unwrap();
                let l = &lags[idx % lags.len()];
                let mut rows: Vec<Vec<u64>> = l.basis().to_vec();
                if perm_seed % 2 == 1 {
                    rows.swap(0, 1);
                }
                // Row-scale and add one row to the other.
                for (row, &c) in rows.iter_mut().zip(&scales) {
                    for x in row.iter_mut() {
                        *x = *x * c % 3;
                    }
                }
                let mixed: Vec<u64> = rows[0].iter().zip(&rows[1]).map(|(a, b)| (a + b) % 3).collect();
                rows[1] = mixed;
                let again = SymplecticSubspace::span(&s, &rows).unwrap();
                prop_assert_eq!(&again, l);
            }
        }
    }
}
