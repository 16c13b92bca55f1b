//! Square matrices over Z/p^e, the groups SL_n and GL_n over that ring, the
//! reduction maps to lower levels and their congruence kernels.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{ModulusContext, Residue};

/// Default refusal threshold for [`enumerate_group`].
pub const DEFAULT_GROUP_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareMatrix {
    n: usize,
    ctx: ModulusContext,
    entries: Vec<Residue>,
}

impl SquareMatrix {
    pub fn identity(n: usize, ctx: ModulusContext) -> Self {
        Self::scalar(n, ctx, 1)
    }

    pub fn zero(n: usize, ctx: ModulusContext) -> Self {
        Self::scalar(n, ctx, 0)
    }

    pub fn scalar(n: usize, ctx: ModulusContext, c: i64) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        let c = ctx.normalize(c);
        let mut entries = vec![Residue::default(); n * n];
        for i in 0..n {
            entries[i * n + i] = c;
        }
        SquareMatrix { n, ctx, entries }
    }

    /// Builds a matrix from row-major integer entries, reducing each one.
    pub fn from_entries(n: usize, ctx: ModulusContext, values: &[i64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be positive".into()));
        }
        if values.len() != n * n {
            return Err(Error::DimensionMismatch { left: n * n, right: values.len() });
        }
        let entries = values.iter().map(|&v| ctx.normalize(v)).collect();
        Ok(SquareMatrix { n, ctx, entries })
    }

    pub fn from_rows<R: AsRef<[i64]>>(ctx: ModulusContext, rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let flat: Vec<i64> = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::from_entries(n, ctx, &flat)
    }

    /// The elementary matrix I + c·E_ij.
    pub fn elementary(n: usize, ctx: ModulusContext, i: usize, j: usize, c: i64) -> Self {
        let mut m = Self::identity(n, ctx);
        let idx = i * n + j;
        m.entries[idx] = ctx.add(m.entries[idx], ctx.normalize(c));
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> ModulusContext {
        self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> Residue {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Residue] {
        &self.entries
    }

    /// Row-major entries as plain integers.
    pub fn to_values(&self) -> Vec<u64> {
        self.entries.iter().map(|r| r.value()).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j).value() == u64::from(i == j)))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        if self.ctx != other.ctx {
            return Err(Error::ModulusMismatch { left: self.ctx.q(), right: other.ctx.q() });
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Product of two matrices already known to share dimension and modulus.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        debug_assert!(self.check_compatible(other).is_ok());
        let n = self.n;
        let q = self.ctx.q();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                // At most four products of values < 2^31 before reduction for n ≤ 4;
                // reduce after each step so larger n stays safe.
                let mut acc: u64 = 0;
                for k in 0..n {
                    acc = (acc + self.entries[i * n + k].value() * other.entries[k * n + j].value()) % q;
                }
                entries.push(self.ctx.normalize(acc as i64));
            }
        }
        SquareMatrix { n, ctx: self.ctx, entries }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| self.ctx.add(a, b)).collect();
        Ok(SquareMatrix { n: self.n, ctx: self.ctx, entries })
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = self.ctx.normalize(c);
        let entries = self.entries.iter().map(|&a| self.ctx.mul(a, c)).collect();
        SquareMatrix { n: self.n, ctx: self.ctx, entries }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n, self.ctx);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> Residue {
        (0..self.n).fold(self.ctx.normalize(0), |acc, i| self.ctx.add(acc, self.get(i, i)))
    }

    /// Exact determinant: cofactor expansion for n ≤ 4, elimination otherwise.
    pub fn det(&self) -> Residue {
        if self.n <= 4 {
            self.det_cofactor()
        } else {
            self.det_elimination()
        }
    }

    pub(crate) fn det_cofactor(&self) -> Residue {
        let vals: Vec<i64> = self.entries.iter().map(|r| r.value() as i64).collect();
        let cols: Vec<usize> = (0..self.n).collect();
        cofactor(&self.ctx, &vals, self.n, 0, &cols)
    }

    /// Determinant by row reduction pivoting on an entry of least p-valuation.
    /// Every other entry of the pivot column is then a multiple of the pivot
    /// up to a unit, so the reduction never divides by a non-unit.
    pub(crate) fn det_elimination(&self) -> Residue {
        let ctx = self.ctx;
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = ctx.normalize(1);
        for col in 0..n {
            let pivot_row = (col..n).min_by_key(|&r| ctx.p_valuation(a[r * n + col])).expect("nonempty range");
            let v = ctx.p_valuation(a[pivot_row * n + col]);
            if v >= ctx.e() {
                return ctx.normalize(0);
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(pivot_row * n + j, col * n + j);
                }
                det = ctx.neg(det);
            }
            let pv = ctx.p().pow(v);
            let pivot = a[col * n + col];
            let unit_part = ctx.normalize((pivot.value() / pv) as i64);
            let unit_inv = ctx.unit_inverse(unit_part).expect("valuation stripped");
            for r in col + 1..n {
                let entry = a[r * n + col];
                if entry.is_zero() {
                    continue;
                }
                let factor = ctx.mul(ctx.normalize((entry.value() / pv) as i64), unit_inv);
                for j in col..n {
                    let t = ctx.mul(factor, a[col * n + j]);
                    a[r * n + j] = ctx.sub(a[r * n + j], t);
                }
            }
            det = ctx.mul(det, pivot);
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.ctx.is_unit(self.det())
    }

    /// Gauss–Jordan inversion pivoting on unit entries only.
    pub fn mat_inverse(&self) -> Result<Self> {
        let ctx = self.ctx;
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n, ctx).entries;
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| ctx.is_unit(a[r * n + col])).ok_or(Error::NotInvertible(ctx.q()))?;
            if pivot_row != col {
                for j in 0..n {
                    a.swap(pivot_row * n + j, col * n + j);
                    inv.swap(pivot_row * n + j, col * n + j);
                }
            }
            let pinv = ctx.unit_inverse(a[col * n + col])?;
            for j in 0..n {
                a[col * n + j] = ctx.mul(a[col * n + j], pinv);
                inv[col * n + j] = ctx.mul(inv[col * n + j], pinv);
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col];
                for j in 0..n {
                    a[r * n + j] = ctx.sub(a[r * n + j], ctx.mul(factor, a[col * n + j]));
                    inv[r * n + j] = ctx.sub(inv[r * n + j], ctx.mul(factor, inv[col * n + j]));
                }
            }
        }
        let result = SquareMatrix { n, ctx, entries: inv };
        debug_assert!(self.mul_unchecked(&result).is_identity());
        Ok(result)
    }

    /// Entrywise reduction to Z/p^j.
    pub fn reduce(&self, j: u32) -> Result<Self> {
        if j < 1 || j > self.ctx.e() {
            return Err(Error::BadLevel { level: j, e: self.ctx.e() });
        }
        let target = self.ctx.with_exponent(j)?;
        let entries = self.entries.iter().map(|r| target.normalize(r.value() as i64)).collect();
        Ok(SquareMatrix { n: self.n, ctx: target, entries })
    }

    /// Whether the matrix lies in H_j, the kernel of reduction to level j.
    pub fn in_congruence_kernel(&self, j: u32) -> Result<bool> {
        if j < 1 || j >= self.ctx.e() {
            return Err(Error::BadLevel { level: j, e: self.ctx.e() });
        }
        Ok(self.congruent_to_identity(j))
    }

    /// m ≡ I mod p^j, for any 0 ≤ j ≤ e.
    pub(crate) fn congruent_to_identity(&self, j: u32) -> bool {
        let pj = self.ctx.p().pow(j);
        (0..self.n).all(|r| {
            (0..self.n).all(|c| {
                let target = u64::from(r == c);
                (self.get(r, c).value() + pj - target % pj).is_multiple_of(pj)
            })
        })
    }

    /// Least k ≥ 1 with m^k = I.
    pub fn element_order(&self, bound: u64) -> Result<u64> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible(self.ctx.q()));
        }
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Ok(k);
            }
            acc = acc.mul_unchecked(self);
        }
        Err(Error::OrderExceedsBound(bound))
    }

    /// Whether m has order exactly `k` for prime `k`.
    pub(crate) fn has_prime_order(&self, k: u64) -> bool {
        !self.is_identity() && self.pow(k).is_identity()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul_unchecked(other) == other.mul_unchecked(self)
    }

    pub fn conjugate_by(&self, g: &Self, g_inv: &Self) -> Self {
        g.mul_unchecked(self).mul_unchecked(g_inv)
    }
}

fn cofactor(ctx: &ModulusContext, a: &[i64], n: usize, row: usize, cols: &[usize]) -> Residue {
    if cols.len() == 1 {
        return ctx.normalize(a[row * n + cols[0]]);
    }
    let mut acc = ctx.normalize(0);
    for (k, &c) in cols.iter().enumerate() {
        let entry = ctx.normalize(a[row * n + c]);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = ctx.mul(entry, cofactor(ctx, a, n, row + 1, &rest));
        acc = if k % 2 == 0 { ctx.add(acc, minor) } else { ctx.sub(acc, minor) };
    }
    acc
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "] mod {}", self.ctx.q())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Sl,
    Gl,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Sl => "SL",
            GroupKind::Gl => "GL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Descriptor {
    Classical(GroupKind),
    /// A subgroup given by its elements; the label is for display only.
    Subgroup(String),
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Classical(k) => write!(f, "{k}"),
            Descriptor::Subgroup(label) => f.write_str(label),
        }
    }
}

/// |SL_n(Z/p^e)| or |GL_n(Z/p^e)|; saturates at `u128::MAX`.
pub fn group_order_oracle(kind: GroupKind, n: usize, p: u64, e: u32) -> u128 {
    let p = p as u128;
    let n32 = n as u32;
    let mut gl_base: u128 = 1;
    for i in 0..n32 {
        let term = p.saturating_pow(n32).saturating_sub(p.saturating_pow(i));
        gl_base = gl_base.saturating_mul(term);
    }
    let (base, dim) = match kind {
        GroupKind::Gl => (gl_base, n32 * n32),
        GroupKind::Sl => (gl_base / (p - 1), n32 * n32 - 1),
    };
    base.saturating_mul(p.saturating_pow(dim * (e - 1)))
}

/// A finite matrix group listed element by element in lexicographic order.
#[derive(Debug, Clone)]
pub struct GroupTable {
    descriptor: Descriptor,
    n: usize,
    ctx: ModulusContext,
    elements: Vec<SquareMatrix>,
}

impl GroupTable {
    /// Wraps a list of elements, sorting and deduplicating it. The caller is
    /// responsible for the list being a group.
    pub fn from_elements(
        descriptor: Descriptor,
        n: usize,
        ctx: ModulusContext,
        mut elements: Vec<SquareMatrix>,
    ) -> Result<Self> {
        for m in &elements {
            if m.n != n {
                return Err(Error::DimensionMismatch { left: n, right: m.n });
            }
            if m.ctx != ctx {
                return Err(Error::ModulusMismatch { left: ctx.q(), right: m.ctx.q() });
            }
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(GroupTable { descriptor, n, ctx, elements })
    }

    /// The subgroup generated by `generators`, by breadth-first closure.
    pub fn closure(
        descriptor: Descriptor,
        n: usize,
        ctx: ModulusContext,
        generators: &[SquareMatrix],
        cap: u64,
    ) -> Result<Self> {
        let identity = SquareMatrix::identity(n, ctx);
        for g in generators {
            identity.check_compatible(g)?;
            if !g.is_invertible() {
                return Err(Error::NotInvertible(ctx.q()));
            }
        }
        let mut seen: HashSet<SquareMatrix> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(identity.clone());
        queue.push_back(identity);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = x.mul_unchecked(g);
                if !seen.contains(&y) {
                    if seen.len() as u64 >= cap {
                        return Err(Error::GroupTooLarge { order: seen.len() as u128 + 1, cap });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Self::from_elements(descriptor, n, ctx, seen.into_iter().collect())
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> ModulusContext {
        self.ctx
    }

    pub fn elements(&self) -> &[SquareMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: &SquareMatrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    pub fn position(&self, m: &SquareMatrix) -> Option<usize> {
        self.elements.binary_search(m).ok()
    }

    /// H_j: elements congruent to the identity modulo p^j.
    pub fn congruence_kernel(&self, j: u32) -> Result<GroupTable> {
        if j < 1 || j >= self.ctx.e() {
            return Err(Error::BadLevel { level: j, e: self.ctx.e() });
        }
        let elements = self.elements.iter().filter(|m| m.congruent_to_identity(j)).cloned().collect();
        Ok(GroupTable {
            descriptor: Descriptor::Subgroup(format!("H_{j} of {}", self.descriptor)),
            n: self.n,
            ctx: self.ctx,
            elements,
        })
    }

    /// The image of reduction to level j.
    pub fn reduction_image(&self, j: u32) -> Result<GroupTable> {
        if j < 1 || j > self.ctx.e() {
            return Err(Error::BadLevel { level: j, e: self.ctx.e() });
        }
        let elements = self.elements.iter().map(|m| m.reduce(j)).collect::<Result<Vec<_>>>()?;
        Self::from_elements(
            Descriptor::Subgroup(format!("image of {} at level {j}", self.descriptor)),
            self.n,
            self.ctx.with_exponent(j)?,
            elements,
        )
    }

    /// Every element conjugated by `g`, re-sorted.
    pub fn conjugate(&self, g: &SquareMatrix) -> Result<GroupTable> {
        let g_inv = g.mat_inverse()?;
        let elements = self.elements.iter().map(|m| m.conjugate_by(g, &g_inv)).collect();
        Self::from_elements(
            Descriptor::Subgroup(format!("conjugate of {}", self.descriptor)),
            self.n,
            self.ctx,
            elements,
        )
    }

    pub fn subgroup_where<F: Fn(&SquareMatrix) -> bool>(&self, label: &str, keep: F) -> GroupTable {
        GroupTable {
            descriptor: Descriptor::Subgroup(label.to_string()),
            n: self.n,
            ctx: self.ctx,
            elements: self.elements.iter().filter(|m| keep(m)).cloned().collect(),
        }
    }

    /// Checks identity membership, inverses, and closure on up to `samples`
    /// deterministic pairs.
    pub fn spot_check_closure(&self, samples: usize) -> bool {
        if !self.contains(&SquareMatrix::identity(self.n, self.ctx)) {
            return false;
        }
        let len = self.elements.len();
        let step = (len / samples.max(1)).max(1);
        for (k, a) in self.elements.iter().enumerate().step_by(step) {
            let b = &self.elements[(k * 7919 + 1) % len];
            if !self.contains(&a.mul_unchecked(b)) {
                return false;
            }
            match a.mat_inverse() {
                Ok(inv) if self.contains(&inv) => {}
                _ => return false,
            }
        }
        true
    }
}

/// Elementary transvections, plus diagonal unit scalings for GL.
pub fn standard_generators(kind: GroupKind, n: usize, ctx: ModulusContext) -> Vec<SquareMatrix> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gens.push(SquareMatrix::elementary(n, ctx, i, j, 1));
            }
        }
    }
    if kind == GroupKind::Gl {
        for u in ctx.unit_group_generators() {
            let mut d = SquareMatrix::identity(n, ctx);
            d.entries[0] = u;
            gens.push(d);
        }
    }
    gens
}

/// Lists SL_n(Z/p^e) or GL_n(Z/p^e), refusing when the predicted order
/// exceeds `cap`.
pub fn enumerate_group(kind: GroupKind, n: usize, ctx: ModulusContext, cap: u64) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::InvalidParameter("matrix dimension must be positive".into()));
    }
    let order = group_order_oracle(kind, n, ctx.p(), ctx.e());
    if order > cap as u128 {
        return Err(Error::GroupTooLarge { order, cap });
    }
    let gens = standard_generators(kind, n, ctx);
    let table = GroupTable::closure(Descriptor::Classical(kind), n, ctx, &gens, cap)?;
    debug_assert_eq!(table.len() as u128, order);
    Ok(table)
}

/// All upper unitriangular n×n matrices over Z/p^e.
pub fn unitriangular_group(n: usize, ctx: ModulusContext, cap: u64) -> Result<GroupTable> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let order = (ctx.q() as u128).saturating_pow(slots.len() as u32);
    if order > cap as u128 {
        return Err(Error::GroupTooLarge { order, cap });
    }
    let mut elements = Vec::with_capacity(order as usize);
    let mut digits = vec![0u64; slots.len()];
    loop {
        let mut m = SquareMatrix::identity(n, ctx);
        for (&(i, j), &d) in slots.iter().zip(&digits) {
            m.entries[i * n + j] = ctx.normalize(d as i64);
        }
        elements.push(m);
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == digits.len() {
                return GroupTable::from_elements(Descriptor::Subgroup(format!("UT_{n}")), n, ctx, elements);
            }
            digits[k] += 1;
            if digits[k] < ctx.q() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, e: u32) -> ModulusContext {
        ModulusContext::new(p, e).unwrap()
    }

    fn m(c: ModulusContext, rows: &[[i64; 2]]) -> SquareMatrix {
        SquareMatrix::from_rows(c, rows).unwrap()
    }

    #[test]
    fn mat_mul_examples() {
        let c4 = ctx(2, 2);
        let a = m(c4, &[[1, 1], [0, 1]]);
        let b = m(c4, &[[1, 0], [1, 1]]);
        assert_eq!(a.mat_mul(&b).unwrap(), m(c4, &[[2, 1], [1, 1]]));
        let c8 = ctx(2, 3);
        let three = m(c8, &[[3, 0], [0, 3]]);
        assert!(three.mat_mul(&three).unwrap().is_identity());
        let x = m(c8, &[[5, 7], [2, 6]]);
        assert_eq!(SquareMatrix::identity(2, c8).mat_mul(&x).unwrap(), x);
    }

    #[test]
    fn mat_mul_errors() {
        let a = SquareMatrix::identity(2, ctx(2, 2));
        let b = SquareMatrix::identity(3, ctx(2, 2));
        let c = SquareMatrix::identity(2, ctx(3, 1));
        assert_eq!(a.mat_mul(&b), Err(Error::DimensionMismatch { left: 2, right: 3 }));
        assert_eq!(a.mat_mul(&c), Err(Error::ModulusMismatch { left: 4, right: 3 }));
    }

    #[test]
    fn det_examples() {
        assert_eq!(SquareMatrix::identity(3, ctx(5, 1)).det().value(), 1);
        assert_eq!(m(ctx(2, 2), &[[1, 2], [2, 1]]).det().value(), 1);
        assert_eq!(m(ctx(2, 3), &[[2, 0], [0, 2]]).det().value(), 4);
    }

    #[test]
    fn det_routes_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for (p, e) in [(2, 3), (3, 2), (5, 1), (2, 1), (7, 2)] {
            let c = ctx(p, e);
            for n in 1..=4 {
                for _ in 0..200 {
                    let vals: Vec<i64> = (0..n * n).map(|_| rng.gen_range(0..c.q() as i64)).collect();
                    let a = SquareMatrix::from_entries(n, c, &vals).unwrap();
                    assert_eq!(a.det_cofactor(), a.det_elimination(), "{a}");
                }
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let c9 = ctx(3, 2);
        assert!(SquareMatrix::identity(2, c9).mat_inverse().unwrap().is_identity());
        assert_eq!(m(c9, &[[1, 1], [0, 1]]).mat_inverse().unwrap(), m(c9, &[[1, 8], [0, 1]]));
        assert_eq!(m(ctx(2, 2), &[[2, 0], [0, 1]]).mat_inverse(), Err(Error::NotInvertible(4)));
        // Needs a row swap: the (0,0) entry is not a unit.
        let a = m(ctx(2, 3), &[[2, 1], [1, 0]]);
        assert!(a.mat_mul(&a.mat_inverse().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn reduce_examples() {
        let c8 = ctx(2, 3);
        let a = SquareMatrix::identity(2, c8).add(&m(c8, &[[4, 4], [0, 4]])).unwrap();
        assert!(a.reduce(2).unwrap().is_identity());
        assert_eq!(a.reduce(2).unwrap().ctx(), ctx(2, 2));
        assert_eq!(a.reduce(3).unwrap(), a);
        assert!(m(c8, &[[5, 4], [4, 5]]).reduce(1).unwrap().is_identity());
        assert_eq!(a.reduce(0), Err(Error::BadLevel { level: 0, e: 3 }));
        assert_eq!(a.reduce(4), Err(Error::BadLevel { level: 4, e: 3 }));
    }

    #[test]
    fn congruence_kernel_examples() {
        let c8 = ctx(2, 3);
        let id = SquareMatrix::identity(2, c8);
        assert!(id.in_congruence_kernel(1).unwrap() && id.in_congruence_kernel(2).unwrap());
        let three = m(c8, &[[3, 0], [0, 3]]);
        assert!(three.in_congruence_kernel(1).unwrap());
        assert!(!three.in_congruence_kernel(2).unwrap());
        assert!(m(c8, &[[1, 4], [0, 1]]).in_congruence_kernel(2).unwrap());
        assert_eq!(id.in_congruence_kernel(3), Err(Error::BadLevel { level: 3, e: 3 }));
    }

    #[test]
    fn element_order_examples() {
        assert_eq!(SquareMatrix::identity(2, ctx(3, 1)).element_order(10).unwrap(), 1);
        assert_eq!(m(ctx(3, 1), &[[1, 1], [0, 1]]).element_order(10).unwrap(), 3);
        assert_eq!(m(ctx(2, 3), &[[3, 0], [0, 3]]).element_order(10).unwrap(), 2);
        assert_eq!(m(ctx(3, 2), &[[1, 1], [0, 1]]).element_order(5), Err(Error::OrderExceedsBound(5)));
        assert_eq!(m(ctx(2, 2), &[[2, 0], [0, 1]]).element_order(5), Err(Error::NotInvertible(4)));
    }

    #[test]
    fn order_oracle_examples() {
        assert_eq!(group_order_oracle(GroupKind::Sl, 2, 3, 1), 24);
        assert_eq!(group_order_oracle(GroupKind::Sl, 2, 2, 2), 48);
        assert_eq!(group_order_oracle(GroupKind::Sl, 4, 2, 1), 20160);
        assert_eq!(group_order_oracle(GroupKind::Gl, 2, 2, 1), 6);
        assert_eq!(group_order_oracle(GroupKind::Gl, 2, 3, 1), 48);
    }

    #[test]
    fn enumerate_small_groups() {
        let sl22 = enumerate_group(GroupKind::Sl, 2, ctx(2, 1), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(sl22.len(), 6);
        let sl24 = enumerate_group(GroupKind::Sl, 2, ctx(2, 2), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(sl24.len(), 48);
        let sl23 = enumerate_group(GroupKind::Sl, 2, ctx(3, 1), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(sl23.len(), 24);
        assert!(sl24.elements().windows(2).all(|w| w[0] < w[1]));
        assert!(sl24.spot_check_closure(48));
    }

    #[test]
    fn enumeration_refuses_large_groups() {
        let err = enumerate_group(GroupKind::Sl, 4, ctx(3, 2), DEFAULT_GROUP_CAP).unwrap_err();
        assert!(matches!(err, Error::GroupTooLarge { .. }));
        let err = enumerate_group(GroupKind::Sl, 2, ctx(2, 3), 100).unwrap_err();
        assert_eq!(err, Error::GroupTooLarge { order: 384, cap: 100 });
    }

    #[test]
    fn sl_is_determinant_one_part_of_gl() {
        for (p, e) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)] {
            let c = ctx(p, e);
            let gl = enumerate_group(GroupKind::Gl, 2, c, DEFAULT_GROUP_CAP).unwrap();
            let sl = enumerate_group(GroupKind::Sl, 2, c, DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(gl.len() as u128, group_order_oracle(GroupKind::Gl, 2, p, e));
            let det_one: Vec<_> = gl.elements().iter().filter(|m| m.det().value() == 1).cloned().collect();
            assert_eq!(det_one, sl.elements());
        }
    }

    #[test]
    fn unitriangular_has_expected_order() {
        let ut = unitriangular_group(4, ctx(2, 1), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(ut.len(), 64);
        assert!(ut.spot_check_closure(64));
        assert!(ut.elements().iter().all(|m| m.det().value() == 1));
    }
}
