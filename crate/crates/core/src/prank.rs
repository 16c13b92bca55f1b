//! p-ranks of finite matrix groups.
//!
//! The rank search enumerates elementary abelian p-subgroups through their
//! *greedy bases*: b_1 is the least nonidentity element of the subgroup and
//! b_{k+1} is the least element outside span(b_1, …, b_k). Every subgroup has
//! exactly one greedy basis and every prefix of a greedy basis is again a
//! greedy basis, so a depth-first search that only accepts an extension `b`
//! when `b` is the least element of span(prefix, b) \ span(prefix) visits each
//! elementary abelian subgroup once.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matgroup::{enumerate_group, unitriangular_group, GroupKind, GroupTable, SquareMatrix, DEFAULT_GROUP_CAP};
use crate::modring::ModulusContext;

pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of visited search nodes.
    pub budget: u64,
    /// Split the search over first generators with rayon.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_SEARCH_BUDGET, parallel: false }
    }
}

/// Pairwise commuting order-p matrices spanning an elementary abelian
/// subgroup of order p^rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankWitness {
    p: u64,
    basis: Vec<SquareMatrix>,
}

impl RankWitness {
    pub fn new(p: u64, basis: Vec<SquareMatrix>) -> Self {
        RankWitness { p, basis }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SquareMatrix] {
        &self.basis
    }

    /// All p^rank products b_1^{k_1} ⋯ b_r^{k_r}, identity included.
    pub fn span(&self) -> Vec<SquareMatrix> {
        let Some(first) = self.basis.first() else {
            return Vec::new();
        };
        let mut span = vec![SquareMatrix::identity(first.n(), first.ctx())];
        for b in &self.basis {
            span = extend_span(&span, b, self.p);
        }
        span
    }

    /// Checks the witness invariants from scratch.
    pub fn validate(&self) -> Result<()> {
        for (i, b) in self.basis.iter().enumerate() {
            if !b.has_prime_order(self.p) {
                return Err(Error::InvalidWitness(format!("basis element {i} does not have order {}", self.p)));
            }
            for (j, c) in self.basis.iter().enumerate().skip(i + 1) {
                if b.n() != c.n() || b.ctx() != c.ctx() {
                    return Err(Error::InvalidWitness("basis elements live in different rings".into()));
                }
                if !b.commutes_with(c) {
                    return Err(Error::InvalidWitness(format!("basis elements {i} and {j} do not commute")));
                }
            }
        }
        let span = self.span();
        let distinct: BTreeSet<&SquareMatrix> = span.iter().collect();
        let expected = (self.p as usize).pow(self.rank() as u32);
        if !self.basis.is_empty() && distinct.len() != expected {
            return Err(Error::InvalidWitness(format!(
                "span has {} distinct elements, expected {expected}",
                distinct.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for RankWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {} witness", self.rank())?;
        for b in &self.basis {
            write!(f, "\n  {b}")?;
        }
        Ok(())
    }
}

fn extend_span(span: &[SquareMatrix], b: &SquareMatrix, p: u64) -> Vec<SquareMatrix> {
    let mut out = Vec::with_capacity(span.len() * p as usize);
    let mut power = SquareMatrix::identity(b.n(), b.ctx());
    for _ in 0..p {
        out.extend(span.iter().map(|s| s.mul_unchecked(&power)));
        power = power.mul_unchecked(b);
    }
    out
}

/// Elements of order exactly p, in canonical order.
pub fn order_p_elements(g: &GroupTable) -> Vec<SquareMatrix> {
    let p = g.ctx().p();
    g.elements().iter().filter(|m| m.has_prime_order(p)).cloned().collect()
}

struct Search<'a> {
    p: u64,
    elements: &'a [SquareMatrix],
    budget: u64,
    steps: &'a AtomicU64,
    global_best: &'a AtomicUsize,
}

#[derive(Clone)]
struct Node {
    chosen: Vec<usize>,
    /// Every element of the current span, identity included.
    span: Vec<SquareMatrix>,
    candidates: Vec<usize>,
}

impl Search<'_> {
    fn index_of(&self, m: &SquareMatrix) -> Option<usize> {
        self.elements.binary_search(m).ok()
    }

    fn tick(&self) -> Result<()> {
        let used = self.steps.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.budget {
            return Err(Error::SearchBudgetExceeded(self.budget));
        }
        Ok(())
    }

    /// Extends `node` by element `i` if `i` is the least element of the new
    /// coset layer; returns the child node.
    fn extend(&self, node: &Node, i: usize) -> Option<Node> {
        let b = &self.elements[i];
        let mut layer = Vec::with_capacity(node.span.len() * (self.p as usize - 1));
        let mut power = b.clone();
        for _ in 1..self.p {
            for s in &node.span {
                let y = s.mul_unchecked(&power);
                match self.index_of(&y) {
                    Some(idx) if idx >= i => layer.push(y),
                    _ => return None,
                }
            }
            power = power.mul_unchecked(b);
        }
        let mut span = node.span.clone();
        span.extend(layer);
        let in_span: BTreeSet<usize> = span.iter().filter_map(|m| self.index_of(m)).collect();
        let candidates = node
            .candidates
            .iter()
            .copied()
            .filter(|&c| c > i && !in_span.contains(&c) && self.elements[c].commutes_with(b))
            .collect();
        let mut chosen = node.chosen.clone();
        chosen.push(i);
        Some(Node { chosen, span, candidates })
    }

    /// Whether rank `target` is still reachable from a subgroup of rank `k`
    /// with `candidates` admissible extensions: a rank-`target` extension puts
    /// p^target − p^k new elements into the candidate list.
    fn can_reach(&self, k: usize, candidates: usize, target: usize) -> bool {
        let needed = (self.p as u128).saturating_pow(target as u32) - (self.p as u128).pow(k as u32);
        needed <= candidates as u128
    }

    fn dfs(&self, node: &Node, best: &mut Vec<usize>) -> Result<()> {
        self.tick()?;
        if node.chosen.len() > best.len() {
            *best = node.chosen.clone();
            self.global_best.fetch_max(best.len(), Ordering::Relaxed);
        }
        let k = node.chosen.len();
        for (pos, &c) in node.candidates.iter().enumerate() {
            // Ties with the global best are still explored so the result does
            // not depend on scheduling.
            let target = (best.len() + 1).max(self.global_best.load(Ordering::Relaxed));
            if !self.can_reach(k, node.candidates.len() - pos, target) {
                break;
            }
            if let Some(child) = self.extend(node, c) {
                if self.can_reach(child.chosen.len(), child.candidates.len(), target) {
                    self.dfs(&child, best)?;
                }
            }
        }
        Ok(())
    }
}

/// Exact p-rank of `g` together with the lexicographically least greedy basis
/// of a maximal elementary abelian subgroup.
pub fn p_rank(g: &GroupTable, config: &SearchConfig) -> Result<(usize, RankWitness)> {
    let p = g.ctx().p();
    let elements = order_p_elements(g);
    let steps = AtomicU64::new(0);
    let global_best = AtomicUsize::new(0);
    let search = Search { p, elements: &elements, budget: config.budget, steps: &steps, global_best: &global_best };
    let root = Node {
        chosen: Vec::new(),
        span: vec![SquareMatrix::identity(g.n(), g.ctx())],
        candidates: (0..elements.len()).collect(),
    };

    let best = if config.parallel {
        let branches: Vec<Result<Vec<usize>>> = (0..elements.len())
            .into_par_iter()
            .map(|i| {
                let mut best = Vec::new();
                if let Some(child) = search.extend(&root, i) {
                    search.dfs(&child, &mut best)?;
                }
                Ok(best)
            })
            .collect();
        let mut best: Vec<usize> = Vec::new();
        for branch in branches {
            let branch = branch?;
            // Strict comparison keeps the branch with the least first generator.
            if branch.len() > best.len() {
                best = branch;
            }
        }
        best
    } else {
        let mut best = Vec::new();
        search.dfs(&root, &mut best)?;
        best
    };

    let witness = RankWitness::new(p, best.iter().map(|&i| elements[i].clone()).collect());
    debug_assert!(witness.validate().is_ok());
    Ok((witness.rank(), witness))
}

/// p-rank of SL_n(F_p) or GL_n(F_p) computed inside the upper unitriangular
/// matrices, a Sylow p-subgroup of both.
pub fn sylow_restricted_rank(
    kind: GroupKind,
    n: usize,
    p: u64,
    e: u32,
    config: &SearchConfig,
) -> Result<(usize, RankWitness)> {
    if e != 1 {
        return Err(Error::Unsupported(format!("Sylow-restricted search needs e = 1, got e = {e}")));
    }
    if !(1..=4).contains(&n) {
        return Err(Error::Unsupported(format!("Sylow-restricted search needs n ≤ 4, got n = {n}")));
    }
    let ctx = ModulusContext::new(p, 1)?;
    let ut = unitriangular_group(n, ctx, DEFAULT_GROUP_CAP)?;
    // Unitriangular matrices have determinant 1, so they lie in SL and GL alike.
    let _ = kind;
    p_rank(&ut, config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaVariant {
    /// p odd: every order-p element of H_1 lies in H_{e−1}.
    OddP,
    /// p = 2: every order-2 element of H_2 lies in H_{e−1}.
    Two,
    /// p = 2, false on purpose: every order-2 element of H_1 lies in H_{e−1}.
    ProbeH1,
}

impl LemmaVariant {
    /// The congruence level whose order-p elements are examined.
    pub fn source_level(self) -> u32 {
        match self {
            LemmaVariant::OddP | LemmaVariant::ProbeH1 => 1,
            LemmaVariant::Two => 2,
        }
    }

    pub fn expects_violations(self) -> bool {
        self == LemmaVariant::ProbeH1
    }
}

#[derive(Debug, Clone)]
pub struct KernelLemmaReport {
    pub kind: GroupKind,
    pub n: usize,
    pub p: u64,
    pub e: u32,
    pub variant: LemmaVariant,
    pub checked_count: usize,
    pub violations: Vec<SquareMatrix>,
}

impl KernelLemmaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Examines every order-p element of the source congruence kernel and
/// collects those outside H_{e−1}.
pub fn verify_kernel_lemma(
    kind: GroupKind,
    n: usize,
    p: u64,
    e: u32,
    variant: LemmaVariant,
    cap: u64,
) -> Result<KernelLemmaReport> {
    match variant {
        LemmaVariant::OddP if p == 2 || e < 2 => {
            return Err(Error::InvalidParameter(format!("odd-p variant needs p odd and e ≥ 2, got p={p} e={e}")))
        }
        LemmaVariant::Two | LemmaVariant::ProbeH1 if p != 2 || e < 3 => {
            return Err(Error::InvalidParameter(format!("p=2 variants need p = 2 and e ≥ 3, got p={p} e={e}")))
        }
        _ => {}
    }
    let ctx = ModulusContext::new(p, e)?;
    let group = enumerate_group(kind, n, ctx, cap)?;
    let source = group.congruence_kernel(variant.source_level())?;
    let mut checked_count = 0;
    let mut violations = Vec::new();
    for m in source.elements() {
        if m.has_prime_order(p) {
            checked_count += 1;
            if !m.congruent_to_identity(e - 1) {
                violations.push(m.clone());
            }
        }
    }
    Ok(KernelLemmaReport { kind, n, p, e, variant, checked_count, violations })
}

/// The basis {I + p^{e−1}E} of H_{e−1}, with E running over the standard
/// basis of the Lie algebra mod p (trace-zero matrices for SL).
pub fn lie_kernel_basis(kind: GroupKind, n: usize, ctx: ModulusContext) -> Result<RankWitness> {
    if ctx.e() < 2 {
        return Err(Error::InvalidParameter("the Lie kernel needs e ≥ 2".into()));
    }
    let scale = ctx.p().pow(ctx.e() - 1) as i64;
    let id = SquareMatrix::identity(n, ctx);
    let mut basis = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                basis.push(SquareMatrix::elementary(n, ctx, i, j, scale));
            }
        }
    }
    match kind {
        GroupKind::Gl => {
            for i in 0..n {
                basis.push(SquareMatrix::elementary(n, ctx, i, i, scale));
            }
        }
        GroupKind::Sl => {
            for i in 0..n.saturating_sub(1) {
                let mut values: Vec<i64> = id.to_values().into_iter().map(|v| v as i64).collect();
                values[i * n + i] += scale;
                values[(n - 1) * n + (n - 1)] -= scale;
                basis.push(SquareMatrix::from_entries(n, ctx, &values)?);
            }
        }
    }
    let witness = RankWitness::new(ctx.p(), basis);
    witness.validate()?;
    Ok(witness)
}

pub fn rank_upper_bound(d: u64, base_rank: u64) -> u64 {
    d + base_rank
}

/// Elements of SL_2(Z/2^e) squaring to the identity, and their structure.
#[derive(Debug, Clone)]
pub struct InvolutionCensus {
    pub e: u32,
    pub elements: Vec<SquareMatrix>,
    /// The census equals the preimage of {±I} under reduction to level e − 1.
    pub equals_preimage: bool,
    /// Every element is [[u + 2^{e−1}a, 2^{e−1}b], [2^{e−1}c, u + 2^{e−1}a]]
    /// with u ≡ ±1 and a, b, c ∈ {0, 1}.
    pub matches_form: bool,
    /// The census is H_1 (only meaningful for e = 2).
    pub equals_h1: bool,
    /// Closed under products, commutative, every element squares to I.
    pub elementary_abelian: bool,
    pub rank: usize,
    pub witness: RankWitness,
}

impl InvolutionCensus {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

fn matches_involution_form(m: &SquareMatrix) -> bool {
    let ctx = m.ctx();
    let half = 1u64 << (ctx.e() - 1);
    let q = ctx.q();
    for u in [1, q - 1] {
        for a in 0..2u64 {
            let diag = (u + half * a) % q;
            if m.get(0, 0).value() != diag || m.get(1, 1).value() != diag {
                continue;
            }
            if [m.get(0, 1), m.get(1, 0)].iter().all(|x| x.value() % half == 0) {
                return true;
            }
        }
    }
    false
}

pub fn involution_census_sl2(e: u32, cap: u64, config: &SearchConfig) -> Result<InvolutionCensus> {
    if e < 2 {
        return Err(Error::InvalidParameter("the involution census needs e ≥ 2".into()));
    }
    let ctx = ModulusContext::new(2, e)?;
    let group = enumerate_group(GroupKind::Sl, 2, ctx, cap)?;
    let census = group.subgroup_where("involutions", |m| m.mul_unchecked(m).is_identity());

    let minus_one = SquareMatrix::scalar(2, ctx, -1);
    let preimage = group.subgroup_where("preimage of ±I", |m| {
        let mut diff_plus = m.clone();
        let mut diff_minus = m.mul_unchecked(&minus_one);
        diff_plus = diff_plus.reduce(e - 1).expect("level in range");
        diff_minus = diff_minus.reduce(e - 1).expect("level in range");
        diff_plus.is_identity() || diff_minus.is_identity()
    });
    let h1 = group.congruence_kernel(1)?;

    let elements = census.elements().to_vec();
    let elementary_abelian =
        elements.iter().all(|a| elements.iter().all(|b| a.commutes_with(b) && census.contains(&a.mul_unchecked(b))));
    let (rank, witness) = p_rank(&census, config)?;
    Ok(InvolutionCensus {
        e,
        equals_preimage: preimage.elements() == elements.as_slice(),
        matches_form: elements.iter().all(matches_involution_form),
        equals_h1: h1.elements() == elements.as_slice(),
        elementary_abelian,
        rank,
        witness,
        elements,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubadditivityReport {
    pub level: u32,
    pub group_rank: usize,
    pub kernel_rank: usize,
    pub image_rank: usize,
}

impl SubadditivityReport {
    pub fn holds(&self) -> bool {
        self.group_rank <= self.kernel_rank + self.image_rank
    }
}

/// Computes rank_p(G), rank_p(H_j) and rank_p(π_j(G)) exactly.
pub fn subadditivity_check(g: &GroupTable, j: u32, config: &SearchConfig) -> Result<SubadditivityReport> {
    if j < 1 || j >= g.ctx().e() {
        return Err(Error::BadLevel { level: j, e: g.ctx().e() });
    }
    let (group_rank, _) = p_rank(g, config)?;
    let (kernel_rank, _) = p_rank(&g.congruence_kernel(j)?, config)?;
    let (image_rank, _) = p_rank(&g.reduction_image(j)?, config)?;
    Ok(SubadditivityReport { level: j, group_rank, kernel_rank, image_rank })
}

/// The exact p-rank of SL_n(Z/p^e) where it is known in closed form:
/// g² for SL_{2g}(F_p), and the full table for SL_2.
pub fn known_sl_rank(n: usize, p: u64, e: u32) -> Option<usize> {
    match (n, e) {
        (_, 1) if n.is_multiple_of(2) => Some((n / 2) * (n / 2)),
        (2, _) if p > 2 => Some(3),
        (2, 2) => Some(3),
        (2, _) => Some(4),
        _ => None,
    }
}
