//! The rank inequality behind the non-splitting theorem.
//!
//! A splitting extension's Galois group must contain (Z/p)^r (lower bound),
//! while it is an extension of a subgroup of SL_{2g}(Z/p^e) by a subgroup of
//! (Z/p^e)^{2g} (upper bound). The verdict compares the two.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::is_prime;
use crate::prank::rank_upper_bound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremParams {
    pub p: u64,
    pub g: u64,
    pub r: u64,
    /// Period exponent; bounds are uniform in e when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
}

impl TheoremParams {
    pub fn new(p: u64, g: u64, r: u64, e: Option<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if g == 0 || r == 0 || e == Some(0) {
            return Err(Error::InvalidParameter("g, r and e must be positive".into()));
        }
        Ok(TheoremParams { p, g, r, e })
    }
}

/// Least r for which no torsor under a g-dimensional abelian variety splits
/// the class.
pub fn threshold(p: u64, g: u64) -> u64 {
    match (p > 2, g) {
        (true, 1) => 6,
        (false, 1) => 7,
        (true, _) => 5 * g * g + 2 * g,
        (false, _) => 9 * g * g + 2 * g - 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundBranch {
    /// g = 1: the exact SL_2 table, 3 for p odd and 4 for p = 2.
    Sl2Exact,
    /// g ≥ 2, p odd: dim SL_{2g} + rank SL_{2g}(F_p) = 5g² − 1.
    GenericOdd,
    /// g ≥ 2, p = 2: dim SL_{2g} + rank SL_{2g}(Z/4) = 9g² − 2.
    GenericTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlRankBound {
    pub value: u64,
    pub branch: BoundBranch,
}

/// Upper bound on rank_p(SL_{2g}(Z/p^e)), uniform in e.
pub fn sl_rank_bound(p: u64, _e: Option<u32>, g: u64) -> SlRankBound {
    if g == 1 {
        let value = if p > 2 { 3 } else { 4 };
        return SlRankBound { value, branch: BoundBranch::Sl2Exact };
    }
    let dim = 4 * g * g - 1;
    let base = g * g;
    if p > 2 {
        SlRankBound { value: rank_upper_bound(dim, base), branch: BoundBranch::GenericOdd }
    } else {
        // Level 2 first: rank SL_{2g}(Z/4) ≤ (4g² − 1) + g².
        let level_two = rank_upper_bound(dim, base);
        SlRankBound { value: rank_upper_bound(dim, level_two), branch: BoundBranch::GenericTwo }
    }
}

/// sl_rank_bound + rank of the translation part (Z/p^e)^{2g}.
pub fn galois_rank_bound(p: u64, e: Option<u32>, g: u64) -> u64 {
    sl_rank_bound(p, e, g).value + 2 * g
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub claim: String,
    pub value: u64,
    /// Which established fact justifies the step.
    pub anchor: String,
    /// True when the fact is consumed as an axiom rather than computed here.
    pub axiom: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub params: TheoremParams,
    pub lower_bound: u64,
    pub upper_bound: u64,
    pub threshold: u64,
    pub contradiction: bool,
    pub branch: BoundBranch,
    pub chain: Vec<ChainStep>,
}

impl VerdictReport {
    /// contradiction ⟺ lower > upper ⟺ r ≥ threshold, and every step is anchored.
    pub fn is_consistent(&self) -> bool {
        self.contradiction == (self.lower_bound > self.upper_bound)
            && self.contradiction == (self.params.r >= self.threshold)
            && self.chain.iter().all(|s| !s.anchor.is_empty())
    }
}

pub fn verdict(params: &TheoremParams) -> VerdictReport {
    let TheoremParams { p, g, r, e } = *params;
    let sl = sl_rank_bound(p, e, g);
    let upper = galois_rank_bound(p, e, g);
    let lower = r;
    let step = |claim: String, value, anchor: &str, axiom| ChainStep { claim, value, anchor: anchor.into(), axiom };
    let mut chain = vec![step(
        format!("splitting Galois group contains a Lagrangian (Z/{p})^{r} of the value-group quotient"),
        lower,
        "lagrangian-subgroup-rank",
        true,
    )];
    match sl.branch {
        BoundBranch::Sl2Exact => {
            chain.push(step(format!("rank_{p} SL_2(Z/{p}^e) ≤ {}", sl.value), sl.value, "sl2-rank-table", false))
        }
        BoundBranch::GenericOdd | BoundBranch::GenericTwo => {
            chain.push(step(format!("rank_{p} SL_{}(F_{p}) = {}", 2 * g, g * g), g * g, "sylow-base-rank", false));
            chain.push(step(
                format!("H_(e-1) is elementary abelian of rank dim SL_{} = {}", 2 * g, 4 * g * g - 1),
                4 * g * g - 1,
                "lie-kernel",
                false,
            ));
            if sl.branch == BoundBranch::GenericTwo {
                chain.push(step(
                    format!("rank_2 SL_{}(Z/4) ≤ {}", 2 * g, 5 * g * g - 1),
                    5 * g * g - 1,
                    "level-two-extension",
                    false,
                ));
            }
            chain.push(step(
                format!("rank_{p} SL_{}(Z/{p}^e) ≤ {}", 2 * g, sl.value),
                sl.value,
                "order-p-kernel-lemma",
                false,
            ));
        }
    }
    chain.push(step(format!("rank_{p} (Z/{p}^e)^{} = {}", 2 * g, 2 * g), 2 * g, "translation-rank", false));
    chain.push(step(
        format!("rank_{p} Gal ≤ {} + {} = {upper}", sl.value, 2 * g),
        upper,
        "subadditivity-of-p-rank",
        false,
    ));
    chain.push(step(
        if lower > upper {
            format!("{lower} > {upper}: no splitting torsor")
        } else {
            format!("{lower} ≤ {upper}: no contradiction")
        },
        u64::from(lower > upper),
        "rank-comparison",
        false,
    ));
    let report = VerdictReport {
        params: *params,
        lower_bound: lower,
        upper_bound: upper,
        threshold: threshold(p, g),
        contradiction: lower > upper,
        branch: sl.branch,
        chain,
    };
    assert!(report.is_consistent(), "threshold table disagrees with the rank bounds for {params:?}");
    report
}
