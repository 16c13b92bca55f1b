//! The pruned rank search against a naive enumeration of all elementary
//! abelian p-subgroups, on groups small enough to list them outright.

use std::collections::{BTreeSet, HashSet};

use splitrank_core::matgroup::{enumerate_group, unitriangular_group, GroupKind, GroupTable, SquareMatrix};
use splitrank_core::prank::{order_p_elements, p_rank};
use splitrank_core::{ModulusContext, SearchConfig};

/// Grows every elementary abelian subgroup one generator at a time,
/// closing under multiplication, and returns the largest order seen as p^k.
fn naive_rank(g: &GroupTable, p: u64) -> usize {
    let order_p = order_p_elements(g);
    let identity = SquareMatrix::identity(g.n(), g.ctx());
    let mut seen: HashSet<BTreeSet<SquareMatrix>> = HashSet::new();
    let mut frontier = vec![BTreeSet::from([identity])];
    let mut best = 1usize;
    while let Some(h) = frontier.pop() {
        best = best.max(h.len());
        for x in &order_p {
            if h.contains(x) || !h.iter().all(|y| x.mat_mul(y).unwrap() == y.mat_mul(x).unwrap()) {
                continue;
            }
            let mut bigger = h.clone();
            let mut power = x.clone();
            for _ in 1..p {
                for y in &h {
                    bigger.insert(power.mat_mul(y).unwrap());
                }
                power = power.mat_mul(x).unwrap();
            }
            if seen.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut k = 0;
    let mut size = 1;
    while size < best {
        size *= p as usize;
        k += 1;
    }
    assert_eq!(size, best, "subgroup order is not a power of p");
    k
}

fn check(g: &GroupTable, p: u64) {
    let (rank, witness) = p_rank(g, &SearchConfig::default()).unwrap();
    witness.validate().unwrap();
    assert_eq!(rank, naive_rank(g, p), "{} order {}", g.descriptor(), g.len());
}

#[test]
fn search_is_optimal_on_small_groups() {
    for (kind, n, p, e) in [
        (GroupKind::Sl, 2, 2, 1),
        (GroupKind::Sl, 2, 3, 1),
        (GroupKind::Sl, 2, 5, 1),
        (GroupKind::Sl, 2, 7, 1),
        (GroupKind::Sl, 2, 2, 2),
        (GroupKind::Sl, 2, 2, 3),
        (GroupKind::Sl, 2, 3, 2),
        (GroupKind::Gl, 2, 2, 2),
        (GroupKind::Gl, 2, 3, 1),
        (GroupKind::Gl, 2, 2, 3),
        (GroupKind::Sl, 3, 2, 1),
    ] {
        let g = enumerate_group(kind, n, ModulusContext::new(p, e).unwrap(), 5000).unwrap();
        assert!(g.len() <= 5000);
        check(&g, p);
    }
}

#[test]
fn search_is_optimal_on_unitriangular_groups() {
    for (n, p) in [(3, 2), (3, 3), (4, 2)] {
        let g = unitriangular_group(n, ModulusContext::new(p, 1).unwrap(), 5000).unwrap();
        check(&g, p);
    }
}

#[test]
fn rank_is_invariant_under_conjugation() {
    let ctx = ModulusContext::new(2, 3).unwrap();
    let sl = enumerate_group(GroupKind::Sl, 2, ctx, 5000).unwrap();
    let h1 = sl.congruence_kernel(1).unwrap();
    let (base, _) = p_rank(&h1, &SearchConfig::default()).unwrap();
    let g = SquareMatrix::from_entries(2, ctx, &[1, 1, 1, 2]).unwrap();
    let conj = h1.conjugate(&g).unwrap();
    assert_eq!(conj.len(), h1.len());
    assert_eq!(p_rank(&conj, &SearchConfig::default()).unwrap().0, base);
}
