//! Fixtures shared by the criterion benches.

use splitrank_core::{enumerate_group, GroupKind, GroupTable, ModulusContext};

pub fn sl2(p: u64, e: u32) -> GroupTable {
    let ctx = ModulusContext::new(p, e).expect("valid modulus");
    enumerate_group(GroupKind::Sl, 2, ctx, 10_000_000).expect("enumerable")
}
