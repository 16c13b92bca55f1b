//! Finite computations around Brauer classes of iterated Laurent series
//! fields: congruence filtrations and p-ranks of SL_n(Z/p^e), symplectic
//! geometry over F_p, and the twisted monomial algebra of a tensor product of
//! symbol algebras.

pub mod error;
pub mod matgroup;
pub mod modring;
pub mod prank;
pub mod report;
pub mod selftest;
pub mod symbolalg;
pub mod symplectic;
pub mod verdict;

pub use error::{Error, Result};
pub use matgroup::{enumerate_group, group_order_oracle, Descriptor, GroupKind, GroupTable, SquareMatrix};
pub use modring::{zeta_power, CyclotomicScalar, ModulusContext, Residue};
pub use prank::{p_rank, RankWitness, SearchConfig};
pub use report::{CheckResult, Report, Status, WitnessJson};
pub use selftest::{run_selftest, GridConfig};
pub use symbolalg::{AlgebraElement, AlgebraPresentation, ExponentVector};
pub use symplectic::{SymplecticSpace, SymplecticSubspace};
pub use verdict::{threshold, verdict, TheoremParams, VerdictReport};
