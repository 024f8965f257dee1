//! Conjugacy decision procedures for groups with an index-2 orientation
//! subgroup, together with the combinatorial topology that produces them.

pub mod backend;
pub mod freeprod;
pub mod index2;
pub mod klein;
pub mod pipeline;
pub mod scalar;
pub mod trimesh;
pub mod word;

pub use scalar::IntScalar;

/// Klein bottle group normal forms with machine-word exponents.
pub type KleinNF = klein::KleinElem<i64>;
/// 2×2 integer matrices with machine-word entries.
pub type Matrix2 = klein::IntMatrix2<i64>;
