//! Kloosterman sums over composite moduli, the permutation representation of
//! `SL_2(Z/cZ)` on the projective line, and numerical checks of the
//! bilinear-form bounds built from them.

// Negated float comparisons reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplify;
pub mod arith;
pub mod bounds;
pub mod bridge;
pub mod cli;
pub mod counting;
pub mod decompose;
pub mod error;
pub mod experiments;
pub mod kloosterman;
pub mod matrix;
pub mod rep;
pub mod selftest;
pub mod sl2;
pub mod spectral;
pub mod verdict;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
pub use verdict::Verdict;
