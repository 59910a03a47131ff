//! Incidence rings `M_Λ(P)` of locally finite prosets over exact
//! coefficient rings, with the FCC category of prosets, the contravariant
//! incidence functor, unit groups and finite-depth inverse limits.

pub mod colimits;
pub mod error;
pub mod functor;
pub mod json;
pub mod limits;
pub mod matrix;
pub mod proset;
pub mod ring;
pub mod units;

pub use error::{Error, Result};

/// Integers with arbitrary precision.
pub type Zz = ring::Integers<num_bigint::BigInt>;
/// Rationals with arbitrary precision.
pub type Qq = ring::Rationals<num_bigint::BigInt>;
/// `Z/n` and the prime fields `F_p`.
pub type Zn = ring::Zmod<u64>;
/// Finite field `F_q`.
pub type Fq = ring::GaloisField;
