//! Exact and asymptotic counting of restricted compositions over finite
//! abelian groups.
//!
//! A composition of `s` in `G = Z_{k_1} ⊕ … ⊕ Z_{k_r}` is an ordered tuple
//! of nonzero elements summing to `s` (weak compositions allow zero). The
//! crate counts such tuples under two kinds of restriction:
//!
//! * per-position subsets — each part drawn from its own `S_j ⊆ G`
//!   ([`subset_waring`]), which also covers diagonal equations and Waring
//!   numbers over finite fields;
//! * local window rules — sums, distinctness, or field products of short
//!   runs of consecutive parts ([`restriction`]), counted exactly by
//!   transfer matrices over the group algebra ([`transfer`]) and
//!   asymptotically by Perron–Frobenius data ([`spectral`]) or closed forms
//!   ([`closed_forms`]).
//!
//! Everything exact lives in `Z[G]` with arbitrary-precision coefficients;
//! floating point appears only in the character-sum crosscheck and the
//! spectral estimates, never on the counting path. A brute-force
//! [`oracle`] validates every route at desk scale.
//!
//! All public types are immutable values: safe to share across threads.

pub mod algebra;
pub mod bijections;
pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod field;
pub mod group;
pub mod oracle;
pub mod restriction;
pub mod spectral;
pub mod subset_waring;
pub mod tables;
pub mod transfer;

/// Exact counter type; counts grow geometrically in the number of parts and
/// overflow machine words early.
pub type Count = num_bigint::BigInt;

/// Element of `Z[G]` with exact integer coefficients: the carrier of
/// "count per target sum".
pub type CountVector = algebra::GroupVector<Count>;

/// Exact rational, used for the closed-form growth constants.
pub type Rational = num_rational::BigRational;

pub use error::{Error, Result};
pub use group::{CharacterIndex, Group, GroupElement};
