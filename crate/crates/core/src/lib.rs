//! Exact arithmetic for matrix rings `M_n(R)` and Jordan matrix rings
//! `H_n(R)` over commutative rings `R` with 2 invertible, together with
//! executable checks for derivations, 2-local inner derivations and the
//! reconstruction of their implementing elements.
//!
//! The rings are `Z_m` (`m` odd) and `Z_m[t]`; nothing is ever rounded. The
//! guide in `book/` walks through the constructions with runnable snippets.

#[cfg(doctest)]
pub mod book;
pub mod campaign;
pub mod derivation;
pub mod error;
pub mod jordan;
pub mod json;
pub mod matrix;
pub mod report;
pub mod ring;
pub mod sample;
pub mod two_local;

pub use error::{Error, Result};
pub use matrix::{Matrix, SymmetricMatrix};
pub use report::Failure;
pub use ring::{BaseDerivation, Elem, Ring, RingKind, RingValue};
