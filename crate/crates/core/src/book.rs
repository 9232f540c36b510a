//! The chapters of `book/`, included so that `cargo test` runs their snippets.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/rings.md")]
pub mod rings {}
#[doc = include_str!("../../../book/src/matrices.md")]
pub mod matrices {}
#[doc = include_str!("../../../book/src/derivations.md")]
pub mod derivations {}
#[doc = include_str!("../../../book/src/two-local.md")]
pub mod two_local {}
#[doc = include_str!("../../../book/src/jordan.md")]
pub mod jordan {}
#[doc = include_str!("../../../book/src/campaigns.md")]
pub mod campaigns {}
