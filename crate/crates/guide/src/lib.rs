//! Compiles the book chapters as doc-tests, so every code sample in
//! `book/src` runs under `cargo test`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/ring.md")]
pub mod ring {}
#[doc = include_str!("../../../book/src/catalog.md")]
pub mod catalog {}
#[doc = include_str!("../../../book/src/morphisms.md")]
pub mod morphisms {}
#[doc = include_str!("../../../book/src/quiver.md")]
pub mod quiver {}
#[doc = include_str!("../../../book/src/patterns.md")]
pub mod patterns {}
#[doc = include_str!("../../../book/src/rank.md")]
pub mod rank {}
#[doc = include_str!("../../../book/src/quilt.md")]
pub mod quilt {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
