//! The book's chapters, compiled as doc-tests.
//!
//! `book/` holds an mdbook guide; every fenced Rust snippet in it must keep
//! working against the current API. Including the chapters here makes
//! `cargo test --doc` run them, so the book cannot silently rot.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/templates_and_windows.md")]
pub mod templates_and_windows {}

#[doc = include_str!("../../../book/src/summary_graphs.md")]
pub mod summary_graphs {}

#[doc = include_str!("../../../book/src/discovery.md")]
pub mod discovery {}

#[doc = include_str!("../../../book/src/identifiability.md")]
pub mod identifiability {}

#[doc = include_str!("../../../book/src/census.md")]
pub mod census {}
