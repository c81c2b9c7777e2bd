//! Finite computational models of higher gauge structures: table-driven
//! groups and groupoids, crossed modules and 2-groups, principal bundle
//! groupoids, bundle gerbes with the Φ/Ψ/Ξ correspondences, nerves, inner
//! transformation groups, and Morita equivalence — every proposition about
//! them turned into an exhaustive finite check.

// index loops over parallel tables are the house style here
#![allow(clippy::needless_range_loop)]
#![allow(clippy::too_many_arguments)]

pub mod action;
pub mod catalog;
pub mod error;
pub mod gerbe;
pub mod group;
pub mod groupoid;
pub mod io;
pub mod morita;
pub mod nerve;
pub mod report;
pub mod transform;
pub mod two_group;

pub use error::{Error, Result};
pub use report::ValidationReport;

// The book's code blocks compile and run as doc-tests of this crate, so
// the guide cannot drift from the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/finite-groups.md")]
    mod finite_groups {}
    #[doc = include_str!("../../../book/src/groupoids.md")]
    mod groupoids {}
    #[doc = include_str!("../../../book/src/two-groups.md")]
    mod two_groups {}
    #[doc = include_str!("../../../book/src/actions.md")]
    mod actions {}
    #[doc = include_str!("../../../book/src/gerbes.md")]
    mod gerbes {}
    #[doc = include_str!("../../../book/src/nerves.md")]
    mod nerves {}
    #[doc = include_str!("../../../book/src/transformations.md")]
    mod transformations {}
    #[doc = include_str!("../../../book/src/morita.md")]
    mod morita {}
    #[doc = include_str!("../../../book/src/files-and-cli.md")]
    mod files_and_cli {}
}
