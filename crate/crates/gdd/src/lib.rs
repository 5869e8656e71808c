//! Group divisible designs with block size four: construction, expansion,
//! verification, search and existence reasoning.
//!
//! The library is organized around a small set of subsystems:
//!
//! - [`design`]: the [`design::Design`] type, group types and the exact
//!   pair-coverage verifiers for GDDs, DGDDs and resolvable designs.
//! - [`blockgen`]: base-block specifications (`.gdd` files) and their
//!   development into full designs, including the Z_c x Z_3 shift action and
//!   compact signature cross-checks.
//! - [`algebra`]: finite fields, MOLS, transversal designs and resolvable
//!   GDDs.
//! - [`constructions`]: the recursive operators (weighted inflation, hole
//!   filling, group filling, parallel-class removal) and a recipe interpreter
//!   that composes them over an ingredient library.
//! - [`search`]: an exact-cover search that finds a 4-GDD of a small type or
//!   proves that none exists.
//! - [`oracle`]: necessary-condition arithmetic and the known existence
//!   status for types `g^u` and `g^u m^1`.
//! - [`catalog`]: the shipped collection of base-block specifications and
//!   batch verification over it.
//!
//! Expanded designs travel as `.gddx` text ([`gddx`]); every capability is
//! exercised end to end by the programs under `examples/` and is also
//! reachable through the thin `gddtool` binary.

pub mod algebra;
pub mod blockgen;
pub mod catalog;
pub mod cli;
pub mod constructions;
pub mod design;
mod error;
pub mod gddx;
pub mod oracle;
pub mod recipe;
pub mod search;

pub use design::{Design, GroupType, VerificationReport};
pub use error::{Error, Result};
