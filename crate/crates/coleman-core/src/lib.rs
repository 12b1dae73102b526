//! Exact p-adic computations for the branching and slope data of unitary
//! Shimura varieties attached to `GL(2n)` and its subgroup `GL(n) x GL(n)`.
//!
//! Everything is computed in `Z/p^N` with explicit valuation tracking; no
//! floating point is used anywhere. The crate is `no_std` and only needs an
//! allocator.
//!
//! Module map:
//!
//! * [`padic`]: residues mod `p^N`, discs, Teichmüller splitting, analytic characters.
//! * [`matrix`]: dense matrices over `Z/p^N` with unit-pivot factorizations.
//! * [`weights`]: the character lattice, Kostant shuffles, ρ-data and the parameter dictionary.
//! * [`slopes`]: Hecke monoid pairings and the small-slope criterion.
//! * [`groups`]: block groups, distinguished elements, congruence subgroups, box decompositions.
//! * [`flag`]: projective coordinates, Bruhat cells, tubes and the twisted embedding.
//! * [`branching`]: the monoid generators, exponent formulas and branching vectors.
//! * [`families`]: decompositions of analytic characters of the torus.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod branching;
pub mod error;
pub mod families;
pub mod flag;
pub mod groups;
pub mod matrix;
pub mod padic;
pub mod report;
pub mod slopes;
pub mod weights;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use padic::{AnalyticCharacter, PadicScalar, Valuation, Zpn};
pub use weights::Weight;
