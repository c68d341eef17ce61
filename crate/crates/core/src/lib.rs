//! Dynamical and bounded-cohomological invariants of circle actions.
//!
//! The crate is organised around lifts of orientation-preserving circle
//! homeomorphisms to the real line ([`lifts`]). On top of them sit the
//! integral and real bounded Euler cocycles ([`eulercocycle`]), Euler numbers
//! of surface-group representations ([`surfacereps`]), quasimorphisms on free
//! groups ([`quasimorphism`]), central extensions built from 2-cocycles
//! ([`extensions`]), the higher-dimensional Euler cocycle of `GL+(n+1, R)`
//! ([`ivanovturaev`]) and simplicial-volume bounds for surfaces
//! ([`simplicialvolume`]).
//!
//! Every numerical answer that is a limit comes with an error enclosure, and
//! every value that can be computed exactly (integers, rationals, sign
//! patterns) is computed exactly.
//!
//! The crate is `no_std` (it needs `alloc`); the `std` feature only enables
//! `std::error::Error`-dependent conveniences in downstream crates.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]
// `!(x > 0.0)` is used on purpose to reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod eulercocycle;
pub mod extensions;
pub mod ivanovturaev;
pub mod lifts;
pub mod quasimorphism;
pub mod simplicialvolume;
pub mod surfacereps;
pub mod words;

pub use lifts::{CircleMap, Enclosure, Lift};
pub use words::Word;
