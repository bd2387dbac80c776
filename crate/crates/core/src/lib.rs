//! Steiner triple systems with few disjoint parallel classes.
//!
//! The crate builds the modified Wilson–Schreiber systems (from a special
//! 1-factorisation of the graph `G(n)`), Bose systems from idempotent
//! symmetric Latin squares, and a cyclic STS(33) with an 18-class colouring.
//! It also provides the arithmetic behind the parallel-class bounds
//! (`g`, `f`, `ψ`, `ψ*`), exact-cover and branch-and-bound searches for
//! parallel classes and chromatic index, and a hill-climbing generator for
//! random systems.
//!
//! Batch operations (number-theoretic scans, sweeps over orders, surveys of
//! random systems, top-level search branches) run on rayon when the
//! `parallel` feature is enabled (the default) and fall back to sequential
//! loops otherwise. [`Exec`] selects the mode per call.

pub mod analysis;
pub mod constructions;
pub mod designs;
mod error;
mod exec;
pub mod factorisation;
pub mod generator;
pub mod numtheory;

pub use error::{Error, Result};
pub use exec::Exec;
