//! Exact computations with the finite-field oscillator representation.
//!
//! The crate is layered bottom-up: [`fields`] and [`scalars`] provide exact
//! arithmetic, [`forms`] the bilinear-form machinery, [`star`] the ⋆-algebra
//! and its Schrödinger model, [`generators`] the distinguished ⋆-elements,
//! [`orbits`] the orbit censuses and [`qcomb`] the q-polynomial identities.
//! [`verify`] wires everything into named suites used by the `osc` CLI.

pub mod error;
pub mod fields;
pub mod forms;
pub mod generators;
pub mod grid;
pub mod linalg;
pub mod orbits;
pub mod qcomb;
pub mod scalars;
pub mod star;
pub mod verify;

pub use error::{Error, Result};
