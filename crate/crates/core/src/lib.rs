//! Time-frequency machinery for multilinear pseudodifferential operators.
//!
//! Everything numerical lives on uniform periodic lattices ([`lattice`]). The
//! exponent engine in [`exponents`] is exact: exponents are stored as rational
//! reciprocals and every condition is decided without floating point.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod exponents;
pub mod fft;
pub mod lattice;
pub mod mixed_norm;
pub mod modspace;
pub mod operators;
pub mod symbols;
pub mod tfa;

mod math;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
