//! Numerics for a transferred Hilbert-transform multiplier on SL₂(ℝ).
//!
//! The lattice SL₂(ℤ) acts on the upper half-plane; a symbol on the
//! lattice is pulled back to the continuous group through the measurable
//! cocycle attached to the standard fundamental domain. This crate
//! evaluates that cocycle, the resulting symbol `m̃` (by Monte Carlo and by
//! closed-form region integrals), its first Lie derivatives, and a few
//! classical reference constructions on ℤ.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cocycle;
pub mod decay;
pub mod error;
pub mod modular;
pub mod quadrature;
pub mod roots;
pub mod sl2;
pub mod symbol;
pub mod transfer;
pub mod verify;

pub use error::{Error, Result};
pub use sl2::{ANCoords, HalfPlanePoint, IntMat2, IwasawaParts, RealMat2};
