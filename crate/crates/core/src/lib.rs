//! Pseudospectral simulation and numerical verification toolkit for the
//! generalized Boussinesq equation
//!
//! ```text
//! u_tt - Δu + Δ²u = β Δ(|u|^{α-1} u)
//! ```
//!
//! on a periodic box, solved through the first-order complex variable
//! `v = u + i B⁻¹ u_t` with `B = sqrt(-Δ(1-Δ))`.

pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod ground_state;
pub mod propagator;
pub mod spectral;

pub use error::{Error, Result};
