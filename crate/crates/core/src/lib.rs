//! Supersymmetric (Darboux) partners of the trigonometric Pöschl-Teller
//! potential on (0, π/2).
//!
//! * [`specfun`]: log-gamma, Pochhammer symbols, ₂F₁ and ₃F₂ series.
//! * [`pt`]: the initial potential, its spectrum and seed solutions.
//! * [`susy1`], [`susy2`]: first- and second-order transformations.
//! * [`verify`]: finite-difference spectrum oracle and residual checks.

pub mod error;
pub mod partner;
pub mod pt;
pub mod quad;
pub mod specfun;
pub mod susy1;
pub mod susy2;
pub mod verify;

pub use error::{Error, Result};
