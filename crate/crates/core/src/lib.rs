//! Closed-form kernels and quadrature solvers for the singular heat equation
//! `(∂t + k/t) u = Δu` and the singular wave equation
//! `(∂t + k/t)(∂t − k/t) w = Δw` on `R^n`, together with the special functions
//! they are built from and a finite-difference verification layer.
//!
//! Module map:
//!
//! * [`specfun`]: Γ, ψ, Pochhammer, ₁F₁, Tricomi U, ₂F₁ with region dispatch.
//! * [`quadrature`]: Gauss rules (Legendre, Jacobi, Laguerre) and adaptive panels.
//! * [`kernels`]: heat and wave kernels, ladder operator, normalization table.
//! * [`solvers`]: spherical means and the Cauchy-problem solvers.
//! * [`verify`]: residuals, limit ladders, recursion and identity checks.
//! * [`cli`]: command-line configuration and dispatch used by the `skl` binary.

pub mod cli;
pub mod error;
pub mod kernels;
pub mod quadrature;
pub mod solvers;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
