//! Dual certificates, sum-of-squares Gram matrices and spectral certification
//! for the super-resolution of sparse atomic measures on the torus.
//!
//! Modules, bottom-up:
//!
//! * [`trigpoly`] – trigonometric polynomials and Dirichlet kernels;
//! * [`specfun`] – Si, Ci, Γ(0, ix), Lambert W;
//! * [`certificate`] – the interpolating polynomial η and its checks;
//! * [`gram`] – the diagonal-sum calculus and the Gram matrix of 1 − |η|²;
//! * [`qk_operator`] – the limiting operator in the Dirichlet basis and its fast matvec;
//! * [`spectrum`] – power iterations with a-posteriori residual bounds;
//! * [`constants`] – scalar constants (C₁ fixed point, η*, f(K));
//! * [`bound_audit`] – numerical audit of closed-form bounds on the inner integral F(s; θ).

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound_audit;
pub mod certificate;
pub mod constants;
pub mod error;
pub mod gram;
pub mod qk_operator;
pub mod quad;
pub mod specfun;
pub mod spectrum;
pub mod trigpoly;

pub use error::{Error, Result};
pub use num_complex::Complex64;
