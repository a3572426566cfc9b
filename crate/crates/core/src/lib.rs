//! Numerical verification of a quasi-infinitely divisible counterexample family.
//!
//! The principal law has characteristic function `f₁ = (Λ + δχ)/(1+δ)` with
//! `Λ(t) = max(0, 1-|t|)e^{-|t|}` and `χ(t) = e^{-|t| + iφ(t)}`. The crate
//! evaluates every closed form of the construction, computes the remaining
//! quantities by quadrature, and assembles certificates from the results.

pub mod defaults;
pub mod distinguished_log;
pub mod error;
pub mod model;
pub mod par;
pub mod quadrature;
pub mod sampling;
pub mod special;
pub mod spectral;
pub mod verification;

pub use error::{QidError, Result};
pub use model::ModelParams;
pub use par::Exec;
pub use quadrature::QuadratureConfig;
