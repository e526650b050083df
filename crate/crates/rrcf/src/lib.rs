//! Exact and arbitrary-precision toolkit for the Rogers-Ramanujan continued
//! fraction `r(tau)` and its companions `k(tau) = r(tau) r(2tau)^2` and
//! `l(tau) = r(2tau) / r(tau)^2`.
//!
//! The crate is organized around one symbolic currency and one numeric one:
//!
//! - [`qseries::PuiseuxSeries`]: truncated series in `q^(1/D)` with exact
//!   rational coefficients. Everything symbolic (eta products, modular
//!   equations, identity verification) runs on these.
//! - [`bigfloat::BigComplex`]: arbitrary-precision complex numbers used to
//!   evaluate the infinite products at points of the upper half-plane and to
//!   assemble class polynomials from singular values.
//!
//! Module map:
//!
//! - [`qseries`]: Puiseux series arithmetic, serialization.
//! - [`etaforms`]: Dedekind eta, generalized eta `eta_{N,g}`, eta quotients,
//!   the named functions `r`, `k`, `l`, `f`, `j`, and modularity criteria.
//! - [`cusps`]: cusp equivalence, enumeration and widths for `Gamma_0(m)`,
//!   `Gamma_1(N)` and `Gamma_1(N) ∩ Gamma_0(mN)`.
//! - [`orders`]: orders of (generalized) eta quotients at cusps.
//! - [`linalg`]: exact nullspace/solve kernels used by the derivations.
//! - [`modeq`]: derivation and verification of modular equations `L_n(X, Y)`
//!   for `l(tau)`.
//! - [`identities`]: closed-form identities relating `r`, `l`, `f` and `j`.
//! - [`bigfloat`]: arbitrary-precision floating point and complex arithmetic.
//! - [`numeric`]: evaluation of the q-products at points of the upper
//!   half-plane with certified tail bounds.
//! - [`classfield`]: binary quadratic forms, Shimura reciprocity, conjugates
//!   and class polynomials of singular values of `l`.

pub mod bigfloat;
pub mod classfield;
pub mod cusps;
pub mod error;
pub mod etaforms;
pub mod identities;
pub mod linalg;
pub mod modeq;
pub mod numeric;
pub mod orders;
pub mod qseries;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
