//! Exact arithmetic for monogenity questions on pure number fields `Q(m^(1/n))`.
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: valuations, integer factorization, Bezout data, irreducible counts.
//! - [`fppoly`]: polynomials over `F_p` and `F_p[x]/(phi)`, factorization.
//! - [`intpoly`]: dense integer polynomials, parsing, resultants.
//! - [`polygon`]: phi-adic developments, principal Newton polygons, residual polynomials.
//! - [`ore`]: regularity, prime splitting and index valuations, common index divisors.
//! - [`purefield`]: binomial-specific criteria and the power-integral-basis construction.
//! - [`cns`]: canonical number system checks and digit expansions.

pub mod arith;
pub mod cns;
mod error;
pub mod fppoly;
pub mod intpoly;
pub mod ore;
pub mod polygon;
pub mod purefield;

pub use error::{Error, Result};
pub use intpoly::IntPoly;
