//! Exact non-Archimedean arithmetic and the figures it makes visible.
//!
//! The crate provides, from the bottom up:
//!
//! - [`rational`]: arbitrary-precision rational scalars.
//! - [`poly`], [`ratfunc`]: the ordered field of rational functions in an
//!   infinitesimal `x`, with classification, standard parts and 1-D
//!   magnification.
//! - [`decimal`]: fixed-precision decimals and high-precision elementary
//!   functions, the scalar seeds for approximate series coefficients.
//! - [`series`]: truncated Laurent series in an infinitesimal `ε` with
//!   tracked validity windows, and extension of analytic functions.
//! - [`expr`]: a small expression language evaluated over any backend.
//! - [`calculus`]: derivatives, Taylor coefficients and one-sided limits by
//!   infinitesimal increments and standard parts.
//! - [`ultra`]: filter/ultrafilter axiom checking over finite universes and
//!   the definable fragment of sequence arithmetic with `ω`.
//! - [`scenes`], [`render`]: saw/blancmange constructions and deterministic
//!   SVG/CSV rendering under formal magnification.

pub mod calculus;
pub mod config;
pub mod decimal;
pub mod error;
pub mod expr;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod render;
pub mod scenes;
pub mod series;
pub mod ultra;

pub use error::{Error, Result};
pub use rational::{Rational, Sign};
pub use ratfunc::{Classification, RatFunc};
