//! Numerical laboratory for the one-dimensional multilinear spherical maximal
//! operator
//!
//! ```text
//! S^m(f_1,…,f_m)(x) = sup_{t>0} ∫_{S^{m-1}} Π_i |f_i(x - t y_i)| dσ(y)
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`funcspec`] – the symbolic test functions (indicators, power-log
//!   singularities and tails, constants) with exact evaluation and `L^p` norms.
//! * [`quad`] – double-exponential panel quadrature with endpoint-accurate
//!   offsets, the workhorse for every singular 1D integral.
//! * [`sphere`] – fixed node/weight rules on `S^{m-1}` and `B^m` built by
//!   slice recursion, plus the Monte Carlo oracle in [`sphere::mc`].
//! * [`sliced`] – support-adapted evaluation of sphere and ball averages
//!   (the same slice recursion with panels split at every breakpoint).
//! * [`operators`] – averages, maximal operators, the auxiliary maximal
//!   functions and the two pointwise domination checks.
//! * [`region`] – exact rational classification of exponent tuples and the
//!   region figures.
//! * [`cex`] – the counterexample families, scaling fits and the calculus
//!   lemma check.
//! * [`cli`] – the command-line front end used by the `sphmax` binary.

// `!(a > b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cex;
pub mod cli;
pub mod error;
pub mod fit;
pub mod funcspec;
pub mod operators;
pub mod probes;
pub mod quad;
pub mod region;
pub mod sliced;
pub mod sphere;

pub use error::{Error, Result};
pub use funcspec::FunctionSpec;
pub use operators::{MaxEstimate, TGrid};
pub use sliced::Sliced;
pub use sphere::{BallQuadrature, BallRule, SphereQuadrature, SphereRule};
