//! Logarithmic derivatives of Dirichlet L-functions at s = 1.
//!
//! For a prime modulus q this crate evaluates L'/L(1, chi) for every
//! non-principal character chi mod q through closed forms in log Gamma(a/q)
//! and Deninger's S(a/q), with the character sums done as a single
//! length-(q-1) DFT over a primitive-root reindexing. On top of that it
//! extracts the extremal statistics m_q = min |L'/L(1,chi)| and
//! M_q = max |L'/L(1,chi)|, the Euler-Kronecker constant of the prime
//! cyclotomic field, and verifies the empirical bounds
//! 21/(200q) < m_q < 5/sqrt(q).
//!
//! The `randmodel` module implements the limiting random Euler product
//! Ld(1, X) = sum_p (log p) X(p)/(p - X(p)) with X(p) independent uniform
//! on the unit circle: a seeded Monte-Carlo sampler, exact moments via the
//! convolution powers of the von Mangoldt function, the characteristic
//! function by per-prime quadrature, and an empirical discrepancy estimate
//! between the character ensemble and the model.
//!
//! Two working precisions are available end to end: `extended64`
//! (double-double) for sweeps and `quad113` (128-bit MPFR) for
//! reference-quality single-q evaluation; see [`scalar::Precision`].

pub mod arith;
pub mod chartransform;
pub mod cli;
mod error;
pub mod fft;
pub mod lderiv;
pub mod randmodel;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Precision;
