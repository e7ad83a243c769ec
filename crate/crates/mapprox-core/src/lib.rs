//! Core analysis of martingale approximations for additive functionals
//! `S_n = g(W_1) + … + g(W_n)` of stationary processes.
//!
//! The crate is organized around three representations of the same
//! question — does `g` admit a decomposition `S_n = M_n + R_n` with a
//! stationary-increment martingale `M_n` and `E[R_n²] = o(n)`?
//!
//! - [`chain`]: exact computations on finite-state ergodic chains
//!   (transition operator, adjoint, Cesàro sums, plus norm, limiting
//!   martingale kernel, residual second moments).
//! - [`fracpoisson`]: the square-root operator `√(I−Q)` as a truncated
//!   binomial series, applicable to chain observables and to coefficient
//!   sequences.
//! - [`seq`]: coefficient-level criteria for causal linear processes and
//!   superpositions of them (partial sums, Cesàro averages, the two
//!   convergence conditions, existence verdicts).
//! - [`shift`]: Fourier-side machinery for the dyadic one-sided shift
//!   (co-isometry `QQ* = I`), mapping observables into coefficient arrays.
//! - [`sim`]: Monte Carlo path generation, empirical second moments,
//!   conditional-CLT distances, and empirical martingale residuals.
//!
//! All functions are pure: no global state, every randomized routine is
//! seeded explicitly, so everything can be called concurrently.
//!
//! The crate is `no_std` (with `alloc`); float math goes through
//! `num-traits`/`libm`. IO, file formats and the CLI live in the
//! companion `mapprox-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chain;
pub mod fracpoisson;
pub mod linalg;
pub mod seq;
pub mod shift;
pub mod sim;
pub mod slope;
pub mod testkit;
