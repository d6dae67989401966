//! Concentration bounds for generalized sub-Gaussian canonical processes.
//!
//! The crate computes tail bounds built on Orlicz N-functions: canonical-process
//! thresholds driven by the constrained maximization `N_v(t)`, uniformly
//! randomized Hoeffding thresholds, concentration for general functions of
//! independent inputs, and the PCA / Rademacher-complexity consequences. Every
//! bound comes with a seeded Monte Carlo verification path so that dominance
//! claims can be replayed bit-for-bit.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI live
//! in the companion `tailbound` crate.

#![no_std]
#![deny(missing_debug_implementations)]
// `!(x > 0.0)` rejects NaN where `x <= 0.0` would accept it; the negated
// comparisons in input validation are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod applications;
pub mod canonical;
pub mod error;
pub mod functional;
pub mod linalg;
pub mod montecarlo;
pub mod norms;
pub(crate) mod opt;
pub mod orlicz;
pub mod randomized;
pub mod rng;
pub mod stats;

pub(crate) mod fmath;

pub use error::{Error, Result};
pub use orlicz::OrliczFunction;
