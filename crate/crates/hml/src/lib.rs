//! Hadamard weighted geometric means of nonnegative matrices and
//! discretized positive kernels: spectral radius, operator norms and
//! numerical radius, with one checker per inequality chain and slack
//! reported per link.
//!
//! The crate is organized around five pieces:
//!
//! - [`matrix`]: the [`matrix::NonNegativeMatrix`] type and every entrywise
//!   and product construction (Hadamard products and powers, weighted
//!   geometric means, cyclic rotations, alternating-transpose products).
//! - [`spectral`]: the certified spectral-radius engine
//!   (epsilon-regularized power iteration with Collatz-Wielandt brackets),
//!   operator norms in l1/l2/l-infinity, the numerical radius, and an
//!   independent characteristic-polynomial oracle for n <= 5.
//! - [`suites`]: the inequality checkers behind the suite registry, the
//!   closing counterexample and the numerical-radius violation search.
//! - [`kernels`]: midpoint discretization of continuous kernels on [0,1]^2
//!   and grid-refinement sweeps of any suite.
//! - [`runner`] / [`report`] / [`io`]: the seeded batch harness and the
//!   byte-stable report formats.
//!
//! Start with the `examples/` directory: each example exercises one of
//! these capabilities end to end. The `hml` binary wraps the same calls
//! behind `verify`, `kernels` and `counterexample` subcommands.

pub mod error;
pub mod io;
pub mod kernels;
pub mod matrix;
pub mod report;
pub mod runner;
pub mod sampling;
pub mod spectral;
pub mod suites;

pub use error::{Error, Result};
pub use matrix::{NonNegativeMatrix, WeightConstraint, WeightVector};
pub use report::{InequalityReport, InstanceDigest, SuiteReport, Tolerance, Verdict};
pub use spectral::{NormKind, SpectralEstimate};
pub use suites::{SuiteSpec, TrialConfig};
