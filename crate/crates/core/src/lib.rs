//! Exact, non-adaptive reconstruction of a hidden hypergraph of rank at most
//! `r` with at most `s` edges, viewed as an `s`-term `r`-monotone DNF and
//! learned from a single batch of membership (edge-detecting) queries.
//!
//! The crate is organised bottom-up:
//!
//! * [`boolean`] holds assignments, monomials and monotone DNFs.
//! * [`designs`] builds and verifies cover-free families and perfect hash
//!   families, and computes the size bounds used for reporting.
//! * [`oracle`] is the simulated teacher that answers exactly one batch.
//! * [`direct`] is the `A ∧ B` product learner.
//! * [`reduced`] projects onto few variables with a perfect hash family and
//!   lifts the inner learner back.
//! * [`harness`] generates instances, caches designs, runs and benchmarks.

pub mod boolean;
pub mod designs;
pub mod direct;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod reduced;

mod math;

pub use boolean::{Assignment, Mdnf, Monomial, VarMap};
pub use designs::{DesignMatrix, HashFamily, SizeReport, Verification};
pub use error::{Error, Result};
pub use oracle::{Teacher, Transcript};
