//! Exact analysis of Milnor monodromy eigenvalues for plane curves with
//! weighted homogeneous singularities, aimed at reflection arrangements.
//!
//! The pipeline runs bottom-up:
//!
//! - [`arith`]: exact numbers in Q(zeta_m) and polynomials over Q;
//! - [`wh_local`]: local invariants of weighted homogeneous singularities and
//!   their suspensions;
//! - [`arrangement`]: arrangement builders with their flats and singularity profiles;
//! - [`engine`]: per-character vanishing verdicts and the h^1 pairing;
//! - [`oracle`]: fat-point evaluation matrices and exact rank;
//! - [`assembly`]: characteristic polynomials and Euler bookkeeping;
//! - [`selftest`]: the acceptance battery shared by tests and the CLI.

pub mod arith;
pub mod arrangement;
pub mod assembly;
pub mod engine;
pub mod error;
pub mod oracle;
pub mod par;
pub mod selftest;
pub mod wh_local;

pub use error::{Error, Result};
