//! Numerical laboratory for simultaneous state indistinguishability:
//! non-local discrimination of Haar-random states, the symmetric-subspace
//! machinery behind it, unclonable-cryptography constructions built on it, and
//! a simultaneous Goldreich-Levin extractor, all at exactly simulatable scale.

pub mod cli;
pub mod crypto;
pub mod error;
pub mod glextract;
pub mod qcore;
pub mod report;
pub mod ssi;
pub mod symsub;

pub use error::{Error, Result};
pub use report::{ExperimentReport, Verdict};
