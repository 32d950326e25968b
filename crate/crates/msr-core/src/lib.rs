//! MDS array codes with optimal and near-optimal repair bandwidth.
//!
//! This crate implements two families of erasure codes for distributed
//! storage, both defined by block parity-check matrices over a finite
//! field GF(q):
//!
//! * **c1** — an (n, k) MSR code with sub-packetization `N = w^(n/2)`
//!   that repairs any single node by contacting any `d` helpers,
//!   `k < d <= n-1`, downloading exactly the cut-set minimum
//!   `d·N/(d-k+1)` symbols.
//! * **c2** — an (s·n', k) MDS code built by replicating a `d' = n'-1`
//!   base code `s` times and scaling each copy, trading a factor
//!   `1 + (s-1)(r-1)/(n-1)` of repair bandwidth for an `s`-fold smaller
//!   sub-packetization.
//!
//! Both constructions sit behind the [`code::Code`] trait; encoding,
//! reconstruction from any `k` nodes, and exhaustive MDS verification are
//! generic over it ([`codec`]). Constructions are registered by name in
//! [`code::CodeRegistry`] and selected at runtime.

pub mod c1;
pub mod c2;
pub mod code;
pub mod codec;
pub mod gf;
pub mod indexing;
pub mod linalg;

pub use code::{Code, CodeParams, CodeRegistry};
pub use codec::{Codeword, MdsReport, RepairReport};
pub use gf::{FieldElement, FieldSpec};
pub use linalg::{Matrix, Vector};

use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The requested field order has two or more distinct prime factors.
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    /// The requested field order exceeds the 16-bit symbol container.
    #[error("field order {0} exceeds the supported maximum 65535")]
    TooLarge(u64),
    /// Multiplicative inverse of zero.
    #[error("division by zero in GF({0})")]
    DivisionByZero(u64),
    /// An index or digit fell outside its declared range.
    #[error("value {value} out of range [0, {bound})")]
    OutOfRange { value: usize, bound: usize },
    /// Matrix shapes (or fields) do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Elimination found no pivot; the system has no unique solution.
    #[error("singular matrix")]
    Singular,
    /// Code length must be even; use shortening for odd lengths.
    #[error("code length {0} is odd; shorten an even-length code instead")]
    OddLength(usize),
    /// The (n, k, d) triple violates 0 < k < d <= n-1.
    #[error("invalid repair degree: n={n}, k={k}, d={d}")]
    BadDegree { n: usize, k: usize, d: usize },
    /// Replication factor must be at least 1.
    #[error("invalid replication factor s={0}")]
    BadReplication(usize),
    /// A field override is below the threshold the construction requires.
    #[error("field of order {q} too small: need q > {threshold}")]
    FieldTooSmall { q: u64, threshold: u64 },
    /// Fewer than k nodes supplied to reconstruction.
    #[error("insufficient nodes: have {have}, need {need}")]
    InsufficientNodes { have: usize, need: usize },
    /// Helper set has the wrong size or contains the failed node.
    #[error("bad helper set: {0}")]
    BadHelperSet(String),
    /// No construction registered under this name.
    #[error("unknown construction {0:?}")]
    UnknownConstruction(String),
    /// An operation the construction guarantees to succeed failed anyway.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
