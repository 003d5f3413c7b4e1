//! Exact-arithmetic workbench for determinant-of-cohomology identities on
//! families of curves in characteristic p.
//!
//! Everything here is computed over the rationals with arbitrary precision,
//! so every check is an exact polynomial identity rather than a numerical
//! approximation. The pieces:
//!
//! * [`polyring`] — sparse multivariate polynomials with `BigRational`
//!   coefficients in canonical form; the value type of every identity.
//! * [`kcore`] — Adams and Bott operations on formal sums of line classes,
//!   and the rank/degree shadow of the Grothendieck group of the projective
//!   line, with its localization at a prime.
//! * [`chow`] — the symbolic degree calculus on a curve fibration: divisor
//!   classes spanned by `L` and `ω`, intersection symbols, and the degree
//!   model `D(M) = ½·M·(M − ω) + λ` for `det Rf_*M`.
//! * [`frobcurve`] — the projective line over `F_p`: cohomology of `O(d)`,
//!   the splitting of the Frobenius pushforward, and the Adams-Riemann-Roch
//!   check in the p-localized Grothendieck group.
//! * [`verify`] — the identity checks themselves (the `p⁴` determinant
//!   identity and its coefficient table, Deligne's theorem at `p = 2`,
//!   Mumford's isomorphism, the λ-power family), reported with both sides
//!   rendered canonically.
//! * [`sweep`] — batch execution of every check over ranges of `(p, d, n)`,
//!   in parallel when the `parallel` feature is enabled.

pub mod chow;
pub mod exec;
pub mod frobcurve;
pub mod kcore;
pub mod polyring;
pub mod primes;
pub mod sweep;
pub mod verify;

use thiserror::Error;

/// Errors shared by the class operations and verification entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Adams and Bott operations need k >= 2, got {0}")]
    OperationIndex(u32),
    #[error("Bott class is only defined for effective classes (all multiplicities >= 0)")]
    BottOfVirtualClass,
    #[error("class of rank {rank} is not a unit in Z[1/{p}]")]
    NotUnit { rank: String, p: u64 },
    #[error("substitution mentions the bound symbol `{0}`")]
    CyclicSubstitution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
