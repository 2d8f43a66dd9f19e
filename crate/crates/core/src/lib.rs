//! Superclasses and supercharacters for the Sylow p-subgroups of the finite
//! symplectic and orthogonal groups, with exact cyclotomic arithmetic and
//! brute-force verification of every identity the closed forms satisfy.
//!
//! The crate is organized along the pipeline:
//!
//! * [`cyclotomic`] — exact arithmetic in Q(zeta_p), where all character
//!   values live;
//! * [`field`] — F_q arithmetic, the additive and quadratic characters and
//!   Gauss sums;
//! * [`roots`] — positive roots, matrix entries, the mirror order, basic
//!   subsets and basic pairs;
//! * [`group`] — the group U and its Lie algebra as block matrices, the
//!   coordinate bijection between them, pattern subgroups and their linear
//!   characters;
//! * [`superclass`] — bordered minors, orbit membership and the
//!   classification of elements into superclasses;
//! * [`supercharacter`] — closed-form supercharacter values, degrees, and
//!   the coadjoint-orbit evaluation for the long roots of the symplectic
//!   family;
//! * [`oracle`] — brute-force induced characters, conjugacy classes, and
//!   the verification suites;
//! * [`table`] — the supercharacter table, Frobenius inner products,
//!   convolution and the orthogonality relations.

pub mod cyclotomic;
pub mod field;
pub mod group;
pub mod oracle;
pub mod roots;
pub mod superclass;
pub mod supercharacter;
pub mod table;

pub use cyclotomic::CycNumber;
pub use field::{FieldCtx, Fq};
pub use group::{GroupElement, LieElement, Mat, Model};
pub use roots::{BasicPair, Entry, Family, Root, RootSystem};

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("cyclotomic primes differ: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("division by zero in F_q")]
    DivisionByZero,
    #[error("the quadratic character is undefined at 0")]
    EtaAtZero,
    #[error("modulus is not irreducible")]
    ReducibleModulus,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid root: {0}")]
    InvalidRoot(String),
    #[error("subset of roots is not basic")]
    NotBasic,
    #[error("not a member: {0}")]
    NotInGroup(String),
    #[error("{what} exceeds the configured bound {bound}")]
    BoundExceeded { what: String, bound: u64 },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
