//! Lusztig's canonical basis of `U_q^-` for simply-laced types.

pub mod canonical;
pub mod crystal;
pub mod exactla;
pub mod pbw;
pub mod qscalar;
pub mod rootsystem;
pub mod suites;
pub mod uqfull;
pub mod uqminus;

pub use canonical::{CanonicalBasis, CanonicalElement};
pub use crystal::{CrystalGraph, HighestWeight};
pub use pbw::{LusztigData, PbwBasis};
pub use qscalar::{LaurentPoly, RatFunc};
pub use rootsystem::{BraidMove, DynkinDiagram, MoveKind, ReducedWord, Root};
pub use uqfull::{QuantumGroup, UqElement};
pub use uqminus::UMinusElement;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("weight height {height} exceeds the configured bound {bound}")]
    HeightBound { height: u32, bound: u32 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
