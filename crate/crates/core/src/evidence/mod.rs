//! Frames of discernment, subset encoding, mass functions, and the classical
//! combination rules every quantum path is checked against.

mod combine;
mod frame;
mod mass;

pub use combine::{
    combine_cdrc, combine_drc, decide, Backend, FusionResult, Mode, CONFLICT_TOLERANCE,
};
pub use frame::{Frame, SubsetCode, MAX_FRAME_ELEMENTS};
pub use mass::{fmt_complex, Bba, Cbba, Violation, SUM_TOLERANCE};

/// Errors from frame construction, subset encoding, and combination.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvidenceError {
    #[error("a frame needs at least one element")]
    EmptyFrame,
    #[error("frame has {len} elements, the maximum is {max}")]
    FrameTooLarge { len: usize, max: usize },
    #[error("invalid element name {0:?} (names must be non-empty and comma-free)")]
    InvalidElementName(String),
    #[error("duplicate frame element {0:?}")]
    DuplicateElement(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("subset code {code:#x} is out of range for a frame of {n} elements")]
    CodeOutOfRange { code: u32, n: usize },
    #[error("subset key is empty (the empty set may not carry mass)")]
    EmptySubsetKey,
    #[error("subset key {key:?} lists elements out of frame order (expected {expected:?})")]
    UnorderedSubsetKey { key: String, expected: String },
    #[error("subset key {key:?} repeats element {name:?}")]
    RepeatedKeyElement { key: String, name: String },
    #[error("mass functions are defined over different frames")]
    FrameMismatch,
    #[error("a focal element carries mass on the empty set")]
    MassOnEmptySet,
    #[error("total conflict (K = {k}): the combination rule is undefined")]
    TotalConflict { k: f64 },
    #[error("conflict is singular (|1 - K| = {magnitude:e}): cannot renormalize")]
    ConflictSingularity { magnitude: f64 },
    #[error("every mass has zero modulus")]
    AllZeroMasses,
    #[error("fusion result holds no masses")]
    EmptyResult,
}
