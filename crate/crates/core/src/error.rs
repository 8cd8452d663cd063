use alloc::boxed::Box;
use alloc::string::String;

use crate::realize::RealizationFailure;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The operation would have to expand a vertex whose neighbor list is not
    /// known to be complete.
    #[error("vertex {vertex} is too close to the window fringe for radius {radius}")]
    OutOfInterior { vertex: String, radius: u32 },
    #[error("window mismatch: {0}")]
    WindowMismatch(String),
    #[error("vertex budget of {budget} exceeded ({reached} vertices reached)")]
    BudgetExceeded { budget: usize, reached: usize },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("empty vertex set")]
    EmptySet,
    #[error("no preimage within radius {radius} of vertex {vertex}")]
    NoPreimageWithinRadius { vertex: String, radius: u32 },
    #[error("tree diameter {diameter} does not exceed k = {k}")]
    DiameterTooSmall { diameter: usize, k: usize },
    #[error("no bijection within displacement {}", .0.l_max)]
    NoBijectionWithinL(Box<RealizationFailure>),
    #[error("scaling factors must be positive")]
    ZeroOrNegative,
    #[error("lamp modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integer overflow")]
    Overflow,
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::OutOfInterior { .. } => "OutOfInterior",
            Error::WindowMismatch(_) => "WindowMismatch",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::WindowTooSmall(_) => "WindowTooSmall",
            Error::EmptySet => "EmptySet",
            Error::NoPreimageWithinRadius { .. } => "NoPreimageWithinRadius",
            Error::DiameterTooSmall { .. } => "DiameterTooSmall",
            Error::NoBijectionWithinL(_) => "NoBijectionWithinL",
            Error::ZeroOrNegative => "ZeroOrNegative",
            Error::BadModulus(_) => "BadModulus",
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse(_) => "Parse",
            Error::Overflow => "Overflow",
        }
    }
}
