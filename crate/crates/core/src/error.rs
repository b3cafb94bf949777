use thiserror::Error;

use crate::gf::GfError;
use crate::mpoly::PolyError;
use crate::points::PointsError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Points(#[from] PointsError),
    /// A declared input fails one of its invariants.
    #[error("invariant `{invariant}` violated: {detail}")]
    Invalid { invariant: String, detail: String },
    #[error("point is not on the variety")]
    NotOnVariety,
    #[error("projection has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("{0}")]
    Input(String),
}

impl Error {
    pub fn invalid(invariant: &str, detail: impl Into<String>) -> Error {
        Error::Invalid {
            invariant: invariant.to_string(),
            detail: detail.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Points(PointsError::Budget { .. }))
            || matches!(self, Error::Field(GfError::TooLarge { .. }))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
