use thiserror::Error;

use crate::grid::CellCoord;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cell ({}, {}) is outside the {height}x{width} grid", .cell.row, .cell.col)]
    OutOfBounds {
        cell: CellCoord,
        height: usize,
        width: usize,
    },

    #[error("cell ({}, {}) is an obstacle", .0.row, .0.col)]
    Blocked(CellCoord),

    #[error("invalid configuration: {field}: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("environment generation failed: {0}")]
    Generation(String),

    #[error("map dimensions differ: {0:?} vs {1:?}")]
    DimensionMismatch((usize, usize), (usize, usize)),

    #[error("{0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
