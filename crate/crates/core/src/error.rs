use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, WinvError>;

#[derive(Debug, Error)]
pub enum WinvError {
    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("no weighted {{1',2',3'}}-inverse exists: r(A) = {rank_a} but r(WAW) = {rank_waw}")]
    ExistenceFailure { rank_a: usize, rank_waw: usize },

    #[error("index {index} exceeds the allowed maximum {max}")]
    IndexTooLarge { index: usize, max: usize },

    #[error("k = {k} is below the weighted index {index}")]
    IndexTooSmall { k: usize, index: usize },

    #[error("candidate is not a member of {set}: equation {equation} has residual {residual:e}")]
    NotAMember {
        set: String,
        equation: String,
        residual: f64,
    },

    #[error("parameter has rank {rank}, expected {expected} ({what})")]
    RankDeficientParameter {
        what: &'static str,
        rank: usize,
        expected: usize,
    },

    #[error(
        "rank verdicts disagree: r(A) = {rank_a}, r(AW) = {rank_aw}, r(WA) = {rank_wa}, r(WAW) = {rank_waw}; tolerance is too loose or too tight for this input"
    )]
    InconsistentRanks {
        rank_a: usize,
        rank_aw: usize,
        rank_wa: usize,
        rank_waw: usize,
    },

    #[error("matrix is singular to working precision ({what})")]
    Singular { what: &'static str },

    #[error("postcondition failed in {op}: {detail}")]
    Postcondition { op: &'static str, detail: String },

    #[error("unknown equation id `{0}`")]
    UnknownEquation(String),

    #[error("unknown inverse set `{0}`")]
    UnknownSet(String),

    #[error("infeasible instance spec: {0}")]
    InfeasibleSpec(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl WinvError {
    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        WinvError::ShapeMismatch {
            op,
            detail: detail.into(),
        }
    }

    /// Process exit status used by the `winv` binary (sysexits-style for
    /// usage, data and I/O problems).
    pub fn exit_code(&self) -> i32 {
        match self {
            WinvError::ExistenceFailure { .. } => 2,
            WinvError::IndexTooLarge { .. } | WinvError::IndexTooSmall { .. } => 3,
            WinvError::UnknownEquation(_) | WinvError::UnknownSet(_) | WinvError::InvalidTolerance(_) => 64,
            WinvError::Io { .. } => 74,
            WinvError::InconsistentRanks { .. } | WinvError::Postcondition { .. } => 70,
            WinvError::ShapeMismatch { .. }
            | WinvError::NonFinite { .. }
            | WinvError::NotAMember { .. }
            | WinvError::RankDeficientParameter { .. }
            | WinvError::Singular { .. }
            | WinvError::InfeasibleSpec(_)
            | WinvError::Parse { .. } => 65,
        }
    }
}
