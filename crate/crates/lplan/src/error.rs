use thiserror::Error;

use crate::graph::PtpgReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inconsistent embedding: {0}")]
    InconsistentEmbedding(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: graph is not a bi-connected PTPG")]
    InvalidInput(Box<PtpgReport>),
    #[error("no valid path set for triplet ({0}, {1}, {2})")]
    Infeasible(usize, usize, usize),
    #[error("embedding conflict: {0}")]
    EmbeddingConflict(String),
    #[error("REL not constructible: {0}")]
    NotConstructible(String),
    #[error("not flippable: {0}")]
    NotFlippable(String),
    #[error("four-cycle is not alternating: {0}")]
    NotAlternating(String),
    #[error("normalization failed: {0}")]
    NormalizationFailed(String),
    #[error("oracle violation: {0}")]
    OracleViolation(String),
    #[error("no alternating four-cycle found: {0}")]
    CycleNotFound(String),
    #[error("NE is not a corner module")]
    NotCornerModule,
    #[error("modules {0} and {1} touch only at a point")]
    PointContactAmbiguity(String, String),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
    #[error("enumeration cap exceeded: {0} interior edges")]
    CapExceeded(usize),
    #[error("oracle scale exceeded: {0} modules")]
    ScaleExceeded(usize),
    #[error("layout failed: {0}")]
    Layout(String),
}

pub type Result<T> = std::result::Result<T, Error>;
