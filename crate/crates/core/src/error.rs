use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^62")]
    InvalidModulus(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a square")]
    NonResidue,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("factorization pattern {0:?} does not fit this operation")]
    PatternMismatch(Vec<usize>),
    #[error("bad reduction: {0}")]
    BadReduction(String),
    #[error("f has no rational root")]
    NoRationalRoot,
    #[error("p = {p} exceeds the cap {cap}")]
    CapExceeded { p: u64, cap: u64 },
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("no split real model exists: the curve has no affine point with y != 0 and lc(f) is a non-square")]
    ModelUnavailable,
    #[error("internal error: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Pipeline stage of the lifting algorithm, attached to lifting errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    ModelConversion,
    RecoverA1,
    InitialCandidates,
    TwoRank,
    Refinement,
    GroupElimination,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::ModelConversion => "model-conversion",
            Stage::RecoverA1 => "recover-a1",
            Stage::InitialCandidates => "initial-candidates",
            Stage::TwoRank => "two-rank",
            Stage::Refinement => "refinement",
            Stage::GroupElimination => "group-elimination",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{stage}: {kind}")]
pub struct LiftError {
    pub stage: Stage,
    pub kind: Error,
}

impl LiftError {
    pub fn new(stage: Stage, kind: Error) -> Self {
        LiftError { stage, kind }
    }
}
