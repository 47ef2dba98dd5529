use thiserror::Error;

use crate::cases::{CaseId, Mode};
use crate::orthoscheme::OrthoParams;

/// Errors produced by the geometry, volume and density routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector has no coordinate above the zero tolerance")]
    ZeroVector,
    #[error("point is not a proper (interior) point of hyperbolic space")]
    NotProper,
    #[error("plane form is degenerate (its pole is not an outer point)")]
    DegeneratePlane,
    #[error("matrix is singular (|det| = {det:e}, threshold {threshold:e})")]
    Singular { det: f64, threshold: f64 },
    #[error("invalid orthoscheme parameter {0}: parameters must be integers >= 3 or inf")]
    InvalidOrder(String),
    #[error("parameters {0} do not define a hyperbolic orthoscheme (sin(pi/u) sin(pi/w) >= cos(pi/v))")]
    NotHyperbolic(OrthoParams),
    #[error("vertex Gram matrix is not of signature (1,3)")]
    FactorizationFailed,
    #[error("principal vertex A{vertex} is not an outer point, so it is not truncated")]
    NotTruncated { vertex: usize },
    #[error("volume parameter theta is undefined (radicand {radicand:e} < 0)")]
    ThetaUndefined { radicand: f64 },
    #[error("negative ball radius {0}")]
    NegativeRadius(f64),
    #[error("unknown case id {0:?}")]
    UnknownCase(String),
    #[error("case {case} ({mode}) is not applicable to {params}: {reason}")]
    CaseInapplicable {
        params: OrthoParams,
        case: CaseId,
        mode: Mode,
        reason: String,
    },
    #[error("case {case} requires u = w, got {params}")]
    NotSymmetric { params: OrthoParams, case: CaseId },
    #[error("covering for case {case} at {params} is not defined: {witness} reaches a boundary point")]
    CoveringUndefined {
        params: OrthoParams,
        case: CaseId,
        witness: String,
    },
    #[error("stabilizer of case {case} at {params} is infinite")]
    InfiniteStabilizer { params: OrthoParams, case: CaseId },
    #[error("closed form for {witness} in case {case} at {params} disagrees with the point oracle by {deviation:e}")]
    OracleMismatch {
        params: OrthoParams,
        case: CaseId,
        witness: String,
        deviation: f64,
    },
    #[error("sweep produced no applicable evaluations")]
    EmptySweep,
    #[error("invalid sweep specification: {0}")]
    InvalidSweep(String),
    #[error("reference dataset error: {0}")]
    Dataset(String),
}

pub type Result<T> = std::result::Result<T, Error>;
