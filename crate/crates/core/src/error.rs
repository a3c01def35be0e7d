use thiserror::Error;

use crate::algebra::AlgebraSpec;

/// Errors raised by the exact algebra layers (cohomology ring, tensor square, bounds).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid algebra spec (r={r}, n={n}, m={m}): need r >= 1 and n >= 1")]
    InvalidSpec { r: u32, n: u32, m: u32 },

    #[error("generator e({i},{j}) out of range: need 1 <= i < j <= {max}")]
    IndexOutOfRange { i: u32, j: u32, max: u32 },

    #[error("operands belong to different rings: {left} vs {right}")]
    SpecMismatch {
        left: AlgebraSpec,
        right: AlgebraSpec,
    },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Errors raised by the TC bounds layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error("no exact TC value known for {spec}: {reason}")]
    UnsupportedSpec {
        spec: AlgebraSpec,
        reason: &'static str,
    },

    #[error("multiplicity must be at least 1 for factor ({i},{j})")]
    ZeroMultiplicity { i: u32, j: u32 },

    #[error("inconsistent bounds for {spec}: lower {lower}, upper {upper}, exact {exact:?}")]
    Inconsistent {
        spec: AlgebraSpec,
        lower: u32,
        upper: u32,
        exact: Option<u32>,
    },
}

/// Errors raised by the geometric planner.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("ambient dimension must be 2 or 3, got {0}")]
    BadDimension(usize),

    #[error("point has {got} coordinates, expected {expected}")]
    PointDimension { expected: usize, got: usize },

    #[error("trajectory needs at least 2 frames, got {0}")]
    TooFewFrames(usize),

    #[error("frame {frame} has {got} points, expected {expected}")]
    FrameSize {
        frame: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-finite coordinate in frame {frame}")]
    NonFinite { frame: usize },

    #[error("points {a} and {b} coincide in frame {frame}")]
    Coincident { frame: usize, a: usize, b: usize },

    #[error("bump radius {radius} must be below half the obstacle separation {min_sep}")]
    RadiusTooLarge { radius: f64, min_sep: f64 },

    #[error("bump radius must be positive and finite, got {0}")]
    BadRadius(f64),

    #[error(
        "obstacle {obstacle} moves {displacement} between frames {step} and {next}; limit is {limit}",
        next = step + 1
    )]
    StepTooCoarse {
        step: usize,
        obstacle: usize,
        displacement: f64,
        limit: f64,
    },

    #[error("time index {index} is off the grid of {frames} frames")]
    OffGrid { index: usize, frames: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("planning failed after {attempts} attempts")]
    PlanningFailed { attempts: usize },

    #[error("grids differ: paths have {paths} frames, obstacles have {obstacles}")]
    GridMismatch { paths: usize, obstacles: usize },

    #[error("trajectory file: {0}")]
    Format(String),
}
