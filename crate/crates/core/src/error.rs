//! Error and result types shared across the crate.

use num_bigint::BigInt;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by geometric and monoid computations.
///
/// Every fallible operation in this crate validates its inputs and returns
/// one of these variants instead of panicking; panics are reserved for
/// internal invariant breakage (bugs).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires a non-empty point set")]
    EmptyInput,

    #[error("points span only {spanned} dimensions in ambient dimension {ambient}")]
    NotFullDimensional { spanned: usize, ambient: usize },

    #[error("ambient dimension {dim} exceeds the supported bound {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("polyhedron is unbounded in direction {direction:?}")]
    Unbounded { direction: Vec<BigInt> },

    #[error("cone is not pointed: it contains a line")]
    NonPointedCone,

    #[error("interval [{lo}, {hi}] is degenerate or reversed")]
    DegenerateInterval { lo: BigInt, hi: BigInt },

    #[error("lower bound exceeds upper bound at lattice point {point:?}")]
    AlphaExceedsBeta { point: Vec<BigInt> },

    #[error("point configuration is not lattice-normalized; run normalization first")]
    NotNormalized,

    #[error("affine map is not a lattice segmental fibration: {reason}")]
    FibrationInvalid { reason: String },

    #[error(
        "face-compatibility violation: the image {image:?} of the face with vertices \
         {face:?} is not a union of cells of the base triangulation"
    )]
    FaceCompatibility {
        face: Vec<Vec<BigInt>>,
        image: Vec<Vec<BigInt>>,
    },

    #[error("interpolated point count disagrees with direct enumeration at dilation {dilation}: expected {expected}, counted {counted}")]
    EhrhartMismatch {
        dilation: u32,
        expected: String,
        counted: BigInt,
    },

    #[error("invalid complex: {reason}")]
    InvalidComplex { reason: String },

    #[error("triangulation construction failed: {reason}")]
    ConstructionFailure { reason: String },

    #[error("malformed input: {reason}")]
    Malformed { reason: String },
}

impl Error {
    pub(crate) fn malformed(reason: impl Into<String>) -> Self {
        Error::Malformed {
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid_complex(reason: impl Into<String>) -> Self {
        Error::InvalidComplex {
            reason: reason.into(),
        }
    }

    pub(crate) fn construction(reason: impl Into<String>) -> Self {
        Error::ConstructionFailure {
            reason: reason.into(),
        }
    }
}
