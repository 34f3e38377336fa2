use crate::quaternion::ImaginaryUnit;

/// Errors raised by the slice-regular algebra and the norm machinery.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("quaternion has no inverse (modulus {modulus:e})")]
    ZeroDivisor { modulus: f64 },

    #[error("symmetrization vanishes at the evaluation point (|f*f^c(q)| = {modulus:e})")]
    SingularPoint { modulus: f64 },

    #[error("function value vanishes at the evaluation point (|f(q)| = {modulus:e})")]
    ZeroValue { modulus: f64 },

    #[error("imaginary units are not orthogonal (<I,J> = {inner:e})")]
    NotOrthogonal { inner: f64 },

    #[error("slice polynomials live on different slices")]
    UnitMismatch,

    #[error("dilation radius {0} is outside (0, 1]")]
    BadRadius(f64),

    #[error("quadrature did not converge: {trace}")]
    GridTooCoarse { trace: String },

    #[error(
        "norm inequality violated by {check}: I = {unit_i:?}, J = {unit_j:?}, ratio {ratio}, bound {bound}"
    )]
    ViolationDetected {
        check: &'static str,
        unit_i: ImaginaryUnit,
        unit_j: Option<ImaginaryUnit>,
        ratio: f64,
        bound: f64,
    },

    #[error("atomic point {index} does not lie on the slice")]
    PointOffSlice { index: usize },

    #[error("{0}")]
    InvalidParams(String),

    #[error("this check requires p > 1, got p = {0}")]
    RequiresPAboveOne(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
