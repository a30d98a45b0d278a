use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed rational {0:?}")]
    Rational(String),
    #[error("malformed input: {0}")]
    Schema(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ray {index} has {found} coordinates, expected {expected}")]
    RayDimension { index: usize, expected: usize, found: usize },
    #[error("ray {0} is zero")]
    ZeroRay(usize),
    #[error("rays {0} and {1} coincide after normalization")]
    DuplicateRay(usize, usize),
    #[error("cone {cone} references ray {ray}, but the fan has {rays} rays")]
    RayIndexOutOfRange { cone: usize, ray: usize, rays: usize },
    #[error("maximal cone {inner} is contained in maximal cone {outer}")]
    NestedCones { inner: usize, outer: usize },
    #[error("maximal cone {0} is not strictly convex")]
    NotStrictlyConvex(usize),
    #[error("maximal cone {0} is not simplicial")]
    NotSimplicial(usize),
    #[error("not a valid fan")]
    NotValid,
    #[error("wall-condition verdict contradicted by sampled point {0:?}")]
    CompletenessMismatch(Vec<String>),
    #[error("simplicial complex facet {facet} references vertex {vertex} outside 1..={vertices}")]
    VertexOutOfRange { facet: usize, vertex: usize, vertices: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalityError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("normality is defined for complete fans only")]
    NotComplete,
    #[error("b has {found} entries, the fan has {expected} rays")]
    WrongLength { expected: usize, found: usize },
    #[error("vertex system of maximal cone {0} is singular")]
    SingularVertexSystem(usize),
    #[error("solver certificate failed re-verification")]
    CertificateRejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("quotient map requires rational data")]
    RequiresRationalData,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("input rejected: {0}")]
    Rejected(String),
    #[error("lift postcondition failed: {0}")]
    LiftPostcondition(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TkError {
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Normality(#[from] NormalityError),
    #[error("chart {0:?} is not a cone of the fan")]
    UnknownChart(Vec<usize>),
    #[error("shift system for chart {0:?} has no solution")]
    InfeasibleShift(Vec<usize>),
    #[error("character outside dual cone: pairing with ray {ray} is {value}")]
    CharacterOutsideDualCone { ray: usize, value: String },
    #[error("the projected fan is not weakly normal")]
    NotWeaklyNormal,
    #[error("charts carry different smoothness scales")]
    ScaleMismatch,
}
