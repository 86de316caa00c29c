use alloc::vec::Vec;

use crate::Complex;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite input value")]
    NonFinite,
    #[error("Blaschke factor denominator vanishes at z = {0}")]
    DegenerateDenominator(Complex),
    #[error("point {0} is not inside the half-plane")]
    OutsideHalfPlane(Complex),
    #[error("node {0} lies on the boundary of the half-plane")]
    NodeOnBoundary(Complex),
    #[error("divided difference of order {order} requested on a cluster of {len} points")]
    OrderOutOfRange { order: usize, len: usize },
    #[error("expected {expected} values, got {got}")]
    ValueCountMismatch { expected: usize, got: usize },
    #[error("duplicate point {0}")]
    DuplicatePoints(Complex),
    #[error("cluster has no points")]
    EmptyCluster,
    #[error("the origin cannot be a node")]
    ZeroNode,
    #[error("eta must be positive")]
    EtaNonPositive,
    #[error("eta must lie in (0, 1/2), got {0}")]
    EtaOutOfRange(f64),
    #[error("bound degenerates: 1 - k/(2M) <= 0 for k = {0}")]
    BoundDegenerate(usize),
    #[error("grid contains no admissible points")]
    EmptyGrid,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("clusters share point {0}")]
    OverlappingClusters(Complex),
    #[error("group of {} points exceeds capacity {capacity}", group.len())]
    CapacityExceeded { group: Vec<Complex>, capacity: usize },
    #[error("group diameter {diameter} is not below {limit}")]
    DiameterExceeded {
        group: Vec<Complex>,
        diameter: f64,
        limit: f64,
    },
    #[error("rectangles of clusters {0} and {1} are not separated")]
    ClustersTooClose(usize, usize),
    #[error("cluster {0} is not contained in its rectangle")]
    ContainmentFailed(usize),
    #[error("node {0} is not in the sequence")]
    NodeNotInSequence(Complex),
    #[error("|S(x)| vanishes at x = {0} away from the nodes")]
    SZero(f64),
    #[error("weight sample {index} is not positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("point {0} coincides with a sampling point")]
    CoincidentPoint(Complex),
    #[error("trace has {got} values for {expected} nodes")]
    MissingTraceValue { expected: usize, got: usize },
    #[error("cluster {0} does not match the requested divided-difference flavor")]
    FlavorMismatch(usize),
    #[error("S'(lambda) vanishes at lambda = {0}")]
    DerivativeZero(Complex),
    #[error("integrand has a pole on the contour near {0}")]
    PoleOnContour(Complex),
    #[error("function has zero norm")]
    ZeroNorm,
    #[error("quadrature did not converge")]
    NonConvergent,
}

impl Error {
    /// True for the clustering failures that signal a sequence is not
    /// N-Carleson at the requested scale.
    pub fn is_partition_failure(&self) -> bool {
        matches!(
            self,
            Error::CapacityExceeded { .. } | Error::DiameterExceeded { .. }
        )
    }
}

pub(crate) fn check_finite(z: Complex) -> Result<Complex> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite)
    }
}
