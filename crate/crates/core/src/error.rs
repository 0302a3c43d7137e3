use core::fmt;

/// Failure of a precondition on the inputs of an operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// An edge or vertex does not belong to the region it was used with.
    OutsideRegion,
    /// A probability outside `[0, 1]` (or NaN).
    InvalidProbability,
    /// Region parameter is zero or larger than the supported maximum.
    InvalidRegion,
    /// The operation needs a different kind of region (box versus annulus).
    WrongRegionKind,
    /// The requested neighbourhood is not contained in the region.
    RadiusOverflow,
    /// A sequence of vertices is not a valid lattice path or circuit.
    InvalidPath,
    /// The query point lies on the polyline.
    PointOnCurve,
    /// An edge was expected to belong to the circuit.
    NotOnCircuit,
    /// Detour family does not fit the circuit it is applied to.
    InvalidFamily,
    /// The tolerance must lie strictly between zero and one.
    InvalidEpsilon,
    /// Inner and outer radii are out of order or otherwise unusable.
    InvalidGeometry,
    /// Exhaustive enumeration was requested over too many edges.
    TooManyEdges,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Error::OutsideRegion => "edge or vertex lies outside the region",
            Error::InvalidProbability => "probability must lie in [0, 1]",
            Error::InvalidRegion => "region size must be between 1 and 2^20",
            Error::WrongRegionKind => "operation does not support this region kind",
            Error::RadiusOverflow => "neighbourhood exceeds the region",
            Error::InvalidPath => "vertex sequence is not a valid lattice path",
            Error::PointOnCurve => "query point lies on the curve",
            Error::NotOnCircuit => "edge is not on the circuit",
            Error::InvalidFamily => "detour family is inconsistent with the circuit",
            Error::InvalidEpsilon => "epsilon must lie strictly between 0 and 1",
            Error::InvalidGeometry => "inconsistent radii or zones",
            Error::TooManyEdges => "region has too many edges for exhaustive enumeration",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
