//! Error type shared by all geometry and extraction operations.

use core::fmt;

/// Errors raised by the geometry kernels and the extraction pipeline.
#[derive(Clone, Debug, PartialEq)]
pub enum GeomError {
    /// A mesh with no vertices or no elements where one is required.
    EmptyMesh,
    /// A vertex coordinate is NaN or infinite.
    NonFinite { vertex: usize },
    /// An element references a vertex index past the end of the vertex list.
    IndexOutOfRange { index: usize, limit: usize },
    /// A triangle with repeated vertices or area below the geometric tolerance.
    DegenerateTriangle { triangle: usize },
    /// A tetrahedron with exactly zero signed volume.
    DegenerateTet { tet: usize },
    /// A region label outside the set an operation accepts.
    InvalidLabel { tet: usize, value: i64, expected: &'static str },
    /// A ray query with a zero direction vector.
    InvalidRay,
    /// An operation requiring a closed surface was given an open or
    /// non-manifold one.
    NotWatertight { boundary_edges: usize, non_manifold_edges: usize },
    /// All retry rays hit a degenerate configuration; the query point is
    /// (numerically) on the surface or pathologically aligned with it.
    DegenerateQuery,
    /// The query point lies on the surface within tolerance.
    OnBoundary,
    /// Plane/surface cross-section produced chains that do not close.
    OpenCrossSection { open_chains: usize },
    /// A tetrahedron subset selected nothing.
    EmptySubset,
    /// A box-domain margin that is not strictly positive.
    InvalidMargin,
    /// The membrane slab leaves no room for a coarse row plus the transition
    /// row between it and the box top/bottom.
    SlabTooClose,
    /// The protein surface does not intersect the membrane slab z-range.
    ProteinMissesSlab,
    /// The band boundary produced no pore component although the protein is
    /// declared to have a channel pore.
    PoreNotSeparated { expected: usize, found: usize },
    /// Not exactly one outer component in the band boundary split.
    AmbiguousOuter { outer: usize },
    /// Ray and winding-number classification both failed for a tetrahedron
    /// centroid.
    ClassificationFailed { tet: usize },
    /// A synthetic-geometry spec violating its invariants.
    InvalidSpec(&'static str),
    /// Invalid domain parameters (box bounds, slab heights, mesh sizes).
    InvalidDomain(&'static str),
}

impl GeomError {
    /// Stable machine-readable name of the error variant.
    pub fn name(&self) -> &'static str {
        match self {
            GeomError::EmptyMesh => "EmptyMesh",
            GeomError::NonFinite { .. } => "NonFinite",
            GeomError::IndexOutOfRange { .. } => "IndexOutOfRange",
            GeomError::DegenerateTriangle { .. } => "DegenerateTriangle",
            GeomError::DegenerateTet { .. } => "DegenerateTet",
            GeomError::InvalidLabel { .. } => "InvalidLabel",
            GeomError::InvalidRay => "InvalidRay",
            GeomError::NotWatertight { .. } => "NotWatertight",
            GeomError::DegenerateQuery => "DegenerateQuery",
            GeomError::OnBoundary => "OnBoundary",
            GeomError::OpenCrossSection { .. } => "OpenCrossSection",
            GeomError::EmptySubset => "EmptySubset",
            GeomError::InvalidMargin => "InvalidMargin",
            GeomError::SlabTooClose => "SlabTooClose",
            GeomError::ProteinMissesSlab => "ProteinMissesSlab",
            GeomError::PoreNotSeparated { .. } => "PoreNotSeparated",
            GeomError::AmbiguousOuter { .. } => "AmbiguousOuter",
            GeomError::ClassificationFailed { .. } => "ClassificationFailed",
            GeomError::InvalidSpec(_) => "InvalidSpec",
            GeomError::InvalidDomain(_) => "InvalidDomain",
        }
    }
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::EmptyMesh => write!(f, "EmptyMesh: mesh has no vertices or no elements"),
            GeomError::NonFinite { vertex } => {
                write!(f, "NonFinite: vertex {vertex} has a NaN or infinite coordinate")
            }
            GeomError::IndexOutOfRange { index, limit } => {
                write!(f, "IndexOutOfRange: vertex index {index} out of range (limit {limit})")
            }
            GeomError::DegenerateTriangle { triangle } => {
                write!(f, "DegenerateTriangle: triangle {triangle} has repeated vertices or zero area")
            }
            GeomError::DegenerateTet { tet } => {
                write!(f, "DegenerateTet: tetrahedron {tet} has zero volume")
            }
            GeomError::InvalidLabel { tet, value, expected } => {
                write!(f, "InvalidLabel: tetrahedron {tet} carries region label {value}, expected {expected}")
            }
            GeomError::InvalidRay => write!(f, "InvalidRay: ray direction is zero"),
            GeomError::NotWatertight { boundary_edges, non_manifold_edges } => write!(
                f,
                "NotWatertight: surface has {boundary_edges} boundary and {non_manifold_edges} non-manifold edges"
            ),
            GeomError::DegenerateQuery => {
                write!(f, "DegenerateQuery: all retry rays were degenerate for this query point")
            }
            GeomError::OnBoundary => write!(f, "OnBoundary: query point lies on the surface"),
            GeomError::OpenCrossSection { open_chains } => {
                write!(f, "OpenCrossSection: {open_chains} cross-section chains did not close")
            }
            GeomError::EmptySubset => write!(f, "EmptySubset: tetrahedron subset is empty"),
            GeomError::InvalidMargin => write!(f, "InvalidMargin: box margins must be positive"),
            GeomError::SlabTooClose => write!(
                f,
                "SlabTooClose: membrane slab leaves no full coarse row between itself and the box top/bottom"
            ),
            GeomError::ProteinMissesSlab => {
                write!(f, "ProteinMissesSlab: protein surface does not intersect the membrane slab")
            }
            GeomError::PoreNotSeparated { expected, found } => write!(
                f,
                "PoreNotSeparated: expected {expected} pore component(s), found {found}; \
                 increase tau, verify Z1/Z2, or refine h_m"
            ),
            GeomError::AmbiguousOuter { outer } => {
                write!(f, "AmbiguousOuter: found {outer} outer band-boundary components, expected exactly 1")
            }
            GeomError::ClassificationFailed { tet } => {
                write!(f, "ClassificationFailed: could not classify centroid of tetrahedron {tet}")
            }
            GeomError::InvalidSpec(msg) => write!(f, "InvalidSpec: {msg}"),
            GeomError::InvalidDomain(msg) => write!(f, "InvalidDomain: {msg}"),
        }
    }
}

impl core::error::Error for GeomError {}
