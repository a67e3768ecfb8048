//! Geometry kernels and mesh-region algorithms for ion-channel simulation meshes.
//!
//! The crate prepares interface-fitted tetrahedral meshes for continuum models of
//! membrane proteins. Given a closed protein surface mesh it can
//!
//! * build a simulation [`BoxDomain`] around the protein and assemble a watertight
//!   triangulated box boundary with a refined membrane band ([`assemble_box_surface`]),
//! * select the membrane constraint points that force a tetrahedralizer to conform
//!   to the membrane planes outside the protein ([`select_membrane_points`]),
//! * relabel the expanded-solvent region of a two-region tetrahedral mesh into
//!   solvent and membrane parts, keeping channel pores as solvent
//!   ([`extract_regions`]).
//!
//! Everything here is pure in-memory computation; file formats and the command
//! line live in the companion `ionmesh` crate. The crate is `no_std`-compatible
//! (requires `alloc`); enable the `libm` feature instead of `std` for float math
//! on bare targets.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("ionmesh-core requires either the `std` or the `libm` feature");

pub mod boxsurf;
pub mod error;
pub mod extract;
pub mod fixture;
pub mod geom;
pub mod inside;
pub mod math;
pub mod points;
pub mod ray;
pub mod section;
pub mod surface;
pub mod synth;
pub mod tet;

pub use boxsurf::{
    assemble_box_surface, build_box_domain, grid_fit, plan_box_grid, BoxDomain, BoxFaceTag,
    BoxGridLayout, MembraneSlab, MeshSizes,
};
pub use error::GeomError;
pub use extract::{
    band_partition, classify_band_tets, classify_by_adjacency, extract_regions,
    interception_rectangle, split_band_boundary, BandBoundary, BandClassification, BandPartition,
    BandRect, ExtractParams, Extraction, ExtractionReport, RegionCensus,
};
pub use geom::{Aabb, Point3, Vec3};
pub use inside::{point_in_closed_surface, winding_number_inclusion, InclusionTester};
pub use points::{
    membrane_grid, select_membrane_points, select_plane_points, MembranePointSet, SelectOptions,
};
pub use ray::{ray_triangle_intersect, RayCast, RayHit};
pub use section::{cross_section_loops, loop_containment_depth, PlanarLoopSet};
pub use surface::{
    compute_aabb, enclosed_volume, surface_connected_components, EdgeCensus, TriSurfaceMesh,
};
pub use synth::{make_hourglass, make_surface, make_tube, make_two_pore, SynthKind, SynthSpec};
pub use tet::{boundary_surface, RegionLabel, TetMesh};
