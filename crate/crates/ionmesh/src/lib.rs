//! File formats, pipeline orchestration, and the command line for
//! ion-channel mesh preparation.
//!
//! The geometric and extraction machinery lives in [`ionmesh_core`]; this
//! crate adds OFF/PLY surface input, TetGen `.poly`/`.node`/`.ele` interop,
//! legacy VTK output, JSON reports, synthetic-geometry generation on the
//! command line, and the end-to-end `pipeline` driver that shells out to an
//! external tetrahedralizer when `TETGEN_BIN` is set.

pub mod cli;
pub mod config;
pub mod error;
pub mod fmt;
pub mod io;
pub mod pipeline;
pub mod plc;

pub use error::Error;
