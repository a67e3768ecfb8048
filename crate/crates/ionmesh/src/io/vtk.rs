//! Legacy ASCII VTK unstructured-grid writer with a per-cell "region" array.

use std::path::Path;

use ionmesh_core::{GeomError, TetMesh};

use crate::error::{Error, Result};
use crate::fmt::fmt_g12;
use crate::io::write_file;

pub fn write_vtk(mesh: &TetMesh, path: &Path, title: &str) -> Result<()> {
    if mesh.vertices().is_empty() || mesh.tets().is_empty() {
        return Err(Error::Geom(GeomError::EmptyMesh));
    }
    let mut out = String::with_capacity(mesh.vertices().len() * 40 + mesh.tets().len() * 24);
    out.push_str("# vtk DataFile Version 3.0\n");
    out.push_str(title);
    out.push('\n');
    out.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    out.push_str(&format!("POINTS {} double\n", mesh.vertices().len()));
    for p in mesh.vertices() {
        out.push_str(&format!("{} {} {}\n", fmt_g12(p.x), fmt_g12(p.y), fmt_g12(p.z)));
    }
    let n = mesh.tets().len();
    out.push_str(&format!("CELLS {n} {}\n", n * 5));
    for tet in mesh.tets() {
        out.push_str(&format!("4 {} {} {} {}\n", tet[0], tet[1], tet[2], tet[3]));
    }
    out.push_str(&format!("CELL_TYPES {n}\n"));
    for _ in 0..n {
        out.push_str("10\n");
    }
    out.push_str(&format!("CELL_DATA {n}\n"));
    out.push_str("SCALARS region int 1\nLOOKUP_TABLE default\n");
    for label in mesh.labels() {
        out.push_str(&format!("{}\n", label.as_i32()));
    }
    write_file(path, &out)
}
