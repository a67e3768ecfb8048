//! OFF surface reader/writer (ASCII, triangles only).

use std::path::Path;

use ionmesh_core::{Point3, TriSurfaceMesh};

use crate::error::{Error, Result};
use crate::fmt::fmt_g12;
use crate::io::{write_file, TokenReader};

pub fn read_off(path: &Path) -> Result<TriSurfaceMesh> {
    let mut t = TokenReader::open(path)?;
    let (magic, line) = t.next("OFF header")?;
    if magic != "OFF" {
        return Err(Error::parse(path, line, format!("expected OFF header, found {magic:?}")));
    }
    let nv: usize = t.parse("vertex count")?;
    let nf: usize = t.parse("face count")?;
    let _ne: usize = t.parse("edge count")?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let x: f64 = t.parse("vertex x")?;
        let y: f64 = t.parse("vertex y")?;
        let z: f64 = t.parse("vertex z")?;
        vertices.push(Point3::new(x, y, z));
    }
    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (arity, line) = {
            let n: usize = t.parse("face arity")?;
            (n, t.last_line())
        };
        if arity != 3 {
            return Err(Error::parse(path, line, format!("only triangle faces supported, found {arity}-gon")));
        }
        let a: u32 = t.parse("face index")?;
        let b: u32 = t.parse("face index")?;
        let c: u32 = t.parse("face index")?;
        triangles.push([a, b, c]);
    }
    TriSurfaceMesh::new(vertices, triangles).map_err(Error::from)
}

pub fn write_off(mesh: &TriSurfaceMesh, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(mesh.vertices().len() * 40 + mesh.triangles().len() * 16);
    out.push_str("OFF\n");
    out.push_str(&format!("{} {} 0\n", mesh.vertices().len(), mesh.triangles().len()));
    for v in mesh.vertices() {
        out.push_str(&format!("{} {} {}\n", fmt_g12(v.x), fmt_g12(v.y), fmt_g12(v.z)));
    }
    for tri in mesh.triangles() {
        out.push_str(&format!("3 {} {} {}\n", tri[0], tri[1], tri[2]));
    }
    write_file(path, &out)
}
