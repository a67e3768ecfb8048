//! ASCII PLY surface reader/writer (triangles only).
//!
//! The reader accepts extra vertex properties (they are skipped) as long as
//! x, y, z are present; faces must be triangles.

use std::path::Path;

use ionmesh_core::{Point3, TriSurfaceMesh};

use crate::error::{Error, Result};
use crate::fmt::fmt_g12;
use crate::io::{write_file, TokenReader};

struct Header {
    n_vertices: usize,
    n_faces: usize,
    vertex_columns: usize,
    xyz: [usize; 3],
}

fn parse_header(path: &Path, text: &str) -> Result<Header> {
    let mut n_vertices = None;
    let mut n_faces = None;
    let mut vertex_props: Vec<String> = Vec::new();
    let mut in_element: Option<&'static str> = None;
    let mut saw_format = false;

    for (i, raw) in text.split('\n').enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        let mut words = line.split_whitespace();
        let Some(keyword) = words.next() else { continue };
        match keyword {
            "ply" if line_no == 1 => {}
            "ply" => return Err(Error::parse(path, line_no, "stray ply keyword")),
            "format" => {
                let kind = words.next().unwrap_or("");
                if kind != "ascii" {
                    return Err(Error::parse(path, line_no, format!("unsupported PLY format {kind:?}")));
                }
                saw_format = true;
            }
            "comment" | "obj_info" => {}
            "element" => {
                let name = words.next().unwrap_or("");
                let count: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| Error::parse(path, line_no, "element count"))?;
                match name {
                    "vertex" => {
                        n_vertices = Some(count);
                        in_element = Some("vertex");
                    }
                    "face" => {
                        n_faces = Some(count);
                        in_element = Some("face");
                    }
                    _ => in_element = Some("other"),
                }
            }
            "property" => {
                if in_element == Some("vertex") {
                    let name = line.split_whitespace().last().unwrap_or("");
                    if words.next() == Some("list") {
                        return Err(Error::parse(path, line_no, "list property on vertices unsupported"));
                    }
                    vertex_props.push(name.to_string());
                }
            }
            "end_header" => {
                let n_vertices =
                    n_vertices.ok_or_else(|| Error::parse(path, line_no, "missing vertex element"))?;
                let n_faces = n_faces.ok_or_else(|| Error::parse(path, line_no, "missing face element"))?;
                if !saw_format {
                    return Err(Error::parse(path, line_no, "missing format line"));
                }
                let find = |n: &str| {
                    vertex_props
                        .iter()
                        .position(|p| p == n)
                        .ok_or_else(|| Error::parse(path, line_no, format!("missing vertex property {n}")))
                };
                return Ok(Header {
                    n_vertices,
                    n_faces,
                    vertex_columns: vertex_props.len(),
                    xyz: [find("x")?, find("y")?, find("z")?],
                });
            }
            _ => return Err(Error::parse(path, line_no, format!("unknown header keyword {keyword:?}"))),
        }
    }
    Err(Error::parse(path, text.split('\n').count(), "missing end_header"))
}

pub fn read_ply(path: &Path) -> Result<TriSurfaceMesh> {
    let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
    let header = parse_header(path, &text)?;

    // token stream over the whole file keeps body line numbers honest;
    // skip forward past the already-parsed header
    let mut t = TokenReader::from_text(path, text);
    loop {
        let (tok, _) = t.next("end_header")?;
        if tok == "end_header" {
            break;
        }
    }

    let mut vertices = Vec::with_capacity(header.n_vertices);
    let mut row = vec![0.0f64; header.vertex_columns];
    for _ in 0..header.n_vertices {
        for slot in row.iter_mut() {
            *slot = t.parse("vertex value")?;
        }
        vertices.push(Point3::new(row[header.xyz[0]], row[header.xyz[1]], row[header.xyz[2]]));
    }
    let mut triangles = Vec::with_capacity(header.n_faces);
    for _ in 0..header.n_faces {
        let arity: usize = t.parse("face arity")?;
        if arity != 3 {
            return Err(Error::parse(
                path,
                t.last_line(),
                format!("only triangle faces supported, found {arity}-gon"),
            ));
        }
        let a: u32 = t.parse("face index")?;
        let b: u32 = t.parse("face index")?;
        let c: u32 = t.parse("face index")?;
        triangles.push([a, b, c]);
    }
    TriSurfaceMesh::new(vertices, triangles).map_err(Error::from)
}

pub fn write_ply(mesh: &TriSurfaceMesh, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(mesh.vertices().len() * 40 + mesh.triangles().len() * 16);
    out.push_str("ply\nformat ascii 1.0\n");
    out.push_str(&format!("element vertex {}\n", mesh.vertices().len()));
    out.push_str("property double x\nproperty double y\nproperty double z\n");
    out.push_str(&format!("element face {}\n", mesh.triangles().len()));
    out.push_str("property list uchar int vertex_indices\nend_header\n");
    for v in mesh.vertices() {
        out.push_str(&format!("{} {} {}\n", fmt_g12(v.x), fmt_g12(v.y), fmt_g12(v.z)));
    }
    for tri in mesh.triangles() {
        out.push_str(&format!("3 {} {} {}\n", tri[0], tri[1], tri[2]));
    }
    write_file(path, &out)
}
