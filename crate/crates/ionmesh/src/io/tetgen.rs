//! TetGen 1.5 file dialect: `.poly` piecewise-linear-complex output and
//! `.node`/`.ele` tetrahedral mesh input/output.
//!
//! Facet boundary markers: 1 for the protein surface, 2 for the box boundary.
//! Node files are written 1-based; readers auto-detect 0- or 1-based files
//! from the minimum index. The region attribute column of `.ele` files
//! carries the region labels.

use std::path::Path;

use ionmesh_core::{Point3, RegionLabel, TetMesh};

use crate::error::{Error, Result};
use crate::fmt::fmt_g12;
use crate::io::{write_file, TokenReader};

/// Boundary marker of protein-surface facets.
pub const MARKER_PROTEIN: i32 = 1;
/// Boundary marker of box-boundary facets.
pub const MARKER_BOX: i32 = 2;

/// A region seed: a point strictly inside one subdomain, carrying the region
/// attribute the tetrahedralizer propagates to the subdomain's tets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionSeed {
    pub point: Point3,
    pub attribute: i32,
    pub max_volume: Option<f64>,
}

/// The piecewise linear complex handed to the tetrahedralizer: the protein
/// surface and box boundary as marked facets, plus the membrane constraint
/// points as isolated vertices referenced by no facet.
#[derive(Clone, Debug, Default)]
pub struct PlcDocument {
    pub nodes: Vec<Point3>,
    /// (triangle, boundary marker)
    pub facets: Vec<([u32; 3], i32)>,
    pub region_seeds: Vec<RegionSeed>,
}

impl PlcDocument {
    /// Structural self-check: facet indices in range; at least one protein
    /// seed (attribute 1, one per protein component) and exactly one solvent
    /// seed (attribute 2).
    pub fn validate(&self) -> Result<()> {
        for (tri, _) in &self.facets {
            for &v in tri {
                if v as usize >= self.nodes.len() {
                    return Err(Error::InconsistentPair(format!(
                        "facet references node {v} of {}",
                        self.nodes.len()
                    )));
                }
            }
        }
        let protein = self.region_seeds.iter().filter(|s| s.attribute == 1).count();
        let solvent = self.region_seeds.iter().filter(|s| s.attribute == 2).count();
        if protein == 0 || solvent != 1 || protein + solvent != self.region_seeds.len() {
            let attrs: Vec<i32> = self.region_seeds.iter().map(|s| s.attribute).collect();
            return Err(Error::InconsistentPair(format!(
                "expected one attribute-1 seed per protein component and exactly one \
                 attribute-2 seed, found attributes {attrs:?}"
            )));
        }
        Ok(())
    }
}

/// Write a TetGen `.poly` file (1-based node numbering).
pub fn write_plc(doc: &PlcDocument, path: &Path) -> Result<()> {
    doc.validate()?;
    let mut out = String::with_capacity(doc.nodes.len() * 48 + doc.facets.len() * 24);
    out.push_str("# node list: <count> <dim> <attributes> <boundary markers>\n");
    out.push_str(&format!("{} 3 0 0\n", doc.nodes.len()));
    for (i, p) in doc.nodes.iter().enumerate() {
        out.push_str(&format!("{} {} {} {}\n", i + 1, fmt_g12(p.x), fmt_g12(p.y), fmt_g12(p.z)));
    }
    out.push_str("# facet list: <count> <boundary markers>\n");
    out.push_str(&format!("{} 1\n", doc.facets.len()));
    for (tri, marker) in &doc.facets {
        out.push_str(&format!("1 0 {marker}\n"));
        out.push_str(&format!("3 {} {} {}\n", tri[0] + 1, tri[1] + 1, tri[2] + 1));
    }
    out.push_str("# hole list\n0\n");
    out.push_str("# region list: <index> <x> <y> <z> <attribute> <max volume>\n");
    out.push_str(&format!("{}\n", doc.region_seeds.len()));
    for (i, seed) in doc.region_seeds.iter().enumerate() {
        let vol = seed.max_volume.map(fmt_g12).unwrap_or_else(|| "-1".to_string());
        out.push_str(&format!(
            "{} {} {} {} {} {}\n",
            i + 1,
            fmt_g12(seed.point.x),
            fmt_g12(seed.point.y),
            fmt_g12(seed.point.z),
            seed.attribute,
            vol
        ));
    }
    write_file(path, &out)
}

/// Read a `.node`/`.ele` pair into a labeled tet mesh.
pub fn read_tet_mesh(node_path: &Path, ele_path: &Path) -> Result<TetMesh> {
    // nodes
    let mut t = TokenReader::open(node_path)?;
    let n_nodes: usize = t.parse("node count")?;
    let dim: usize = t.parse("dimension")?;
    if dim != 3 {
        return Err(Error::parse(node_path, 1, format!("expected dimension 3, found {dim}")));
    }
    let n_attrs: usize = t.parse("attribute count")?;
    let n_markers: usize = t.parse("marker count")?;
    let mut indexed: Vec<(i64, Point3)> = Vec::with_capacity(n_nodes);
    for _ in 0..n_nodes {
        let idx: i64 = t.parse("node index")?;
        let x: f64 = t.parse("x")?;
        let y: f64 = t.parse("y")?;
        let z: f64 = t.parse("z")?;
        for _ in 0..n_attrs + n_markers {
            let _: f64 = t.parse("node attribute")?;
        }
        indexed.push((idx, Point3::new(x, y, z)));
    }
    let base = indexed.iter().map(|(i, _)| *i).min().unwrap_or(0);
    let mut vertices: Vec<Option<Point3>> = vec![None; n_nodes];
    for (idx, p) in indexed {
        let slot = (idx - base) as usize;
        if slot >= n_nodes || vertices[slot].is_some() {
            return Err(Error::InconsistentPair(format!(
                "{}: node indices are not consecutive from {base}",
                node_path.display()
            )));
        }
        vertices[slot] = Some(p);
    }
    let vertices: Vec<Point3> = vertices.into_iter().map(|v| v.unwrap()).collect();

    // elements
    let mut t = TokenReader::open(ele_path)?;
    let n_tets: usize = t.parse("tet count")?;
    let nodes_per: usize = t.parse("nodes per tet")?;
    if nodes_per != 4 {
        return Err(Error::parse(ele_path, 1, format!("expected 4 nodes per tet, found {nodes_per}")));
    }
    let n_attrs: usize = t.parse("attribute count")?;
    if n_attrs == 0 {
        return Err(Error::MissingRegionAttribute { path: ele_path.to_path_buf() });
    }
    let mut tets = Vec::with_capacity(n_tets);
    let mut labels = Vec::with_capacity(n_tets);
    for _ in 0..n_tets {
        let _idx: i64 = t.parse("tet index")?;
        let mut tet = [0u32; 4];
        for slot in &mut tet {
            let v: i64 = t.parse("tet node")?;
            let local = v - base;
            if local < 0 || local as usize >= vertices.len() {
                return Err(Error::parse(
                    ele_path,
                    t.last_line(),
                    format!("node index {v} out of range"),
                ));
            }
            *slot = local as u32;
        }
        let attr: f64 = t.parse("region attribute")?;
        for _ in 1..n_attrs {
            let _: f64 = t.parse("extra attribute")?;
        }
        let label = RegionLabel::from_i64(attr.round() as i64).ok_or_else(|| {
            Error::Geom(ionmesh_core::GeomError::InvalidLabel {
                tet: tets.len(),
                value: attr.round() as i64,
                expected: "a region attribute in 0..=3",
            })
        })?;
        tets.push(tet);
        labels.push(label);
    }
    TetMesh::new(vertices, tets, labels).map_err(Error::from)
}

/// Write a labeled tet mesh as `<base>.node` and `<base>.ele` (1-based, with
/// the region label as the single element attribute).
pub fn write_tet_mesh(mesh: &TetMesh, base_path: &Path) -> Result<()> {
    let node_path = base_path.with_extension("node");
    let ele_path = base_path.with_extension("ele");

    let mut out = String::with_capacity(mesh.vertices().len() * 48);
    out.push_str(&format!("{} 3 0 0\n", mesh.vertices().len()));
    for (i, p) in mesh.vertices().iter().enumerate() {
        out.push_str(&format!("{} {} {} {}\n", i + 1, fmt_g12(p.x), fmt_g12(p.y), fmt_g12(p.z)));
    }
    write_file(&node_path, &out)?;

    let mut out = String::with_capacity(mesh.tets().len() * 32);
    out.push_str(&format!("{} 4 1\n", mesh.tets().len()));
    for (i, tet) in mesh.tets().iter().enumerate() {
        out.push_str(&format!(
            "{} {} {} {} {} {}\n",
            i + 1,
            tet[0] + 1,
            tet[1] + 1,
            tet[2] + 1,
            tet[3] + 1,
            mesh.labels()[i].as_i32()
        ));
    }
    write_file(&ele_path, &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_tet_files(dir: &Path, base: i64) -> (std::path::PathBuf, std::path::PathBuf) {
        let node = dir.join(format!("m{base}.node"));
        let ele = dir.join(format!("m{base}.ele"));
        let mut n = String::from("5 3 0 0\n");
        let pts = [
            (0.0, 0.0, 0.0),
            (1.0, 0.0, 0.0),
            (0.0, 1.0, 0.0),
            (0.0, 0.0, 1.0),
            (1.0, 1.0, 1.0),
        ];
        for (i, (x, y, z)) in pts.iter().enumerate() {
            n.push_str(&format!("{} {x} {y} {z}\n", i as i64 + base));
        }
        std::fs::write(&node, n).unwrap();
        let mut e = String::from("2 4 1\n");
        e.push_str(&format!("{} {} {} {} {} 1\n", base, base, base + 1, base + 2, base + 3));
        e.push_str(&format!("{} {} {} {} {} 2\n", base + 1, base + 4, base + 1, base + 2, base + 3));
        std::fs::write(&ele, e).unwrap();
        (node, ele)
    }

    #[test]
    fn reads_labels_from_attribute_column() {
        let dir = tempfile::tempdir().unwrap();
        let (node, ele) = two_tet_files(dir.path(), 1);
        let mesh = read_tet_mesh(&node, &ele).unwrap();
        assert_eq!(mesh.labels(), &[RegionLabel::Protein, RegionLabel::Solvent]);
        assert_eq!(mesh.tets().len(), 2);
    }

    #[test]
    fn zero_and_one_based_files_agree() {
        let dir = tempfile::tempdir().unwrap();
        let (n1, e1) = two_tet_files(dir.path(), 1);
        let (n0, e0) = two_tet_files(dir.path(), 0);
        let a = read_tet_mesh(&n1, &e1).unwrap();
        let b = read_tet_mesh(&n0, &e0).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        assert_eq!(a.tets(), b.tets());
        assert_eq!(a.labels(), b.labels());
    }

    #[test]
    fn missing_attribute_column_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let (node, _) = two_tet_files(dir.path(), 1);
        let ele = dir.path().join("no_attr.ele");
        std::fs::write(&ele, "1 4 0\n1 1 2 3 4\n").unwrap();
        assert!(matches!(
            read_tet_mesh(&node, &ele).unwrap_err(),
            Error::MissingRegionAttribute { .. }
        ));
    }

    #[test]
    fn write_read_round_trip_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let (node, ele) = two_tet_files(dir.path(), 1);
        let mesh = read_tet_mesh(&node, &ele).unwrap();
        let base = dir.path().join("copy.node");
        write_tet_mesh(&mesh, &base).unwrap();
        let again = read_tet_mesh(&dir.path().join("copy.node"), &dir.path().join("copy.ele")).unwrap();
        assert_eq!(mesh.vertices(), again.vertices());
        assert_eq!(mesh.tets(), again.tets());
        assert_eq!(mesh.labels(), again.labels());
    }
}
