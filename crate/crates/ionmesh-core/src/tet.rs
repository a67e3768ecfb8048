//! Labeled tetrahedral meshes and boundary-surface extraction.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::GeomError;
use crate::geom::{Aabb, Point3};
use crate::surface::{TriSurfaceMesh, EPS_GEOM_REL};

/// Region label of a tetrahedron: 1 = protein, 2 = solvent, 3 = membrane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum RegionLabel {
    Unassigned = 0,
    Protein = 1,
    Solvent = 2,
    Membrane = 3,
}

impl RegionLabel {
    pub fn from_i64(value: i64) -> Option<RegionLabel> {
        match value {
            0 => Some(RegionLabel::Unassigned),
            1 => Some(RegionLabel::Protein),
            2 => Some(RegionLabel::Solvent),
            3 => Some(RegionLabel::Membrane),
            _ => None,
        }
    }

    pub fn as_i32(self) -> i32 {
        self as i32
    }
}

/// An indexed tetrahedral mesh with one region label per tetrahedron.
///
/// Construction canonicalizes orientation (two vertices are swapped whenever
/// the signed volume is negative), so every stored tetrahedron has positive
/// volume.
#[derive(Clone, Debug)]
pub struct TetMesh {
    vertices: Vec<Point3>,
    tets: Vec<[u32; 4]>,
    labels: Vec<RegionLabel>,
    aabb: Aabb,
    eps: f64,
}

fn signed_volume(v: &[Point3], t: &[u32; 4]) -> f64 {
    let a = v[t[0] as usize];
    let b = v[t[1] as usize];
    let c = v[t[2] as usize];
    let d = v[t[3] as usize];
    (b - a).dot((c - a).cross(d - a)) / 6.0
}

impl TetMesh {
    pub fn new(
        vertices: Vec<Point3>,
        mut tets: Vec<[u32; 4]>,
        labels: Vec<RegionLabel>,
    ) -> Result<Self, GeomError> {
        if vertices.is_empty() || tets.is_empty() {
            return Err(GeomError::EmptyMesh);
        }
        if labels.len() != tets.len() {
            return Err(GeomError::InvalidDomain("label count must match tet count"));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(GeomError::NonFinite { vertex: i });
            }
        }
        let limit = vertices.len();
        for (i, t) in tets.iter_mut().enumerate() {
            for &v in t.iter() {
                if v as usize >= limit {
                    return Err(GeomError::IndexOutOfRange { index: v as usize, limit });
                }
            }
            let vol = signed_volume(&vertices, t);
            if vol == 0.0 {
                return Err(GeomError::DegenerateTet { tet: i });
            }
            if vol < 0.0 {
                t.swap(2, 3);
            }
        }
        let aabb = Aabb::from_points(vertices.iter().copied())?;
        let eps = EPS_GEOM_REL * aabb.diagonal();
        Ok(Self { vertices, tets, labels, aabb, eps })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn tets(&self) -> &[[u32; 4]] {
        &self.tets
    }

    pub fn labels(&self) -> &[RegionLabel] {
        &self.labels
    }

    pub fn aabb(&self) -> Aabb {
        self.aabb
    }

    pub fn eps_geom(&self) -> f64 {
        self.eps
    }

    /// Same mesh with a new label array.
    pub fn with_labels(&self, labels: Vec<RegionLabel>) -> Result<TetMesh, GeomError> {
        if labels.len() != self.tets.len() {
            return Err(GeomError::InvalidDomain("label count must match tet count"));
        }
        Ok(TetMesh { labels, ..self.clone() })
    }

    pub fn tet_volume(&self, i: usize) -> f64 {
        signed_volume(&self.vertices, &self.tets[i])
    }

    pub fn centroid(&self, i: usize) -> Point3 {
        let t = &self.tets[i];
        let mut x = 0.0;
        let mut y = 0.0;
        let mut z = 0.0;
        for &v in t {
            let p = self.vertices[v as usize];
            x += p.x;
            y += p.y;
            z += p.z;
        }
        Point3::new(x * 0.25, y * 0.25, z * 0.25)
    }

    pub fn count_label(&self, label: RegionLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Total volume of the tets carrying `label`.
    pub fn label_volume(&self, label: RegionLabel) -> f64 {
        (0..self.tets.len())
            .filter(|&i| self.labels[i] == label)
            .map(|i| self.tet_volume(i))
            .sum()
    }

    /// Number of distinct vertices referenced by tets matching the predicate.
    pub fn referenced_vertices(&self, select: impl Fn(usize) -> bool) -> usize {
        let mut used = vec![false; self.vertices.len()];
        for (i, t) in self.tets.iter().enumerate() {
            if select(i) {
                for &v in t {
                    used[v as usize] = true;
                }
            }
        }
        used.iter().filter(|&&u| u).count()
    }

    /// The four outward faces of tet `i`, wound so their normals point away
    /// from the (positively oriented) tet.
    pub fn tet_faces(&self, i: usize) -> [[u32; 3]; 4] {
        let [a, b, c, d] = self.tets[i];
        [[a, c, b], [a, b, d], [a, d, c], [b, c, d]]
    }

    /// For each tet, the neighboring tet across each of its four faces
    /// (`None` on the mesh boundary). Face slots follow [`Self::tet_faces`].
    pub fn face_neighbors(&self) -> Vec<[Option<u32>; 4]> {
        let mut faces: Vec<([u32; 3], u32, u8)> = Vec::with_capacity(self.tets.len() * 4);
        for (t, _) in self.tets.iter().enumerate() {
            for (slot, f) in self.tet_faces(t).iter().enumerate() {
                let mut k = *f;
                k.sort_unstable();
                faces.push((k, t as u32, slot as u8));
            }
        }
        faces.sort_unstable();
        let mut neighbors = vec![[None; 4]; self.tets.len()];
        let mut i = 0;
        while i < faces.len() {
            let mut j = i + 1;
            while j < faces.len() && faces[j].0 == faces[i].0 {
                j += 1;
            }
            if j - i == 2 {
                let (_, ta, sa) = faces[i];
                let (_, tb, sb) = faces[j - 1];
                neighbors[ta as usize][sa as usize] = Some(tb);
                neighbors[tb as usize][sb as usize] = Some(ta);
            }
            // count 1: boundary face; count > 2: non-manifold input, left
            // unpaired so downstream censuses can surface it
            i = j;
        }
        neighbors
    }
}

/// Boundary surface of a tetrahedron subset: all faces incident to exactly one
/// selected tet, outward-oriented with respect to the subset.
///
/// For any subset of a valid mesh the result is closed (every edge has even
/// incidence; subsets touching themselves across an edge produce incidence-4
/// pinch edges) and its enclosed volume equals the summed volumes of the
/// subset.
pub fn boundary_surface(
    mesh: &TetMesh,
    subset: impl Fn(usize) -> bool,
) -> Result<TriSurfaceMesh, GeomError> {
    let faces = boundary_faces(mesh, subset)?;
    faces_to_surface(mesh, faces.iter().map(|f| f.face))
}

/// A boundary face of a tet subset: its outward-wound vertex triple, the tet
/// it belongs to, and the neighboring tet outside the subset (if any).
#[derive(Clone, Copy, Debug)]
pub struct BoundaryFace {
    pub face: [u32; 3],
    pub tet: u32,
    pub opposite: Option<u32>,
}

/// Boundary faces of a subset in deterministic (tet, face-slot) order.
pub fn boundary_faces(
    mesh: &TetMesh,
    subset: impl Fn(usize) -> bool,
) -> Result<Vec<BoundaryFace>, GeomError> {
    let neighbors = mesh.face_neighbors();
    boundary_faces_with(mesh, &neighbors, subset)
}

/// Same as [`boundary_faces`] but reusing a precomputed neighbor table.
pub fn boundary_faces_with(
    mesh: &TetMesh,
    neighbors: &[[Option<u32>; 4]],
    subset: impl Fn(usize) -> bool,
) -> Result<Vec<BoundaryFace>, GeomError> {
    let mut out = Vec::new();
    let mut any = false;
    for (t, tet_neighbors) in neighbors.iter().enumerate() {
        if !subset(t) {
            continue;
        }
        any = true;
        let faces = mesh.tet_faces(t);
        for (slot, &opposite) in tet_neighbors.iter().enumerate() {
            let outside = match opposite {
                None => true,
                Some(n) => !subset(n as usize),
            };
            if outside {
                out.push(BoundaryFace { face: faces[slot], tet: t as u32, opposite });
            }
        }
    }
    if !any {
        return Err(GeomError::EmptySubset);
    }
    Ok(out)
}

/// Build a compact surface from oriented faces of a tet mesh, re-indexing the
/// vertices in first-use order.
pub fn faces_to_surface(
    mesh: &TetMesh,
    faces: impl IntoIterator<Item = [u32; 3]>,
) -> Result<TriSurfaceMesh, GeomError> {
    let mut remap = vec![u32::MAX; mesh.vertices().len()];
    let mut vertices: Vec<Point3> = Vec::new();
    let mut triangles: Vec<[u32; 3]> = Vec::new();
    for f in faces {
        let mut out = [0u32; 3];
        for (k, &v) in f.iter().enumerate() {
            if remap[v as usize] == u32::MAX {
                remap[v as usize] = vertices.len() as u32;
                vertices.push(mesh.vertices()[v as usize]);
            }
            out[k] = remap[v as usize];
        }
        triangles.push(out);
    }
    if triangles.is_empty() {
        return Err(GeomError::EmptySubset);
    }
    TriSurfaceMesh::new(vertices, triangles)
}
