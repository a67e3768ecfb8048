//! Indexed triangle surfaces: validation, edge census, connected components,
//! and enclosed volume.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::GeomError;
use crate::geom::{triangle_area, Aabb, Point3};

/// Relative factor for the scale-invariant geometric tolerance: on-plane and
/// on-boundary tests use `EPS_GEOM_REL * aabb.diagonal()`.
pub const EPS_GEOM_REL: f64 = 1e-9;

/// Edge incidence summary of a triangle surface.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeCensus {
    /// Distinct undirected edges.
    pub edges: usize,
    /// Edges incident to exactly one triangle.
    pub boundary_edges: usize,
    /// Edges incident to three or more triangles.
    pub non_manifold_edges: usize,
    /// Edges with odd incidence (these make the surface non-closed).
    pub odd_edges: usize,
}

impl EdgeCensus {
    /// Strictly manifold-closed: every edge shared by exactly two triangles.
    pub fn is_watertight(&self) -> bool {
        self.boundary_edges == 0 && self.non_manifold_edges == 0
    }

    /// Closed as a 2-cycle: every edge has even incidence. Weaker than
    /// watertight; allows pinch edges (incidence 4), which boundary surfaces
    /// of centroid-selected tet subsets can legitimately contain. Containment
    /// parity, winding numbers, and enclosed volume are all well defined on
    /// closed surfaces.
    pub fn is_closed(&self) -> bool {
        self.odd_edges == 0
    }
}

/// An indexed triangle surface with optional per-triangle integer tags.
///
/// Construction validates indices, finiteness, and triangle areas, and records
/// whether the surface is watertight (every undirected edge shared by exactly
/// two triangles).
#[derive(Clone, Debug)]
pub struct TriSurfaceMesh {
    vertices: Vec<Point3>,
    triangles: Vec<[u32; 3]>,
    tags: Option<Vec<i32>>,
    census: EdgeCensus,
    aabb: Aabb,
    eps: f64,
}

impl TriSurfaceMesh {
    pub fn new(vertices: Vec<Point3>, triangles: Vec<[u32; 3]>) -> Result<Self, GeomError> {
        if vertices.is_empty() || triangles.is_empty() {
            return Err(GeomError::EmptyMesh);
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(GeomError::NonFinite { vertex: i });
            }
        }
        let aabb = Aabb::from_points(vertices.iter().copied())?;
        let eps = EPS_GEOM_REL * aabb.diagonal();
        let limit = vertices.len();
        for (t, tri) in triangles.iter().enumerate() {
            for &i in tri {
                if i as usize >= limit {
                    return Err(GeomError::IndexOutOfRange { index: i as usize, limit });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(GeomError::DegenerateTriangle { triangle: t });
            }
            let [a, b, c] = [
                vertices[tri[0] as usize],
                vertices[tri[1] as usize],
                vertices[tri[2] as usize],
            ];
            if triangle_area(a, b, c) <= eps {
                return Err(GeomError::DegenerateTriangle { triangle: t });
            }
        }
        let census = census_of(&triangles);
        Ok(Self { vertices, triangles, tags: None, census, aabb, eps })
    }

    /// Attach one tag per triangle.
    pub fn with_tags(mut self, tags: Vec<i32>) -> Result<Self, GeomError> {
        if tags.len() != self.triangles.len() {
            return Err(GeomError::InvalidDomain("tag count must match triangle count"));
        }
        self.tags = Some(tags);
        Ok(self)
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn tags(&self) -> Option<&[i32]> {
        self.tags.as_deref()
    }

    pub fn triangle_points(&self, t: usize) -> [Point3; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a as usize], self.vertices[b as usize], self.vertices[c as usize]]
    }

    pub fn aabb(&self) -> Aabb {
        self.aabb
    }

    /// Scale-derived geometric tolerance for this surface.
    pub fn eps_geom(&self) -> f64 {
        self.eps
    }

    pub fn edge_census(&self) -> EdgeCensus {
        self.census
    }

    pub fn is_watertight(&self) -> bool {
        self.census.is_watertight()
    }

    pub fn is_closed(&self) -> bool {
        self.census.is_closed()
    }

    /// V - E + F over referenced vertices and distinct undirected edges.
    pub fn euler_characteristic(&self) -> i64 {
        let mut used = vec![false; self.vertices.len()];
        for tri in &self.triangles {
            for &i in tri {
                used[i as usize] = true;
            }
        }
        let v = used.iter().filter(|&&u| u).count() as i64;
        v - self.census.edges as i64 + self.triangles.len() as i64
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| {
                let [a, b, c] = self.triangle_points(t);
                triangle_area(a, b, c)
            })
            .sum()
    }
}

fn undirected_edges(tri: &[u32; 3]) -> [(u32, u32); 3] {
    let e = |a: u32, b: u32| if a < b { (a, b) } else { (b, a) };
    [e(tri[0], tri[1]), e(tri[1], tri[2]), e(tri[2], tri[0])]
}

fn census_of(triangles: &[[u32; 3]]) -> EdgeCensus {
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(triangles.len() * 3);
    for tri in triangles {
        edges.extend_from_slice(&undirected_edges(tri));
    }
    edges.sort_unstable();
    let mut census = EdgeCensus::default();
    let mut i = 0;
    while i < edges.len() {
        let mut j = i + 1;
        while j < edges.len() && edges[j] == edges[i] {
            j += 1;
        }
        census.edges += 1;
        let incidence = j - i;
        match incidence {
            1 => census.boundary_edges += 1,
            2 => {}
            _ => census.non_manifold_edges += 1,
        }
        if incidence % 2 == 1 {
            census.odd_edges += 1;
        }
        i = j;
    }
    census
}

/// Componentwise min/max over all surface vertices.
pub fn compute_aabb(surface: &TriSurfaceMesh) -> Aabb {
    surface.aabb()
}

/// Component id per triangle under edge connectivity, plus the component count.
/// Components are numbered by their smallest triangle index.
pub fn triangle_component_ids(triangles: &[[u32; 3]]) -> (Vec<u32>, usize) {
    // edge key -> incident triangles, via a sorted pair list
    let mut pairs: Vec<((u32, u32), u32)> = Vec::with_capacity(triangles.len() * 3);
    for (t, tri) in triangles.iter().enumerate() {
        for e in undirected_edges(tri) {
            pairs.push((e, t as u32));
        }
    }
    pairs.sort_unstable();

    // adjacency in CSR form
    let mut degree = vec![0u32; triangles.len()];
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let mut j = i + 1;
        while j < pairs.len() && pairs[j].0 == pairs[i].0 {
            j += 1;
        }
        if j - i > 1 {
            runs.push((i, j));
            for k in i..j {
                degree[pairs[k].1 as usize] += (j - i - 1) as u32;
            }
        }
        i = j;
    }
    let mut offsets = vec![0usize; triangles.len() + 1];
    for t in 0..triangles.len() {
        offsets[t + 1] = offsets[t] + degree[t] as usize;
    }
    let mut adj = vec![0u32; offsets[triangles.len()]];
    let mut cursor = offsets.clone();
    for (i, j) in runs {
        for a in i..j {
            for b in i..j {
                if a != b {
                    let t = pairs[a].1 as usize;
                    adj[cursor[t]] = pairs[b].1;
                    cursor[t] += 1;
                }
            }
        }
    }

    let mut ids = vec![u32::MAX; triangles.len()];
    let mut count = 0usize;
    let mut stack: Vec<u32> = Vec::new();
    for start in 0..triangles.len() {
        if ids[start] != u32::MAX {
            continue;
        }
        let id = count as u32;
        count += 1;
        ids[start] = id;
        stack.push(start as u32);
        while let Some(t) = stack.pop() {
            let t = t as usize;
            for &n in &adj[offsets[t]..offsets[t + 1]] {
                if ids[n as usize] == u32::MAX {
                    ids[n as usize] = id;
                    stack.push(n);
                }
            }
        }
    }
    (ids, count)
}

/// Extract the sub-surface made of the triangles where `keep` is true,
/// re-indexing vertices in first-use order. Tags are carried over.
pub fn sub_surface(mesh: &TriSurfaceMesh, keep: impl Fn(usize) -> bool) -> Result<TriSurfaceMesh, GeomError> {
    let mut remap = vec![u32::MAX; mesh.vertices().len()];
    let mut vertices: Vec<Point3> = Vec::new();
    let mut triangles: Vec<[u32; 3]> = Vec::new();
    let mut tags: Vec<i32> = Vec::new();
    for (t, tri) in mesh.triangles().iter().enumerate() {
        if !keep(t) {
            continue;
        }
        let mut out = [0u32; 3];
        for (k, &v) in tri.iter().enumerate() {
            if remap[v as usize] == u32::MAX {
                remap[v as usize] = vertices.len() as u32;
                vertices.push(mesh.vertices()[v as usize]);
            }
            out[k] = remap[v as usize];
        }
        triangles.push(out);
        if let Some(src) = mesh.tags() {
            tags.push(src[t]);
        }
    }
    let out = TriSurfaceMesh::new(vertices, triangles)?;
    if mesh.tags().is_some() {
        out.with_tags(tags)
    } else {
        Ok(out)
    }
}

/// Split a surface into maximal edge-connected components.
///
/// The triangle multiset is preserved; each component re-indexes its own
/// vertices. Components are ordered by their smallest triangle index.
pub fn surface_connected_components(mesh: &TriSurfaceMesh) -> Vec<TriSurfaceMesh> {
    let (ids, count) = triangle_component_ids(mesh.triangles());
    (0..count as u32)
        .map(|c| sub_surface(mesh, |t| ids[t] == c).expect("component of a valid mesh is valid"))
        .collect()
}

/// Divergence-theorem signed volume of a closed, consistently oriented
/// surface. Positive for outward orientation.
pub fn enclosed_volume(mesh: &TriSurfaceMesh) -> Result<f64, GeomError> {
    let census = mesh.edge_census();
    if !census.is_closed() {
        return Err(GeomError::NotWatertight {
            boundary_edges: census.boundary_edges,
            non_manifold_edges: census.non_manifold_edges,
        });
    }
    let mut six_vol = 0.0;
    for t in 0..mesh.triangles().len() {
        let [a, b, c] = mesh.triangle_points(t);
        six_vol += a.to_vec().dot(b.to_vec().cross(c.to_vec()));
    }
    Ok(six_vol / 6.0)
}

/// The twelve triangles of an axis-aligned cuboid, outward-oriented.
#[rustfmt::skip]
pub fn cuboid_surface(min: Point3, max: Point3) -> TriSurfaceMesh {
    let v = vec![
        Point3::new(min.x, min.y, min.z), // 0
        Point3::new(max.x, min.y, min.z), // 1
        Point3::new(max.x, max.y, min.z), // 2
        Point3::new(min.x, max.y, min.z), // 3
        Point3::new(min.x, min.y, max.z), // 4
        Point3::new(max.x, min.y, max.z), // 5
        Point3::new(max.x, max.y, max.z), // 6
        Point3::new(min.x, max.y, max.z), // 7
    ];
    let t = vec![
        [0, 2, 1], [0, 3, 2], // bottom (-z)
        [4, 5, 6], [4, 6, 7], // top (+z)
        [0, 1, 5], [0, 5, 4], // front (-y)
        [2, 3, 7], [2, 7, 6], // back (+y)
        [1, 2, 6], [1, 6, 5], // right (+x)
        [3, 0, 4], [3, 4, 7], // left (-x)
    ];
    TriSurfaceMesh::new(v, t).expect("cuboid surface is valid")
}
