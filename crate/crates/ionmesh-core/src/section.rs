//! Plane cross-sections of triangle surfaces, chained into closed 2D loops
//! with containment depth.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::GeomError;
use crate::geom::point_segment_distance_sq_2d;
use crate::surface::TriSurfaceMesh;

/// Maximum number of plane nudges before a cross-section query gives up.
const MAX_PLANE_RETRY: usize = 16;

/// Relative plane shift applied when a vertex lies on the section plane.
const DELTA_PLANE_REL: f64 = 1e-6;

/// Closed 2D loops cut from a surface by a horizontal plane.
///
/// `depth[i]` is the number of other loops strictly containing loop `i`
/// (0 = outermost). Loops are implicitly closed: the first point is not
/// repeated at the end.
#[derive(Clone, Debug)]
pub struct PlanarLoopSet {
    pub z: f64,
    pub loops: Vec<Vec<[f64; 2]>>,
    pub depth: Vec<u32>,
    eps: f64,
}

impl PlanarLoopSet {
    /// Assemble a loop set directly (2D tolerance derived from the loop
    /// bounds). Used mainly by tests; the pipeline builds loop sets via
    /// [`cross_section_loops`].
    pub fn new(z: f64, loops: Vec<Vec<[f64; 2]>>) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for l in &loops {
            for p in l {
                for k in 0..2 {
                    lo[k] = lo[k].min(p[k]);
                    hi[k] = hi[k].max(p[k]);
                }
            }
        }
        let diag = if loops.is_empty() {
            0.0
        } else {
            let dx = hi[0] - lo[0];
            let dy = hi[1] - lo[1];
            crate::math::sqrt(dx * dx + dy * dy)
        };
        let depth = loop_depths(&loops);
        Self { z, loops, depth, eps: crate::surface::EPS_GEOM_REL * diag }
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    /// 2D tolerance used for on-boundary tests.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Minimum 2D distance from `q` to any loop segment.
    pub fn distance(&self, q: [f64; 2]) -> f64 {
        let mut best = f64::INFINITY;
        for l in &self.loops {
            for i in 0..l.len() {
                let d = point_segment_distance_sq_2d(q, l[i], l[(i + 1) % l.len()]);
                best = best.min(d);
            }
        }
        crate::math::sqrt(best)
    }
}

/// Even-odd test of `q` against one implicitly closed loop.
fn point_in_loop(q: [f64; 2], l: &[[f64; 2]]) -> bool {
    let mut inside = false;
    for i in 0..l.len() {
        let a = l[i];
        let b = l[(i + 1) % l.len()];
        if (a[1] > q[1]) != (b[1] > q[1]) {
            let x = a[0] + (q[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if q[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn loop_depths(loops: &[Vec<[f64; 2]>]) -> Vec<u32> {
    (0..loops.len())
        .map(|i| {
            let rep = loops[i][0];
            (0..loops.len()).filter(|&j| j != i && point_in_loop(rep, &loops[j])).count() as u32
        })
        .collect()
}

/// Number of loops strictly containing `q`, plus an on-boundary flag set when
/// `q` lies within the loop set's tolerance of any segment.
pub fn loop_containment_depth(q: [f64; 2], loops: &PlanarLoopSet) -> (u32, bool) {
    let depth = loops.loops.iter().filter(|l| point_in_loop(q, l)).count() as u32;
    let on_boundary = !loops.is_empty() && loops.distance(q) <= loops.eps;
    (depth, on_boundary)
}

/// Intersect a watertight surface with the plane `z = const` and chain the
/// segments into closed loops.
///
/// If any vertex lies within the surface tolerance of the plane, the plane is
/// nudged by small alternating offsets and the section recomputed, so every
/// crossing is a clean edge crossing. Segment endpoints are keyed by the mesh
/// edge they cross, which makes chaining exact.
pub fn cross_section_loops(surface: &TriSurfaceMesh, z: f64) -> Result<PlanarLoopSet, GeomError> {
    let eps = surface.eps_geom();
    let delta = DELTA_PLANE_REL * surface.aabb().diagonal();
    let mut zc = z;
    let mut attempt = 0usize;
    loop {
        let clean = surface.vertices().iter().all(|v| (v.z - zc).abs() > eps);
        if clean {
            break;
        }
        attempt += 1;
        if attempt > MAX_PLANE_RETRY {
            return Err(GeomError::DegenerateQuery);
        }
        // alternate +delta, -delta, +2 delta, ...
        let k = attempt.div_ceil(2) as f64;
        zc = if attempt % 2 == 1 { z + k * delta } else { z - k * delta };
    }

    // Each crossing triangle contributes one segment whose endpoints lie on
    // two of its edges. Key endpoints by the undirected edge index pair.
    type EdgeKey = (u32, u32);
    let edge_key = |a: u32, b: u32| -> EdgeKey {
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    };
    let mut crossing_point: BTreeMap<EdgeKey, [f64; 2]> = BTreeMap::new();
    let mut segments: Vec<[EdgeKey; 2]> = Vec::new();

    for tri in surface.triangles() {
        let vs = [
            surface.vertices()[tri[0] as usize],
            surface.vertices()[tri[1] as usize],
            surface.vertices()[tri[2] as usize],
        ];
        let below = [vs[0].z < zc, vs[1].z < zc, vs[2].z < zc];
        if below.iter().all(|&b| b) || below.iter().all(|&b| !b) {
            continue;
        }
        let mut keys: Vec<EdgeKey> = Vec::with_capacity(2);
        for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
            if below[i] == below[j] {
                continue;
            }
            let key = edge_key(tri[i], tri[j]);
            crossing_point.entry(key).or_insert_with(|| {
                let t = (zc - vs[i].z) / (vs[j].z - vs[i].z);
                [vs[i].x + t * (vs[j].x - vs[i].x), vs[i].y + t * (vs[j].y - vs[i].y)]
            });
            keys.push(key);
        }
        debug_assert_eq!(keys.len(), 2);
        segments.push([keys[0], keys[1]]);
    }

    if segments.is_empty() {
        return Ok(PlanarLoopSet { z, loops: Vec::new(), depth: Vec::new(), eps });
    }

    // Each crossed edge must join exactly two segments (watertight surface).
    let mut incident: BTreeMap<EdgeKey, Vec<u32>> = BTreeMap::new();
    for (s, seg) in segments.iter().enumerate() {
        incident.entry(seg[0]).or_default().push(s as u32);
        incident.entry(seg[1]).or_default().push(s as u32);
    }
    let open = incident.values().filter(|v| v.len() != 2).count();
    if open > 0 {
        return Err(GeomError::OpenCrossSection { open_chains: open });
    }

    // Walk the 2-regular segment graph into cycles.
    let mut visited = vec![false; segments.len()];
    let mut loops: Vec<Vec<[f64; 2]>> = Vec::new();
    for start in 0..segments.len() {
        if visited[start] {
            continue;
        }
        let mut pts: Vec<[f64; 2]> = Vec::new();
        let mut seg = start as u32;
        let mut enter = segments[start][0];
        loop {
            visited[seg as usize] = true;
            let exit = if segments[seg as usize][0] == enter {
                segments[seg as usize][1]
            } else {
                segments[seg as usize][0]
            };
            pts.push(crossing_point[&exit]);
            let pair = &incident[&exit];
            let next = if pair[0] == seg { pair[1] } else { pair[0] };
            if next as usize == start {
                break;
            }
            seg = next;
            enter = exit;
        }
        loops.push(pts);
    }

    let depth = loop_depths(&loops);
    Ok(PlanarLoopSet { z, loops, depth, eps })
}
