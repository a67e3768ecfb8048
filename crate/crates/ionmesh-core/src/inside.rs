//! Point-in-closed-surface classification.
//!
//! The primary route is ray-crossing parity with deterministic retry rays; the
//! independent oracle is the generalized winding number (summed solid angles).
//! Both require a watertight surface.

use alloc::vec::Vec;

use crate::error::GeomError;
use crate::geom::{point_triangle_distance_sq, triangle_solid_angle, Aabb, Point3, Vec3};
use crate::math::{self, SplitMix64};
use crate::ray::ray_triangle_intersect;
use crate::surface::TriSurfaceMesh;

/// Number of re-drawn ray directions before a parity query gives up.
pub const N_RETRY: usize = 8;

const LEAF_SIZE: usize = 8;

struct BvhNode {
    aabb: Aabb,
    // leaf: count > 0, triangles in order[start..start+count]
    // inner: count == 0, children at node indices `left` and `start`
    left: u32,
    start: u32,
    count: u32,
}

/// A bounding-volume hierarchy over the triangles of one surface, reused
/// across many containment queries.
pub struct InclusionTester<'a> {
    mesh: &'a TriSurfaceMesh,
    nodes: Vec<BvhNode>,
    order: Vec<u32>,
}

impl<'a> InclusionTester<'a> {
    /// Build the hierarchy. Fails if the surface is not closed.
    pub fn new(mesh: &'a TriSurfaceMesh) -> Result<Self, GeomError> {
        let census = mesh.edge_census();
        if !census.is_closed() {
            return Err(GeomError::NotWatertight {
                boundary_edges: census.boundary_edges,
                non_manifold_edges: census.non_manifold_edges,
            });
        }
        let n = mesh.triangles().len();
        let mut order: Vec<u32> = (0..n as u32).collect();
        let boxes: Vec<Aabb> = (0..n)
            .map(|t| {
                let [a, b, c] = mesh.triangle_points(t);
                Aabb::from_points([a, b, c]).expect("triangle aabb")
            })
            .collect();
        let mut nodes = Vec::with_capacity(2 * n / LEAF_SIZE + 2);
        build_node(&boxes, &mut order, 0, n, &mut nodes);
        Ok(Self { mesh, nodes, order })
    }

    /// Ray-parity containment with deterministic retries.
    ///
    /// Directions come from a fixed pseudo-random sequence seeded by the query
    /// point's bit pattern, so results are reproducible. A crossing count is
    /// discarded and the ray re-drawn whenever any candidate triangle reports
    /// a degenerate cast or a hit too close to the origin.
    pub fn contains(&self, p: Point3) -> Result<bool, GeomError> {
        if !self.nodes.is_empty() && !self.nodes[0].aabb.contains(p) {
            return Ok(false);
        }
        let [bx, by, bz] = p.bits();
        let mut rng = SplitMix64::new(bx ^ by.rotate_left(21) ^ bz.rotate_left(42));
        let t_eps = self.mesh.eps_geom();
        for _ in 0..N_RETRY {
            let dir = rng.unit_vector();
            if let Some(crossings) = self.count_crossings(p, dir, t_eps) {
                return Ok(crossings % 2 == 1);
            }
        }
        Err(GeomError::DegenerateQuery)
    }

    /// One parity attempt; `None` means a degenerate configuration was met.
    fn count_crossings(&self, origin: Point3, dir: Vec3, t_eps: f64) -> Option<usize> {
        let inv = Vec3::new(1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z);
        let mut crossings = 0usize;
        let mut stack: [u32; 64] = [0; 64];
        let mut top = 0usize;
        stack[top] = 0;
        top += 1;
        while top > 0 {
            top -= 1;
            let node = &self.nodes[stack[top] as usize];
            if !ray_hits_aabb(origin, inv, &node.aabb) {
                continue;
            }
            if node.count > 0 {
                for &t in &self.order[node.start as usize..(node.start + node.count) as usize] {
                    let cast = ray_triangle_intersect(origin, dir, self.mesh.triangle_points(t as usize))
                        .expect("direction is a unit vector");
                    if cast.degenerate {
                        return None;
                    }
                    if let Some(hit) = cast.hit {
                        if hit.t <= t_eps {
                            return None;
                        }
                        crossings += 1;
                    }
                }
            } else {
                stack[top] = node.left;
                stack[top + 1] = node.start;
                top += 2;
                debug_assert!(top <= 64);
            }
        }
        Some(crossings)
    }
}

fn build_node(boxes: &[Aabb], order: &mut [u32], start: usize, count: usize, nodes: &mut Vec<BvhNode>) -> u32 {
    let slice = &order[start..start + count];
    let mut aabb = boxes[slice[0] as usize];
    for &t in &slice[1..] {
        aabb = aabb.merge(&boxes[t as usize]);
    }
    let index = nodes.len() as u32;
    if count <= LEAF_SIZE {
        nodes.push(BvhNode { aabb, left: 0, start: start as u32, count: count as u32 });
        return index;
    }
    nodes.push(BvhNode { aabb, left: 0, start: 0, count: 0 });

    // median split along the widest centroid axis
    let ext = aabb.max - aabb.min;
    let axis = if ext.x >= ext.y && ext.x >= ext.z {
        0
    } else if ext.y >= ext.z {
        1
    } else {
        2
    };
    let key = |t: u32| {
        let c = boxes[t as usize].center();
        match axis {
            0 => c.x,
            1 => c.y,
            _ => c.z,
        }
    };
    let mid = count / 2;
    order[start..start + count]
        .select_nth_unstable_by(mid, |&a, &b| key(a).partial_cmp(&key(b)).expect("finite centroids"));

    let left = build_node(boxes, order, start, mid, nodes);
    let right = build_node(boxes, order, start + mid, count - mid, nodes);
    nodes[index as usize].left = left;
    nodes[index as usize].start = right;
    index
}

fn ray_hits_aabb(origin: Point3, inv_dir: Vec3, aabb: &Aabb) -> bool {
    // slab test; IEEE inf semantics handle axis-parallel rays
    let t1 = (aabb.min.x - origin.x) * inv_dir.x;
    let t2 = (aabb.max.x - origin.x) * inv_dir.x;
    let mut tmin = t1.min(t2);
    let mut tmax = t1.max(t2);
    let t1 = (aabb.min.y - origin.y) * inv_dir.y;
    let t2 = (aabb.max.y - origin.y) * inv_dir.y;
    tmin = tmin.max(t1.min(t2));
    tmax = tmax.min(t1.max(t2));
    let t1 = (aabb.min.z - origin.z) * inv_dir.z;
    let t2 = (aabb.max.z - origin.z) * inv_dir.z;
    tmin = tmin.max(t1.min(t2));
    tmax = tmax.min(t1.max(t2));
    tmax >= tmin.max(0.0)
}

/// One-shot strict-interior test by ray-crossing parity.
///
/// Builds a temporary [`InclusionTester`]; batch callers should build the
/// tester once and query it repeatedly.
pub fn point_in_closed_surface(p: Point3, surface: &TriSurfaceMesh) -> Result<bool, GeomError> {
    InclusionTester::new(surface)?.contains(p)
}

/// Independent containment oracle: the total signed solid angle over all
/// triangles, divided by 4*pi, rounds to a nonzero integer iff `p` is inside.
pub fn winding_number_inclusion(p: Point3, surface: &TriSurfaceMesh) -> Result<bool, GeomError> {
    let census = surface.edge_census();
    if !census.is_closed() {
        return Err(GeomError::NotWatertight {
            boundary_edges: census.boundary_edges,
            non_manifold_edges: census.non_manifold_edges,
        });
    }
    let eps = surface.eps_geom();
    let eps_sq = eps * eps;
    let mut total = 0.0;
    for t in 0..surface.triangles().len() {
        let [a, b, c] = surface.triangle_points(t);
        // cheap reject before the exact on-surface test
        let mut tb = Aabb::from_points([a, b, c]).expect("triangle aabb");
        tb.min = tb.min + Vec3::new(-eps, -eps, -eps);
        tb.max = tb.max + Vec3::new(eps, eps, eps);
        if tb.contains(p) && point_triangle_distance_sq(p, a, b, c) <= eps_sq {
            return Err(GeomError::OnBoundary);
        }
        total += triangle_solid_angle(p, a, b, c);
    }
    let w = total / (4.0 * core::f64::consts::PI);
    Ok(math::round(w) != 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::cuboid_surface;

    fn unit_cube() -> TriSurfaceMesh {
        cuboid_surface(Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 1.0, 1.0))
    }

    #[test]
    fn cube_parity_inside_outside() {
        let cube = unit_cube();
        assert!(point_in_closed_surface(Point3::new(0.5, 0.5, 0.5), &cube).unwrap());
        assert!(!point_in_closed_surface(Point3::new(2.0, 0.0, 0.0), &cube).unwrap());
    }

    #[test]
    fn cube_winding_inside_outside() {
        let cube = unit_cube();
        assert!(winding_number_inclusion(Point3::new(0.5, 0.5, 0.5), &cube).unwrap());
        assert!(!winding_number_inclusion(Point3::new(5.0, 5.0, 5.0), &cube).unwrap());
    }

    #[test]
    fn winding_on_boundary_is_detected() {
        let cube = unit_cube();
        assert_eq!(
            winding_number_inclusion(Point3::new(0.5, 0.5, 0.0), &cube),
            Err(GeomError::OnBoundary)
        );
    }

    #[test]
    fn open_surface_rejected() {
        let tri = TriSurfaceMesh::new(
            alloc::vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0)
            ],
            alloc::vec![[0, 1, 2]],
        )
        .unwrap();
        assert!(matches!(
            point_in_closed_surface(Point3::new(0.2, 0.2, 1.0), &tri),
            Err(GeomError::NotWatertight { .. })
        ));
    }

    #[test]
    fn parity_agrees_with_winding_on_random_points() {
        let cube = cuboid_surface(Point3::new(-1.0, -1.0, -1.0), Point3::new(1.0, 1.0, 1.0));
        let tester = InclusionTester::new(&cube).unwrap();
        let mut rng = SplitMix64::new(0xA5A5);
        for _ in 0..2000 {
            let p = Point3::new(rng.range(-2.0, 2.0), rng.range(-2.0, 2.0), rng.range(-2.0, 2.0));
            let a = tester.contains(p).unwrap();
            let b = winding_number_inclusion(p, &cube).unwrap();
            assert_eq!(a, b, "disagreement at {p:?}");
        }
    }

    #[test]
    fn queries_are_deterministic() {
        let cube = unit_cube();
        let tester = InclusionTester::new(&cube).unwrap();
        // a point aligned with the cube's lattice exercises the retry path
        let p = Point3::new(0.5, 0.5, 0.25);
        let first = tester.contains(p).unwrap();
        for _ in 0..10 {
            assert_eq!(tester.contains(p).unwrap(), first);
        }
    }
}
