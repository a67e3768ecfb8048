//! Möller–Trumbore ray/triangle intersection with explicit degeneracy
//! reporting, so parity-based containment queries can re-draw rays instead of
//! silently miscounting grazing hits.

use crate::error::GeomError;
use crate::geom::{Point3, Vec3};
use crate::math;

/// Barycentric-unit tolerance for near-edge/near-vertex hits and near-coplanar
/// rays.
pub const EPS_HIT: f64 = 1e-10;

/// A ray/triangle hit at parameter `t` (in units of the direction length) with
/// barycentric coordinates `u` toward vertex 1 and `v` toward vertex 2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayHit {
    pub t: f64,
    pub u: f64,
    pub v: f64,
}

/// Outcome of a ray/triangle test.
///
/// `degenerate` is set when the result cannot be trusted for parity counting:
/// the hit (or near-miss) lies within [`EPS_HIT`] of an edge or vertex, or the
/// ray is within [`EPS_HIT`] of lying in the triangle's plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayCast {
    pub hit: Option<RayHit>,
    pub degenerate: bool,
}

impl RayCast {
    const MISS: RayCast = RayCast { hit: None, degenerate: false };
}

/// Intersect the ray `origin + t * direction` (t >= 0) with a triangle.
pub fn ray_triangle_intersect(
    origin: Point3,
    direction: Vec3,
    tri: [Point3; 3],
) -> Result<RayCast, GeomError> {
    if direction.norm_squared() == 0.0 || !origin.is_finite() {
        return Err(GeomError::InvalidRay);
    }

    let e1 = tri[1] - tri[0];
    let e2 = tri[2] - tri[0];
    let pvec = direction.cross(e2);
    let det = e1.dot(pvec);

    // |det| <= ||d|| * ||e1|| * ||e2||, so this ratio is a clean angular test.
    let scale = math::sqrt(direction.norm_squared() * e1.norm_squared() * e2.norm_squared());
    if det.abs() <= EPS_HIT * scale {
        // Ray parallel to the triangle plane. Only a problem if the origin is
        // also (nearly) in that plane: the ray may graze the triangle.
        let n = e1.cross(e2);
        let s = origin - tri[0];
        let coplanar = s.dot(n).abs() <= EPS_HIT * math::sqrt(s.norm_squared() * n.norm_squared()).max(f64::MIN_POSITIVE);
        return Ok(RayCast { hit: None, degenerate: coplanar });
    }

    let inv_det = 1.0 / det;
    let s = origin - tri[0];
    let u = s.dot(pvec) * inv_det;
    let qvec = s.cross(e1);
    let v = direction.dot(qvec) * inv_det;
    let w = 1.0 - u - v;

    if u < -EPS_HIT || v < -EPS_HIT || w < -EPS_HIT {
        return Ok(RayCast::MISS);
    }

    let near_edge = u < EPS_HIT || v < EPS_HIT || w < EPS_HIT;
    let t = e2.dot(qvec) * inv_det;
    if u >= 0.0 && v >= 0.0 && w >= 0.0 && t >= 0.0 {
        Ok(RayCast { hit: Some(RayHit { t, u, v }), degenerate: near_edge })
    } else {
        // Inside the eps band around the simplex boundary, or behind the
        // origin: no countable hit, but flag boundary grazes.
        Ok(RayCast { hit: None, degenerate: near_edge })
    }
}
