//! Analytic synthetic "protein" surfaces for verification: a straight annular
//! tube, an hourglass with a curved pore, and a two-pore solid. All are
//! watertight and outward-oriented by construction, with the first ring
//! vertex at angle 0 so (r, 0, z) vertices exist exactly.

use alloc::vec::Vec;

use crate::error::GeomError;
use crate::geom::{coord, Point3};
use crate::math;
use crate::surface::TriSurfaceMesh;

/// The synthetic solid family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SynthKind {
    /// Straight annular tube (cylindrical pore).
    Tube,
    /// Tube whose inner radius grows quadratically away from the mid-plane:
    /// `r(z) = r_inner * (1 + slope * ((z - z_mid) / z_half)^2)`.
    Hourglass { slope: f64 },
    /// Two disjoint tubes at the given (x, y) centers, one mesh with two
    /// components.
    TwoPore { centers: [[f64; 2]; 2] },
}

/// Parameters of a synthetic solid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthSpec {
    pub kind: SynthKind,
    pub r_inner: f64,
    pub r_outer: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub n_theta: u32,
    /// Axial subdivisions of the walls.
    pub n_rings: u32,
}

impl SynthSpec {
    pub fn tube(r_inner: f64, r_outer: f64, z_min: f64, z_max: f64, n_theta: u32, n_rings: u32) -> Self {
        Self { kind: SynthKind::Tube, r_inner, r_outer, z_min, z_max, n_theta, n_rings }
    }

    pub fn hourglass(
        r_inner: f64,
        r_outer: f64,
        z_min: f64,
        z_max: f64,
        n_theta: u32,
        n_rings: u32,
        slope: f64,
    ) -> Self {
        Self { kind: SynthKind::Hourglass { slope }, r_inner, r_outer, z_min, z_max, n_theta, n_rings }
    }

    pub fn two_pore(
        r_inner: f64,
        r_outer: f64,
        z_min: f64,
        z_max: f64,
        n_theta: u32,
        n_rings: u32,
        centers: [[f64; 2]; 2],
    ) -> Self {
        Self { kind: SynthKind::TwoPore { centers }, r_inner, r_outer, z_min, z_max, n_theta, n_rings }
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        let finite = [self.r_inner, self.r_outer, self.z_min, self.z_max];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::InvalidSpec("all sizes must be finite"));
        }
        if self.r_inner <= 0.0 || self.r_inner >= self.r_outer {
            return Err(GeomError::InvalidSpec("requires 0 < r_inner < r_outer"));
        }
        if self.z_min >= self.z_max {
            return Err(GeomError::InvalidSpec("requires z_min < z_max"));
        }
        if self.n_theta < 8 {
            return Err(GeomError::InvalidSpec("requires n_theta >= 8"));
        }
        if self.n_rings < 1 {
            return Err(GeomError::InvalidSpec("requires n_rings >= 1"));
        }
        match self.kind {
            SynthKind::Tube => {}
            SynthKind::Hourglass { slope } => {
                if slope < 0.0 {
                    return Err(GeomError::InvalidSpec("hourglass slope must be >= 0"));
                }
                if self.r_inner * (1.0 + slope) >= self.r_outer {
                    return Err(GeomError::InvalidSpec(
                        "hourglass mouth radius r_inner*(1+slope) must stay below r_outer",
                    ));
                }
            }
            SynthKind::TwoPore { centers } => {
                let dx = centers[0][0] - centers[1][0];
                let dy = centers[0][1] - centers[1][1];
                if math::sqrt(dx * dx + dy * dy) <= 2.0 * self.r_outer {
                    return Err(GeomError::InvalidSpec("two_pore outer circles must be disjoint"));
                }
            }
        }
        Ok(())
    }

    /// Inner-wall radius at height `z`.
    pub fn inner_radius(&self, z: f64) -> f64 {
        match self.kind {
            SynthKind::Hourglass { slope } => {
                let z_mid = 0.5 * (self.z_min + self.z_max);
                let z_half = 0.5 * (self.z_max - self.z_min);
                let s = (z - z_mid) / z_half;
                self.r_inner * (1.0 + slope * s * s)
            }
            _ => self.r_inner,
        }
    }

    /// Polygon area of the regular n-gon inscribed in a circle of radius `r`:
    /// `(n/2) r^2 sin(2 pi / n)`.
    pub fn polygon_area(&self, r: f64) -> f64 {
        let n = self.n_theta as f64;
        0.5 * n * r * r * math::sin(2.0 * core::f64::consts::PI / n)
    }

    /// Exact enclosed volume of the generated polyhedron. Only defined for
    /// solids with straight walls (tube, two-pore).
    pub fn prism_volume(&self) -> Option<f64> {
        let h = self.z_max - self.z_min;
        match self.kind {
            SynthKind::Tube => Some((self.polygon_area(self.r_outer) - self.polygon_area(self.r_inner)) * h),
            SynthKind::TwoPore { .. } => {
                Some(2.0 * (self.polygon_area(self.r_outer) - self.polygon_area(self.r_inner)) * h)
            }
            SynthKind::Hourglass { .. } => None,
        }
    }
}

struct RingBuilder {
    vertices: Vec<Point3>,
    triangles: Vec<[u32; 3]>,
    n: u32,
}

impl RingBuilder {
    /// Push one ring of `n` vertices at the given radius/height around
    /// (cx, cy); returns the index of its first vertex.
    fn ring(&mut self, cx: f64, cy: f64, r: f64, z: f64) -> u32 {
        let start = self.vertices.len() as u32;
        for k in 0..self.n {
            let theta = 2.0 * core::f64::consts::PI * (k as f64) / (self.n as f64);
            self.vertices.push(Point3::new(cx + r * math::cos(theta), cy + r * math::sin(theta), z));
        }
        start
    }

    /// Quad band between two rings, split into triangles. `outward` selects
    /// whether normals face away from the axis.
    fn band(&mut self, lo: u32, hi: u32, outward: bool) {
        for k in 0..self.n {
            let k1 = (k + 1) % self.n;
            let (a, b, c, d) = (lo + k, lo + k1, hi + k1, hi + k);
            if outward {
                self.triangles.push([a, b, c]);
                self.triangles.push([a, c, d]);
            } else {
                self.triangles.push([a, c, b]);
                self.triangles.push([a, d, c]);
            }
        }
    }
}

/// One annular solid: outer wall, inner wall, top and bottom annulus caps.
fn annular_solid(spec: &SynthSpec, cx: f64, cy: f64, builder: &mut RingBuilder) {
    let n_rings = spec.n_rings as usize;
    let mut outer: Vec<u32> = Vec::with_capacity(n_rings + 1);
    let mut inner: Vec<u32> = Vec::with_capacity(n_rings + 1);
    for k in 0..=n_rings {
        let z = coord(spec.z_min, spec.z_max, k, n_rings);
        outer.push(builder.ring(cx, cy, spec.r_outer, z));
        inner.push(builder.ring(cx, cy, spec.inner_radius(z), z));
    }
    for k in 0..n_rings {
        builder.band(outer[k], outer[k + 1], true);
        builder.band(inner[k], inner[k + 1], false);
    }
    // bottom cap faces -z: from the inner ring outward, wound clockwise seen
    // from above; top cap faces +z
    builder.band(outer[0], inner[0], false);
    builder.band(outer[n_rings], inner[n_rings], true);
}

fn build(spec: &SynthSpec, centers: &[[f64; 2]]) -> Result<TriSurfaceMesh, GeomError> {
    spec.validate()?;
    let mut builder = RingBuilder { vertices: Vec::new(), triangles: Vec::new(), n: spec.n_theta };
    for c in centers {
        annular_solid(spec, c[0], c[1], &mut builder);
    }
    TriSurfaceMesh::new(builder.vertices, builder.triangles)
}

/// Watertight annular tube solid.
pub fn make_tube(spec: &SynthSpec) -> Result<TriSurfaceMesh, GeomError> {
    match spec.kind {
        SynthKind::Tube => build(spec, &[[0.0, 0.0]]),
        _ => Err(GeomError::InvalidSpec("make_tube expects SynthKind::Tube")),
    }
}

/// Tube with a quadratically flaring pore; `slope = 0` reproduces
/// [`make_tube`] exactly.
pub fn make_hourglass(spec: &SynthSpec) -> Result<TriSurfaceMesh, GeomError> {
    match spec.kind {
        SynthKind::Hourglass { .. } => build(spec, &[[0.0, 0.0]]),
        _ => Err(GeomError::InvalidSpec("make_hourglass expects SynthKind::Hourglass")),
    }
}

/// Two disjoint tube solids merged into one two-component mesh.
pub fn make_two_pore(spec: &SynthSpec) -> Result<TriSurfaceMesh, GeomError> {
    match spec.kind {
        SynthKind::TwoPore { centers } => build(spec, &centers),
        _ => Err(GeomError::InvalidSpec("make_two_pore expects SynthKind::TwoPore")),
    }
}

/// Build whichever solid the spec describes.
pub fn make_surface(spec: &SynthSpec) -> Result<TriSurfaceMesh, GeomError> {
    match spec.kind {
        SynthKind::Tube => make_tube(spec),
        SynthKind::Hourglass { .. } => make_hourglass(spec),
        SynthKind::TwoPore { .. } => make_two_pore(spec),
    }
}
