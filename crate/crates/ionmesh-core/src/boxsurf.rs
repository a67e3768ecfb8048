//! Simulation box construction and the watertight triangulated box boundary
//! with a refined membrane band.
//!
//! The lateral walls are divided into five horizontal bands: coarse solvent
//! rows, one transition row, the membrane band at the fine size, a mirrored
//! transition row, and coarse rows to the top. The transition rows use a 2:1
//! template (three triangles joining two coarse nodes to three fine nodes), so
//! the fine horizontal subdivision is exactly twice the coarse one. Bottom and
//! top caps are uniform coarse grids whose perimeter matches the lateral
//! coarse columns, which makes the assembled surface watertight by
//! construction.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::GeomError;
use crate::geom::{coord, Aabb, Point3};
use crate::math;
use crate::surface::TriSurfaceMesh;

/// The simulation box, an axis-aligned open cuboid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxDomain {
    pub lx1: f64,
    pub lx2: f64,
    pub ly1: f64,
    pub ly2: f64,
    pub lz1: f64,
    pub lz2: f64,
}

impl BoxDomain {
    pub fn new(lx1: f64, lx2: f64, ly1: f64, ly2: f64, lz1: f64, lz2: f64) -> Result<Self, GeomError> {
        let all = [lx1, lx2, ly1, ly2, lz1, lz2];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::InvalidDomain("box bounds must be finite"));
        }
        if !(lx1 < lx2 && ly1 < ly2 && lz1 < lz2) {
            return Err(GeomError::InvalidDomain("box bounds must satisfy lx1<lx2, ly1<ly2, lz1<lz2"));
        }
        Ok(Self { lx1, lx2, ly1, ly2, lz1, lz2 })
    }

    pub fn extent_x(&self) -> f64 {
        self.lx2 - self.lx1
    }

    pub fn extent_y(&self) -> f64 {
        self.ly2 - self.ly1
    }

    pub fn extent_z(&self) -> f64 {
        self.lz2 - self.lz1
    }

    pub fn surface_area(&self) -> f64 {
        let (lx, ly, lz) = (self.extent_x(), self.extent_y(), self.extent_z());
        2.0 * (lx * ly + ly * lz + lx * lz)
    }

    pub fn volume(&self) -> f64 {
        self.extent_x() * self.extent_y() * self.extent_z()
    }

    /// True if (x, y) lies strictly inside the open footprint rectangle.
    pub fn footprint_contains(&self, x: f64, y: f64) -> bool {
        x > self.lx1 && x < self.lx2 && y > self.ly1 && y < self.ly2
    }
}

/// The membrane slab: the region between the planes z = z1 and z = z2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MembraneSlab {
    pub z1: f64,
    pub z2: f64,
}

impl MembraneSlab {
    pub fn new(z1: f64, z2: f64) -> Result<Self, GeomError> {
        if !(z1.is_finite() && z2.is_finite() && z1 < z2) {
            return Err(GeomError::InvalidDomain("membrane slab requires finite z1 < z2"));
        }
        Ok(Self { z1, z2 })
    }

    pub fn contains_z(&self, z: f64) -> bool {
        z >= self.z1 && z <= self.z2
    }
}

/// Surface mesh sizes: `h_m` in the membrane band, `h_s` elsewhere
/// (`h_s = 2 h_m` unless overridden).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshSizes {
    pub h_m: f64,
    pub h_s: f64,
}

impl MeshSizes {
    pub fn new(h_m: f64) -> Result<Self, GeomError> {
        if !(h_m.is_finite() && h_m > 0.0) {
            return Err(GeomError::InvalidDomain("h_m must be positive"));
        }
        Ok(Self { h_m, h_s: 2.0 * h_m })
    }

    pub fn with_coarse(mut self, h_s: f64) -> Result<Self, GeomError> {
        if !(h_s.is_finite() && h_s >= self.h_m) {
            return Err(GeomError::InvalidDomain("h_s must satisfy h_s >= h_m"));
        }
        self.h_s = h_s;
        Ok(self)
    }
}

/// Per-triangle tag identifying the box-surface band a triangle belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(i32)]
pub enum BoxFaceTag {
    /// Bottom cap at z = lz1.
    BottomD = 0,
    /// Top cap at z = lz2.
    TopD = 1,
    /// Coarse lateral band below the transition row.
    LatS1 = 2,
    /// Lower transition row (coarse bottom edge, fine top edge at z1).
    LatS2 = 3,
    /// Membrane band, fine size, z1 <= z <= z2.
    LatM = 4,
    /// Upper transition row (fine bottom edge at z2, coarse top edge).
    LatS3 = 5,
    /// Coarse lateral band above the transition row.
    LatS4 = 6,
}

impl BoxFaceTag {
    pub fn from_i32(v: i32) -> Option<BoxFaceTag> {
        match v {
            0 => Some(BoxFaceTag::BottomD),
            1 => Some(BoxFaceTag::TopD),
            2 => Some(BoxFaceTag::LatS1),
            3 => Some(BoxFaceTag::LatS2),
            4 => Some(BoxFaceTag::LatM),
            5 => Some(BoxFaceTag::LatS3),
            6 => Some(BoxFaceTag::LatS4),
            _ => None,
        }
    }
}

/// Enlarge the protein bounding box by per-axis margins.
pub fn build_box_domain(protein_box: &Aabb, margins: (f64, f64, f64)) -> Result<BoxDomain, GeomError> {
    let (e1, e2, e3) = margins;
    if !(e1 > 0.0 && e2 > 0.0 && e3 > 0.0) || !(e1.is_finite() && e2.is_finite() && e3.is_finite()) {
        return Err(GeomError::InvalidMargin);
    }
    BoxDomain::new(
        protein_box.min.x - e1,
        protein_box.max.x + e1,
        protein_box.min.y - e2,
        protein_box.max.y + e2,
        protein_box.min.z - e3,
        protein_box.max.z + e3,
    )
}

/// Fit a uniform subdivision to an extent: the cell count nearest to
/// `length / h` (at least 1) and the adjusted cell size.
pub fn grid_fit(length: f64, h: f64) -> (usize, f64) {
    debug_assert!(length > 0.0 && h > 0.0);
    let n = math::round(length / h).max(1.0) as usize;
    (n, length / n as f64)
}

/// The resolved subdivision of a box surface: shared vertical rows and
/// per-direction horizontal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxGridLayout {
    /// Coarse columns along x (fine columns are `2 * cols_x`).
    pub cols_x: usize,
    /// Coarse columns along y.
    pub cols_y: usize,
    /// Rows between lz1 and z1; the topmost is the transition row.
    pub rows_below: usize,
    /// Fine rows inside the membrane band.
    pub rows_membrane: usize,
    /// Rows between z2 and lz2; the bottom one is the transition row.
    pub rows_above: usize,
    /// Adjusted coarse sizes along x / y and the three vertical band sizes.
    pub h_x: f64,
    pub h_y: f64,
    pub h_below: f64,
    pub h_membrane: f64,
    pub h_above: f64,
}

impl BoxGridLayout {
    /// Expected triangle count of the assembled surface.
    pub fn triangle_count(&self) -> usize {
        let caps = 2 * (2 * self.cols_x * self.cols_y);
        let per_lateral = |cols: usize| {
            2 * cols * (self.rows_below - 1)      // coarse below
                + 3 * cols                        // lower transition
                + 2 * (2 * cols) * self.rows_membrane
                + 3 * cols                        // upper transition
                + 2 * cols * (self.rows_above - 1)
        };
        caps + 2 * per_lateral(self.cols_x) + 2 * per_lateral(self.cols_y)
    }
}

/// Resolve the box-surface subdivision for the given domain, slab, and sizes.
///
/// Fails with [`GeomError::SlabTooClose`] when a slab face leaves no room for
/// at least one full coarse row plus the transition row.
pub fn plan_box_grid(
    domain: &BoxDomain,
    slab: &MembraneSlab,
    sizes: &MeshSizes,
) -> Result<BoxGridLayout, GeomError> {
    if !(domain.lz1 < slab.z1 && slab.z2 < domain.lz2) {
        return Err(GeomError::SlabTooClose);
    }
    let (cols_x, h_x) = grid_fit(domain.extent_x(), sizes.h_s);
    let (cols_y, h_y) = grid_fit(domain.extent_y(), sizes.h_s);
    let (rows_below, h_below) = grid_fit(slab.z1 - domain.lz1, sizes.h_s);
    let (rows_above, h_above) = grid_fit(domain.lz2 - slab.z2, sizes.h_s);
    if rows_below < 2 || rows_above < 2 {
        return Err(GeomError::SlabTooClose);
    }
    let (rows_membrane, h_membrane) = grid_fit(slab.z2 - slab.z1, sizes.h_m);
    Ok(BoxGridLayout {
        cols_x,
        cols_y,
        rows_below,
        rows_membrane,
        rows_above,
        h_x,
        h_y,
        h_below,
        h_membrane,
        h_above,
    })
}

/// Vertex pool keyed by exact coordinate bits so identical lattice points are
/// shared across faces without epsilon matching.
struct VertexPool {
    map: BTreeMap<[u64; 3], u32>,
    vertices: Vec<Point3>,
}

impl VertexPool {
    fn new() -> Self {
        Self { map: BTreeMap::new(), vertices: Vec::new() }
    }

    fn insert(&mut self, p: Point3) -> u32 {
        *self.map.entry(p.bits()).or_insert_with(|| {
            self.vertices.push(p);
            (self.vertices.len() - 1) as u32
        })
    }
}

struct FaceBuilder<'a> {
    pool: &'a mut VertexPool,
    triangles: &'a mut Vec<[u32; 3]>,
    tags: &'a mut Vec<i32>,
    to3d: &'a dyn Fn(f64, f64) -> Point3,
    flip: bool,
}

impl FaceBuilder<'_> {
    fn tri(&mut self, a: (f64, f64), b: (f64, f64), c: (f64, f64), tag: BoxFaceTag) {
        let ia = self.pool.insert((self.to3d)(a.0, a.1));
        let ib = self.pool.insert((self.to3d)(b.0, b.1));
        let ic = self.pool.insert((self.to3d)(c.0, c.1));
        if self.flip {
            self.triangles.push([ia, ic, ib]);
        } else {
            self.triangles.push([ia, ib, ic]);
        }
        self.tags.push(tag as i32);
    }

    /// One uniform strip of cells between v_lo and v_hi.
    fn strip(&mut self, us: &[f64], v_lo: f64, v_hi: f64, tag: BoxFaceTag) {
        for i in 0..us.len() - 1 {
            let (a, b) = (us[i], us[i + 1]);
            self.tri((a, v_lo), (b, v_lo), (b, v_hi), tag);
            self.tri((a, v_lo), (b, v_hi), (a, v_hi), tag);
        }
    }

    /// Transition row: coarse spacing on the `v_lo` edge, fine on `v_hi`.
    fn transition_up(&mut self, coarse: &[f64], fine: &[f64], v_lo: f64, v_hi: f64, tag: BoxFaceTag) {
        for i in 0..coarse.len() - 1 {
            let (b0, b1) = (coarse[i], coarse[i + 1]);
            let (t0, t1, t2) = (fine[2 * i], fine[2 * i + 1], fine[2 * i + 2]);
            self.tri((b0, v_lo), (b1, v_lo), (t1, v_hi), tag);
            self.tri((b0, v_lo), (t1, v_hi), (t0, v_hi), tag);
            self.tri((b1, v_lo), (t2, v_hi), (t1, v_hi), tag);
        }
    }

    /// Transition row: fine spacing on the `v_lo` edge, coarse on `v_hi`.
    fn transition_down(&mut self, fine: &[f64], coarse: &[f64], v_lo: f64, v_hi: f64, tag: BoxFaceTag) {
        for i in 0..coarse.len() - 1 {
            let (t0, t1) = (coarse[i], coarse[i + 1]);
            let (b0, b1, b2) = (fine[2 * i], fine[2 * i + 1], fine[2 * i + 2]);
            self.tri((b0, v_lo), (b1, v_lo), (t0, v_hi), tag);
            self.tri((b1, v_lo), (t1, v_hi), (t0, v_hi), tag);
            self.tri((b1, v_lo), (b2, v_lo), (t1, v_hi), tag);
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| coord(a, b, i, n)).collect()
}

/// Assemble the watertight, outward-oriented, tagged box boundary surface.
pub fn assemble_box_surface(
    domain: &BoxDomain,
    slab: &MembraneSlab,
    sizes: &MeshSizes,
) -> Result<TriSurfaceMesh, GeomError> {
    let layout = plan_box_grid(domain, slab, sizes)?;

    let xs_coarse = linspace(domain.lx1, domain.lx2, layout.cols_x);
    let xs_fine = linspace(domain.lx1, domain.lx2, 2 * layout.cols_x);
    let ys_coarse = linspace(domain.ly1, domain.ly2, layout.cols_y);
    let ys_fine = linspace(domain.ly1, domain.ly2, 2 * layout.cols_y);
    let zs_below = linspace(domain.lz1, slab.z1, layout.rows_below);
    let zs_mem = linspace(slab.z1, slab.z2, layout.rows_membrane);
    let zs_above = linspace(slab.z2, domain.lz2, layout.rows_above);

    let mut pool = VertexPool::new();
    let mut triangles: Vec<[u32; 3]> = Vec::with_capacity(layout.triangle_count());
    let mut tags: Vec<i32> = Vec::with_capacity(layout.triangle_count());

    // Bottom and top caps: uniform coarse grids.
    {
        let z = domain.lz1;
        let to3d = move |u: f64, v: f64| Point3::new(u, v, z);
        let mut fb = FaceBuilder { pool: &mut pool, triangles: &mut triangles, tags: &mut tags, to3d: &to3d, flip: true };
        for j in 0..layout.cols_y {
            fb.strip(&xs_coarse, ys_coarse[j], ys_coarse[j + 1], BoxFaceTag::BottomD);
        }
    }
    {
        let z = domain.lz2;
        let to3d = move |u: f64, v: f64| Point3::new(u, v, z);
        let mut fb = FaceBuilder { pool: &mut pool, triangles: &mut triangles, tags: &mut tags, to3d: &to3d, flip: false };
        for j in 0..layout.cols_y {
            fb.strip(&xs_coarse, ys_coarse[j], ys_coarse[j + 1], BoxFaceTag::TopD);
        }
    }

    // Four lateral faces: (map (u, z) -> 3D, flip, coarse columns, fine columns)
    type LateralFace<'a> = (&'a dyn Fn(f64, f64) -> Point3, bool, &'a [f64], &'a [f64]);
    let lateral_faces: [LateralFace<'_>; 4] = [
        (&|u, v| Point3::new(domain.lx2, u, v), false, &ys_coarse, &ys_fine),
        (&|u, v| Point3::new(domain.lx1, u, v), true, &ys_coarse, &ys_fine),
        (&|u, v| Point3::new(u, domain.ly1, v), false, &xs_coarse, &xs_fine),
        (&|u, v| Point3::new(u, domain.ly2, v), true, &xs_coarse, &xs_fine),
    ];

    for (to3d, flip, coarse, fine) in lateral_faces {
        let mut fb = FaceBuilder { pool: &mut pool, triangles: &mut triangles, tags: &mut tags, to3d, flip };
        for k in 0..layout.rows_below - 1 {
            fb.strip(coarse, zs_below[k], zs_below[k + 1], BoxFaceTag::LatS1);
        }
        fb.transition_up(coarse, fine, zs_below[layout.rows_below - 1], slab.z1, BoxFaceTag::LatS2);
        for k in 0..layout.rows_membrane {
            fb.strip(fine, zs_mem[k], zs_mem[k + 1], BoxFaceTag::LatM);
        }
        fb.transition_down(fine, coarse, slab.z2, zs_above[1], BoxFaceTag::LatS3);
        for k in 1..layout.rows_above {
            fb.strip(coarse, zs_above[k], zs_above[k + 1], BoxFaceTag::LatS4);
        }
    }

    TriSurfaceMesh::new(pool.vertices, triangles)?.with_tags(tags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_from_margins_matches_arithmetic() {
        // a bounding box of [-11,11] x [-10,9] x [-13,13] with margins of 20
        let aabb = Aabb::from_points([Point3::new(-11.0, -10.0, -13.0), Point3::new(11.0, 9.0, 13.0)]).unwrap();
        let d = build_box_domain(&aabb, (20.0, 20.0, 20.0)).unwrap();
        assert_eq!(d, BoxDomain::new(-31.0, 31.0, -30.0, 29.0, -33.0, 33.0).unwrap());
    }

    #[test]
    fn point_box_with_unit_margin() {
        let aabb = Aabb::from_points([Point3::new(0.0, 0.0, 0.0)]).unwrap();
        let d = build_box_domain(&aabb, (1.0, 1.0, 1.0)).unwrap();
        assert_eq!(d, BoxDomain::new(-1.0, 1.0, -1.0, 1.0, -1.0, 1.0).unwrap());
    }

    #[test]
    fn nonpositive_margin_rejected() {
        let aabb = Aabb::from_points([Point3::new(0.0, 0.0, 0.0)]).unwrap();
        assert_eq!(build_box_domain(&aabb, (0.0, 1.0, 1.0)), Err(GeomError::InvalidMargin));
    }

    #[test]
    fn grid_fit_examples() {
        assert_eq!(grid_fit(10.0, 1.0), (10, 1.0));
        let (n, h) = grid_fit(10.0, 3.0);
        assert_eq!(n, 3);
        assert!((h - 10.0 / 3.0).abs() < 1e-15);
        let (n, h) = grid_fit(62.0, 1.1);
        assert_eq!(n, 56);
        assert!((h - 62.0 / 56.0).abs() < 1e-15);
        assert!((h - 1.1071428571428572).abs() < 1e-12);
    }

    #[test]
    fn slab_too_close_when_no_coarse_row_fits() {
        let d = BoxDomain::new(0.0, 4.0, 0.0, 4.0, 0.0, 4.0).unwrap();
        let slab = MembraneSlab::new(1.0, 3.0).unwrap();
        let sizes = MeshSizes::new(1.0).unwrap(); // h_s = 2
        assert_eq!(plan_box_grid(&d, &slab, &sizes), Err(GeomError::SlabTooClose));
    }

    #[test]
    fn counting_example_8x8x12() {
        let d = BoxDomain::new(0.0, 8.0, 0.0, 8.0, 0.0, 12.0).unwrap();
        let slab = MembraneSlab::new(5.0, 7.0).unwrap();
        let sizes = MeshSizes::new(1.0).unwrap();
        let layout = plan_box_grid(&d, &slab, &sizes).unwrap();
        assert_eq!((layout.cols_x, layout.cols_y), (4, 4));
        assert_eq!(layout.rows_below, 3);
        assert_eq!(layout.rows_membrane, 2);
        assert_eq!(layout.rows_above, 3);

        let mesh = assemble_box_surface(&d, &slab, &sizes).unwrap();
        // bottom cap: 2 * 4 * 4 = 32 triangles
        let bottom = mesh.tags().unwrap().iter().filter(|&&t| t == BoxFaceTag::BottomD as i32).count();
        assert_eq!(bottom, 32);
        // membrane band per lateral face: 2 * 8 * 2 = 32 triangles
        let lat_m = mesh.tags().unwrap().iter().filter(|&&t| t == BoxFaceTag::LatM as i32).count();
        assert_eq!(lat_m, 4 * 32);
        assert_eq!(mesh.triangles().len(), layout.triangle_count());
        assert!(mesh.is_watertight());
        assert_eq!(mesh.euler_characteristic(), 2);
    }

    #[test]
    fn assembled_surface_properties() {
        let d = BoxDomain::new(-31.0, 31.0, -30.0, 29.0, -33.0, 33.0).unwrap();
        let slab = MembraneSlab::new(-11.0, 11.0).unwrap();
        let sizes = MeshSizes::new(1.1).unwrap();
        let mesh = assemble_box_surface(&d, &slab, &sizes).unwrap();

        assert!(mesh.is_watertight());
        assert_eq!(mesh.euler_characteristic(), 2);
        let area = mesh.total_area();
        assert!((area - d.surface_area()).abs() <= 1e-9 * d.surface_area());

        // membrane-band triangles stay exactly within the slab
        let tags = mesh.tags().unwrap();
        for (t, tri) in mesh.triangles().iter().enumerate() {
            if tags[t] == BoxFaceTag::LatM as i32 {
                for &v in tri {
                    let z = mesh.vertices()[v as usize].z;
                    assert!(z >= slab.z1 && z <= slab.z2);
                }
            }
        }

        // outward orientation
        let vol = crate::surface::enclosed_volume(&mesh).unwrap();
        assert!((vol - d.volume()).abs() <= 1e-9 * d.volume());

        // template quality: minimum angle above 15 degrees for realistic sizes
        for t in 0..mesh.triangles().len() {
            assert!(min_angle_deg(&mesh, t) > 15.0, "triangle {t} below 15 degrees");
        }
    }

    /// Smallest interior angle (degrees); it is opposite the shortest side.
    fn min_angle_deg(mesh: &TriSurfaceMesh, t: usize) -> f64 {
        let [a, b, c] = mesh.triangle_points(t);
        let mut sides = [(b - c).norm(), (a - c).norm(), (a - b).norm()];
        sides.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let [s, p, q] = sides;
        let cosv = ((p * p + q * q - s * s) / (2.0 * p * q)).clamp(-1.0, 1.0);
        let angle = crate::math::atan2(crate::math::sqrt((1.0 - cosv * cosv).max(0.0)), cosv);
        angle.to_degrees()
    }

    #[test]
    fn template_min_angle_holds_for_random_realistic_draws() {
        let mut rng = crate::math::SplitMix64::new(0xB0C5);
        for _ in 0..25 {
            let lx = rng.range(30.0, 120.0);
            let ly = rng.range(30.0, 120.0);
            let lz = rng.range(50.0, 150.0);
            let h_m = rng.range(0.8, 2.5);
            let z1 = rng.range(-lz / 2.0 + 3.0 * 2.0 * h_m + 0.5, -2.0);
            let z2 = rng.range(2.0, lz / 2.0 - 3.0 * 2.0 * h_m - 0.5);
            let d = BoxDomain::new(-lx / 2.0, lx / 2.0, -ly / 2.0, ly / 2.0, -lz / 2.0, lz / 2.0).unwrap();
            let slab = MembraneSlab::new(z1, z2).unwrap();
            let sizes = MeshSizes::new(h_m).unwrap();
            let mesh = assemble_box_surface(&d, &slab, &sizes).unwrap();
            for t in 0..mesh.triangles().len() {
                assert!(min_angle_deg(&mesh, t) > 15.0);
            }
        }
    }
}
