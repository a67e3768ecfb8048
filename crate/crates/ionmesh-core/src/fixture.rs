//! Volumetric test fixtures: structured two-region tetrahedral meshes of a box
//! around a synthetic solid, standing in for an external tetrahedralizer so
//! the extraction pipeline can be exercised end to end.
//!
//! Two meshers are provided. [`voxel_box_mesh`] splits a uniform grid into six
//! tets per cell (Kuhn split) and labels each tet by an analytic predicate at
//! its centroid; it is simple and robust but approximates curved interfaces by
//! staircases. [`extruded_solid_mesh`] builds a radially structured mesh that
//! conforms exactly to a tube or hourglass polyhedron and to the membrane
//! planes, so extracted region volumes match the analytic prism formulas.

use alloc::vec;
use alloc::vec::Vec;

use crate::boxsurf::{grid_fit, BoxDomain, MembraneSlab};
use crate::error::GeomError;
use crate::geom::{coord, Point3};
use crate::math;
use crate::synth::{SynthKind, SynthSpec};
use crate::tet::{RegionLabel, TetMesh};

/// Split a prism (bottom a0 a1 a2, top b0 b1 b2 with bi above ai) into three
/// tets whose quad-face diagonals pass through each quad's smallest global
/// vertex index, which makes the split compatible between face-adjacent
/// prisms.
pub fn prism_tets(p: [u32; 6]) -> [[u32; 4]; 3] {
    let mut q = p;
    let min_pos = (0..6).min_by_key(|&i| q[i]).unwrap();
    if min_pos >= 3 {
        // put the global minimum on the bottom triangle
        q = [q[3], q[5], q[4], q[0], q[2], q[1]];
    }
    let r = (0..3).min_by_key(|&i| q[i]).unwrap();
    q = [
        q[r],
        q[(r + 1) % 3],
        q[(r + 2) % 3],
        q[3 + r],
        q[3 + (r + 1) % 3],
        q[3 + (r + 2) % 3],
    ];
    if q[1].min(q[5]) < q[2].min(q[4]) {
        [[q[0], q[1], q[2], q[5]], [q[0], q[1], q[5], q[4]], [q[0], q[4], q[5], q[3]]]
    } else {
        [[q[0], q[1], q[2], q[4]], [q[0], q[4], q[2], q[5]], [q[0], q[4], q[5], q[3]]]
    }
}

/// Uniform box mesh at cell size ~h (six tets per cell), labeled by the
/// predicate evaluated at each tet centroid.
pub fn voxel_box_mesh(
    domain: &BoxDomain,
    h: f64,
    label_at: impl Fn(Point3) -> RegionLabel,
) -> Result<TetMesh, GeomError> {
    voxel_box_mesh_with_z_breaks(domain, h, &[], label_at)
}

/// Like [`voxel_box_mesh`] but with grid planes placed exactly at the given
/// interior z-breaks, so no tet straddles them (e.g. the membrane planes).
pub fn voxel_box_mesh_with_z_breaks(
    domain: &BoxDomain,
    h: f64,
    z_breaks: &[f64],
    label_at: impl Fn(Point3) -> RegionLabel,
) -> Result<TetMesh, GeomError> {
    let (nx, _) = grid_fit(domain.extent_x(), h);
    let (ny, _) = grid_fit(domain.extent_y(), h);

    let xs: Vec<f64> = (0..=nx).map(|i| coord(domain.lx1, domain.lx2, i, nx)).collect();
    let ys: Vec<f64> = (0..=ny).map(|j| coord(domain.ly1, domain.ly2, j, ny)).collect();

    let mut stops: Vec<f64> = vec![domain.lz1];
    for &z in z_breaks {
        if !(z > domain.lz1 && z < domain.lz2) {
            return Err(GeomError::InvalidDomain("z-break outside the box"));
        }
        stops.push(z);
    }
    stops.push(domain.lz2);
    stops.sort_by(|a, b| a.partial_cmp(b).unwrap());
    stops.dedup();
    let mut zs: Vec<f64> = vec![domain.lz1];
    for s in 0..stops.len() - 1 {
        let (cnt, _) = grid_fit(stops[s + 1] - stops[s], h);
        for i in 1..=cnt {
            zs.push(coord(stops[s], stops[s + 1], i, cnt));
        }
    }
    let nz = zs.len() - 1;

    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for z in &zs {
        for y in &ys {
            for x in &xs {
                vertices.push(Point3::new(*x, *y, *z));
            }
        }
    }
    let vid = |i: usize, j: usize, k: usize| (k * (ny + 1) * (nx + 1) + j * (nx + 1) + i) as u32;

    // Kuhn split: the six tets follow the six monotone vertex paths from
    // (0,0,0) to (1,1,1); shared cube faces get the same diagonal in every
    // cell.
    const PATHS: [[(usize, usize, usize); 2]; 6] = [
        [(1, 0, 0), (1, 1, 0)],
        [(1, 0, 0), (1, 0, 1)],
        [(0, 1, 0), (1, 1, 0)],
        [(0, 1, 0), (0, 1, 1)],
        [(0, 0, 1), (1, 0, 1)],
        [(0, 0, 1), (0, 1, 1)],
    ];

    let mut tets = Vec::with_capacity(nx * ny * nz * 6);
    let mut labels = Vec::with_capacity(nx * ny * nz * 6);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let corner = |d: (usize, usize, usize)| vid(i + d.0, j + d.1, k + d.2);
                let a = corner((0, 0, 0));
                let d = corner((1, 1, 1));
                for path in PATHS {
                    let t = [a, corner(path[0]), corner(path[1]), d];
                    let centroid = {
                        let mut c = [0.0; 3];
                        for &v in &t {
                            let p = vertices[v as usize];
                            c[0] += p.x;
                            c[1] += p.y;
                            c[2] += p.z;
                        }
                        Point3::new(c[0] * 0.25, c[1] * 0.25, c[2] * 0.25)
                    };
                    tets.push(t);
                    labels.push(label_at(centroid));
                }
            }
        }
    }
    TetMesh::new(vertices, tets, labels)
}

/// Even-odd test against the regular n-gon of radius `r` centered at
/// (cx, cy), with the first vertex at angle 0 (matching the generators).
pub fn ngon_contains(cx: f64, cy: f64, r: f64, n: u32, x: f64, y: f64) -> bool {
    let vertex = |k: u32| {
        let t = 2.0 * core::f64::consts::PI * ((k % n) as f64) / (n as f64);
        [cx + r * math::cos(t), cy + r * math::sin(t)]
    };
    let mut inside = false;
    for k in 0..n {
        let a = vertex(k);
        let b = vertex(k + 1);
        if (a[1] > y) != (b[1] > y) && x < a[0] + (y - a[1]) / (b[1] - a[1]) * (b[0] - a[0]) {
            inside = !inside;
        }
    }
    inside
}

/// Analytic region label of a point with respect to a synthetic solid: inside
/// the polyhedral annulus walls is protein, everything else solvent.
pub fn annulus_prism_label(spec: &SynthSpec, p: Point3) -> RegionLabel {
    if p.z < spec.z_min || p.z > spec.z_max {
        return RegionLabel::Solvent;
    }
    let centers: &[[f64; 2]] = match spec.kind {
        SynthKind::TwoPore { ref centers } => centers,
        _ => &[[0.0, 0.0]],
    };
    let r_in = spec.inner_radius(p.z);
    for c in centers {
        if ngon_contains(c[0], c[1], spec.r_outer, spec.n_theta, p.x, p.y)
            && !ngon_contains(c[0], c[1], r_in, spec.n_theta, p.x, p.y)
        {
            return RegionLabel::Protein;
        }
    }
    RegionLabel::Solvent
}

#[derive(Clone, Copy, PartialEq)]
enum CellRegion {
    Pore,
    Protein,
    Outer,
}

/// Radially structured conforming mesh of the box around a tube or hourglass.
///
/// Layers conform to the solid's z-extent and to the membrane planes, the ring
/// structure conforms to the inner and outer polygon walls, and the outermost
/// ring lies exactly on the box walls, so the protein label region is the
/// generated polyhedron itself and extracted volumes are exact.
pub fn extruded_solid_mesh(
    spec: &SynthSpec,
    domain: &BoxDomain,
    slab: &MembraneSlab,
    h: f64,
) -> Result<TetMesh, GeomError> {
    spec.validate()?;
    if matches!(spec.kind, SynthKind::TwoPore { .. }) {
        return Err(GeomError::InvalidSpec("extruded mesher supports tube and hourglass only"));
    }
    if !(domain.lz1 < spec.z_min && spec.z_max < domain.lz2) {
        return Err(GeomError::InvalidSpec("solid z-extent must lie strictly inside the box"));
    }
    if !(spec.z_min < slab.z1 && slab.z2 < spec.z_max) {
        return Err(GeomError::InvalidSpec("membrane slab must lie strictly inside the solid z-extent"));
    }
    if !(domain.lx1 < -spec.r_outer
        && domain.lx2 > spec.r_outer
        && domain.ly1 < -spec.r_outer
        && domain.ly2 > spec.r_outer)
    {
        return Err(GeomError::InvalidSpec("solid footprint must lie strictly inside the box"));
    }
    let n = spec.n_theta as usize;
    let mouth = spec.inner_radius(spec.z_min).max(spec.inner_radius(spec.z_max));

    // radial stations: pore rings, wall rings, outer rings
    let m_in = grid_fit(spec.r_inner, h).0.max(1);
    let m_ann = grid_fit(spec.r_outer - mouth, h).0.max(1);
    let wall_gap = (-spec.r_outer - domain.lx1)
        .min(domain.lx2 - spec.r_outer)
        .min(-spec.r_outer - domain.ly1)
        .min(domain.ly2 - spec.r_outer);
    let m_out = grid_fit(wall_gap, h).0.max(2);
    let rings = m_in + m_ann + m_out;

    // z layers between the ordered breakpoints, conforming at each break
    let breaks = [domain.lz1, spec.z_min, slab.z1, slab.z2, spec.z_max, domain.lz2];
    let mut z_layers: Vec<f64> = vec![domain.lz1];
    let mut span_of_interval: Vec<usize> = Vec::new();
    for s in 0..breaks.len() - 1 {
        let (cnt, _) = grid_fit(breaks[s + 1] - breaks[s], h);
        for i in 1..=cnt {
            z_layers.push(coord(breaks[s], breaks[s + 1], i, cnt));
            span_of_interval.push(s);
        }
    }

    // wall-projected points and the box corners, in angular order
    let theta = |k: usize| 2.0 * core::f64::consts::PI * (k as f64) / (n as f64);
    let eps = 1e-9
        * math::sqrt(
            domain.extent_x() * domain.extent_x()
                + domain.extent_y() * domain.extent_y()
                + domain.extent_z() * domain.extent_z(),
        );
    let mut wall_pts: Vec<[f64; 2]> = Vec::with_capacity(n);
    for k in 0..n {
        let (c, s) = (math::cos(theta(k)), math::sin(theta(k)));
        let mut t = f64::INFINITY;
        if c > 0.0 {
            t = t.min(domain.lx2 / c);
        }
        if c < 0.0 {
            t = t.min(domain.lx1 / c);
        }
        if s > 0.0 {
            t = t.min(domain.ly2 / s);
        }
        if s < 0.0 {
            t = t.min(domain.ly1 / s);
        }
        let mut p = [t * c, t * s];
        for corner in [
            [domain.lx1, domain.ly1],
            [domain.lx2, domain.ly1],
            [domain.lx2, domain.ly2],
            [domain.lx1, domain.ly2],
        ] {
            let d0 = p[0] - corner[0];
            let d1 = p[1] - corner[1];
            if d0 * d0 + d1 * d1 <= eps * eps {
                p = corner;
            }
        }
        wall_pts.push(p);
    }
    let corners = [
        [domain.lx2, domain.ly2],
        [domain.lx1, domain.ly2],
        [domain.lx1, domain.ly1],
        [domain.lx2, domain.ly1],
    ];

    // per-layer vertex table: center, rings, corners
    let stride = 1 + rings * n + 4;
    let n_layers = z_layers.len();
    let mut vertices: Vec<Point3> = Vec::with_capacity(stride * n_layers);
    for &z in &z_layers {
        let r_in = spec.inner_radius(z);
        vertices.push(Point3::new(0.0, 0.0, z));
        for ring in 1..=rings {
            for (k, wall) in wall_pts.iter().enumerate() {
                let (c, s) = (math::cos(theta(k)), math::sin(theta(k)));
                let p = if ring <= m_in {
                    let r = r_in * (ring as f64) / (m_in as f64);
                    [r * c, r * s]
                } else if ring <= m_in + m_ann {
                    let f = ((ring - m_in) as f64) / (m_ann as f64);
                    let r = r_in + (spec.r_outer - r_in) * f;
                    [r * c, r * s]
                } else if ring == rings {
                    *wall
                } else {
                    let f = ((ring - m_in - m_ann) as f64) / (m_out as f64);
                    let base = [spec.r_outer * c, spec.r_outer * s];
                    [base[0] + (wall[0] - base[0]) * f, base[1] + (wall[1] - base[1]) * f]
                };
                vertices.push(Point3::new(p[0], p[1], z));
            }
        }
        for cpt in corners {
            vertices.push(Point3::new(cpt[0], cpt[1], z));
        }
    }

    // 2D cells as local-id triangles with a region tag
    let ring_id = |ring: usize, k: usize| 1 + (ring - 1) * n + (k % n);
    let corner_id = |c: usize| 1 + rings * n + c;
    let mut cells: Vec<([usize; 3], CellRegion)> = Vec::new();
    for k in 0..n {
        cells.push(([0, ring_id(1, k), ring_id(1, k + 1)], CellRegion::Pore));
    }
    for ring in 1..rings {
        let region = if ring < m_in {
            CellRegion::Pore
        } else if ring < m_in + m_ann {
            CellRegion::Protein
        } else {
            CellRegion::Outer
        };
        for k in 0..n {
            let (a, b) = (ring_id(ring, k), ring_id(ring, k + 1));
            let (c, d) = (ring_id(ring + 1, k + 1), ring_id(ring + 1, k));
            cells.push(([a, b, c], region));
            cells.push(([a, c, d], region));
        }
    }
    // corner caps between consecutive wall-projected points
    let angle_of = |p: [f64; 2]| math::atan2(p[1], p[0]);
    for k in 0..n {
        let a = ring_id(rings, k);
        let b = ring_id(rings, k + 1);
        let (ta, tb) = (theta(k), theta((k + 1) % n));
        let tb = if k + 1 == n { tb + 2.0 * core::f64::consts::PI } else { tb };
        let mut gap_corners: Vec<usize> = (0..4)
            .filter(|&c| {
                let mut ang = angle_of(corners[c]);
                if ang < ta - 1e-12 {
                    ang += 2.0 * core::f64::consts::PI;
                }
                ang > ta + 1e-12 && ang < tb - 1e-12
            })
            .collect();
        gap_corners.sort_by(|&p, &q| {
            let norm = |c: usize| {
                let mut ang = angle_of(corners[c]);
                if ang < ta {
                    ang += 2.0 * core::f64::consts::PI;
                }
                ang
            };
            norm(p).partial_cmp(&norm(q)).unwrap()
        });
        let mut chain: Vec<usize> = vec![a];
        chain.extend(gap_corners.iter().map(|&c| corner_id(c)));
        chain.push(b);
        for w in 1..chain.len() - 1 {
            cells.push(([chain[0], chain[w], chain[w + 1]], CellRegion::Outer));
        }
    }

    // drop degenerate 2D cells (e.g. a wall point snapped onto a corner)
    let area2 = |t: &[usize; 3]| {
        let p = |i: usize| vertices[i]; // layer 0 coordinates
        let (a, b, c) = (p(t[0]), p(t[1]), p(t[2]));
        ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)).abs()
    };
    cells.retain(|(t, _)| area2(t) > eps * eps.max(1e-300));

    // extrude: one prism (3 tets) per cell per layer interval
    let mut tets: Vec<[u32; 4]> = Vec::with_capacity(cells.len() * (n_layers - 1) * 3);
    let mut labels: Vec<RegionLabel> = Vec::with_capacity(tets.capacity());
    for (interval, span) in span_of_interval.iter().enumerate() {
        let solid_span = (1..=3).contains(span);
        let lo = (interval * stride) as u32;
        let hi = ((interval + 1) * stride) as u32;
        for (cell, region) in &cells {
            let p = [
                lo + cell[0] as u32,
                lo + cell[1] as u32,
                lo + cell[2] as u32,
                hi + cell[0] as u32,
                hi + cell[1] as u32,
                hi + cell[2] as u32,
            ];
            let label = if solid_span && *region == CellRegion::Protein {
                RegionLabel::Protein
            } else {
                RegionLabel::Solvent
            };
            for t in prism_tets(p) {
                tets.push(t);
                labels.push(label);
            }
        }
    }
    TetMesh::new(vertices, tets, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::enclosed_volume;
    use crate::tet::boundary_surface;

    #[test]
    fn voxel_mesh_fills_the_box() {
        let domain = BoxDomain::new(0.0, 3.0, 0.0, 2.0, 0.0, 2.0).unwrap();
        let mesh = voxel_box_mesh(&domain, 1.0, |_| RegionLabel::Solvent).unwrap();
        assert_eq!(mesh.tets().len(), 3 * 2 * 2 * 6);
        let surf = boundary_surface(&mesh, |_| true).unwrap();
        assert!(surf.is_watertight());
        assert!((enclosed_volume(&surf).unwrap() - domain.volume()).abs() < 1e-9);
        let total: f64 = (0..mesh.tets().len()).map(|t| mesh.tet_volume(t)).sum();
        assert!((total - domain.volume()).abs() < 1e-9);
    }

    #[test]
    fn prism_split_is_face_compatible() {
        // a 3-prism strip around a triangle fan: every interior quad face
        // must be matched, which boundary watertightness certifies
        let domain = BoxDomain::new(-10.0, 10.0, -10.0, 10.0, -10.0, 10.0).unwrap();
        let slab = MembraneSlab::new(-3.0, 3.0).unwrap();
        let spec = SynthSpec::tube(1.5, 4.0, -6.0, 6.0, 16, 1);
        let mesh = extruded_solid_mesh(&spec, &domain, &slab, 2.0).unwrap();
        let surf = boundary_surface(&mesh, |_| true).unwrap();
        assert!(surf.is_watertight());
        assert!((enclosed_volume(&surf).unwrap() - domain.volume()).abs() < 1e-6);
    }

    #[test]
    fn extruded_mesh_conforms_to_the_tube() {
        let domain = BoxDomain::new(-11.0, 11.0, -11.0, 11.0, -21.0, 21.0).unwrap();
        let slab = MembraneSlab::new(-12.0, 12.0).unwrap();
        let spec = SynthSpec::tube(2.0, 5.0, -15.0, 15.0, 64, 1);
        let mesh = extruded_solid_mesh(&spec, &domain, &slab, 1.0).unwrap();

        let total: f64 = (0..mesh.tets().len()).map(|t| mesh.tet_volume(t)).sum();
        assert!((total - domain.volume()).abs() < 1e-6 * domain.volume());

        // the protein label region is exactly the polyhedral annulus
        let protein = mesh.label_volume(RegionLabel::Protein);
        let expected = spec.prism_volume().unwrap();
        assert!(
            (protein - expected).abs() < 1e-9 * expected,
            "protein volume {protein} vs analytic {expected}"
        );
    }

    #[test]
    fn voxel_labels_follow_the_predicate() {
        let spec = SynthSpec::tube(2.0, 5.0, -6.0, 6.0, 32, 1);
        let domain = BoxDomain::new(-9.0, 9.0, -9.0, 9.0, -9.0, 9.0).unwrap();
        let mesh = voxel_box_mesh(&domain, 1.5, |p| annulus_prism_label(&spec, p)).unwrap();
        let protein = mesh.count_label(RegionLabel::Protein);
        assert!(protein > 0);
        assert!(protein < mesh.tets().len());
        // pore column stays solvent
        for t in 0..mesh.tets().len() {
            let c = mesh.centroid(t);
            if c.x.abs() < 0.5 && c.y.abs() < 0.5 && c.z.abs() < 5.0 {
                assert_eq!(mesh.labels()[t], RegionLabel::Solvent);
            }
        }
    }
}
