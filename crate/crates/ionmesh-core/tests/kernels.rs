//! Cross-checks of the geometric kernels against independent oracles.

use ionmesh_core::geom::{Point3, Vec3};
use ionmesh_core::inside::{winding_number_inclusion, InclusionTester};
use ionmesh_core::math::SplitMix64;
use ionmesh_core::ray::ray_triangle_intersect;
use ionmesh_core::surface::{enclosed_volume, surface_connected_components, TriSurfaceMesh};
use ionmesh_core::synth::{make_hourglass, make_tube, make_two_pore, SynthSpec};
use ionmesh_core::tet::boundary_surface;
use ionmesh_core::{extract, fixture, BoxDomain, GeomError, MembraneSlab};

use proptest::prelude::*;

#[test]
fn parity_matches_winding_on_ten_thousand_tube_points() {
    let spec = SynthSpec::tube(2.0, 5.0, -15.0, 15.0, 32, 4);
    let tube = make_tube(&spec).unwrap();
    let tester = InclusionTester::new(&tube).unwrap();
    let mut rng = SplitMix64::new(0x10E5EED);
    let mut checked = 0usize;
    while checked < 10_000 {
        let p = Point3::new(rng.range(-7.0, 7.0), rng.range(-7.0, 7.0), rng.range(-17.0, 17.0));
        let parity = tester.contains(p).expect("parity query");
        match winding_number_inclusion(p, &tube) {
            Ok(winding) => {
                assert_eq!(parity, winding, "disagreement at {p:?}");
                checked += 1;
            }
            // a random point can land on the surface; not a disagreement
            Err(GeomError::OnBoundary) => {}
            Err(e) => panic!("winding failed: {e}"),
        }
    }
}

#[test]
fn tube_volume_equals_prism_formula() {
    let spec = SynthSpec::tube(2.0, 5.0, -15.0, 15.0, 64, 1);
    let tube = make_tube(&spec).unwrap();
    let analytic = spec.prism_volume().unwrap();
    let measured = enclosed_volume(&tube).unwrap();
    assert!((measured - analytic).abs() <= 1e-9 * analytic);
}

/// Independent union-find, used only to verify the component splitter.
struct Dsu(Vec<u32>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n as u32).collect())
    }
    fn find(&mut self, x: u32) -> u32 {
        if self.0[x as usize] != x {
            let root = self.find(self.0[x as usize]);
            self.0[x as usize] = root;
        }
        self.0[x as usize]
    }
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra as usize] = rb;
        }
    }
}

fn component_count_by_union_find(mesh: &TriSurfaceMesh) -> usize {
    let mut edge_owner: std::collections::HashMap<(u32, u32), u32> = std::collections::HashMap::new();
    let mut dsu = Dsu::new(mesh.triangles().len());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        for (a, b) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])] {
            let key = (a.min(b), a.max(b));
            match edge_owner.entry(key) {
                std::collections::hash_map::Entry::Occupied(o) => dsu.union(*o.get(), t as u32),
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(t as u32);
                }
            }
        }
    }
    let mut roots: Vec<u32> = (0..mesh.triangles().len() as u32).map(|t| dsu.find(t)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

#[test]
fn component_split_matches_union_find_oracle() {
    let two = make_two_pore(&SynthSpec::two_pore(
        2.0,
        4.0,
        -10.0,
        10.0,
        16,
        3,
        [[-6.5, 0.0], [6.5, 0.0]],
    ))
    .unwrap();
    assert_eq!(component_count_by_union_find(&two), 2);
    assert_eq!(surface_connected_components(&two).len(), 2);

    let tube = make_tube(&SynthSpec::tube(2.0, 5.0, -15.0, 15.0, 24, 2)).unwrap();
    assert_eq!(component_count_by_union_find(&tube), 1);
    assert_eq!(surface_connected_components(&tube).len(), 1);
}

#[test]
fn band_boundary_split_matches_union_find_on_two_pore() {
    // the band boundary of a two-pore fixture has three components
    let spec = SynthSpec::two_pore(2.4, 6.2, -14.0, 14.0, 16, 1, [[-6.5, 0.0], [6.5, 0.0]]);
    let domain = BoxDomain::new(-16.0, 16.0, -13.0, 13.0, -20.0, 20.0).unwrap();
    let slab = MembraneSlab::new(-11.0, 11.0).unwrap();
    let mesh = fixture::voxel_box_mesh_with_z_breaks(&domain, 1.0, &[slab.z1, slab.z2], |p| {
        fixture::annulus_prism_label(&spec, p)
    })
    .unwrap();
    let surface = make_two_pore(&spec).unwrap();
    let rect = extract::interception_rectangle(&surface, &slab, 1.0).unwrap();
    let part = extract::band_partition(&mesh, &domain, &rect, &slab);
    let in_dms: std::collections::HashSet<u32> = part.dms.iter().copied().collect();
    let band_boundary = boundary_surface(&mesh, |t| in_dms.contains(&(t as u32))).unwrap();
    assert_eq!(component_count_by_union_find(&band_boundary), 3);
    assert_eq!(surface_connected_components(&band_boundary).len(), 3);
}

#[test]
fn boundary_surface_volume_equals_tet_volume_sum() {
    let spec = SynthSpec::tube(2.0, 5.0, -8.0, 8.0, 16, 2);
    let domain = BoxDomain::new(-9.0, 9.0, -9.0, 9.0, -12.0, 12.0).unwrap();
    let slab = MembraneSlab::new(-5.0, 5.0).unwrap();
    let mesh = fixture::extruded_solid_mesh(&spec, &domain, &slab, 1.5).unwrap();
    let mut rng = SplitMix64::new(99);
    for _ in 0..5 {
        // a random centroid-sphere subset
        let cx = rng.range(-5.0, 5.0);
        let cy = rng.range(-5.0, 5.0);
        let cz = rng.range(-6.0, 6.0);
        let r = rng.range(3.0, 8.0);
        let select = |t: usize| {
            let c = mesh.centroid(t);
            let d = c - Point3::new(cx, cy, cz);
            d.norm_squared() < r * r
        };
        if (0..mesh.tets().len()).all(|t| !select(t)) {
            continue;
        }
        let surf = boundary_surface(&mesh, select).unwrap();
        assert!(surf.is_closed());
        let expected: f64 =
            (0..mesh.tets().len()).filter(|&t| select(t)).map(|t| mesh.tet_volume(t)).sum();
        let vol = enclosed_volume(&surf).unwrap();
        assert!((vol - expected).abs() <= 1e-9 * expected.max(1.0));
    }
}

#[test]
fn hourglass_loop_census_at_every_height() {
    let spec = SynthSpec::hourglass(2.0, 5.0, -11.0, 11.0, 32, 8, 0.9);
    let mesh = make_hourglass(&spec).unwrap();
    for i in 1..10 {
        let z = -11.0 + 22.0 * (i as f64) / 10.0;
        let set = ionmesh_core::cross_section_loops(&mesh, z).unwrap();
        assert_eq!(set.loops.len(), 2, "at z = {z}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ray_hit_t_is_invariant_under_vertex_rotation(
        ax in -3.0..3.0f64, ay in -3.0..3.0f64, az in -3.0..3.0f64,
        bx in -3.0..3.0f64, by in -3.0..3.0f64, bz in -3.0..3.0f64,
        cx in -3.0..3.0f64, cy in -3.0..3.0f64, cz in -3.0..3.0f64,
        ox in -3.0..3.0f64, oy in -3.0..3.0f64, oz in 4.0..6.0f64,
        dx in -0.3..0.3f64, dy in -0.3..0.3f64,
    ) {
        let tri = [Point3::new(ax, ay, az), Point3::new(bx, by, bz), Point3::new(cx, cy, cz)];
        let origin = Point3::new(ox, oy, oz);
        let dir = Vec3::new(dx, dy, -1.0);
        let casts = [
            ray_triangle_intersect(origin, dir, [tri[0], tri[1], tri[2]]),
            ray_triangle_intersect(origin, dir, [tri[1], tri[2], tri[0]]),
            ray_triangle_intersect(origin, dir, [tri[2], tri[0], tri[1]]),
        ];
        let casts: Vec<_> = casts.into_iter().map(|c| c.unwrap()).collect();
        // skip degenerate configurations; the retry machinery owns those
        if casts.iter().any(|c| c.degenerate) {
            return Ok(());
        }
        let hits: Vec<_> = casts.iter().map(|c| c.hit).collect();
        match hits[0] {
            None => {
                prop_assert!(hits[1].is_none() && hits[2].is_none());
            }
            Some(h0) => {
                for h in &hits[1..] {
                    let h = h.expect("rotation must preserve the hit");
                    let scale = h0.t.abs().max(1.0);
                    prop_assert!((h.t - h0.t).abs() <= 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn parity_equals_winding_on_random_hourglasses(
        seed in 0u64..1000,
        slope in 0.0..0.9f64,
        r_inner in 1.0..3.0f64,
    ) {
        let spec = SynthSpec::hourglass(r_inner, 6.0, -9.0, 9.0, 16, 3, slope);
        let mesh = make_hourglass(&spec).unwrap();
        let tester = InclusionTester::new(&mesh).unwrap();
        let mut rng = SplitMix64::new(seed);
        for _ in 0..40 {
            let p = Point3::new(rng.range(-7.0, 7.0), rng.range(-7.0, 7.0), rng.range(-10.0, 10.0));
            let parity = tester.contains(p).unwrap();
            match winding_number_inclusion(p, &mesh) {
                Ok(w) => prop_assert_eq!(parity, w),
                Err(GeomError::OnBoundary) => {}
                Err(e) => return Err(TestCaseError::fail(format!("winding failed: {e}"))),
            }
        }
    }
}
