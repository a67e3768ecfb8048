//! Assembly of the tetrahedralizer input: protein surface + box boundary
//! facets, membrane constraint points as isolated vertices, and one verified
//! region seed per subdomain.

use ionmesh_core::geom::triangle_area;
use ionmesh_core::{
    surface_connected_components, BoxDomain, InclusionTester, MembranePointSet, Point3,
    TriSurfaceMesh,
};

use crate::error::{Error, Result};
use crate::io::tetgen::{PlcDocument, RegionSeed, MARKER_BOX, MARKER_PROTEIN};

const SEED_RETRIES: usize = 8;

/// One seed strictly inside every connected component of the protein
/// surface. A disjoint protein (e.g. a two-pore test solid) needs each
/// component seeded, or the tetrahedralizer invents fresh region attributes
/// for the unseeded ones.
pub fn protein_seeds(protein: &TriSurfaceMesh) -> Result<Vec<Point3>> {
    surface_connected_components(protein).iter().map(protein_seed).collect()
}

/// Place a point strictly inside the protein: the centroid of its
/// largest-area triangle nudged along the inward normal, verified by a
/// containment test, doubling the offset (and trying both normal directions,
/// in case the input orientation is inverted) until it lands inside.
pub fn protein_seed(protein: &TriSurfaceMesh) -> Result<Point3> {
    let tester = InclusionTester::new(protein).map_err(Error::Geom)?;
    let largest = (0..protein.triangles().len())
        .max_by(|&a, &b| {
            let [p, q, r] = protein.triangle_points(a);
            let [s, t, u] = protein.triangle_points(b);
            triangle_area(p, q, r).partial_cmp(&triangle_area(s, t, u)).expect("finite areas")
        })
        .expect("non-empty surface");
    let [a, b, c] = protein.triangle_points(largest);
    let centroid = Point3::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0, (a.z + b.z + c.z) / 3.0);
    let normal = ionmesh_core::geom::triangle_normal(a, b, c);
    let unit = normal.scale(1.0 / normal.norm());

    let mut offset = 2.0 * protein.eps_geom();
    for _ in 0..SEED_RETRIES {
        for dir in [-1.0, 1.0] {
            let p = centroid + unit.scale(dir * offset);
            if let Ok(true) = tester.contains(p) {
                return Ok(p);
            }
        }
        offset *= 2.0;
    }
    Err(Error::SeedPlacement(
        "could not place a point inside the protein surface near its largest triangle".into(),
    ))
}

/// Place a point in the expanded solvent: just inside the bottom box corner,
/// verified to be outside the protein, stepping further inward on failure.
pub fn solvent_seed(domain: &BoxDomain, protein: &TriSurfaceMesh) -> Result<Point3> {
    let tester = InclusionTester::new(protein).map_err(Error::Geom)?;
    let min_extent = domain.extent_x().min(domain.extent_y()).min(domain.extent_z());
    let mut offset = 1e-3 * min_extent;
    for _ in 0..SEED_RETRIES {
        let p = Point3::new(domain.lx1 + offset, domain.ly1 + offset, domain.lz1 + offset);
        if offset < 0.5 * min_extent {
            if let Ok(false) = tester.contains(p) {
                return Ok(p);
            }
        }
        offset *= 2.0;
    }
    Err(Error::SeedPlacement("could not place a point in the solvent near the box corner".into()))
}

/// Merge the protein surface, the box boundary surface, and the membrane
/// constraint points into one PLC.
///
/// Membrane points are added as isolated vertices referenced by no facet.
/// Points not strictly inside the open footprint rectangle are dropped: the
/// lateral box faces already constrain the z = Z1 / z = Z2 wall edges, and
/// near-duplicate vertices on facets break the tetrahedralizer.
pub fn assemble_plc(
    protein: &TriSurfaceMesh,
    box_surface: &TriSurfaceMesh,
    points: &MembranePointSet,
    domain: &BoxDomain,
) -> Result<PlcDocument> {
    let mut doc = PlcDocument::default();
    doc.nodes.extend_from_slice(protein.vertices());
    for tri in protein.triangles() {
        doc.facets.push((*tri, MARKER_PROTEIN));
    }
    let offset = doc.nodes.len() as u32;
    doc.nodes.extend_from_slice(box_surface.vertices());
    for tri in box_surface.triangles() {
        doc.facets.push(([tri[0] + offset, tri[1] + offset, tri[2] + offset], MARKER_BOX));
    }
    for p in points.iter() {
        if domain.footprint_contains(p.x, p.y) {
            doc.nodes.push(*p);
        }
    }
    for seed in protein_seeds(protein)? {
        doc.region_seeds.push(RegionSeed { point: seed, attribute: 1, max_volume: None });
    }
    doc.region_seeds.push(RegionSeed {
        point: solvent_seed(domain, protein)?,
        attribute: 2,
        max_volume: None,
    });
    doc.validate()?;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ionmesh_core::synth::{make_tube, SynthSpec};
    use ionmesh_core::{
        assemble_box_surface, select_membrane_points, MembraneSlab, MeshSizes, SelectOptions,
    };

    fn tube_setup() -> (TriSurfaceMesh, TriSurfaceMesh, MembranePointSet, BoxDomain) {
        let spec = SynthSpec::tube(2.0, 5.0, -15.0, 15.0, 32, 4);
        let protein = make_tube(&spec).unwrap();
        let domain = BoxDomain::new(-15.0, 15.0, -15.0, 15.0, -25.0, 25.0).unwrap();
        let slab = MembraneSlab::new(-12.0, 12.0).unwrap();
        let sizes = MeshSizes::new(1.5).unwrap();
        let box_surface = assemble_box_surface(&domain, &slab, &sizes).unwrap();
        let points =
            select_membrane_points(&protein, &domain, &slab, 1.5, SelectOptions::default()).unwrap();
        (protein, box_surface, points, domain)
    }

    #[test]
    fn seeds_land_in_their_regions() {
        let (protein, _, _, domain) = tube_setup();
        let ps = protein_seed(&protein).unwrap();
        let tester = InclusionTester::new(&protein).unwrap();
        assert!(tester.contains(ps).unwrap());
        let ss = solvent_seed(&domain, &protein).unwrap();
        assert!(!tester.contains(ss).unwrap());
        assert!(domain.footprint_contains(ss.x, ss.y));
    }

    #[test]
    fn disjoint_protein_gets_one_seed_per_component() {
        use ionmesh_core::synth::make_two_pore;
        let spec = SynthSpec::two_pore(2.0, 4.0, -10.0, 10.0, 16, 2, [[-6.0, 0.0], [6.0, 0.0]]);
        let protein = make_two_pore(&spec).unwrap();
        let seeds = protein_seeds(&protein).unwrap();
        assert_eq!(seeds.len(), 2);
        let tester = InclusionTester::new(&protein).unwrap();
        assert!(seeds.iter().all(|&s| tester.contains(s).unwrap()));
        // one seed per solid: they sit on opposite sides of the y-z plane
        assert!(seeds.iter().any(|s| s.x < 0.0) && seeds.iter().any(|s| s.x > 0.0));
    }

    #[test]
    fn assembled_plc_counts() {
        let (protein, box_surface, points, domain) = tube_setup();
        let doc = assemble_plc(&protein, &box_surface, &points, &domain).unwrap();
        assert_eq!(doc.facets.len(), protein.triangles().len() + box_surface.triangles().len());
        // every surface node present; isolated points on the walls dropped
        let interior: usize =
            points.iter().filter(|p| domain.footprint_contains(p.x, p.y)).count();
        assert!(interior < points.len());
        assert_eq!(
            doc.nodes.len(),
            protein.vertices().len() + box_surface.vertices().len() + interior
        );
        assert_eq!(doc.region_seeds.len(), 2);
    }
}
