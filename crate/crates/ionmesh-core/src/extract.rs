//! Membrane/solvent extraction from a two-region tetrahedral mesh.
//!
//! Input: a box mesh whose tets are labeled 1 (protein) or 2 (expanded
//! solvent). The expanded-solvent tets whose centroids fall in the membrane
//! slab are partitioned into the interception-rectangle band and the outside
//! remainder; the band's boundary surface is split into connected components,
//! components are classified pore/outer, and band tets inside a pore keep
//! label 2 while everything else in the slab becomes label 3 (membrane).
//! Only labels change; vertices and connectivity are untouched.
//!
//! Two independent classification routes are used: ray-parity containment
//! against the pore surfaces, and connectivity of the band's face-adjacency
//! graph. Where they disagree (possible only under numerical degeneracy) the
//! adjacency result wins and the disagreement is reported.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::boxsurf::{BoxDomain, MembraneSlab};
use crate::error::GeomError;
use crate::inside::{winding_number_inclusion, InclusionTester};
use crate::surface::{enclosed_volume, sub_surface, triangle_component_ids, TriSurfaceMesh};
use crate::tet::{boundary_faces_with, faces_to_surface, RegionLabel, TetMesh};

/// The interception rectangle [a, b] x [c, d]: the xy-extent of the protein
/// portion inside the membrane slab, enlarged by the margin `tau`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandRect {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub tau: f64,
}

impl BandRect {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.a && x <= self.b && y >= self.c && y <= self.d
    }
}

/// Index sets of the slab band: `dms` (inside the rectangle), `dmo` (the
/// remainder), and their union `band`. All sorted by tet index.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BandPartition {
    pub band: Vec<u32>,
    pub dms: Vec<u32>,
    pub dmo: Vec<u32>,
}

/// The split band boundary: every watertight connected component of the
/// boundary of the `dms` submesh, classified pore or outer.
pub struct BandBoundary {
    pub pore_surfaces: Vec<TriSurfaceMesh>,
    pub outer_surface: TriSurfaceMesh,
}

/// Ray-route classification of the `dms` tets.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BandClassification {
    /// Tets whose centroid lies inside a pore surface; they stay solvent.
    pub pore_solvent: Vec<u32>,
    /// The rest of the band-rectangle tets; they become membrane.
    pub membrane: Vec<u32>,
    /// Queries that needed the winding-number fallback.
    pub winding_fallbacks: usize,
}

/// Adjacency-route grouping of the `dms` tets.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AdjacencyGroups {
    /// Face-connected groups, each sorted; ordered by smallest tet index.
    pub groups: Vec<Vec<u32>>,
    /// Whether the group touches the band's outer rim (dmo or the box walls).
    pub outer: Vec<bool>,
}

/// Vertex/tet counts of one mesh region.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RegionCensus {
    pub vertices: usize,
    pub tets: usize,
}

/// Extraction summary: per-region censuses, component counts, volumes,
/// cross-route disagreements, and per-step wall-clock timings.
#[derive(Clone, Debug, Default)]
pub struct ExtractionReport {
    /// The whole box mesh.
    pub full: RegionCensus,
    /// Label 1.
    pub protein: RegionCensus,
    /// Label 2 before extraction (= labels 2 and 3 after).
    pub expanded_solvent: RegionCensus,
    /// Label 2 after extraction.
    pub solvent: RegionCensus,
    /// Label 3 after extraction.
    pub membrane: RegionCensus,
    /// The pore portion of the solvent inside the band rectangle.
    pub pore_solvent: RegionCensus,
    /// Connected components of the band boundary surface.
    pub band_components: usize,
    pub pore_components: usize,
    /// Face-connected components of the band outside the rectangle
    /// (normally 1; more signals isolated solvent pockets relabeled as
    /// membrane).
    pub outer_band_components: usize,
    /// Enclosed volume of each pore component surface.
    pub pore_volumes: Vec<f64>,
    pub protein_volume: f64,
    pub solvent_volume: f64,
    pub membrane_volume: f64,
    pub ray_adjacency_disagreements: usize,
    pub winding_fallbacks: usize,
    pub warnings: Vec<String>,
    /// Wall-clock seconds of the six extraction steps (zero without `std`).
    pub step_seconds: [f64; 6],
}

/// Extraction inputs beyond the mesh and protein surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtractParams {
    /// Membrane mesh size; also the default interception margin.
    pub h_m: f64,
    /// Interception margin; defaults to `h_m`.
    pub tau: Option<f64>,
    /// When set, fail with `PoreNotSeparated` unless at least this many pore
    /// components are found.
    pub expected_pores: Option<usize>,
}

impl ExtractParams {
    pub fn new(h_m: f64) -> Self {
        Self { h_m, tau: None, expected_pores: None }
    }

    pub fn tau(&self) -> f64 {
        self.tau.unwrap_or(self.h_m)
    }
}

/// A relabeled mesh plus its report.
#[derive(Debug)]
pub struct Extraction {
    pub mesh: TetMesh,
    pub report: ExtractionReport,
}

#[cfg(feature = "std")]
struct StepTimer(std::time::Instant);

#[cfg(feature = "std")]
impl StepTimer {
    fn start() -> Self {
        Self(std::time::Instant::now())
    }
    fn lap(&mut self) -> f64 {
        let now = std::time::Instant::now();
        let dt = now.duration_since(self.0).as_secs_f64();
        self.0 = now;
        dt
    }
}

#[cfg(not(feature = "std"))]
struct StepTimer;

#[cfg(not(feature = "std"))]
impl StepTimer {
    fn start() -> Self {
        Self
    }
    fn lap(&mut self) -> f64 {
        0.0
    }
}

/// Step 1: the xy-rectangle bounding the protein portion intercepted by the
/// slab planes, enlarged by `tau` so it clears the surface.
pub fn interception_rectangle(
    surface: &TriSurfaceMesh,
    slab: &MembraneSlab,
    tau: f64,
) -> Result<BandRect, GeomError> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(GeomError::InvalidDomain("tau must be positive"));
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut any = false;
    let mut extend = |x: f64, y: f64| {
        lo[0] = lo[0].min(x);
        lo[1] = lo[1].min(y);
        hi[0] = hi[0].max(x);
        hi[1] = hi[1].max(y);
    };
    for tri in surface.triangles() {
        let vs = [
            surface.vertices()[tri[0] as usize],
            surface.vertices()[tri[1] as usize],
            surface.vertices()[tri[2] as usize],
        ];
        if vs.iter().any(|v| slab.contains_z(v.z)) {
            any = true;
            for v in &vs {
                extend(v.x, v.y);
            }
        }
        // crossings of the slab planes, for triangles spanning a plane
        for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
            for z in [slab.z1, slab.z2] {
                if (vs[i].z - z) * (vs[j].z - z) < 0.0 {
                    any = true;
                    let t = (z - vs[i].z) / (vs[j].z - vs[i].z);
                    extend(vs[i].x + t * (vs[j].x - vs[i].x), vs[i].y + t * (vs[j].y - vs[i].y));
                }
            }
        }
    }
    if !any {
        return Err(GeomError::ProteinMissesSlab);
    }
    Ok(BandRect { a: lo[0] - tau, b: hi[0] + tau, c: lo[1] - tau, d: hi[1] + tau, tau })
}

/// Step 2: partition the expanded-solvent tets by centroid. A label-2 tet
/// joins the band iff its centroid lies in the slab (and the box footprint);
/// it joins `dms` iff the centroid also lies in the rectangle.
pub fn band_partition(
    mesh: &TetMesh,
    domain: &BoxDomain,
    rect: &BandRect,
    slab: &MembraneSlab,
) -> BandPartition {
    let mut part = BandPartition::default();
    for (t, &label) in mesh.labels().iter().enumerate() {
        if label != RegionLabel::Solvent {
            continue;
        }
        let c = mesh.centroid(t);
        if !slab.contains_z(c.z) || !domain.footprint_contains(c.x, c.y) {
            continue;
        }
        part.band.push(t as u32);
        if rect.contains(c.x, c.y) {
            part.dms.push(t as u32);
        } else {
            part.dmo.push(t as u32);
        }
    }
    part
}

fn mask(len: usize, indices: &[u32]) -> Vec<bool> {
    let mut m = vec![false; len];
    for &i in indices {
        m[i as usize] = true;
    }
    m
}

/// True if the face lies on one of the four lateral walls of the mesh's
/// bounding box.
fn face_on_lateral_wall(mesh: &TetMesh, face: &[u32; 3]) -> bool {
    let aabb = mesh.aabb();
    let eps = mesh.eps_geom();
    for (pick, wall) in [
        (0usize, aabb.min.x),
        (0, aabb.max.x),
        (1, aabb.min.y),
        (1, aabb.max.y),
    ] {
        let on = face.iter().all(|&v| {
            let p = mesh.vertices()[v as usize];
            let coord = if pick == 0 { p.x } else { p.y };
            (coord - wall).abs() <= eps
        });
        if on {
            return true;
        }
    }
    false
}

/// Step 3: boundary surface of the `dms` submesh, split into connected
/// components and classified.
///
/// A component is *outer* iff it contains a face on the band's outer rim:
/// a face shared with a `dmo` tet, or a mesh-boundary face on a lateral box
/// wall. All rim-touching components together form the outer surface (more
/// than one arises only from tet-granular islands along the rectangle rim);
/// every other component is a pore surface. Fails with `AmbiguousOuter` when
/// no component touches the rim at all.
pub fn split_band_boundary(mesh: &TetMesh, part: &BandPartition) -> Result<BandBoundary, GeomError> {
    let neighbors = mesh.face_neighbors();
    split_band_boundary_with(mesh, &neighbors, part)
}

pub(crate) fn split_band_boundary_with(
    mesh: &TetMesh,
    neighbors: &[[Option<u32>; 4]],
    part: &BandPartition,
) -> Result<BandBoundary, GeomError> {
    let in_dms = mask(mesh.tets().len(), &part.dms);
    let in_dmo = mask(mesh.tets().len(), &part.dmo);
    let faces = boundary_faces_with(mesh, neighbors, |t| in_dms[t])?;

    let tris: Vec<[u32; 3]> = faces.iter().map(|f| f.face).collect();
    let (component_of, n_components) = triangle_component_ids(&tris);

    let mut rim = vec![false; n_components];
    for (i, f) in faces.iter().enumerate() {
        let on_rim = match f.opposite {
            Some(n) => in_dmo[n as usize],
            None => face_on_lateral_wall(mesh, &f.face),
        };
        if on_rim {
            rim[component_of[i] as usize] = true;
        }
    }

    if !rim.iter().any(|&r| r) {
        return Err(GeomError::AmbiguousOuter { outer: 0 });
    }

    let whole = faces_to_surface(mesh, tris.iter().copied())?;
    let mut pore_surfaces = Vec::new();
    for comp in 0..n_components as u32 {
        if !rim[comp as usize] {
            pore_surfaces.push(sub_surface(&whole, |t| component_of[t] == comp)?);
        }
    }
    let outer_surface = sub_surface(&whole, |t| rim[component_of[t] as usize])?;
    Ok(BandBoundary { pore_surfaces, outer_surface })
}

/// Step 4, ray route: classify each `dms` tet by testing its centroid against
/// every pore surface. Centroids inside any pore stay solvent.
///
/// On a degenerate parity query the winding-number oracle is consulted; if
/// that also fails the whole classification fails with the tet index.
pub fn classify_band_tets(
    mesh: &TetMesh,
    part: &BandPartition,
    pore_surfaces: &[TriSurfaceMesh],
) -> Result<BandClassification, GeomError> {
    let testers: Vec<InclusionTester<'_>> = pore_surfaces
        .iter()
        .map(InclusionTester::new)
        .collect::<Result<_, _>>()?;
    let mut out = BandClassification::default();
    for &t in &part.dms {
        let centroid = mesh.centroid(t as usize);
        let mut inside_pore = false;
        for (tester, surface) in testers.iter().zip(pore_surfaces) {
            let inside = match tester.contains(centroid) {
                Ok(v) => v,
                Err(GeomError::DegenerateQuery) => {
                    out.winding_fallbacks += 1;
                    winding_number_inclusion(centroid, surface)
                        .map_err(|_| GeomError::ClassificationFailed { tet: t as usize })?
                }
                Err(e) => return Err(e),
            };
            if inside {
                inside_pore = true;
                break;
            }
        }
        if inside_pore {
            out.pore_solvent.push(t);
        } else {
            out.membrane.push(t);
        }
    }
    Ok(out)
}

/// Step 4, topology route (independent oracle): connected components of the
/// face-adjacency graph restricted to `dms`, with face-groups merged when
/// their boundary surfaces share an edge (a pinch), which is exactly when the
/// surface split places them in one component. A group touching the band's
/// outer rim is outer; every other group is a pore.
pub fn classify_by_adjacency(mesh: &TetMesh, part: &BandPartition) -> AdjacencyGroups {
    let neighbors = mesh.face_neighbors();
    classify_by_adjacency_with(mesh, &neighbors, part)
}

pub(crate) fn classify_by_adjacency_with(
    mesh: &TetMesh,
    neighbors: &[[Option<u32>; 4]],
    part: &BandPartition,
) -> AdjacencyGroups {
    let in_dms = mask(mesh.tets().len(), &part.dms);
    let in_dmo = mask(mesh.tets().len(), &part.dmo);

    let mut group_of = vec![u32::MAX; mesh.tets().len()];
    let mut groups: Vec<Vec<u32>> = Vec::new();
    let mut outer: Vec<bool> = Vec::new();
    let mut stack: Vec<u32> = Vec::new();

    for &start in &part.dms {
        if group_of[start as usize] != u32::MAX {
            continue;
        }
        let id = groups.len() as u32;
        let mut members = Vec::new();
        let mut touches_rim = false;
        group_of[start as usize] = id;
        stack.push(start);
        while let Some(t) = stack.pop() {
            members.push(t);
            let faces = mesh.tet_faces(t as usize);
            for (slot, &n) in neighbors[t as usize].iter().enumerate() {
                match n {
                    Some(n) => {
                        let n = n as usize;
                        if in_dms[n] {
                            if group_of[n] == u32::MAX {
                                group_of[n] = id;
                                stack.push(n as u32);
                            }
                        } else if in_dmo[n] {
                            touches_rim = true;
                        }
                    }
                    None => {
                        if face_on_lateral_wall(mesh, &faces[slot]) {
                            touches_rim = true;
                        }
                    }
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
        outer.push(touches_rim);
    }

    // Merge face-groups whose boundary faces share an edge: such groups are
    // pinched together and bounded by one surface component.
    let mut boundary_edges: Vec<((u32, u32), u32)> = Vec::new();
    for (id, members) in groups.iter().enumerate() {
        for &t in members {
            for (slot, &n) in neighbors[t as usize].iter().enumerate() {
                let outside = match n {
                    Some(n) => !in_dms[n as usize],
                    None => true,
                };
                if outside {
                    let f = mesh.tet_faces(t as usize)[slot];
                    for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                        boundary_edges.push(((a.min(b), a.max(b)), id as u32));
                    }
                }
            }
        }
    }
    boundary_edges.sort_unstable();
    let mut parent: Vec<u32> = (0..groups.len() as u32).collect();
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut r = x;
        while parent[r as usize] != r {
            r = parent[r as usize];
        }
        let mut c = x;
        while parent[c as usize] != r {
            let next = parent[c as usize];
            parent[c as usize] = r;
            c = next;
        }
        r
    }
    let mut i = 0;
    while i < boundary_edges.len() {
        let mut j = i + 1;
        while j < boundary_edges.len() && boundary_edges[j].0 == boundary_edges[i].0 {
            j += 1;
        }
        for k in i + 1..j {
            let (a, b) = (find(&mut parent, boundary_edges[i].1), find(&mut parent, boundary_edges[k].1));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
        i = j;
    }

    let mut merged_of = vec![u32::MAX; groups.len()];
    let mut merged_groups: Vec<Vec<u32>> = Vec::new();
    let mut merged_outer: Vec<bool> = Vec::new();
    for id in 0..groups.len() as u32 {
        let root = find(&mut parent, id);
        let slot = if merged_of[root as usize] == u32::MAX {
            merged_of[root as usize] = merged_groups.len() as u32;
            merged_groups.push(Vec::new());
            merged_outer.push(false);
            merged_groups.len() - 1
        } else {
            merged_of[root as usize] as usize
        };
        merged_groups[slot].extend_from_slice(&groups[id as usize]);
        merged_outer[slot] = merged_outer[slot] || outer[id as usize];
    }
    for g in &mut merged_groups {
        g.sort_unstable();
    }
    AdjacencyGroups { groups: merged_groups, outer: merged_outer }
}

fn census(mesh: &TetMesh, select: impl Fn(usize) -> bool + Copy) -> RegionCensus {
    RegionCensus {
        vertices: mesh.referenced_vertices(select),
        tets: (0..mesh.tets().len()).filter(|&t| select(t)).count(),
    }
}

/// Steps 1–6: relabel the expanded solvent of a two-region mesh into solvent
/// (2) and membrane (3). Vertices and connectivity are unchanged.
pub fn extract_regions(
    mesh: &TetMesh,
    protein_surface: &TriSurfaceMesh,
    slab: &MembraneSlab,
    params: &ExtractParams,
) -> Result<Extraction, GeomError> {
    for (t, &l) in mesh.labels().iter().enumerate() {
        if l != RegionLabel::Protein && l != RegionLabel::Solvent {
            return Err(GeomError::InvalidLabel {
                tet: t,
                value: l.as_i32() as i64,
                expected: "1 (protein) or 2 (expanded solvent)",
            });
        }
    }

    let mut report = ExtractionReport::default();
    let mut timer = StepTimer::start();

    // Step 1: interception rectangle.
    let rect = interception_rectangle(protein_surface, slab, params.tau())?;
    let aabb = mesh.aabb();
    let domain = BoxDomain::new(aabb.min.x, aabb.max.x, aabb.min.y, aabb.max.y, aabb.min.z, aabb.max.z)?;
    if !(rect.a > domain.lx1 && rect.b < domain.lx2 && rect.c > domain.ly1 && rect.d < domain.ly2) {
        report.warnings.push(String::from(
            "interception rectangle is not strictly inside the box footprint; \
             the protein nearly touches a lateral wall",
        ));
    }
    report.step_seconds[0] = timer.lap();

    // Step 2: band partition by centroid.
    let part = band_partition(mesh, &domain, &rect, slab);
    report.step_seconds[1] = timer.lap();

    let mut labels = mesh.labels().to_vec();
    let mut pore_solvent: Vec<u32> = Vec::new();
    let neighbors = if part.band.is_empty() { Vec::new() } else { mesh.face_neighbors() };

    if part.dms.is_empty() {
        // Nothing inside the rectangle: the whole band (if any) is membrane.
        for &t in &part.dmo {
            labels[t as usize] = RegionLabel::Membrane;
        }
        report.step_seconds[2] = timer.lap();
    } else {
        // Step 3: split the band boundary into pore/outer components.
        let split = split_band_boundary_with(mesh, &neighbors, &part)?;
        report.band_components = split.pore_surfaces.len() + 1;
        report.pore_components = split.pore_surfaces.len();
        if let Some(expected) = params.expected_pores {
            if split.pore_surfaces.len() < expected {
                return Err(GeomError::PoreNotSeparated {
                    expected,
                    found: split.pore_surfaces.len(),
                });
            }
        }
        for surf in &split.pore_surfaces {
            report.pore_volumes.push(enclosed_volume(surf)?);
        }
        report.step_seconds[2] = timer.lap();

        // Step 4: classify band tets by both routes; adjacency wins on
        // disagreement (graph connectivity is exact, ray parity is floating
        // point).
        let ray = classify_band_tets(mesh, &part, &split.pore_surfaces)?;
        report.winding_fallbacks = ray.winding_fallbacks;
        let adj = classify_by_adjacency_with(mesh, &neighbors, &part);
        let mut adj_pore = vec![false; mesh.tets().len()];
        for (g, members) in adj.groups.iter().enumerate() {
            if !adj.outer[g] {
                for &t in members {
                    adj_pore[t as usize] = true;
                }
            }
        }
        let mut disagreements = 0usize;
        for &t in &ray.pore_solvent {
            if !adj_pore[t as usize] {
                disagreements += 1;
            }
        }
        for &t in &ray.membrane {
            if adj_pore[t as usize] {
                disagreements += 1;
            }
        }
        if disagreements > 0 {
            report.warnings.push(alloc::format!(
                "ray and adjacency classifications disagreed on {disagreements} tet(s); \
                 adjacency result kept"
            ));
        }
        report.ray_adjacency_disagreements = disagreements;
        pore_solvent = part.dms.iter().copied().filter(|&t| adj_pore[t as usize]).collect();

        // Step 5: relabel the membrane part of the rectangle band and the
        // whole outside band.
        for &t in &part.dms {
            if !adj_pore[t as usize] {
                labels[t as usize] = RegionLabel::Membrane;
            }
        }
        for &t in &part.dmo {
            labels[t as usize] = RegionLabel::Membrane;
        }
        report.step_seconds[3] = timer.lap();
    }

    // Census of the outside band, flagging isolated solvent pockets that were
    // relabeled although they are not connected to the membrane ring.
    if !part.dmo.is_empty() {
        let dmo_part = BandPartition { band: part.dmo.clone(), dms: part.dmo.clone(), dmo: Vec::new() };
        let dmo_groups = classify_by_adjacency_with(mesh, &neighbors, &dmo_part);
        report.outer_band_components = dmo_groups.groups.len();
        if dmo_groups.groups.len() > 1 {
            report.warnings.push(alloc::format!(
                "band outside the interception rectangle has {} disconnected components; \
                 isolated solvent pockets were relabeled as membrane",
                dmo_groups.groups.len()
            ));
        }
    }
    report.step_seconds[4] = timer.lap();

    // Step 6: finalize labels and the report.
    let out = mesh.with_labels(labels)?;
    debug_assert!(out.labels().iter().all(|&l| l != RegionLabel::Unassigned));

    let labels = out.labels();
    let in_pore = mask(out.tets().len(), &pore_solvent);
    report.full = census(&out, |_| true);
    report.protein = census(&out, |t| labels[t] == RegionLabel::Protein);
    report.expanded_solvent =
        census(&out, |t| labels[t] == RegionLabel::Solvent || labels[t] == RegionLabel::Membrane);
    report.solvent = census(&out, |t| labels[t] == RegionLabel::Solvent);
    report.membrane = census(&out, |t| labels[t] == RegionLabel::Membrane);
    report.pore_solvent = census(&out, |t| in_pore[t]);
    report.protein_volume = out.label_volume(RegionLabel::Protein);
    report.solvent_volume = out.label_volume(RegionLabel::Solvent);
    report.membrane_volume = out.label_volume(RegionLabel::Membrane);
    report.step_seconds[5] = timer.lap();

    Ok(Extraction { mesh: out, report })
}
