//! The end-to-end pipeline: box construction, membrane point selection, PLC
//! assembly, optional external tetrahedralization, and region extraction.

use std::path::{Path, PathBuf};
use std::process::Command;

use ionmesh_core::extract::{extract_regions, ExtractParams, Extraction};
use ionmesh_core::{
    assemble_box_surface, build_box_domain, compute_aabb, select_membrane_points, BoxDomain,
    MembranePointSet, MembraneSlab, MeshSizes, SelectOptions, TetMesh, TriSurfaceMesh,
};

use crate::config::ResolvedConfig;
use crate::error::{Error, Result};
use crate::fmt::fmt_g12;
use crate::io;
use crate::io::tetgen::PlcDocument;
use crate::plc::assemble_plc;

/// The tetrahedralizer switch string used by the pipeline.
pub const TETGEN_SWITCHES: &str = "-q1.2aVpiT1e-10AAYYCnQ";

/// Environment variable naming the external tetrahedralizer executable.
pub const TETGEN_BIN_ENV: &str = "TETGEN_BIN";

/// The switch string, with quiet mode stripped when verbose output is wanted.
pub fn tetgen_switches(verbose: bool) -> String {
    if verbose {
        TETGEN_SWITCHES.trim_end_matches('Q').to_string()
    } else {
        TETGEN_SWITCHES.to_string()
    }
}

/// Everything derived from the protein surface and the configuration, before
/// any tetrahedralization.
pub struct Prepared {
    pub protein: TriSurfaceMesh,
    pub domain: BoxDomain,
    pub slab: MembraneSlab,
    pub sizes: MeshSizes,
    pub box_surface: TriSurfaceMesh,
    pub points: MembranePointSet,
}

/// Load and validate the protein surface and the membrane slab; enough for
/// extraction, which needs neither the box surface nor the point set.
pub fn load_protein(cfg: &ResolvedConfig) -> Result<(TriSurfaceMesh, MembraneSlab)> {
    let protein = io::read_surface(&cfg.surface, None)?;
    let census = protein.edge_census();
    if !protein.is_watertight() {
        return Err(Error::NonManifoldInput {
            path: cfg.surface.clone(),
            boundary: census.boundary_edges,
            non_manifold: census.non_manifold_edges,
        });
    }
    Ok((protein, MembraneSlab::new(cfg.z1, cfg.z2)?))
}

pub fn prepare(cfg: &ResolvedConfig) -> Result<Prepared> {
    let (protein, slab) = load_protein(cfg)?;
    let domain = build_box_domain(&compute_aabb(&protein), (cfg.eta[0], cfg.eta[1], cfg.eta[2]))?;
    let sizes = MeshSizes::new(cfg.h_m)?.with_coarse(cfg.h_s)?;
    let box_surface = assemble_box_surface(&domain, &slab, &sizes)?;
    let points = select_membrane_points(&protein, &domain, &slab, cfg.h_m, SelectOptions::default())?;
    Ok(Prepared { protein, domain, slab, sizes, box_surface, points })
}

pub fn build_plc(prep: &Prepared) -> Result<PlcDocument> {
    assemble_plc(&prep.protein, &prep.box_surface, &prep.points, &prep.domain)
}

/// Extraction on an already-loaded mesh.
pub fn extract(
    protein: &TriSurfaceMesh,
    slab: &MembraneSlab,
    mesh: &TetMesh,
    cfg: &ResolvedConfig,
) -> Result<Extraction> {
    let params = ExtractParams {
        h_m: cfg.h_m,
        tau: Some(cfg.tau),
        expected_pores: cfg.expect_pores,
    };
    extract_regions(mesh, protein, slab, &params).map_err(Error::from)
}

/// Write the membrane points as a standalone `.node` fragment plus JSON.
pub fn write_points(points: &MembranePointSet, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let node_path = dir.join("membrane_points.node");
    let mut out = String::new();
    out.push_str(&format!("{} 3 0 0\n", points.len()));
    for (i, p) in points.iter().enumerate() {
        out.push_str(&format!("{} {} {} {}\n", i + 1, fmt_g12(p.x), fmt_g12(p.y), fmt_g12(p.z)));
    }
    io::write_file(&node_path, &out)?;

    let json_path = dir.join("membrane_points.json");
    let as_triples =
        |v: &[ionmesh_core::Point3]| -> Vec<[f64; 3]> { v.iter().map(|p| [p.x, p.y, p.z]).collect() };
    let value = serde_json::json!({
        "bottom": as_triples(&points.bottom),
        "top": as_triples(&points.top),
        "count": points.len(),
    });
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    std::fs::write(&json_path, text).map_err(Error::io(&json_path))?;
    Ok((node_path, json_path))
}

/// Run the external tetrahedralizer on a `.poly` file. Returns the
/// `.1.node`/`.1.ele` paths it produced.
pub fn run_tetgen(bin: &str, poly_path: &Path, verbose: bool) -> Result<(PathBuf, PathBuf)> {
    let switches = tetgen_switches(verbose);
    let status = Command::new(bin)
        .arg(&switches)
        .arg(poly_path)
        .status()
        .map_err(|e| Error::Tetgen(format!("failed to launch {bin}: {e}")))?;
    if !status.success() {
        return Err(Error::Tetgen(format!("{bin} {switches} {} failed: {status}", poly_path.display())));
    }
    let stem = poly_path.with_extension("");
    let base = stem.to_string_lossy();
    let node = PathBuf::from(format!("{base}.1.node"));
    let ele = PathBuf::from(format!("{base}.1.ele"));
    for p in [&node, &ele] {
        if !p.exists() {
            return Err(Error::Tetgen(format!("expected tetrahedralizer output {} not found", p.display())));
        }
    }
    Ok((node, ele))
}
