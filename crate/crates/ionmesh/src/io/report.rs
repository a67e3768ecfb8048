//! JSON serialization of extraction reports.
//!
//! Keys serialize alphabetically (stable order). The six per-region censuses
//! sit at the top level, each as `{"tets": n, "vertices": n}`.

use std::path::Path;

use ionmesh_core::extract::{ExtractionReport, RegionCensus};
use serde_json::{json, Value};

use crate::error::{Error, Result};

fn census(c: &RegionCensus) -> Value {
    json!({ "vertices": c.vertices, "tets": c.tets })
}

pub fn report_to_json(r: &ExtractionReport) -> Value {
    json!({
        "full": census(&r.full),
        "protein": census(&r.protein),
        "expanded_solvent": census(&r.expanded_solvent),
        "solvent": census(&r.solvent),
        "membrane": census(&r.membrane),
        "pore_solvent": census(&r.pore_solvent),
        "components": {
            "band_boundary": r.band_components,
            "pore": r.pore_components,
            "outer_band": r.outer_band_components,
        },
        "volumes": {
            "protein": r.protein_volume,
            "solvent": r.solvent_volume,
            "membrane": r.membrane_volume,
            "pores": r.pore_volumes,
        },
        "classification": {
            "ray_adjacency_disagreements": r.ray_adjacency_disagreements,
            "winding_fallbacks": r.winding_fallbacks,
        },
        "warnings": r.warnings,
        "timings_s": {
            "step1_interception_rectangle": r.step_seconds[0],
            "step2_band_partition": r.step_seconds[1],
            "step3_boundary_split": r.step_seconds[2],
            "step4_classification": r.step_seconds[3],
            "step5_outside_band": r.step_seconds[4],
            "step6_relabel_census": r.step_seconds[5],
            "total": r.step_seconds.iter().sum::<f64>(),
        },
    })
}

pub fn write_report(report: &ExtractionReport, path: &Path) -> Result<()> {
    let value = report_to_json(report);
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(Error::io(path))
}
