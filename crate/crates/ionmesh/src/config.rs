//! Pipeline configuration: a flat JSON file whose values individual CLI flags
//! override.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw configuration as read from `--config` and/or flags. All fields
/// optional; [`PipelineConfig::resolve`] applies the documented defaults.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// Path to the protein surface mesh (OFF or ASCII PLY).
    pub surface: Option<PathBuf>,
    /// Bottom membrane plane height.
    pub z1: Option<f64>,
    /// Top membrane plane height.
    pub z2: Option<f64>,
    /// Membrane-band surface mesh size.
    pub h_m: Option<f64>,
    /// Coarse surface mesh size; defaults to 2 * h_m.
    pub h_s: Option<f64>,
    /// Box margins per axis; default (20, 20, 20).
    pub eta: Option<[f64; 3]>,
    /// Interception-rectangle margin; defaults to h_m.
    pub tau: Option<f64>,
    /// Output directory; defaults to the current directory.
    pub out: Option<PathBuf>,
    /// Require at least this many pore components during extraction.
    pub expect_pores: Option<usize>,
}

impl PipelineConfig {
    pub fn from_file(path: &Path) -> Result<PipelineConfig> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        serde_json::from_str(&text).map_err(Error::from)
    }

    /// Overlay: values set in `over` win.
    pub fn merged_with(&self, over: &PipelineConfig) -> PipelineConfig {
        PipelineConfig {
            surface: over.surface.clone().or_else(|| self.surface.clone()),
            z1: over.z1.or(self.z1),
            z2: over.z2.or(self.z2),
            h_m: over.h_m.or(self.h_m),
            h_s: over.h_s.or(self.h_s),
            eta: over.eta.or(self.eta),
            tau: over.tau.or(self.tau),
            out: over.out.clone().or_else(|| self.out.clone()),
            expect_pores: over.expect_pores.or(self.expect_pores),
        }
    }

    pub fn resolve(&self) -> Result<ResolvedConfig> {
        let surface = self
            .surface
            .clone()
            .ok_or_else(|| Error::Config("missing protein surface path (surface / --surface)".into()))?;
        let z1 = self.z1.ok_or_else(|| Error::Config("missing z1 (--z1)".into()))?;
        let z2 = self.z2.ok_or_else(|| Error::Config("missing z2 (--z2)".into()))?;
        let h_m = self.h_m.ok_or_else(|| Error::Config("missing h_m (--hm)".into()))?;
        if !h_m.is_finite() || h_m <= 0.0 {
            return Err(Error::Config("h_m must be positive".into()));
        }
        if !z1.is_finite() || !z2.is_finite() || z1 >= z2 {
            return Err(Error::Config("z1 must be below z2".into()));
        }
        let eta = self.eta.unwrap_or([20.0, 20.0, 20.0]);
        if eta.iter().any(|&e| !e.is_finite() || e <= 0.0) {
            return Err(Error::Config("eta margins must be positive".into()));
        }
        Ok(ResolvedConfig {
            surface,
            z1,
            z2,
            h_m,
            h_s: self.h_s.unwrap_or(2.0 * h_m),
            eta,
            tau: self.tau.unwrap_or(h_m),
            out: self.out.clone().unwrap_or_else(|| PathBuf::from(".")),
            expect_pores: self.expect_pores,
        })
    }
}

/// Configuration with all defaults applied.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedConfig {
    pub surface: PathBuf,
    pub z1: f64,
    pub z2: f64,
    pub h_m: f64,
    pub h_s: f64,
    pub eta: [f64; 3],
    pub tau: f64,
    pub out: PathBuf,
    pub expect_pores: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_h_m() {
        let cfg = PipelineConfig {
            surface: Some("p.off".into()),
            z1: Some(-12.0),
            z2: Some(12.0),
            h_m: Some(1.2),
            ..Default::default()
        };
        let r = cfg.resolve().unwrap();
        assert_eq!(r.h_s, 2.4);
        assert_eq!(r.tau, 1.2);
        assert_eq!(r.eta, [20.0, 20.0, 20.0]);
    }

    #[test]
    fn flags_override_file_values() {
        let file = PipelineConfig { h_m: Some(1.0), z1: Some(-10.0), ..Default::default() };
        let flags = PipelineConfig { h_m: Some(2.0), ..Default::default() };
        let merged = file.merged_with(&flags);
        assert_eq!(merged.h_m, Some(2.0));
        assert_eq!(merged.z1, Some(-10.0));
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("cfg.json");
        std::fs::write(
            &p,
            r#"{"surface": "tube.off", "z1": -12, "z2": 12, "h_m": 1.2, "eta": [20, 20, 20]}"#,
        )
        .unwrap();
        let cfg = PipelineConfig::from_file(&p).unwrap();
        assert_eq!(cfg.surface, Some("tube.off".into()));
        assert_eq!(cfg.h_m, Some(1.2));
    }

    #[test]
    fn unknown_keys_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.json");
        std::fs::write(&p, r#"{"surfac": "typo.off"}"#).unwrap();
        assert!(PipelineConfig::from_file(&p).is_err());
    }
}
