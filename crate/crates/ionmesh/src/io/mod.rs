//! Readers and writers for the external formats: OFF and ASCII PLY surfaces
//! in, TetGen `.poly`/`.node`/`.ele` in/out, legacy VTK and JSON reports out.

pub mod off;
pub mod ply;
pub mod report;
pub mod tetgen;
pub mod vtk;

use std::path::{Path, PathBuf};
use std::str::FromStr;

use ionmesh_core::TriSurfaceMesh;

use crate::error::{Error, Result};

/// Supported surface-mesh file formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceFormat {
    Off,
    Ply,
}

impl SurfaceFormat {
    pub fn from_path(path: &Path) -> Option<SurfaceFormat> {
        match path.extension().and_then(|e| e.to_str())?.to_ascii_lowercase().as_str() {
            "off" => Some(SurfaceFormat::Off),
            "ply" => Some(SurfaceFormat::Ply),
            _ => None,
        }
    }
}

impl FromStr for SurfaceFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(SurfaceFormat::Off),
            "ply" => Ok(SurfaceFormat::Ply),
            other => Err(format!("unknown surface format {other:?} (expected off or ply)")),
        }
    }
}

/// Read a triangle surface, picking the format from the extension unless
/// forced. Watertightness is computed on construction and available from the
/// returned mesh.
pub fn read_surface(path: &Path, format: Option<SurfaceFormat>) -> Result<TriSurfaceMesh> {
    let format = format
        .or_else(|| SurfaceFormat::from_path(path))
        .ok_or_else(|| Error::Config(format!("cannot infer surface format of {}", path.display())))?;
    match format {
        SurfaceFormat::Off => off::read_off(path),
        SurfaceFormat::Ply => ply::read_ply(path),
    }
}

/// Write a triangle surface in the requested format.
pub fn write_surface(mesh: &TriSurfaceMesh, path: &Path, format: Option<SurfaceFormat>) -> Result<()> {
    let format = format
        .or_else(|| SurfaceFormat::from_path(path))
        .ok_or_else(|| Error::Config(format!("cannot infer surface format of {}", path.display())))?;
    match format {
        SurfaceFormat::Off => off::write_off(mesh, path),
        SurfaceFormat::Ply => ply::write_ply(mesh, path),
    }
}

/// Whitespace tokenizer with line tracking and `#` comment stripping, shared
/// by the plain-text mesh formats.
pub(crate) struct TokenReader {
    path: PathBuf,
    text: String,
    spans: Vec<(u32, u32, u32)>,
    pos: usize,
}

impl TokenReader {
    pub fn open(path: &Path) -> Result<TokenReader> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        Ok(Self::from_text(path, text))
    }

    pub fn from_text(path: &Path, text: String) -> TokenReader {
        let mut spans = Vec::new();
        let mut offset = 0usize;
        for (i, line) in text.split('\n').enumerate() {
            let content_len = match line.find('#') {
                Some(p) => p,
                None => line.len(),
            };
            let content = &line[..content_len];
            let base = offset;
            let mut start = None;
            for (j, ch) in content.char_indices() {
                if ch.is_whitespace() {
                    if let Some(s) = start.take() {
                        spans.push(((base + s) as u32, (base + j) as u32, (i + 1) as u32));
                    }
                } else if start.is_none() {
                    start = Some(j);
                }
            }
            if let Some(s) = start {
                spans.push(((base + s) as u32, (base + content_len) as u32, (i + 1) as u32));
            }
            offset += line.len() + 1;
        }
        TokenReader { path: path.to_path_buf(), text, spans, pos: 0 }
    }

    pub fn last_line(&self) -> usize {
        self.spans.last().map(|s| s.2 as usize).unwrap_or(0)
    }

    pub fn next(&mut self, what: &str) -> Result<(&str, usize)> {
        match self.spans.get(self.pos) {
            Some(&(start, end, line)) => {
                self.pos += 1;
                Ok((&self.text[start as usize..end as usize], line as usize))
            }
            None => Err(Error::parse(
                &self.path,
                self.last_line(),
                format!("unexpected end of file, expected {what}"),
            )),
        }
    }

    pub fn parse<T: FromStr>(&mut self, what: &str) -> Result<T> {
        let path = self.path.clone();
        let (tok, line) = self.next(what)?;
        tok.parse::<T>()
            .map_err(|_| Error::parse(path, line, format!("expected {what}, found {tok:?}")))
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(Error::io(path))
}
