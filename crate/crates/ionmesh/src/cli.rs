//! Command-line interface: synthetic geometry, box surface, membrane points,
//! PLC assembly, extraction, and the end-to-end pipeline.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use ionmesh_core::synth::{make_surface, SynthKind, SynthSpec};
use ionmesh_core::{plan_box_grid, surface_connected_components, RegionLabel};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::io::tetgen::{read_tet_mesh, write_plc, write_tet_mesh};
use crate::io::{report::write_report, vtk::write_vtk, SurfaceFormat};
use crate::pipeline;

#[derive(Parser, Debug)]
#[command(
    name = "ionmesh",
    version,
    about = "Prepare interface-fitted tetrahedral meshes for ion-channel continuum models"
)]
pub struct Cli {
    /// Print progress details (and strip the tetrahedralizer's quiet switch).
    #[arg(long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Generate a synthetic protein surface (tube, hourglass, or two-pore).
    Synth(SynthArgs),
    /// Build the refined box boundary surface and write it as OFF.
    #[command(name = "box")]
    BoxSurface(CommonArgs),
    /// Select the membrane constraint points and write them as .node + JSON.
    Points(CommonArgs),
    /// Assemble the tetrahedralizer input (.poly) from surface + box + points.
    Plc(CommonArgs),
    /// Relabel an expanded-solvent mesh into solvent and membrane regions.
    Extract(ExtractArgs),
    /// Run extraction but write only the report.
    Stats(ExtractArgs),
    /// All steps; shells out to $TETGEN_BIN when set, else stops after plc.
    Pipeline(CommonArgs),
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Flat JSON configuration file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Protein surface mesh (OFF or ASCII PLY).
    #[arg(long)]
    pub surface: Option<PathBuf>,
    /// Bottom membrane plane height (Å).
    #[arg(long, allow_negative_numbers = true)]
    pub z1: Option<f64>,
    /// Top membrane plane height (Å).
    #[arg(long, allow_negative_numbers = true)]
    pub z2: Option<f64>,
    /// Membrane-band mesh size (Å).
    #[arg(long = "hm")]
    pub h_m: Option<f64>,
    /// Coarse mesh size (Å); default 2*hm.
    #[arg(long = "hs")]
    pub h_s: Option<f64>,
    /// Box margins, comma-separated: x,y,z.
    #[arg(long, value_parser = parse_triple)]
    pub eta: Option<Triple>,
    /// Interception-rectangle margin (Å); default hm.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fail extraction unless at least this many pore components are found.
    #[arg(long)]
    pub expect_pores: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Triple(pub [f64; 3]);

fn parse_triple(s: &str) -> std::result::Result<Triple, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, found {:?}", s));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part.trim().parse::<f64>().map_err(|e| format!("{part:?}: {e}"))?;
    }
    Ok(Triple(out))
}

impl CommonArgs {
    fn to_config(&self) -> Result<PipelineConfig> {
        let flags = PipelineConfig {
            surface: self.surface.clone(),
            z1: self.z1,
            z2: self.z2,
            h_m: self.h_m,
            h_s: self.h_s,
            eta: self.eta.as_ref().map(|t| t.0),
            tau: self.tau,
            out: self.out.clone(),
            expect_pores: self.expect_pores,
        };
        match &self.config {
            Some(path) => Ok(PipelineConfig::from_file(path)?.merged_with(&flags)),
            None => Ok(flags),
        }
    }
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Tetrahedralizer .node file of the two-region mesh.
    #[arg(long)]
    pub node: PathBuf,
    /// Tetrahedralizer .ele file with region attributes (labels 1 and 2).
    #[arg(long)]
    pub ele: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SynthKindArg {
    Tube,
    Hourglass,
    TwoPore,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long, value_enum, default_value = "tube")]
    pub kind: SynthKindArg,
    #[arg(long, default_value_t = 2.0)]
    pub r_inner: f64,
    #[arg(long, default_value_t = 5.0)]
    pub r_outer: f64,
    #[arg(long, default_value_t = -15.0, allow_negative_numbers = true)]
    pub z_min: f64,
    #[arg(long, default_value_t = 15.0, allow_negative_numbers = true)]
    pub z_max: f64,
    #[arg(long, default_value_t = 64)]
    pub n_theta: u32,
    #[arg(long, default_value_t = 16)]
    pub n_rings: u32,
    /// Hourglass pore flare; r(z) = r_inner * (1 + slope * ((z-z_mid)/z_half)^2).
    #[arg(long, default_value_t = 0.8)]
    pub slope: f64,
    /// Two-pore centers, comma-separated: x1,y1,x2,y2.
    #[arg(long, value_parser = parse_centers, default_value = "-8,0,8,0", allow_hyphen_values = true)]
    pub centers: Centers,
    /// Output file (.off/.ply) or directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Surface format when --out is a directory.
    #[arg(long, default_value = "off")]
    pub format: SurfaceFormat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Centers(pub [[f64; 2]; 2]);

fn parse_centers(s: &str) -> std::result::Result<Centers, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected x1,y1,x2,y2, found {s:?}"));
    }
    let mut v = [0.0f64; 4];
    for (slot, part) in v.iter_mut().zip(parts) {
        *slot = part.trim().parse::<f64>().map_err(|e| format!("{part:?}: {e}"))?;
    }
    Ok(Centers([[v[0], v[1]], [v[2], v[3]]]))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(Error::io(dir))
}

fn out_dir(cfg_out: &Path) -> Result<PathBuf> {
    ensure_dir(cfg_out)?;
    Ok(cfg_out.to_path_buf())
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Cmd::Synth(args) => run_synth(args, cli.verbose),
        Cmd::BoxSurface(args) => run_box(args, cli.verbose),
        Cmd::Points(args) => run_points(args, cli.verbose),
        Cmd::Plc(args) => run_plc(args, cli.verbose),
        Cmd::Extract(args) => run_extract(args, cli.verbose, true),
        Cmd::Stats(args) => run_extract(args, cli.verbose, false),
        Cmd::Pipeline(args) => run_pipeline(args, cli.verbose),
    }
}

fn run_synth(args: SynthArgs, verbose: bool) -> Result<()> {
    let kind = match args.kind {
        SynthKindArg::Tube => SynthKind::Tube,
        SynthKindArg::Hourglass => SynthKind::Hourglass { slope: args.slope },
        SynthKindArg::TwoPore => SynthKind::TwoPore { centers: args.centers.0 },
    };
    let spec = SynthSpec {
        kind,
        r_inner: args.r_inner,
        r_outer: args.r_outer,
        z_min: args.z_min,
        z_max: args.z_max,
        n_theta: args.n_theta,
        n_rings: args.n_rings,
    };
    let mesh = make_surface(&spec)?;

    let default_name = match args.format {
        SurfaceFormat::Off => "synthetic.off",
        SurfaceFormat::Ply => "synthetic.ply",
    };
    let out = args.out.unwrap_or_else(|| PathBuf::from(default_name));
    let path = if SurfaceFormat::from_path(&out).is_some() {
        if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
            ensure_dir(parent)?;
        }
        out
    } else {
        ensure_dir(&out)?;
        out.join(default_name)
    };
    crate::io::write_surface(&mesh, &path, None)?;
    if verbose {
        println!(
            "synthetic surface: {} vertices, {} triangles, watertight={}",
            mesh.vertices().len(),
            mesh.triangles().len(),
            mesh.is_watertight()
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn run_box(args: CommonArgs, verbose: bool) -> Result<()> {
    let cfg = args.to_config()?.resolve()?;
    let prep = pipeline::prepare(&cfg)?;
    let dir = out_dir(&cfg.out)?;
    let path = dir.join("box_surface.off");
    crate::io::write_surface(&prep.box_surface, &path, None)?;
    if verbose {
        let layout = plan_box_grid(
            &prep.domain,
            &prep.slab,
            &prep.sizes,
        )?;
        println!(
            "box [{}, {}] x [{}, {}] x [{}, {}]",
            prep.domain.lx1, prep.domain.lx2, prep.domain.ly1, prep.domain.ly2, prep.domain.lz1,
            prep.domain.lz2
        );
        println!(
            "grid: {}x{} coarse columns, rows below/membrane/above = {}/{}/{}, \
             adjusted sizes h_x={:.4} h_y={:.4} h_membrane={:.4}",
            layout.cols_x,
            layout.cols_y,
            layout.rows_below,
            layout.rows_membrane,
            layout.rows_above,
            layout.h_x,
            layout.h_y,
            layout.h_membrane
        );
        println!("{} triangles, watertight={}", prep.box_surface.triangles().len(), prep.box_surface.is_watertight());
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn run_points(args: CommonArgs, verbose: bool) -> Result<()> {
    let cfg = args.to_config()?.resolve()?;
    let prep = pipeline::prepare(&cfg)?;
    let dir = out_dir(&cfg.out)?;
    let (node, json) = pipeline::write_points(&prep.points, &dir)?;
    if verbose {
        println!("selected {} bottom + {} top points", prep.points.bottom.len(), prep.points.top.len());
    }
    println!("wrote {}", node.display());
    println!("wrote {}", json.display());
    Ok(())
}

fn run_plc(args: CommonArgs, verbose: bool) -> Result<()> {
    let cfg = args.to_config()?.resolve()?;
    let prep = pipeline::prepare(&cfg)?;
    let dir = out_dir(&cfg.out)?;
    let doc = pipeline::build_plc(&prep)?;
    let path = dir.join("channel.poly");
    write_plc(&doc, &path)?;
    if verbose {
        println!(
            "plc: {} nodes ({} isolated membrane points), {} facets, {} region seeds",
            doc.nodes.len(),
            doc.nodes.len() - prep.protein.vertices().len() - prep.box_surface.vertices().len(),
            doc.facets.len(),
            doc.region_seeds.len()
        );
    }
    println!("wrote {}", path.display());
    println!("tetrahedralize with: tetgen {} {}", pipeline::tetgen_switches(verbose), path.display());
    Ok(())
}

fn run_extract(args: ExtractArgs, verbose: bool, write_meshes: bool) -> Result<()> {
    let cfg = args.common.to_config()?.resolve()?;
    let (protein, slab) = pipeline::load_protein(&cfg)?;
    let mesh = read_tet_mesh(&args.node, &args.ele)?;
    let out = pipeline::extract(&protein, &slab, &mesh, &cfg)?;
    let dir = out_dir(&cfg.out)?;
    write_outputs(&out, &dir, write_meshes, verbose)
}

fn write_outputs(
    out: &ionmesh_core::extract::Extraction,
    dir: &Path,
    write_meshes: bool,
    verbose: bool,
) -> Result<()> {
    if write_meshes {
        let base = dir.join("extracted.node");
        write_tet_mesh(&out.mesh, &base)?;
        println!("wrote {}", base.display());
        println!("wrote {}", dir.join("extracted.ele").display());
        let vtk = dir.join("extracted.vtk");
        write_vtk(&out.mesh, &vtk, "ion channel regions")?;
        println!("wrote {}", vtk.display());
    }
    let report_path = dir.join("report.json");
    write_report(&out.report, &report_path)?;
    println!("wrote {}", report_path.display());
    let r = &out.report;
    println!(
        "regions: protein {} / solvent {} / membrane {} tets; {} pore component(s)",
        r.protein.tets, r.solvent.tets, r.membrane.tets, r.pore_components
    );
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    if verbose {
        println!(
            "steps (s): rect {:.3}, band {:.3}, split {:.3}, classify {:.3}, outside {:.3}, census {:.3}",
            r.step_seconds[0],
            r.step_seconds[1],
            r.step_seconds[2],
            r.step_seconds[3],
            r.step_seconds[4],
            r.step_seconds[5]
        );
    }
    Ok(())
}

fn run_pipeline(args: CommonArgs, verbose: bool) -> Result<()> {
    let cfg = args.to_config()?.resolve()?;
    let prep = pipeline::prepare(&cfg)?;
    let dir = out_dir(&cfg.out)?;

    let box_path = dir.join("box_surface.off");
    crate::io::write_surface(&prep.box_surface, &box_path, None)?;
    println!("wrote {}", box_path.display());
    pipeline::write_points(&prep.points, &dir)?;

    let doc = pipeline::build_plc(&prep)?;
    let poly_path = dir.join("channel.poly");
    write_plc(&doc, &poly_path)?;
    println!("wrote {}", poly_path.display());

    let Some(bin) = std::env::var_os(pipeline::TETGEN_BIN_ENV) else {
        println!(
            "{} not set; stopping after PLC assembly.\n\
             Tetrahedralize with: tetgen {} {}\n\
             then run: ionmesh extract --node {} --ele {} ...",
            pipeline::TETGEN_BIN_ENV,
            pipeline::tetgen_switches(verbose),
            poly_path.display(),
            poly_path.with_extension("1.node").display(),
            poly_path.with_extension("1.ele").display(),
        );
        return Ok(());
    };

    let bin = bin.to_string_lossy().to_string();
    let (node, ele) = pipeline::run_tetgen(&bin, &poly_path, verbose)?;
    println!("tetrahedralized: {} / {}", node.display(), ele.display());
    let mesh = read_tet_mesh(&node, &ele)?;
    if verbose {
        println!(
            "two-region mesh: {} vertices, {} tets ({} protein / {} solvent)",
            mesh.vertices().len(),
            mesh.tets().len(),
            mesh.count_label(RegionLabel::Protein),
            mesh.count_label(RegionLabel::Solvent)
        );
        let comps = surface_connected_components(&prep.protein).len();
        println!("protein surface components: {comps}");
    }
    let out = pipeline::extract(&prep.protein, &prep.slab, &mesh, &cfg)?;
    write_outputs(&out, &dir, true, verbose)
}
