//! Optional end-to-end smoke test against a real external tetrahedralizer.
//! Runs only when TETGEN_BIN points at a TetGen 1.5 executable; otherwise it
//! reports itself as skipped and passes.

use ionmesh::config::PipelineConfig;
use ionmesh::io::tetgen::{read_tet_mesh, write_plc};
use ionmesh::pipeline;
use ionmesh_core::synth::{make_tube, SynthSpec};
use ionmesh_core::RegionLabel;

#[test]
fn external_tetgen_accepts_the_plc() {
    let Some(bin) = std::env::var_os(pipeline::TETGEN_BIN_ENV) else {
        println!("skipped: {} not set", pipeline::TETGEN_BIN_ENV);
        return;
    };
    let bin = bin.to_string_lossy().to_string();

    let dir = tempfile::tempdir().unwrap();
    let spec = SynthSpec::tube(2.0, 5.0, -15.0, 15.0, 32, 8);
    let surface = make_tube(&spec).unwrap();
    let off = dir.path().join("tube.off");
    ionmesh::io::off::write_off(&surface, &off).unwrap();

    let cfg = PipelineConfig {
        surface: Some(off),
        z1: Some(-12.0),
        z2: Some(12.0),
        h_m: Some(1.5),
        eta: Some([8.0, 8.0, 8.0]),
        out: Some(dir.path().to_path_buf()),
        ..Default::default()
    }
    .resolve()
    .unwrap();

    let prep = pipeline::prepare(&cfg).unwrap();
    let doc = pipeline::build_plc(&prep).unwrap();
    let poly = dir.path().join("channel.poly");
    write_plc(&doc, &poly).unwrap();

    let (node, ele) = pipeline::run_tetgen(&bin, &poly, false).expect("tetgen run");
    let mesh = read_tet_mesh(&node, &ele).expect("tetgen output parses");
    assert!(mesh.count_label(RegionLabel::Protein) > 0, "protein region seeded");
    assert!(mesh.count_label(RegionLabel::Solvent) > 0, "solvent region seeded");

    let out = pipeline::extract(&prep.protein, &prep.slab, &mesh, &cfg).expect("extraction");
    assert!(out.report.membrane.tets > 0);
    assert_eq!(out.report.pore_components, 1);
    println!(
        "tetgen end-to-end: {} tets -> protein {} / solvent {} / membrane {}",
        mesh.tets().len(),
        out.report.protein.tets,
        out.report.solvent.tets,
        out.report.membrane.tets
    );
}
