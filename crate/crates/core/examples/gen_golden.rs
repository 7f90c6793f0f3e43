//! Writes the container conformance fixtures. The committed files are the
//! reference; rerun this only when the container version changes.
//!
//! ```text
//! cargo run -p cfwb-core --example gen_golden -- crates/core/tests/fixtures
//! ```

use std::path::PathBuf;

use cfwb_core::analysis::synthetic_mosaics;
use cfwb_core::codec::{encode_container, WbSide};
use cfwb_core::white_balance::gray_world_coeffs;
use cfwb_core::{save_pgm, Phase, PipelineMode, SceneParams, WbStructure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let params = SceneParams {
        tint: [1.8, 1.0, 0.7],
        ..SceneParams::default()
    };
    let img = synthetic_mosaics(&params, [42], 32, 12, Phase::Grbg)?.remove(0);
    let structure = WbStructure::Pyramid;
    let coeffs = gray_world_coeffs(&img, structure)?;
    let cfl = encode_container(
        &img,
        PipelineMode::CamraS,
        3,
        Some(WbSide { coeffs, structure }),
    )?;
    std::fs::write(dir.join("golden.pgm"), save_pgm(&img)?)?;
    std::fs::write(dir.join("golden.cfl"), &cfl)?;
    println!(
        "wrote {} byte container, s={} t={} q={}",
        cfl.len(),
        coeffs.s,
        coeffs.t,
        coeffs.q
    );
    Ok(())
}
