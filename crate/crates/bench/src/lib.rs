//! Shared inputs for the criterion benchmarks.

use cfwb_core::analysis::synthetic_mosaics;
use cfwb_core::{CfaImage, Phase, SceneParams};

/// A tinted 12-bit RGGB scene of side `size`, fixed seed.
pub fn tinted_mosaic(size: usize) -> CfaImage {
    let params = SceneParams {
        tint: [1.8, 1.0, 0.7],
        ..SceneParams::default()
    };
    synthetic_mosaics(&params, [11], size, 12, Phase::Rggb)
        .expect("valid scene parameters")
        .remove(0)
}
