//! Lossless white balance for Bayer mosaics and the compression pipelines
//! used to measure its effect.
//!
//! The white balance is three integer scalar lifts per 2x2 quad, so it is an
//! exact bijection on integer samples and can sit in front of any lossless
//! coder. The crate provides the mosaic data model, the lifts, a reversible
//! LeGall 5/3 wavelet, level-1 subband decorrelation, a Rice-coded container
//! and an analysis harness.

pub mod analysis;
pub mod cfa;
pub mod codec;
pub mod decorrelate;
pub mod error;
pub mod lifting;
pub mod wavelet;
pub mod white_balance;

pub use cfa::{
    cfa_sample, demux, load_pgm, remux, save_pgm, synth_scene, CfaImage, Channel, ColorImage,
    Phase, Plane, QuadPlanes, SceneParams,
};
pub use codec::{decode_container, encode_container, ContainerHeader, WbSide};
pub use decorrelate::PipelineMode;
pub use error::{Error, Result};
pub use lifting::{forward_scalar_lift, inverse_scalar_lift, ScalarGain};
pub use wavelet::{SubbandPyramid, DEFAULT_LEVELS};
pub use white_balance::{
    estimate_gray_world, solve_lifting_coeffs, wb_forward, wb_inverse, IlluminantColor,
    LiftingCoeffs, WbStructure,
};
