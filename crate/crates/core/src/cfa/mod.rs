//! Bayer mosaics, full-color frames and the channel split between them.
//!
//! Every algorithm downstream works in RGGB indexing. The mosaic keeps its
//! native [`Phase`]; [`demux`] and [`remux`] do the remapping at the quad
//! boundary, so `g1` is always the green that shares a row with red and `g2`
//! the green that shares a row with blue.

mod pgm;
mod scene;

pub use pgm::{load_pgm, save_pgm};
pub use scene::{synth_scene, SceneParams};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Position of the red filter inside the 2x2 Bayer quad.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Phase {
    #[default]
    Rggb,
    Grbg,
    Gbrg,
    Bggr,
}

/// One of the four sample sites of a Bayer quad, in RGGB order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    R,
    G1,
    G2,
    B,
}

impl Channel {
    pub const ALL: [Channel; 4] = [Channel::R, Channel::G1, Channel::G2, Channel::B];

    /// Offset of this site within an RGGB quad.
    fn rggb_offset(self) -> (usize, usize) {
        match self {
            Channel::R => (0, 0),
            Channel::G1 => (0, 1),
            Channel::G2 => (1, 0),
            Channel::B => (1, 1),
        }
    }

    fn from_rggb_offset(di: usize, dj: usize) -> Channel {
        match (di & 1, dj & 1) {
            (0, 0) => Channel::R,
            (0, 1) => Channel::G1,
            (1, 0) => Channel::G2,
            _ => Channel::B,
        }
    }
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::Rggb, Phase::Grbg, Phase::Gbrg, Phase::Bggr];

    /// Row and column parity of the red site.
    pub fn red_offset(self) -> (usize, usize) {
        match self {
            Phase::Rggb => (0, 0),
            Phase::Grbg => (0, 1),
            Phase::Gbrg => (1, 0),
            Phase::Bggr => (1, 1),
        }
    }

    /// Offset of `channel` inside a quad of this phase.
    pub fn offset(self, channel: Channel) -> (usize, usize) {
        let (ri, rj) = self.red_offset();
        let (ci, cj) = channel.rggb_offset();
        (ci ^ ri, cj ^ rj)
    }

    /// Channel recorded at mosaic pixel `(i, j)`.
    pub fn channel_at(self, i: usize, j: usize) -> Channel {
        let (ri, rj) = self.red_offset();
        Channel::from_rggb_offset(i ^ ri, j ^ rj)
    }

    pub fn code(self) -> u8 {
        match self {
            Phase::Rggb => 0,
            Phase::Grbg => 1,
            Phase::Gbrg => 2,
            Phase::Bggr => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Phase> {
        Phase::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Phase::Rggb => "rggb",
            Phase::Grbg => "grbg",
            Phase::Gbrg => "gbrg",
            Phase::Bggr => "bggr",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rggb" => Ok(Phase::Rggb),
            "grbg" => Ok(Phase::Grbg),
            "gbrg" => Ok(Phase::Gbrg),
            "bggr" => Ok(Phase::Bggr),
            other => Err(Error::Geometry(format!("unknown CFA phase {other:?}"))),
        }
    }
}

/// Row-major integer plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<i32>,
}

impl Plane {
    pub fn new(width: usize, height: usize) -> Self {
        Plane {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<i32>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::geometry(format!(
                "plane {width}x{height} needs {} samples, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Plane {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: i32) -> Self {
        Plane {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.data[i * self.width + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i32) {
        self.data[i * self.width + j] = v;
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn same_shape(&self, other: &Plane) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn mean_abs(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.data.iter().map(|&v| (v as f64).abs()).sum::<f64>() / self.data.len() as f64
    }

    pub fn max_abs(&self) -> i64 {
        self.data
            .iter()
            .map(|&v| (v as i64).abs())
            .max()
            .unwrap_or(0)
    }
}

/// Single-plane Bayer mosaic. Dimensions are even; transforms that need
/// more room (the wavelet pipelines) check their own minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfaImage {
    pub width: usize,
    pub height: usize,
    pub bit_depth: u8,
    pub phase: Phase,
    pub samples: Vec<i32>,
}

impl CfaImage {
    /// Checks geometry and bit depth; sample range is not checked since
    /// transformed mosaics legitimately leave `[0, 2^bit_depth)`.
    pub fn new(
        width: usize,
        height: usize,
        bit_depth: u8,
        phase: Phase,
        samples: Vec<i32>,
    ) -> Result<Self> {
        check_mosaic_geometry(width, height)?;
        if !(8..=16).contains(&bit_depth) {
            return Err(Error::geometry(format!(
                "bit depth {bit_depth} outside 8..=16"
            )));
        }
        if samples.len() != width * height {
            return Err(Error::geometry(format!(
                "{width}x{height} mosaic needs {} samples, got {}",
                width * height,
                samples.len()
            )));
        }
        Ok(CfaImage {
            width,
            height,
            bit_depth,
            phase,
            samples,
        })
    }

    pub fn max_value(&self) -> i32 {
        (1i32 << self.bit_depth) - 1
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.samples[i * self.width + j]
    }

    /// True when every sample lies in `[0, 2^bit_depth - 1]`.
    pub fn in_range(&self) -> bool {
        let max = self.max_value();
        self.samples.iter().all(|&v| (0..=max).contains(&v))
    }

    pub fn as_plane(&self) -> Plane {
        Plane {
            width: self.width,
            height: self.height,
            data: self.samples.clone(),
        }
    }

    pub fn with_samples(&self, samples: Vec<i32>) -> CfaImage {
        debug_assert_eq!(samples.len(), self.samples.len());
        CfaImage {
            samples,
            ..self.clone()
        }
    }
}

pub(crate) fn check_mosaic_geometry(width: usize, height: usize) -> Result<()> {
    if !width.is_multiple_of(2) || !height.is_multiple_of(2) {
        return Err(Error::geometry(format!(
            "mosaic dimensions {width}x{height} must be even"
        )));
    }
    if width == 0 || height == 0 {
        return Err(Error::geometry("empty mosaic"));
    }
    Ok(())
}

/// Real-valued three-channel frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    pub width: usize,
    pub height: usize,
    pub r: Vec<f64>,
    pub g: Vec<f64>,
    pub b: Vec<f64>,
}

impl ColorImage {
    pub fn new(width: usize, height: usize, r: Vec<f64>, g: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let n = width * height;
        if r.len() != n || g.len() != n || b.len() != n {
            return Err(Error::geometry("color planes must share geometry"));
        }
        if r.iter().chain(&g).chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::geometry("color planes must be finite"));
        }
        Ok(ColorImage {
            width,
            height,
            r,
            g,
            b,
        })
    }

    /// Constant-color frame.
    pub fn uniform(width: usize, height: usize, rgb: [f64; 3]) -> Self {
        let n = width * height;
        ColorImage {
            width,
            height,
            r: vec![rgb[0]; n],
            g: vec![rgb[1]; n],
            b: vec![rgb[2]; n],
        }
    }

    /// Value of the channel a Bayer site of kind `channel` observes.
    #[inline]
    pub fn channel_value(&self, channel: Channel, idx: usize) -> f64 {
        match channel {
            Channel::R => self.r[idx],
            Channel::G1 | Channel::G2 => self.g[idx],
            Channel::B => self.b[idx],
        }
    }
}

/// The four quarter-resolution channel planes of a mosaic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadPlanes {
    pub r: Plane,
    pub g1: Plane,
    pub g2: Plane,
    pub b: Plane,
    pub bit_depth: u8,
    pub phase: Phase,
}

impl QuadPlanes {
    pub fn plane(&self, channel: Channel) -> &Plane {
        match channel {
            Channel::R => &self.r,
            Channel::G1 => &self.g1,
            Channel::G2 => &self.g2,
            Channel::B => &self.b,
        }
    }

    pub fn plane_mut(&mut self, channel: Channel) -> &mut Plane {
        match channel {
            Channel::R => &mut self.r,
            Channel::G1 => &mut self.g1,
            Channel::G2 => &mut self.g2,
            Channel::B => &mut self.b,
        }
    }

    pub fn planes(&self) -> [&Plane; 4] {
        [&self.r, &self.g1, &self.g2, &self.b]
    }
}

/// Splits a mosaic into its four channel planes.
pub fn demux(img: &CfaImage) -> Result<QuadPlanes> {
    check_mosaic_geometry(img.width, img.height)?;
    let (qw, qh) = (img.width / 2, img.height / 2);
    let mut out = QuadPlanes {
        r: Plane::new(qw, qh),
        g1: Plane::new(qw, qh),
        g2: Plane::new(qw, qh),
        b: Plane::new(qw, qh),
        bit_depth: img.bit_depth,
        phase: img.phase,
    };
    for ch in Channel::ALL {
        let (di, dj) = img.phase.offset(ch);
        let plane = out.plane_mut(ch);
        for i in 0..qh {
            let row = &img.samples[(2 * i + di) * img.width..][..img.width];
            for j in 0..qw {
                plane.data[i * qw + j] = row[2 * j + dj];
            }
        }
    }
    Ok(out)
}

/// Interleaves four channel planes back into a mosaic.
pub fn remux(q: &QuadPlanes) -> Result<CfaImage> {
    let (qw, qh) = (q.r.width, q.r.height);
    if q.planes().iter().any(|p| p.width != qw || p.height != qh) {
        return Err(Error::geometry("quad planes must share geometry"));
    }
    let (w, h) = (2 * qw, 2 * qh);
    check_mosaic_geometry(w, h)?;
    let mut samples = vec![0i32; w * h];
    for ch in Channel::ALL {
        let (di, dj) = q.phase.offset(ch);
        let plane = q.plane(ch);
        for i in 0..qh {
            for j in 0..qw {
                samples[(2 * i + di) * w + 2 * j + dj] = plane.data[i * qw + j];
            }
        }
    }
    CfaImage::new(w, h, q.bit_depth, q.phase, samples)
}

/// Samples a color frame through the Bayer lattice, rounding to the nearest
/// integer and clamping to `[0, 2^bit_depth - 1]`.
pub fn cfa_sample(c: &ColorImage, phase: Phase, bit_depth: u8) -> Result<CfaImage> {
    check_mosaic_geometry(c.width, c.height)?;
    let max = ((1u32 << bit_depth) - 1) as f64;
    let samples = cfa_sample_real(c, phase)
        .into_iter()
        .map(|v| v.round().clamp(0.0, max) as i32)
        .collect();
    CfaImage::new(c.width, c.height, bit_depth, phase, samples)
}

/// Pre-rounding mosaic values `c(i,j)^T y(i,j)`.
pub fn cfa_sample_real(c: &ColorImage, phase: Phase) -> Vec<f64> {
    let mut out = Vec::with_capacity(c.width * c.height);
    for i in 0..c.height {
        for j in 0..c.width {
            out.push(c.channel_value(phase.channel_at(i, j), i * c.width + j));
        }
    }
    out
}
