//! Decorrelation of the first-level `LH`/`HL` subbands of a mosaic pyramid.
//!
//! On a Bayer mosaic both bands carry the same modulated chrominance, offset
//! by half a pixel. CAMRA-A takes their plain S-transform; CAMRA-S first
//! predicts `LH` from a shifted average of `HL`, then updates `HL` from the
//! residual, in lifting form:
//!
//! ```text
//! u = LH - floor(S1(HL))      S1: 2x2 mean over rows {i, i+1}, cols {j-1, j}
//! v = HL + floor(S2(u))       S2: 2x2 sum / 16 over rows {i-1, i}, cols {j, j+1}
//! ```

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::cfa::Plane;
use crate::error::{Error, Result};
use crate::wavelet::SubbandPyramid;

/// Coding pipelines understood by the container.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PipelineMode {
    /// Predictive coding of the mosaic as one plane.
    Direct,
    /// Predictive coding of the four channel planes.
    Demux,
    /// Wavelet pyramid of the mosaic.
    Mallat,
    /// Pyramid plus S-transform of level-1 `LH`/`HL`.
    CamraA,
    /// Pyramid plus the lifting shift transform of level-1 `LH`/`HL`.
    CamraS,
}

impl PipelineMode {
    pub const ALL: [PipelineMode; 5] = [
        PipelineMode::Direct,
        PipelineMode::Demux,
        PipelineMode::Mallat,
        PipelineMode::CamraA,
        PipelineMode::CamraS,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(c: u8) -> Option<Self> {
        Self::ALL.get(c as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            PipelineMode::Direct => "direct",
            PipelineMode::Demux => "demux",
            PipelineMode::Mallat => "mallat",
            PipelineMode::CamraA => "camra-a",
            PipelineMode::CamraS => "camra-s",
        }
    }

    /// Whether the pipeline goes through a wavelet pyramid.
    pub fn uses_pyramid(self) -> bool {
        matches!(
            self,
            PipelineMode::Mallat | PipelineMode::CamraA | PipelineMode::CamraS
        )
    }
}

impl fmt::Display for PipelineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PipelineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "direct" => Ok(PipelineMode::Direct),
            "demux" => Ok(PipelineMode::Demux),
            "mallat" => Ok(PipelineMode::Mallat),
            "camra-a" => Ok(PipelineMode::CamraA),
            "camra-s" => Ok(PipelineMode::CamraS),
            _ => Err(Error::UnknownMode(s.to_string())),
        }
    }
}

fn check_pair(a: &Plane, b: &Plane) -> Result<()> {
    if a.same_shape(b) && a.data.len() == a.width * a.height {
        Ok(())
    } else {
        Err(Error::geometry(format!(
            "subband pair differs in shape: {}x{} vs {}x{}",
            a.width, a.height, b.width, b.height
        )))
    }
}

fn zip_map(a: &Plane, b: &Plane, f: impl Fn(i32, i32) -> (i32, i32) + Sync) -> (Plane, Plane) {
    let (x, y): (Vec<i32>, Vec<i32>) = a
        .data
        .par_iter()
        .zip(&b.data)
        .map(|(&p, &q)| f(p, q))
        .unzip();
    (
        Plane {
            width: a.width,
            height: a.height,
            data: x,
        },
        Plane {
            width: a.width,
            height: a.height,
            data: y,
        },
    )
}

/// `r = lh - hl`, `s = floor((lh + hl) / 2)`.
pub fn camra_a_forward(lh: &Plane, hl: &Plane) -> Result<(Plane, Plane)> {
    check_pair(lh, hl)?;
    Ok(zip_map(lh, hl, |a, b| (a - b, (a + b) >> 1)))
}

/// `hl = s - floor(r / 2)`, `lh = r + hl`.
pub fn camra_a_inverse(r: &Plane, s: &Plane) -> Result<(Plane, Plane)> {
    check_pair(r, s)?;
    let (lh, hl) = zip_map(r, s, |r, s| {
        let b = s - (r >> 1);
        (r + b, b)
    });
    Ok((lh, hl))
}

/// Whole-sample symmetric index into `0..n`, for offsets of at most one.
#[inline]
fn mirror(k: isize, n: usize) -> usize {
    if n == 1 {
        0
    } else if k < 0 {
        (-k) as usize
    } else if k as usize >= n {
        2 * (n - 1) - k as usize
    } else {
        k as usize
    }
}

/// Sum of `p` over rows `i + di` and columns `j + dj` for the given offsets.
#[inline]
fn window_sum(p: &Plane, i: usize, j: usize, rows: [isize; 2], cols: [isize; 2]) -> i64 {
    let mut acc = 0i64;
    for di in rows {
        let ii = mirror(i as isize + di, p.height);
        for dj in cols {
            let jj = mirror(j as isize + dj, p.width);
            acc += p.data[ii * p.width + jj] as i64;
        }
    }
    acc
}

/// `floor(S1(p))(i, j)`.
#[inline]
fn s1(p: &Plane, i: usize, j: usize) -> i32 {
    window_sum(p, i, j, [0, 1], [-1, 0]).div_euclid(4) as i32
}

/// `floor(S2(p))(i, j)`.
#[inline]
fn s2(p: &Plane, i: usize, j: usize) -> i32 {
    window_sum(p, i, j, [-1, 0], [0, 1]).div_euclid(16) as i32
}

/// `out = base + sign * filt(src)` pointwise, rows in parallel.
fn lift(base: &Plane, src: &Plane, sign: i32, filt: fn(&Plane, usize, usize) -> i32) -> Plane {
    let w = base.width;
    let mut data = vec![0; base.data.len()];
    data.par_chunks_mut(w).enumerate().for_each(|(i, row)| {
        for (j, out) in row.iter_mut().enumerate() {
            *out = base.data[i * w + j] + sign * filt(src, i, j);
        }
    });
    Plane {
        width: w,
        height: base.height,
        data,
    }
}

pub fn camra_s_forward(lh: &Plane, hl: &Plane) -> Result<(Plane, Plane)> {
    check_pair(lh, hl)?;
    let u = lift(lh, hl, -1, s1);
    let v = lift(hl, &u, 1, s2);
    Ok((u, v))
}

pub fn camra_s_inverse(u: &Plane, v: &Plane) -> Result<(Plane, Plane)> {
    check_pair(u, v)?;
    let hl = lift(v, u, -1, s2);
    let lh = lift(u, &hl, 1, s1);
    Ok((lh, hl))
}

fn level1_pair(pyr: &mut SubbandPyramid) -> Result<(&mut Plane, &mut Plane)> {
    let d = pyr
        .details
        .first_mut()
        .ok_or_else(|| Error::Unsupported("pyramid has no level-1 subbands".into()))?;
    Ok((&mut d.lh, &mut d.hl))
}

/// Replaces level-1 `(LH, HL)` by the decorrelated pair `(first, second)`.
/// `Mallat` passes the pyramid through.
pub fn apply_pipeline(pyr: &SubbandPyramid, mode: PipelineMode) -> Result<SubbandPyramid> {
    let mut out = pyr.clone();
    let (lh, hl) = level1_pair(&mut out)?;
    let (first, second) = match mode {
        PipelineMode::Mallat => return Ok(out),
        PipelineMode::CamraA => camra_a_forward(lh, hl)?,
        PipelineMode::CamraS => camra_s_forward(lh, hl)?,
        other => {
            return Err(Error::Unsupported(format!(
                "pipeline {other} does not operate on a pyramid"
            )))
        }
    };
    *lh = first;
    *hl = second;
    Ok(out)
}

pub fn undo_pipeline(pyr: &SubbandPyramid, mode: PipelineMode) -> Result<SubbandPyramid> {
    let mut out = pyr.clone();
    let (first, second) = level1_pair(&mut out)?;
    let (lh, hl) = match mode {
        PipelineMode::Mallat => return Ok(out),
        PipelineMode::CamraA => camra_a_inverse(first, second)?,
        PipelineMode::CamraS => camra_s_inverse(first, second)?,
        other => {
            return Err(Error::Unsupported(format!(
                "pipeline {other} does not operate on a pyramid"
            )))
        }
    };
    *first = lh;
    *second = hl;
    Ok(out)
}
