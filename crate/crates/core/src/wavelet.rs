//! Reversible integer LeGall 5/3 wavelet, 1D and separable 2D.
//!
//! ```text
//! d(n) = x(2n+1) - floor((x(2n) + x(2n+2)) / 2)
//! a(n) = x(2n)   + floor((d(n-1) + d(n) + 2) / 4)
//! ```
//!
//! Boundaries use whole-sample symmetric extension. Odd lengths give the
//! extra sample to the approximation band. Subband names follow JPEG2000:
//! `HL` is horizontally highpass / vertically lowpass, `LH` the reverse.

use rayon::prelude::*;

use crate::cfa::{check_mosaic_geometry, CfaImage, Phase, Plane};
use crate::error::{Error, Result};

/// Levels used when the caller does not choose.
pub const DEFAULT_LEVELS: u8 = 5;

#[inline]
fn ext_get(x: &[i32], k: usize) -> i32 {
    // only ever asked for one step past the end
    if k < x.len() {
        x[k]
    } else {
        x[x.len() - 2]
    }
}

fn forward_into(x: &[i32], approx: &mut [i32], detail: &mut [i32]) {
    let nd = detail.len();
    for (n, d) in detail.iter_mut().enumerate() {
        *d = x[2 * n + 1] - ((x[2 * n] + ext_get(x, 2 * n + 2)) >> 1);
    }
    for (n, a) in approx.iter_mut().enumerate() {
        let left = detail[n.saturating_sub(1)];
        let right = detail[n.min(nd - 1)];
        *a = x[2 * n] + ((left + right + 2) >> 2);
    }
}

fn inverse_into(approx: &[i32], detail: &[i32], x: &mut [i32]) {
    let nd = detail.len();
    for (n, &a) in approx.iter().enumerate() {
        let left = detail[n.saturating_sub(1)];
        let right = detail[n.min(nd - 1)];
        x[2 * n] = a - ((left + right + 2) >> 2);
    }
    for (n, &d) in detail.iter().enumerate() {
        let next = if 2 * n + 2 < x.len() {
            x[2 * n + 2]
        } else {
            x[x.len() - 2]
        };
        x[2 * n + 1] = d + ((x[2 * n] + next) >> 1);
    }
}

/// Splits `signal` into `(approx, detail)` of lengths `ceil(n/2)`, `floor(n/2)`.
pub fn legall53_forward_1d(signal: &[i32]) -> Result<(Vec<i32>, Vec<i32>)> {
    let n = signal.len();
    if n < 2 {
        return Err(Error::geometry(format!(
            "1D transform needs >= 2 samples, got {n}"
        )));
    }
    let mut a = vec![0; n.div_ceil(2)];
    let mut d = vec![0; n / 2];
    forward_into(signal, &mut a, &mut d);
    Ok((a, d))
}

pub fn legall53_inverse_1d(approx: &[i32], detail: &[i32]) -> Result<Vec<i32>> {
    let (na, nd) = (approx.len(), detail.len());
    if nd == 0 || !(na == nd || na == nd + 1) {
        return Err(Error::geometry(format!(
            "inconsistent band lengths: approx {na}, detail {nd}"
        )));
    }
    let mut x = vec![0; na + nd];
    inverse_into(approx, detail, &mut x);
    Ok(x)
}

/// In-place one-level transform of every row of a `w`-wide block stored with
/// row stride `stride`: `[approx | detail]` afterwards.
fn rows_forward(data: &mut [i32], stride: usize, w: usize, h: usize) {
    let wa = w.div_ceil(2);
    data.par_chunks_mut(stride).take(h).for_each_init(
        || vec![0; w],
        |buf, row| {
            buf.copy_from_slice(&row[..w]);
            let (a, d) = row[..w].split_at_mut(wa);
            forward_into(buf, a, d);
        },
    );
}

fn rows_inverse(data: &mut [i32], stride: usize, w: usize, h: usize) {
    let wa = w.div_ceil(2);
    data.par_chunks_mut(stride).take(h).for_each_init(
        || vec![0; w],
        |buf, row| {
            inverse_into(&row[..wa], &row[wa..w], buf);
            row[..w].copy_from_slice(buf);
        },
    );
}

fn transpose(data: &[i32], stride: usize, w: usize, h: usize) -> Vec<i32> {
    let mut t = vec![0; w * h];
    for i in 0..h {
        for j in 0..w {
            t[j * h + i] = data[i * stride + j];
        }
    }
    t
}

fn untranspose(t: &[i32], data: &mut [i32], stride: usize, w: usize, h: usize) {
    for i in 0..h {
        for j in 0..w {
            data[i * stride + j] = t[j * h + i];
        }
    }
}

fn level_forward(data: &mut [i32], stride: usize, w: usize, h: usize) {
    rows_forward(data, stride, w, h);
    let mut t = transpose(data, stride, w, h);
    rows_forward(&mut t, h, h, w);
    untranspose(&t, data, stride, w, h);
}

fn level_inverse(data: &mut [i32], stride: usize, w: usize, h: usize) {
    let mut t = transpose(data, stride, w, h);
    rows_inverse(&mut t, h, h, w);
    untranspose(&t, data, stride, w, h);
    rows_inverse(data, stride, w, h);
}

/// Subband kind within one decomposition level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Band {
    LL,
    HL,
    LH,
    HH,
}

impl Band {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(c: u8) -> Option<Band> {
        [Band::LL, Band::HL, Band::LH, Band::HH]
            .get(c as usize)
            .copied()
    }
}

/// Identifies a subband; level 1 is the finest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BandId {
    pub level: u8,
    pub band: Band,
}

/// Detail subbands of one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetailBands {
    pub hl: Plane,
    pub lh: Plane,
    pub hh: Plane,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubbandPyramid {
    pub width: usize,
    pub height: usize,
    pub bit_depth: u8,
    /// CFA phase of the source; irrelevant for plain planes.
    pub phase: Phase,
    /// `details[0]` is level 1.
    pub details: Vec<DetailBands>,
    pub ll: Plane,
}

/// Largest level count the geometry supports.
pub fn max_levels(width: usize, height: usize) -> u8 {
    let m = width.min(height).max(1);
    (usize::BITS - 1 - m.leading_zeros()) as u8
}

/// `requested` reduced to what `width x height` allows.
pub fn clamp_levels(requested: u8, width: usize, height: usize) -> u8 {
    requested.min(max_levels(width, height))
}

fn check_levels(width: usize, height: usize, levels: u8) -> Result<()> {
    if levels == 0 {
        return Err(Error::geometry("at least one level is required"));
    }
    if levels > max_levels(width, height) {
        return Err(Error::geometry(format!(
            "{levels} levels need both dimensions >= {}, got {width}x{height}",
            1usize << levels
        )));
    }
    Ok(())
}

impl SubbandPyramid {
    pub fn levels(&self) -> u8 {
        self.details.len() as u8
    }

    /// Subband ids and shapes for a geometry, in stream order: the LL band,
    /// then HL, LH, HH from the coarsest level down to level 1.
    pub fn layout(width: usize, height: usize, levels: u8) -> Result<Vec<(BandId, usize, usize)>> {
        check_levels(width, height, levels)?;
        let mut dims = Vec::with_capacity(levels as usize);
        let (mut w, mut h) = (width, height);
        for _ in 0..levels {
            dims.push((w, h));
            w = w.div_ceil(2);
            h = h.div_ceil(2);
        }
        let mut out = vec![(
            BandId {
                level: levels,
                band: Band::LL,
            },
            w,
            h,
        )];
        for level in (1..=levels).rev() {
            let (w, h) = dims[level as usize - 1];
            let (wa, wd, ha, hd) = (w.div_ceil(2), w / 2, h.div_ceil(2), h / 2);
            out.push((
                BandId {
                    level,
                    band: Band::HL,
                },
                wd,
                ha,
            ));
            out.push((
                BandId {
                    level,
                    band: Band::LH,
                },
                wa,
                hd,
            ));
            out.push((
                BandId {
                    level,
                    band: Band::HH,
                },
                wd,
                hd,
            ));
        }
        Ok(out)
    }

    pub fn band(&self, id: BandId) -> Option<&Plane> {
        if id.band == Band::LL {
            return (id.level == self.levels()).then_some(&self.ll);
        }
        let d = self.details.get((id.level as usize).checked_sub(1)?)?;
        Some(match id.band {
            Band::HL => &d.hl,
            Band::LH => &d.lh,
            _ => &d.hh,
        })
    }

    /// All subbands in [`SubbandPyramid::layout`] order.
    pub fn bands(&self) -> Vec<(BandId, &Plane)> {
        let levels = self.levels();
        let mut out = vec![(
            BandId {
                level: levels,
                band: Band::LL,
            },
            &self.ll,
        )];
        for level in (1..=levels).rev() {
            let d = &self.details[level as usize - 1];
            out.push((
                BandId {
                    level,
                    band: Band::HL,
                },
                &d.hl,
            ));
            out.push((
                BandId {
                    level,
                    band: Band::LH,
                },
                &d.lh,
            ));
            out.push((
                BandId {
                    level,
                    band: Band::HH,
                },
                &d.hh,
            ));
        }
        out
    }

    /// Rebuilds a pyramid from planes given in [`SubbandPyramid::layout`] order.
    pub fn from_bands(
        width: usize,
        height: usize,
        bit_depth: u8,
        phase: Phase,
        levels: u8,
        planes: Vec<Plane>,
    ) -> Result<Self> {
        let layout = Self::layout(width, height, levels)?;
        if planes.len() != layout.len() {
            return Err(Error::geometry("wrong number of subbands"));
        }
        for ((_, w, h), p) in layout.iter().zip(&planes) {
            if (p.width, p.height) != (*w, *h) {
                return Err(Error::geometry("subband shape does not match layout"));
            }
        }
        let mut it = planes.into_iter();
        let ll = it.next().unwrap();
        let mut details = Vec::with_capacity(levels as usize);
        while let (Some(hl), Some(lh), Some(hh)) = (it.next(), it.next(), it.next()) {
            details.push(DetailBands { hl, lh, hh });
        }
        details.reverse();
        Ok(SubbandPyramid {
            width,
            height,
            bit_depth,
            phase,
            details,
            ll,
        })
    }

    pub fn coefficient_count(&self) -> usize {
        self.bands().iter().map(|(_, p)| p.len()).sum()
    }
}

fn copy_block(src: &[i32], stride: usize, i0: usize, j0: usize, w: usize, h: usize) -> Plane {
    let mut data = Vec::with_capacity(w * h);
    for i in 0..h {
        let start = (i0 + i) * stride + j0;
        data.extend_from_slice(&src[start..start + w]);
    }
    Plane {
        width: w,
        height: h,
        data,
    }
}

fn paste_block(dst: &mut [i32], stride: usize, i0: usize, j0: usize, p: &Plane) {
    for i in 0..p.height {
        let start = (i0 + i) * stride + j0;
        dst[start..start + p.width].copy_from_slice(&p.data[i * p.width..(i + 1) * p.width]);
    }
}

/// Multi-level separable transform: rows then columns, recursing on LL.
pub fn dwt2d_forward(plane: &Plane, levels: u8) -> Result<SubbandPyramid> {
    let (width, height) = (plane.width, plane.height);
    check_levels(width, height, levels)?;
    let mut buf = plane.data.clone();
    let mut details = Vec::with_capacity(levels as usize);
    let (mut w, mut h) = (width, height);
    for _ in 0..levels {
        level_forward(&mut buf, width, w, h);
        let (wa, ha) = (w.div_ceil(2), h.div_ceil(2));
        details.push(DetailBands {
            hl: copy_block(&buf, width, 0, wa, w / 2, ha),
            lh: copy_block(&buf, width, ha, 0, wa, h / 2),
            hh: copy_block(&buf, width, ha, wa, w / 2, h / 2),
        });
        w = wa;
        h = ha;
    }
    Ok(SubbandPyramid {
        width,
        height,
        bit_depth: 0,
        phase: Phase::default(),
        details,
        ll: copy_block(&buf, width, 0, 0, w, h),
    })
}

pub fn dwt2d_inverse(pyr: &SubbandPyramid) -> Result<Plane> {
    let (width, height) = (pyr.width, pyr.height);
    let levels = pyr.levels();
    let layout = SubbandPyramid::layout(width, height, levels)?;
    for (id, w, h) in &layout {
        let p = pyr
            .band(*id)
            .ok_or_else(|| Error::geometry("missing subband"))?;
        if (p.width, p.height) != (*w, *h) {
            return Err(Error::geometry("subband shape does not match geometry"));
        }
    }
    let mut buf = vec![0; width * height];
    paste_block(&mut buf, width, 0, 0, &pyr.ll);
    for level in (1..=levels).rev() {
        let shift = level as u32 - 1;
        // ceil-halving `shift` times
        let w = (width + (1 << shift) - 1) >> shift;
        let h = (height + (1 << shift) - 1) >> shift;
        let (wa, ha) = (w.div_ceil(2), h.div_ceil(2));
        let d = &pyr.details[level as usize - 1];
        paste_block(&mut buf, width, 0, wa, &d.hl);
        paste_block(&mut buf, width, ha, 0, &d.lh);
        paste_block(&mut buf, width, ha, wa, &d.hh);
        level_inverse(&mut buf, width, w, h);
    }
    Plane::from_vec(width, height, buf)
}

/// Transform of the mosaic itself, without separating the channels.
pub fn mallat_cfa_forward(img: &CfaImage, levels: u8) -> Result<SubbandPyramid> {
    check_mosaic_geometry(img.width, img.height)?;
    let mut pyr = dwt2d_forward(&img.as_plane(), levels)?;
    pyr.bit_depth = img.bit_depth;
    pyr.phase = img.phase;
    Ok(pyr)
}

pub fn mallat_cfa_inverse(pyr: &SubbandPyramid) -> Result<CfaImage> {
    let plane = dwt2d_inverse(pyr)?;
    CfaImage::new(
        plane.width,
        plane.height,
        pyr.bit_depth,
        pyr.phase,
        plane.data,
    )
}
