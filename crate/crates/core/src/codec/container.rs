//! The `.cfl` container: a fixed 43-byte header followed by one
//! length-prefixed Rice stream per plane or subband.
//!
//! ```text
//! header   "CFWB" | version u8 | width u32 | height u32 | bit_depth u8
//!          | phase u8 | pipeline u8 | levels u8 | wb_applied u8
//!          | wb_structure u8 | s u64 | t u64 | q u64
//! stream   id u8 | k0 u8 | count u32 | payload_len u32 | payload
//! ```
//!
//! Integers are little-endian; `s`, `t`, `q` are raw binary64 bit patterns.
//! Stream ids are `level << 2 | band` for pyramids, the channel index for
//! `demux` and zero for `direct`.

use rayon::prelude::*;

use super::predict::{med_reconstruct, med_residuals};
use super::rice::{rice_decode_adaptive, rice_encode_adaptive, rice_param_estimate, MAX_K};
use crate::cfa::{demux, remux, CfaImage, Channel, Phase, Plane, QuadPlanes};
use crate::decorrelate::{apply_pipeline, undo_pipeline, PipelineMode};
use crate::error::{Error, Result};
use crate::wavelet::{mallat_cfa_forward, mallat_cfa_inverse, BandId, SubbandPyramid};
use crate::white_balance::{wb_forward, wb_inverse, LiftingCoeffs, WbStructure};

pub const MAGIC: &[u8; 4] = b"CFWB";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 43;
const STREAM_HEADER_LEN: usize = 10;

/// White balance applied before the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WbSide {
    pub coeffs: LiftingCoeffs,
    pub structure: WbStructure,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContainerHeader {
    pub version: u8,
    pub width: u32,
    pub height: u32,
    pub bit_depth: u8,
    pub phase: Phase,
    pub pipeline: PipelineMode,
    /// Zero for the non-pyramid pipelines.
    pub levels: u8,
    pub wb: Option<WbSide>,
}

fn container_err(msg: impl Into<String>) -> Error {
    Error::Container(msg.into())
}

impl ContainerHeader {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(MAGIC);
        out[4] = self.version;
        out[5..9].copy_from_slice(&self.width.to_le_bytes());
        out[9..13].copy_from_slice(&self.height.to_le_bytes());
        out[13] = self.bit_depth;
        out[14] = self.phase.code();
        out[15] = self.pipeline.code();
        out[16] = self.levels;
        let (applied, structure, coeffs) = match self.wb {
            Some(wb) => (1, wb.structure, wb.coeffs),
            None => (0, WbStructure::Pyramid, LiftingCoeffs::IDENTITY),
        };
        out[17] = applied;
        out[18] = structure.code();
        for (k, bits) in coeffs.bit_patterns().into_iter().enumerate() {
            out[19 + 8 * k..27 + 8 * k].copy_from_slice(&bits.to_le_bytes());
        }
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(container_err("file shorter than the header"));
        }
        if &bytes[..4] != MAGIC {
            return Err(container_err("bad magic"));
        }
        if bytes[4] != VERSION {
            return Err(container_err(format!("unsupported version {}", bytes[4])));
        }
        let u32_at = |k: usize| u32::from_le_bytes(bytes[k..k + 4].try_into().unwrap());
        let u64_at = |k: usize| u64::from_le_bytes(bytes[k..k + 8].try_into().unwrap());
        let phase = Phase::from_code(bytes[14])
            .ok_or_else(|| container_err(format!("bad phase code {}", bytes[14])))?;
        let pipeline = PipelineMode::from_code(bytes[15])
            .ok_or_else(|| container_err(format!("bad pipeline code {}", bytes[15])))?;
        let structure = WbStructure::from_code(bytes[18])
            .ok_or_else(|| container_err(format!("bad WB structure code {}", bytes[18])))?;
        let wb = match bytes[17] {
            0 => None,
            1 => Some(WbSide {
                coeffs: LiftingCoeffs::from_bit_patterns([u64_at(19), u64_at(27), u64_at(35)])?,
                structure,
            }),
            other => return Err(container_err(format!("bad wb_applied flag {other}"))),
        };
        Ok(ContainerHeader {
            version: bytes[4],
            width: u32_at(5),
            height: u32_at(9),
            bit_depth: bytes[13],
            phase,
            pipeline,
            levels: bytes[16],
            wb,
        })
    }
}

/// One coded plane as stored in the container.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubbandStream {
    pub id: u8,
    pub k0: u8,
    pub count: u32,
    pub payload: Vec<u8>,
}

impl SubbandStream {
    fn encode(id: u8, values: &[i32]) -> Result<Self> {
        let k0 = rice_param_estimate(values);
        Ok(SubbandStream {
            id,
            k0,
            count: values.len() as u32,
            payload: rice_encode_adaptive(values, k0)?,
        })
    }

    fn decode(&self) -> Result<Vec<i32>> {
        rice_decode_adaptive(&self.payload, self.count as usize, self.k0)
    }

    fn write(&self, out: &mut Vec<u8>) {
        out.push(self.id);
        out.push(self.k0);
        out.extend_from_slice(&self.count.to_le_bytes());
        out.extend_from_slice(&(self.payload.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.payload);
    }

    fn read(bytes: &[u8], pos: &mut usize) -> Result<Self> {
        let head = bytes
            .get(*pos..*pos + STREAM_HEADER_LEN)
            .ok_or_else(|| container_err("truncated stream header"))?;
        let count = u32::from_le_bytes(head[2..6].try_into().unwrap());
        let len = u32::from_le_bytes(head[6..10].try_into().unwrap()) as usize;
        let start = *pos + STREAM_HEADER_LEN;
        let payload = bytes
            .get(start..start + len)
            .ok_or_else(|| container_err("truncated stream payload"))?;
        if head[1] > MAX_K {
            return Err(container_err(format!(
                "Rice parameter {} out of range",
                head[1]
            )));
        }
        *pos = start + len;
        Ok(SubbandStream {
            id: head[0],
            k0: head[1],
            count,
            payload: payload.to_vec(),
        })
    }
}

fn band_stream_id(id: BandId) -> u8 {
    (id.level << 2) | id.band.code()
}

/// Planes to code for `img`, with their stream ids, in container order.
fn pipeline_planes(img: &CfaImage, pipeline: PipelineMode, levels: u8) -> Result<Vec<(u8, Plane)>> {
    Ok(match pipeline {
        PipelineMode::Direct => vec![(0, img.as_plane())],
        PipelineMode::Demux => {
            let q = demux(img)?;
            Channel::ALL
                .iter()
                .enumerate()
                .map(|(k, &ch)| (k as u8, q.plane(ch).clone()))
                .collect()
        }
        _ => {
            let pyr = apply_pipeline(&mallat_cfa_forward(img, levels)?, pipeline)?;
            pyr.bands()
                .into_iter()
                .map(|(id, p)| (band_stream_id(id), p.clone()))
                .collect()
        }
    })
}

/// Everything the encoder produces before serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedImage {
    pub header: ContainerHeader,
    pub streams: Vec<SubbandStream>,
}

impl EncodedImage {
    pub fn to_bytes(&self) -> Vec<u8> {
        let total: usize = self
            .streams
            .iter()
            .map(|s| STREAM_HEADER_LEN + s.payload.len())
            .sum();
        let mut out = Vec::with_capacity(HEADER_LEN + total);
        out.extend_from_slice(&self.header.to_bytes());
        for s in &self.streams {
            s.write(&mut out);
        }
        out
    }
}

/// Applies the optional white balance and the pipeline, then codes every
/// plane. Pyramid pipelines require `1 <= levels <= max_levels`; `levels`
/// is ignored (stored as zero) for `direct` and `demux`.
pub fn encode_image(
    img: &CfaImage,
    pipeline: PipelineMode,
    levels: u8,
    wb: Option<WbSide>,
) -> Result<EncodedImage> {
    let width = u32::try_from(img.width).map_err(|_| container_err("width exceeds 32 bits"))?;
    let height = u32::try_from(img.height).map_err(|_| container_err("height exceeds 32 bits"))?;
    let balanced;
    let src = match wb {
        Some(side) => {
            balanced = wb_forward(img, &side.coeffs, side.structure)?;
            &balanced
        }
        None => img,
    };
    let levels = if pipeline.uses_pyramid() { levels } else { 0 };
    let planes = pipeline_planes(src, pipeline, levels)?;
    let streams = planes
        .par_iter()
        .map(|(id, plane)| {
            let values = if pipeline.uses_pyramid() {
                plane.data.clone()
            } else {
                med_residuals(plane)?
            };
            SubbandStream::encode(*id, &values)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EncodedImage {
        header: ContainerHeader {
            version: VERSION,
            width,
            height,
            bit_depth: img.bit_depth,
            phase: img.phase,
            pipeline,
            levels,
            wb,
        },
        streams,
    })
}

pub fn encode_container(
    img: &CfaImage,
    pipeline: PipelineMode,
    levels: u8,
    wb: Option<WbSide>,
) -> Result<Vec<u8>> {
    Ok(encode_image(img, pipeline, levels, wb)?.to_bytes())
}

/// Expected `(id, width, height)` of every stream.
fn stream_layout(h: &ContainerHeader) -> Result<Vec<(u8, usize, usize)>> {
    let (w, ht) = (h.width as usize, h.height as usize);
    Ok(match h.pipeline {
        PipelineMode::Direct => vec![(0, w, ht)],
        PipelineMode::Demux => (0..4).map(|k| (k, w / 2, ht / 2)).collect(),
        _ => SubbandPyramid::layout(w, ht, h.levels)?
            .into_iter()
            .map(|(id, bw, bh)| (band_stream_id(id), bw, bh))
            .collect(),
    })
}

pub fn parse_container(bytes: &[u8]) -> Result<EncodedImage> {
    let header = ContainerHeader::parse(bytes)?;
    crate::cfa::check_mosaic_geometry(header.width as usize, header.height as usize)?;
    if !(8..=16).contains(&header.bit_depth) {
        return Err(container_err(format!("bad bit depth {}", header.bit_depth)));
    }
    if !header.pipeline.uses_pyramid() && header.levels != 0 {
        return Err(container_err(
            "levels must be zero for non-pyramid pipelines",
        ));
    }
    let layout = stream_layout(&header)?;
    let mut pos = HEADER_LEN;
    let mut streams = Vec::with_capacity(layout.len());
    for &(id, w, h) in &layout {
        let s = SubbandStream::read(bytes, &mut pos)?;
        if s.id != id || s.count as usize != w * h {
            return Err(container_err(format!(
                "stream {} ({} samples) does not match expected {id} ({} samples)",
                s.id,
                s.count,
                w * h
            )));
        }
        streams.push(s);
    }
    if pos != bytes.len() {
        return Err(container_err(format!(
            "{} trailing bytes",
            bytes.len() - pos
        )));
    }
    Ok(EncodedImage { header, streams })
}

/// Inverts [`encode_container`] bit-exactly. Nothing is returned unless
/// every stream decodes.
pub fn decode_container(bytes: &[u8]) -> Result<CfaImage> {
    let enc = parse_container(bytes)?;
    let h = &enc.header;
    let layout = stream_layout(h)?;
    let values = enc
        .streams
        .par_iter()
        .map(SubbandStream::decode)
        .collect::<Result<Vec<_>>>()?;
    let (w, ht) = (h.width as usize, h.height as usize);
    let planes: Vec<Plane> = layout
        .iter()
        .zip(values)
        .map(|(&(_, pw, ph), v)| {
            if h.pipeline.uses_pyramid() {
                Plane::from_vec(pw, ph, v)
            } else {
                med_reconstruct(pw, ph, &v)
            }
        })
        .collect::<Result<_>>()?;
    let img = match h.pipeline {
        PipelineMode::Direct => {
            let p = planes.into_iter().next().unwrap();
            CfaImage::new(w, ht, h.bit_depth, h.phase, p.data)?
        }
        PipelineMode::Demux => {
            let mut it = planes.into_iter();
            let mut next = || it.next().unwrap();
            remux(&QuadPlanes {
                r: next(),
                g1: next(),
                g2: next(),
                b: next(),
                bit_depth: h.bit_depth,
                phase: h.phase,
            })?
        }
        mode => {
            let pyr = SubbandPyramid::from_bands(w, ht, h.bit_depth, h.phase, h.levels, planes)?;
            mallat_cfa_inverse(&undo_pipeline(&pyr, mode)?)?
        }
    };
    match h.wb {
        Some(side) => wb_inverse(&img, &side.coeffs, side.structure),
        None => Ok(img),
    }
}
