//! Binary PGM (P5) reading and writing.
//!
//! PGM carries neither the CFA phase nor a signed sample range, so the phase
//! is supplied by the caller and saving refuses samples outside `[0, maxval]`.

use super::{CfaImage, Phase};
use crate::error::{Error, Result};

fn pgm_err(msg: impl Into<String>) -> Error {
    Error::Pgm(msg.into())
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn read_uint(&mut self, what: &str) -> Result<u64> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(pgm_err(format!("missing {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| pgm_err(format!("{what} out of range")))
    }
}

/// Parses a binary PGM. Bit depth is `ceil(log2(maxval + 1))`, raised to the
/// 8-bit minimum of [`CfaImage`].
pub fn load_pgm(bytes: &[u8], phase: Phase) -> Result<CfaImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(pgm_err("missing P5 magic"));
    }
    let mut rd = HeaderReader { bytes, pos: 2 };
    let width = rd.read_uint("width")? as usize;
    let height = rd.read_uint("height")? as usize;
    let maxval = rd.read_uint("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(pgm_err(format!("maxval {maxval} outside 1..=65535")));
    }
    match bytes.get(rd.pos) {
        Some(b) if b.is_ascii_whitespace() => rd.pos += 1,
        _ => return Err(pgm_err("header not terminated by whitespace")),
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| pgm_err("image too large"))?;
    let bytes_per_sample = if maxval > 255 { 2 } else { 1 };
    let payload = &bytes[rd.pos..];
    if payload.len() < n * bytes_per_sample {
        return Err(pgm_err(format!(
            "truncated payload: need {} bytes, have {}",
            n * bytes_per_sample,
            payload.len()
        )));
    }
    let samples: Vec<i32> = if bytes_per_sample == 1 {
        payload[..n].iter().map(|&b| b as i32).collect()
    } else {
        payload[..2 * n]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]) as i32)
            .collect()
    };
    if samples.iter().any(|&v| v as u64 > maxval) {
        return Err(pgm_err("sample exceeds maxval"));
    }
    let bit_depth = (64 - maxval.leading_zeros()).max(8) as u8;
    CfaImage::new(width, height, bit_depth, phase, samples)
}

/// Writes a P5 file with `maxval = 2^bit_depth - 1`.
pub fn save_pgm(img: &CfaImage) -> Result<Vec<u8>> {
    let maxval = img.max_value();
    if !img.in_range() {
        return Err(pgm_err(format!(
            "samples outside [0, {maxval}] cannot be stored in PGM"
        )));
    }
    let mut out = format!("P5\n{} {}\n{}\n", img.width, img.height, maxval).into_bytes();
    if maxval > 255 {
        out.reserve(2 * img.samples.len());
        for &v in &img.samples {
            out.extend_from_slice(&(v as u16).to_be_bytes());
        }
    } else {
        out.extend(img.samples.iter().map(|&v| v as u8));
    }
    Ok(out)
}
