//! Golomb-Rice coding of signed residuals.
//!
//! Values are zigzag-mapped to unsigned. A Golomb codeword with divisor `m`
//! is `q = value / m` one-bits, a zero, then the remainder in truncated
//! binary (`ceil(log2 m)` bits, one fewer for the smallest remainders). Rice
//! codes are the `m = 2^k` case, where the remainder is exactly `k` bits.
//! Quotients of 48 or more are escaped: 48 one-bits followed by the raw
//! 32-bit value.
//!
//! Two parameter policies share the codeword format: a fixed Rice `k` for
//! the whole stream, and an adaptive policy that tracks a running mean of the
//! mapped values and re-derives `m` before every sample. Unlike `k`, `m` is
//! not restricted to powers of two, so the coding overhead does not swing
//! with the signal scale.

use super::bits::{BitReader, BitWriter};
use crate::error::{Error, Result};

/// Largest Rice parameter.
pub const MAX_K: u8 = 24;
/// Quotient at which a codeword is escaped.
pub const ESCAPE_Q: u32 = 48;

/// Running-statistics window: counts are halved when they reach this.
const RESET: u32 = 64;

/// Largest adaptive divisor.
const MAX_M: u64 = 1 << MAX_K;

#[inline]
pub fn zigzag(v: i32) -> u32 {
    ((v << 1) ^ (v >> 31)) as u32
}

#[inline]
pub fn unzigzag(u: u32) -> i32 {
    ((u >> 1) as i32) ^ -((u & 1) as i32)
}

/// Smallest `k` with `mean(zigzag) < 2^k`, capped at [`MAX_K`].
pub fn rice_param_estimate(plane: &[i32]) -> u8 {
    if plane.is_empty() {
        return 0;
    }
    let sum: u64 = plane.iter().map(|&v| zigzag(v) as u64).sum();
    let n = plane.len() as u64;
    // mean < 2^k  <=>  sum < n << k
    (0..MAX_K).find(|&k| sum < n << k).unwrap_or(MAX_K)
}

/// Bits of the truncated-binary remainder and the count of short codes.
#[inline]
fn remainder_shape(m: u32) -> (u32, u32) {
    let b = 32 - (m - 1).leading_zeros();
    let short = ((1u64 << b) - m as u64) as u32;
    (b, short)
}

#[inline]
fn put_codeword(w: &mut BitWriter, u: u32, m: u32) {
    let q = u / m;
    if q >= ESCAPE_Q {
        w.put_ones(ESCAPE_Q);
        w.put(u, 32);
        return;
    }
    w.put_ones(q);
    w.put(0, 1);
    let r = u - q * m;
    let (b, short) = remainder_shape(m);
    if r < short {
        w.put(r, b - 1);
    } else {
        w.put(r + short, b);
    }
}

#[inline]
fn get_codeword(r: &mut BitReader, m: u32) -> Result<u32> {
    let (q, terminated) = r.unary(ESCAPE_Q)?;
    if !terminated {
        let u = r.get(32)?;
        if u / m < ESCAPE_Q {
            return Err(Error::Bitstream(format!(
                "escaped value {u} would fit a regular codeword"
            )));
        }
        return Ok(u);
    }
    let (b, short) = remainder_shape(m);
    if b == 0 {
        return Ok(q);
    }
    let mut rem = r.get(b - 1)?;
    if rem >= short {
        rem = ((rem << 1) | r.get(1)?) - short;
    }
    // q < 48 and rem < m, so the value fits unless the stream is corrupt
    (q as u64 * m as u64 + rem as u64)
        .try_into()
        .map_err(|_| Error::Bitstream("codeword overflows 32 bits".into()))
}

fn check_k(k: u8) -> Result<()> {
    if k > MAX_K {
        Err(Error::Bitstream(format!(
            "Rice parameter {k} exceeds {MAX_K}"
        )))
    } else {
        Ok(())
    }
}

fn check_end(r: &BitReader, len: usize) -> Result<()> {
    if r.bytes_consumed() != len {
        return Err(Error::Bitstream(format!(
            "stream has {} trailing bytes",
            len - r.bytes_consumed()
        )));
    }
    Ok(())
}

/// Fixed-parameter Rice encoding, byte-aligned and zero-padded.
pub fn rice_encode(plane: &[i32], k: u8) -> Result<Vec<u8>> {
    check_k(k)?;
    let mut w = BitWriter::new();
    for &v in plane {
        put_codeword(&mut w, zigzag(v), 1 << k);
    }
    Ok(w.finish())
}

pub fn rice_decode(bits: &[u8], count: usize, k: u8) -> Result<Vec<i32>> {
    check_k(k)?;
    let mut r = BitReader::new(bits);
    let out = (0..count)
        .map(|_| get_codeword(&mut r, 1 << k).map(unzigzag))
        .collect::<Result<Vec<_>>>()?;
    check_end(&r, bits.len())?;
    Ok(out)
}

/// Running mean estimate driving the adaptive divisor.
struct Adaptive {
    n: u64,
    a: u64,
}

impl Adaptive {
    fn new(k0: u8) -> Self {
        Adaptive { n: 1, a: 1 << k0 }
    }

    /// `m ~ ln(2) * mean`, the best Golomb divisor for geometric data of
    /// that mean, evaluated in integers (`709 / 1024 ~ ln 2`).
    #[inline]
    fn m(&self) -> u32 {
        ((self.a * 709 + self.n * 512) / (self.n * 1024)).clamp(1, MAX_M) as u32
    }

    #[inline]
    fn update(&mut self, u: u32) {
        self.a += u as u64;
        self.n += 1;
        if self.n >= RESET as u64 {
            self.a >>= 1;
            self.n >>= 1;
        }
    }
}

/// Adaptive encoding seeded with `k0` (normally [`rice_param_estimate`]).
pub fn rice_encode_adaptive(plane: &[i32], k0: u8) -> Result<Vec<u8>> {
    check_k(k0)?;
    let mut st = Adaptive::new(k0);
    let mut w = BitWriter::new();
    for &v in plane {
        let u = zigzag(v);
        put_codeword(&mut w, u, st.m());
        st.update(u);
    }
    Ok(w.finish())
}

pub fn rice_decode_adaptive(bits: &[u8], count: usize, k0: u8) -> Result<Vec<i32>> {
    check_k(k0)?;
    let mut st = Adaptive::new(k0);
    let mut r = BitReader::new(bits);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let u = get_codeword(&mut r, st.m())?;
        st.update(u);
        out.push(unzigzag(u));
    }
    check_end(&r, bits.len())?;
    Ok(out)
}
