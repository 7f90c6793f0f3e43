//! MSB-first bit packing.

use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    acc: u64,
    nbits: u32,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `n` bits of `value`, most significant first.
    #[inline]
    pub fn put(&mut self, value: u32, n: u32) {
        debug_assert!(n <= 32);
        if n == 0 {
            return;
        }
        let v = value as u64 & ((1u64 << n) - 1);
        self.acc = (self.acc << n) | v;
        self.nbits += n;
        while self.nbits >= 8 {
            self.nbits -= 8;
            self.bytes.push((self.acc >> self.nbits) as u8);
        }
        self.acc &= (1u64 << self.nbits) - 1;
    }

    #[inline]
    pub fn put_ones(&mut self, mut n: u32) {
        while n > 0 {
            let m = n.min(32);
            self.put(u32::MAX, m);
            n -= m;
        }
    }

    pub fn bit_len(&self) -> usize {
        8 * self.bytes.len() + self.nbits as usize
    }

    /// Zero-pads to a byte boundary and returns the bytes.
    pub fn finish(mut self) -> Vec<u8> {
        if self.nbits > 0 {
            let pad = 8 - self.nbits;
            self.put(0, pad);
        }
        self.bytes
    }
}

pub struct BitReader<'a> {
    data: &'a [u8],
    next: usize,
    /// Left-aligned bit window.
    acc: u64,
    nbits: u32,
}

fn truncated() -> Error {
    Error::Bitstream("truncated stream".into())
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        BitReader {
            data,
            next: 0,
            acc: 0,
            nbits: 0,
        }
    }

    #[inline]
    fn refill(&mut self) {
        while self.nbits <= 56 && self.next < self.data.len() {
            self.acc |= (self.data[self.next] as u64) << (56 - self.nbits);
            self.nbits += 8;
            self.next += 1;
        }
    }

    #[inline]
    fn consume(&mut self, n: u32) {
        self.acc = if n >= 64 { 0 } else { self.acc << n };
        self.nbits -= n;
    }

    #[inline]
    pub fn get(&mut self, n: u32) -> Result<u32> {
        debug_assert!(n <= 32);
        if n == 0 {
            return Ok(0);
        }
        self.refill();
        if self.nbits < n {
            return Err(truncated());
        }
        let v = (self.acc >> (64 - n)) as u32;
        self.consume(n);
        Ok(v)
    }

    /// Counts one-bits up to `max`. Returns `(count, terminated)` where
    /// `terminated` means a zero bit ended the run (and was consumed).
    #[inline]
    pub fn unary(&mut self, max: u32) -> Result<(u32, bool)> {
        let mut count = 0;
        loop {
            self.refill();
            if self.nbits == 0 {
                return Err(truncated());
            }
            let ones = (!self.acc).leading_zeros().min(self.nbits);
            let take = ones.min(max - count);
            self.consume(take);
            count += take;
            if count == max {
                return Ok((count, false));
            }
            if take < ones || self.nbits > 0 {
                // the next bit is the terminating zero
                self.consume(1);
                return Ok((count, true));
            }
        }
    }

    /// Bytes touched so far, counting a partially read byte.
    pub fn bytes_consumed(&self) -> usize {
        self.next - (self.nbits / 8) as usize
    }
}
