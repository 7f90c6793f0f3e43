//! Text sidecar written next to a white-balanced PGM.
//!
//! PGM stores neither the lifting coefficients nor negative samples, so `wb`
//! records both here and `unwb` reads them back:
//!
//! ```text
//! structure pyramid
//! phase rggb
//! bit_depth 12
//! offset 0
//! s 0x3ff0000000000000
//! t 0x3ff0000000000000
//! q 0x3ff0000000000000
//! ```
//!
//! A nonzero `offset` means the PGM is 16-bit with every sample shifted up by
//! that amount.

use std::fmt::Write as _;

use cfwb_core::{LiftingCoeffs, Phase, WbStructure};

#[derive(Debug, Clone, PartialEq)]
pub struct Sidecar {
    pub structure: WbStructure,
    pub phase: Phase,
    pub bit_depth: u8,
    pub offset: i32,
    pub coeffs: LiftingCoeffs,
}

fn parse_hex(v: &str) -> Option<u64> {
    u64::from_str_radix(v.strip_prefix("0x")?, 16).ok()
}

impl Sidecar {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "structure {}", self.structure.name());
        let _ = writeln!(out, "phase {}", self.phase.name());
        let _ = writeln!(out, "bit_depth {}", self.bit_depth);
        let _ = writeln!(out, "offset {}", self.offset);
        for (name, bits) in ["s", "t", "q"].iter().zip(self.coeffs.bit_patterns()) {
            let _ = writeln!(out, "{name} 0x{bits:016x}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Sidecar, String> {
        let mut structure = None;
        let mut phase = None;
        let mut bit_depth = None;
        let mut offset = None;
        let mut bits = [None; 3];
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(char::is_whitespace)
                .map(|(k, v)| (k, v.trim()))
                .ok_or_else(|| format!("line {}: expected `key value`", n + 1))?;
            let bad = || format!("line {}: bad value for {key}: {value:?}", n + 1);
            match key {
                "structure" => structure = Some(value.parse::<WbStructure>().map_err(|_| bad())?),
                "phase" => phase = Some(value.parse::<Phase>().map_err(|_| bad())?),
                "bit_depth" => bit_depth = Some(value.parse::<u8>().map_err(|_| bad())?),
                "offset" => offset = Some(value.parse::<i32>().map_err(|_| bad())?),
                "s" => bits[0] = Some(parse_hex(value).ok_or_else(bad)?),
                "t" => bits[1] = Some(parse_hex(value).ok_or_else(bad)?),
                "q" => bits[2] = Some(parse_hex(value).ok_or_else(bad)?),
                _ => return Err(format!("line {}: unknown key {key:?}", n + 1)),
            }
        }
        let missing = |k: &str| format!("missing key {k}");
        let bits = [
            bits[0].ok_or_else(|| missing("s"))?,
            bits[1].ok_or_else(|| missing("t"))?,
            bits[2].ok_or_else(|| missing("q"))?,
        ];
        Ok(Sidecar {
            structure: structure.ok_or_else(|| missing("structure"))?,
            phase: phase.ok_or_else(|| missing("phase"))?,
            bit_depth: bit_depth.ok_or_else(|| missing("bit_depth"))?,
            offset: offset.ok_or_else(|| missing("offset"))?,
            coeffs: LiftingCoeffs::from_bit_patterns(bits).map_err(|e| e.to_string())?,
        })
    }
}
