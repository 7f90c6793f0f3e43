//! Subcommand implementations. Results go to stdout, diagnostics to stderr.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cfwb_core::analysis::{
    bench_csv, run_bench, shannon_entropy, spectrum_report, synthetic_mosaics, SpectrumReport,
};
use cfwb_core::wavelet::clamp_levels;
use cfwb_core::white_balance::{estimate_gray_world, gray_world_coeffs};
use cfwb_core::{
    decode_container, demux, encode_container, load_pgm, save_pgm, wb_forward, wb_inverse,
    CfaImage, Channel, Error as CoreError, PipelineMode, SceneParams, WbSide, WbStructure,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::args::{
    AnalyzeArgs, BenchArgs, Command, DecodeArgs, EncodeArgs, Format, UnwbArgs, WbArgs,
};
use crate::sidecar::Sidecar;

/// Offset applied when a balanced mosaic leaves the PGM sample range.
const SIGNED_OFFSET: i32 = 1 << 15;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Format {
        context: String,
        #[source]
        source: CoreError,
    },
    #[error("{0}")]
    Sidecar(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Format { .. } | CliError::Sidecar(_) => 4,
        })
    }
}

trait Context<T> {
    fn context(self, what: impl std::fmt::Display) -> Result<T, CliError>;
}

impl<T> Context<T> for Result<T, CoreError> {
    fn context(self, what: impl std::fmt::Display) -> Result<T, CliError> {
        self.map_err(|source| CliError::Format {
            context: what.to_string(),
            source,
        })
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn stdout(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
}

fn load_mosaic(path: &Path, phase: cfwb_core::Phase) -> Result<CfaImage, CliError> {
    load_pgm(&read(path)?, phase).context(path.display())
}

fn sidecar_path(pgm: &Path) -> PathBuf {
    let mut s = pgm.as_os_str().to_owned();
    s.push(".wb");
    PathBuf::from(s)
}

pub fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a),
        Command::Wb(a) => wb(a),
        Command::Unwb(a) => unwb(a),
        Command::Analyze(a) => analyze(a),
        Command::Bench(a) => bench(a),
        Command::Selftest => return Ok(selftest()),
    }
    .map(|()| ExitCode::SUCCESS)
}

fn encode(a: EncodeArgs) -> Result<(), CliError> {
    let img = load_mosaic(&a.input, a.phase.into())?;
    let levels = clamp_levels(a.levels, img.width, img.height);
    if levels < a.levels {
        log::warn!(
            "{}x{} supports at most {levels} levels; using {levels}",
            img.width,
            img.height
        );
    }
    let wb = if a.wb {
        let structure: WbStructure = a.wb_structure.map(Into::into).unwrap_or_default();
        let coeffs = gray_world_coeffs(&img, structure).context("gray-world white balance")?;
        Some(WbSide { coeffs, structure })
    } else {
        None
    };
    let bytes = encode_container(&img, a.pipeline.into(), levels, wb).context("encode")?;
    log::info!(
        "{} -> {} bytes ({:.4} bpp)",
        a.input.display(),
        bytes.len(),
        8.0 * bytes.len() as f64 / (img.width * img.height) as f64
    );
    write(&a.output, &bytes)
}

fn decode(a: DecodeArgs) -> Result<(), CliError> {
    let img = decode_container(&read(&a.input)?).context(a.input.display())?;
    let pgm = save_pgm(&img).context("write PGM")?;
    write(&a.output, &pgm)
}

fn wb(a: WbArgs) -> Result<(), CliError> {
    let img = load_mosaic(&a.input, a.phase.into())?;
    let structure: WbStructure = a.wb_structure.into();
    let coeffs = gray_world_coeffs(&img, structure).context("gray-world white balance")?;
    let balanced = wb_forward(&img, &coeffs, structure).context("white balance")?;

    let (pgm, offset) = if balanced.in_range() {
        (save_pgm(&balanced).context("write PGM")?, 0)
    } else {
        let shifted: Vec<i32> = balanced
            .samples
            .iter()
            .map(|&v| v + SIGNED_OFFSET)
            .collect();
        if shifted.iter().any(|&v| !(0..=u16::MAX as i32).contains(&v)) {
            return Err(CliError::Sidecar(
                "balanced samples exceed the signed 16-bit range".into(),
            ));
        }
        log::warn!(
            "balanced samples leave [0, {}]; writing 16-bit PGM offset by {SIGNED_OFFSET}",
            img.max_value()
        );
        let wide = CfaImage {
            bit_depth: 16,
            samples: shifted,
            ..balanced.clone()
        };
        (save_pgm(&wide).context("write PGM")?, SIGNED_OFFSET)
    };
    let sidecar = Sidecar {
        structure,
        phase: img.phase,
        bit_depth: img.bit_depth,
        offset,
        coeffs,
    };
    write(&a.output, &pgm)?;
    write(&sidecar_path(&a.output), sidecar.render().as_bytes())?;

    let mut out = String::new();
    for (name, (bits, value)) in ["s", "t", "q"].iter().zip(
        coeffs
            .bit_patterns()
            .into_iter()
            .zip([coeffs.s, coeffs.t, coeffs.q]),
    ) {
        let _ = writeln!(out, "{name} 0x{bits:016x} {value}");
    }
    stdout(&out)
}

fn unwb(a: UnwbArgs) -> Result<(), CliError> {
    let sc_path = a.sidecar.unwrap_or_else(|| sidecar_path(&a.input));
    let text = String::from_utf8(read(&sc_path)?)
        .map_err(|_| CliError::Sidecar(format!("{}: not UTF-8", sc_path.display())))?;
    let sc = Sidecar::parse(&text)
        .map_err(|e| CliError::Sidecar(format!("{}: {e}", sc_path.display())))?;

    let stored = load_mosaic(&a.input, sc.phase)?;
    let balanced = CfaImage::new(
        stored.width,
        stored.height,
        sc.bit_depth,
        sc.phase,
        stored.samples.iter().map(|&v| v - sc.offset).collect(),
    )
    .context("sidecar geometry")?;
    let restored =
        wb_inverse(&balanced, &sc.coeffs, sc.structure).context("inverse white balance")?;
    let pgm = save_pgm(&restored).context("write PGM")?;
    write(&a.output, &pgm)
}

fn analyze(a: AnalyzeArgs) -> Result<(), CliError> {
    if !(a.cutoff > 0.0 && a.cutoff <= 0.5) {
        return Err(CliError::Usage(format!(
            "--cutoff must lie in (0, 0.5], got {}",
            a.cutoff
        )));
    }
    let img = load_mosaic(&a.input, a.phase.into())?;
    let gw = estimate_gray_world(&img).context("gray-world estimate")?;
    let quads = demux(&img).context("demux")?;

    let mut planes: Vec<(String, usize, usize, Vec<i32>)> =
        vec![("mosaic".into(), img.width, img.height, img.samples.clone())];
    match gray_world_coeffs(&img, WbStructure::Pyramid)
        .and_then(|c| wb_forward(&img, &c, WbStructure::Pyramid))
    {
        Ok(b) => planes.push(("mosaic_wb".into(), b.width, b.height, b.samples)),
        Err(e) => log::warn!("skipping balanced mosaic: {e}"),
    }
    for ch in Channel::ALL {
        let p = quads.plane(ch);
        planes.push((
            format!("{ch:?}").to_lowercase(),
            p.width,
            p.height,
            p.data.clone(),
        ));
    }

    let rows: Vec<(String, usize, usize, f64, Option<SpectrumReport>)> = planes
        .into_iter()
        .map(|(name, w, h, data)| {
            let entropy = shannon_entropy(&data);
            let real: Vec<f64> = data.iter().map(|&v| v as f64).collect();
            let spec = spectrum_report(name.clone(), &real, w, h, a.cutoff)
                .map_err(|e| log::info!("no spectrum for {name}: {e}"))
                .ok();
            (name, w, h, entropy, spec)
        })
        .collect();

    let mut out = String::new();
    match a.format {
        Format::Csv => {
            out.push_str("plane,width,height,entropy_bits,total_energy,carrier_pi_0,carrier_0_pi,carrier_pi_pi,highpass_fraction\n");
            for (name, w, h, entropy, spec) in &rows {
                let _ = write!(out, "{name},{w},{h},{entropy:.6}");
                match spec {
                    Some(s) => {
                        let _ = writeln!(
                            out,
                            ",{:.6e},{:.6e},{:.6e},{:.6e},{:.6e}",
                            s.total_energy,
                            s.carrier_fractions[0],
                            s.carrier_fractions[1],
                            s.carrier_fractions[2],
                            s.highpass_fraction
                        );
                    }
                    None => out.push_str(",,,,,\n"),
                }
            }
        }
        Format::Text => {
            let _ = writeln!(
                out,
                "image {}x{} bit_depth {} phase {}",
                img.width,
                img.height,
                img.bit_depth,
                img.phase.name()
            );
            let [r, g1, g2, b] = gw.illuminant.as_array();
            let _ = writeln!(out, "gray_world r {r:.4} g1 {g1:.4} g2 {g2:.4} b {b:.4}");
            let _ = writeln!(
                out,
                "{:<10} {:>9} {:>12} {:>10} {:>10} {:>10} {:>10}",
                "plane", "entropy", "energy", "c(pi,0)", "c(0,pi)", "c(pi,pi)", "highpass"
            );
            for (name, _, _, entropy, spec) in &rows {
                let _ = write!(out, "{name:<10} {entropy:>9.4}");
                match spec {
                    Some(s) => {
                        let _ = writeln!(
                            out,
                            " {:>12.4e} {:>10.4e} {:>10.4e} {:>10.4e} {:>10.4e}",
                            s.total_energy,
                            s.carrier_fractions[0],
                            s.carrier_fractions[1],
                            s.carrier_fractions[2],
                            s.highpass_fraction
                        );
                    }
                    None => {
                        let _ = writeln!(
                            out,
                            " {:>12} {:>10} {:>10} {:>10} {:>10}",
                            "-", "-", "-", "-", "-"
                        );
                    }
                }
            }
        }
    }
    stdout(&out)
}

fn bench(a: BenchArgs) -> Result<(), CliError> {
    let images = if a.synthetic {
        if a.count == 0 {
            return Err(CliError::Usage("--count must be positive".into()));
        }
        if !a.size.is_power_of_two() || a.size < 16 {
            return Err(CliError::Usage(format!(
                "--size must be a power of two >= 16, got {}",
                a.size
            )));
        }
        let tint: [f64; 3] = a.tint.as_slice().try_into().map_err(|_| {
            CliError::Usage(format!(
                "--tint needs three values r,g,b, got {}",
                a.tint.len()
            ))
        })?;
        let base = SceneParams {
            tint,
            ..SceneParams::default()
        };
        base.validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        synthetic_mosaics(
            &base,
            a.seed..a.seed + a.count,
            a.size,
            a.bit_depth,
            a.phase.into(),
        )
        .context("synthetic scenes")?
    } else {
        a.inputs
            .iter()
            .map(|p| load_mosaic(p, a.phase.into()))
            .collect::<Result<Vec<_>, _>>()?
    };
    let rows = run_bench(&images, &PipelineMode::ALL, a.levels, a.wb_structure.into())
        .context("benchmark")?;
    stdout(&bench_csv(&rows))
}

/// Small exhaustive and randomized round-trip checks against independent
/// oracles. Prints one line per check; exit status 1 if any fails.
fn selftest() -> ExitCode {
    type Check = fn() -> Result<usize, String>;
    let checks: [(&str, Check); 6] = [
        ("scalar lifting", selftest::lifting),
        ("legall 5/3", selftest::wavelet),
        ("camra-a", selftest::camra_a),
        ("camra-s", selftest::camra_s),
        ("white balance", selftest::white_balance),
        ("container", selftest::container),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(n) => println!("ok   {name} ({n} cases)"),
            Err(e) => {
                failed += 1;
                println!("FAIL {name}: {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

mod selftest {
    use super::*;
    use cfwb_core::decorrelate::{
        camra_a_forward, camra_a_inverse, camra_s_forward, camra_s_inverse,
    };
    use cfwb_core::wavelet::{legall53_forward_1d, legall53_inverse_1d};
    use cfwb_core::white_balance::solve_coeffs;
    use cfwb_core::{forward_scalar_lift, inverse_scalar_lift, IlluminantColor, Plane, ScalarGain};

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x5e1f_7e57)
    }

    pub fn lifting() -> Result<usize, String> {
        let mut n = 0;
        for q in [1.0 / 64.0, 0.3, 0.7, 1.0, 1.5, 2.0, 64.0] {
            let g = ScalarGain::new(q).map_err(|e| e.to_string())?;
            for x1 in -64..=64i32 {
                for x2 in -64..=64i32 {
                    // written-out step trace
                    let a = x2 as i64 - (q * x1 as f64).floor() as i64;
                    let b = x1 as i64 + (a as f64 / q).floor() as i64;
                    let a = a - (q * b as f64).floor() as i64;
                    let got = forward_scalar_lift(x1, x2, g).map_err(|e| e.to_string())?;
                    if (got.0 as i64, got.1 as i64) != (-a, b) {
                        return Err(format!(
                            "q={q} ({x1},{x2}): got {got:?}, trace ({}, {b})",
                            -a
                        ));
                    }
                    if inverse_scalar_lift(got.0, got.1, g).map_err(|e| e.to_string())? != (x1, x2)
                    {
                        return Err(format!("q={q} ({x1},{x2}) does not invert"));
                    }
                    n += 1;
                }
            }
        }
        Ok(n)
    }

    pub fn wavelet() -> Result<usize, String> {
        let mut n = 0;
        for len in 2..=8u32 {
            for code in 0..4u32.pow(len) {
                let x: Vec<i32> = (0..len).map(|i| ((code >> (2 * i)) & 3) as i32).collect();
                let (lo, hi) = legall53_forward_1d(&x).map_err(|e| e.to_string())?;
                if lo.len() != x.len().div_ceil(2) || hi.len() != x.len() / 2 {
                    return Err(format!("band lengths wrong for n={len}"));
                }
                if legall53_inverse_1d(&lo, &hi).map_err(|e| e.to_string())? != x {
                    return Err(format!("{x:?} does not invert"));
                }
                n += 1;
            }
        }
        Ok(n)
    }

    fn pair_planes(range: std::ops::RangeInclusive<i32>) -> (Plane, Plane) {
        let vals: Vec<i32> = range.collect();
        let w = vals.len();
        let lh: Vec<i32> = vals.iter().flat_map(|_| vals.iter().copied()).collect();
        let hl: Vec<i32> = vals
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, w))
            .collect();
        (
            Plane::from_vec(w * w, 1, lh).expect("geometry"),
            Plane::from_vec(w * w, 1, hl).expect("geometry"),
        )
    }

    pub fn camra_a() -> Result<usize, String> {
        let (lh, hl) = pair_planes(-256..=256);
        let (r, s) = camra_a_forward(&lh, &hl).map_err(|e| e.to_string())?;
        for k in 0..lh.len() {
            let (a, b) = (lh.data[k], hl.data[k]);
            if r.data[k] != a - b || s.data[k] != (a + b) >> 1 {
                return Err(format!("({a},{b}) -> ({}, {})", r.data[k], s.data[k]));
            }
        }
        let (lh2, hl2) = camra_a_inverse(&r, &s).map_err(|e| e.to_string())?;
        if lh2 != lh || hl2 != hl {
            return Err("inverse mismatch".into());
        }
        Ok(lh.len())
    }

    pub fn camra_s() -> Result<usize, String> {
        let mut rng = rng();
        let mut n = 0;
        for _ in 0..500 {
            let w = rng.random_range(1..=12);
            let h = rng.random_range(1..=12);
            let mut gen = || {
                Plane::from_vec(
                    w,
                    h,
                    (0..w * h).map(|_| rng.random_range(-2048..=2048)).collect(),
                )
            };
            let (lh, hl) = (
                gen().map_err(|e| e.to_string())?,
                gen().map_err(|e| e.to_string())?,
            );
            let (u, v) = camra_s_forward(&lh, &hl).map_err(|e| e.to_string())?;
            if camra_s_inverse(&u, &v).map_err(|e| e.to_string())? != (lh, hl) {
                return Err(format!("{w}x{h} planes do not invert"));
            }
            n += 1;
        }
        Ok(n)
    }

    pub fn white_balance() -> Result<usize, String> {
        let mut rng = rng();
        let mut n = 0;
        for _ in 0..200 {
            let mut l = || rng.random_range(0.25..4.0);
            let ill = IlluminantColor::new(l(), l(), l(), l()).map_err(|e| e.to_string())?;
            let (w, h) = (2 * rng.random_range(1..=8), 2 * rng.random_range(1..=8));
            let samples = (0..w * h).map(|_| rng.random_range(0..4096)).collect();
            let img = CfaImage::new(w, h, 12, cfwb_core::Phase::Rggb, samples)
                .map_err(|e| e.to_string())?;
            for structure in [WbStructure::Pyramid, WbStructure::Sequential] {
                let c = solve_coeffs(&ill, structure).map_err(|e| e.to_string())?;
                let fwd = wb_forward(&img, &c, structure).map_err(|e| e.to_string())?;
                if wb_inverse(&fwd, &c, structure).map_err(|e| e.to_string())? != img {
                    return Err(format!(
                        "{structure:?} with {:?} does not invert",
                        ill.as_array()
                    ));
                }
                n += 1;
            }
        }
        Ok(n)
    }

    pub fn container() -> Result<usize, String> {
        let mut rng = rng();
        let mut n = 0;
        for _ in 0..20 {
            let (w, h) = (2 * rng.random_range(1..=12), 2 * rng.random_range(1..=12));
            let samples = (0..w * h).map(|_| rng.random_range(0..1024)).collect();
            let img = CfaImage::new(w, h, 10, cfwb_core::Phase::Grbg, samples)
                .map_err(|e| e.to_string())?;
            let coeffs =
                gray_world_coeffs(&img, WbStructure::Pyramid).map_err(|e| e.to_string())?;
            for pipeline in PipelineMode::ALL {
                for wb in [
                    None,
                    Some(WbSide {
                        coeffs,
                        structure: WbStructure::Pyramid,
                    }),
                ] {
                    let levels = clamp_levels(3, w, h);
                    let bytes =
                        encode_container(&img, pipeline, levels, wb).map_err(|e| e.to_string())?;
                    if decode_container(&bytes).map_err(|e| e.to_string())? != img {
                        return Err(format!(
                            "{pipeline} {w}x{h} wb={} does not round-trip",
                            wb.is_some()
                        ));
                    }
                    n += 1;
                }
            }
        }
        Ok(n)
    }
}
