//! Measurement harness: entropy, opponent-color decomposition, spectra and
//! the with/without white balance bitrate table.

pub mod spectrum;

pub use spectrum::{
    default_carrier_radius, fft2d, highpass_fraction, ifft2d, spectrum_report,
    spectrum_report_with_radius, SpectrumReport,
};

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::cfa::{
    cfa_sample, cfa_sample_real, synth_scene, CfaImage, ColorImage, Phase, SceneParams,
};
use crate::codec::{encode_container, WbSide};
use crate::decorrelate::PipelineMode;
use crate::error::{Error, Result};
use crate::wavelet::clamp_levels;
use crate::white_balance::{gray_world_coeffs, IlluminantColor, WbStructure};

/// Empirical entropy in bits per sample; zero for an empty plane.
pub fn shannon_entropy(plane: &[i32]) -> f64 {
    if plane.is_empty() {
        return 0.0;
    }
    let mut sorted = plane.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as f64;
    sorted
        .chunk_by(|a, b| a == b)
        .map(|run| {
            let p = run.len() as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Luminance and the two chrominance proxies of a color frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LumChrom {
    pub width: usize,
    pub height: usize,
    pub mu: Vec<f64>,
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
}

/// `mu = r/4 + g/2 + b/4`, `gamma = r/4 - b/4`, `beta = r/4 - g/2 + b/4`.
pub fn lum_chrom_decompose(c: &ColorImage) -> LumChrom {
    let n = c.r.len();
    let (mut mu, mut gamma, mut beta) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for k in 0..n {
        let (r, g, b) = (c.r[k], c.g[k], c.b[k]);
        mu.push(r / 4.0 + g / 2.0 + b / 4.0);
        gamma.push(r / 4.0 - b / 4.0);
        beta.push(r / 4.0 - g / 2.0 + b / 4.0);
    }
    LumChrom {
        width: c.width,
        height: c.height,
        mu,
        gamma,
        beta,
    }
}

/// Inverse transform: `r = mu + 2 gamma + beta`, `g = mu - beta`,
/// `b = mu - 2 gamma + beta`.
pub fn lum_chrom_compose(y: &LumChrom) -> Result<ColorImage> {
    let n = y.mu.len();
    let (mut r, mut g, mut b) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for k in 0..n {
        let (m, ga, be) = (y.mu[k], y.gamma[k], y.beta[k]);
        r.push(m + 2.0 * ga + be);
        g.push(m - be);
        b.push(m - 2.0 * ga + be);
    }
    ColorImage::new(y.width, y.height, r, g, b)
}

/// Largest pixelwise gap between the sampled mosaic and the modulated sum
/// `mu + ((-1)^i' + (-1)^j') gamma + (-1)^(i'+j') beta`, where `(i', j')`
/// is the position relative to the red site.
pub fn verify_modulation_identity(c: &ColorImage, phase: Phase) -> f64 {
    let x = cfa_sample_real(c, phase);
    let y = lum_chrom_decompose(c);
    let (ri, rj) = phase.red_offset();
    let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut worst = 0.0f64;
    for i in 0..c.height {
        for j in 0..c.width {
            let k = i * c.width + j;
            let (si, sj) = (sign(i + ri), sign(j + rj));
            let model = y.mu[k] + (si + sj) * y.gamma[k] + si * sj * y.beta[k];
            worst = worst.max((x[k] - model).abs());
        }
    }
    worst
}

/// Continuous white balance `z_c = y_c * l_bar / l_c`; the green gain uses
/// the mean of the two green illuminant components.
pub fn white_balance_color(c: &ColorImage, ill: &IlluminantColor) -> ColorImage {
    let l_bar = ill.l_bar();
    let gains = [
        l_bar / ill.l_r,
        l_bar / (0.5 * (ill.l_g1 + ill.l_g2)),
        l_bar / ill.l_b,
    ];
    let scale = |v: &[f64], g: f64| v.iter().map(|x| x * g).collect::<Vec<_>>();
    ColorImage {
        width: c.width,
        height: c.height,
        r: scale(&c.r, gains[0]),
        g: scale(&c.g, gains[1]),
        b: scale(&c.b, gains[2]),
    }
}

/// Tinted synthetic scenes sampled to mosaics, one per seed.
pub fn synthetic_mosaics(
    base: &SceneParams,
    seeds: impl IntoIterator<Item = u64>,
    size: usize,
    bit_depth: u8,
    phase: Phase,
) -> Result<Vec<CfaImage>> {
    seeds
        .into_iter()
        .map(|seed| {
            let p = SceneParams {
                rng_seed: seed,
                ..base.clone()
            };
            cfa_sample(&synth_scene(&p, size, size)?, phase, bit_depth)
        })
        .collect()
}

/// One line of the bitrate table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub pipeline: PipelineMode,
    pub bpp_raw: f64,
    pub bpp_wb: f64,
    pub gain_percent: f64,
}

/// Container size in bits per pixel, header included.
pub fn bits_per_pixel(
    img: &CfaImage,
    pipeline: PipelineMode,
    levels: u8,
    wb: Option<WbSide>,
) -> Result<f64> {
    let levels = clamp_levels(levels, img.width, img.height);
    let bytes = encode_container(img, pipeline, levels, wb)?;
    Ok(8.0 * bytes.len() as f64 / (img.width * img.height) as f64)
}

/// Encodes every image under every pipeline without and with gray-world
/// white balance and reports mean bits per pixel. Rows follow `pipelines`.
pub fn run_bench(
    images: &[CfaImage],
    pipelines: &[PipelineMode],
    levels: u8,
    structure: WbStructure,
) -> Result<Vec<BenchRow>> {
    if images.is_empty() {
        return Err(Error::Unsupported(
            "benchmark needs at least one image".into(),
        ));
    }
    let sides = images
        .iter()
        .map(|img| {
            let coeffs = gray_world_coeffs(img, structure)?;
            Ok(WbSide { coeffs, structure })
        })
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(usize, usize, bool)> = (0..pipelines.len())
        .flat_map(|p| (0..images.len()).flat_map(move |i| [(p, i, false), (p, i, true)]))
        .collect();
    let bpp = cells
        .par_iter()
        .map(|&(p, i, on)| {
            let wb = on.then_some(sides[i]);
            bits_per_pixel(&images[i], pipelines[p], levels, wb)
        })
        .collect::<Result<Vec<f64>>>()?;
    let n = images.len() as f64;
    Ok(pipelines
        .iter()
        .enumerate()
        .map(|(p, &pipeline)| {
            let cell = |on: bool| -> f64 {
                cells
                    .iter()
                    .zip(&bpp)
                    .filter(|((cp, _, con), _)| *cp == p && *con == on)
                    .map(|(_, v)| v)
                    .sum::<f64>()
                    / n
            };
            let (raw, wb) = (cell(false), cell(true));
            BenchRow {
                pipeline,
                bpp_raw: raw,
                bpp_wb: wb,
                gain_percent: (raw - wb) / raw * 100.0,
            }
        })
        .collect())
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("pipeline,bpp_raw,bpp_wb,gain_percent\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.6},{:.6},{:.4}",
            r.pipeline, r.bpp_raw, r.bpp_wb, r.gain_percent
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_color(rng: &mut ChaCha8Rng, w: usize, h: usize) -> ColorImage {
        let mut ch = || (0..w * h).map(|_| rng.random_range(0.0..1000.0)).collect();
        ColorImage::new(w, h, ch(), ch(), ch()).unwrap()
    }

    #[test]
    fn entropy_values() {
        assert_eq!(shannon_entropy(&[5; 100]), 0.0);
        let uniform: Vec<i32> = (0..256).cycle().take(256 * 4).collect();
        assert_eq!(shannon_entropy(&uniform), 8.0);
        assert_eq!(shannon_entropy(&[3, -3, 3, -3]), 1.0);
        assert_eq!(shannon_entropy(&[]), 0.0);
    }

    #[test]
    fn decomposition_values() {
        let c = ColorImage::new(1, 2, vec![4.0, 7.0], vec![0.0, 7.0], vec![0.0, 7.0]).unwrap();
        let y = lum_chrom_decompose(&c);
        assert_eq!((y.mu[0], y.gamma[0], y.beta[0]), (1.0, 1.0, 1.0));
        assert_eq!((y.mu[1], y.gamma[1], y.beta[1]), (7.0, 0.0, 0.0));
    }

    #[test]
    fn decomposition_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = random_color(&mut rng, 16, 8);
        let back = lum_chrom_compose(&lum_chrom_decompose(&c)).unwrap();
        for (a, b) in [(&c.r, &back.r), (&c.g, &back.g), (&c.b, &back.b)] {
            for (x, y) in a.iter().zip(b.iter()) {
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn modulation_identity_all_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for phase in Phase::ALL {
            for _ in 0..10 {
                let c = random_color(&mut rng, 8, 6);
                assert!(verify_modulation_identity(&c, phase) <= 1e-9);
            }
        }
        // gray frame: the mosaic is the luminance itself
        let c = ColorImage::uniform(4, 4, [3.0, 3.0, 3.0]);
        let x = cfa_sample_real(&c, Phase::Grbg);
        assert!(x.iter().all(|&v| v == lum_chrom_decompose(&c).mu[0]));
    }

    #[test]
    fn color_white_balance_equalizes_tint() {
        let c = ColorImage::uniform(4, 4, [200.0, 100.0, 50.0]);
        let ill = IlluminantColor::new(200.0, 100.0, 100.0, 50.0).unwrap();
        let z = white_balance_color(&c, &ill);
        assert!((z.r[0] - z.g[0]).abs() < 1e-9 && (z.g[0] - z.b[0]).abs() < 1e-9);
        assert!((z.g[0] - 100.0).abs() < 1e-9);
    }

    #[test]
    fn bench_rows_and_csv() {
        let imgs = synthetic_mosaics(&SceneParams::default(), [0, 1], 32, 12, Phase::Rggb).unwrap();
        let rows = run_bench(&imgs, &PipelineMode::ALL, 5, WbStructure::Pyramid).unwrap();
        assert_eq!(rows.len(), 5);
        for r in &rows {
            assert!(r.bpp_raw > 0.0 && r.bpp_wb > 0.0);
            let g = (r.bpp_raw - r.bpp_wb) / r.bpp_raw * 100.0;
            assert_eq!(r.gain_percent, g);
        }
        let csv = bench_csv(&rows);
        assert!(csv.starts_with("pipeline,bpp_raw,bpp_wb,gain_percent\ndirect,"));
        assert_eq!(csv.lines().count(), 6);
        assert!(run_bench(&[], &PipelineMode::ALL, 5, WbStructure::Pyramid).is_err());
    }
}
