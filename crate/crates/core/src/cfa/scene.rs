//! Seeded synthetic scenes: independent smooth per-channel fields plus one
//! highpass field shared by all channels, then a per-channel tint.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;

use super::ColorImage;
use crate::analysis::spectrum::{fft2d, ifft2d, radial_frequency};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SceneParams {
    /// Multiplicative channel gains `(l_r, l_g, l_b)`.
    pub tint: [f64; 3],
    /// Standard deviation of the shared highpass field.
    pub hp_amplitude: f64,
    /// Normalized radial frequency in `(0, 0.5]` separating the bands.
    pub lp_cutoff: f64,
    pub rng_seed: u64,
    /// Untinted mean level of every channel.
    pub mean_level: f64,
    /// Standard deviation of each per-channel lowpass field.
    pub lp_amplitude: f64,
}

impl Default for SceneParams {
    fn default() -> Self {
        SceneParams {
            tint: [1.0, 1.0, 1.0],
            hp_amplitude: 40.0,
            lp_cutoff: 0.1,
            rng_seed: 0,
            mean_level: 800.0,
            lp_amplitude: 150.0,
        }
    }
}

impl SceneParams {
    pub fn validate(&self) -> Result<()> {
        if self.tint.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return Err(Error::Scene(format!(
                "tint components must be positive, got {:?}",
                self.tint
            )));
        }
        if !(self.hp_amplitude >= 0.0 && self.hp_amplitude.is_finite()) {
            return Err(Error::Scene("hp_amplitude must be >= 0".into()));
        }
        if !(self.lp_cutoff > 0.0 && self.lp_cutoff <= 0.5) {
            return Err(Error::Scene("lp_cutoff must lie in (0, 0.5]".into()));
        }
        if !(self.lp_amplitude >= 0.0 && self.mean_level >= 0.0) {
            return Err(Error::Scene("levels must be >= 0".into()));
        }
        Ok(())
    }
}

/// Seeded white noise masked in the DFT domain, rescaled to zero mean and
/// unit standard deviation. `keep` decides per radial frequency.
fn masked_noise(
    rng: &mut ChaCha8Rng,
    width: usize,
    height: usize,
    keep: impl Fn(f64) -> bool,
) -> Vec<f64> {
    let noise: Vec<f64> = (0..width * height)
        .map(|_| StandardNormal.sample(rng))
        .collect();
    let mut spec = fft2d(&noise, width, height);
    for u in 0..height {
        for v in 0..width {
            if !keep(radial_frequency(u, v, width, height)) {
                spec[u * width + v] = Complex::new(0.0, 0.0);
            }
        }
    }
    spec[0] = Complex::new(0.0, 0.0);
    let field = ifft2d(&spec, width, height);
    let n = field.len() as f64;
    let std = (field.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    if std > 0.0 {
        field.into_iter().map(|v| v / std).collect()
    } else {
        field
    }
}

/// Generates a deterministic test scene. Dimensions must be powers of two.
pub fn synth_scene(p: &SceneParams, width: usize, height: usize) -> Result<ColorImage> {
    p.validate()?;
    if !width.is_power_of_two() || !height.is_power_of_two() || width < 4 || height < 4 {
        return Err(Error::geometry(format!(
            "scene dimensions {width}x{height} must be powers of two >= 4"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.rng_seed);
    let cutoff = p.lp_cutoff;
    let lp: Vec<Vec<f64>> = (0..3)
        .map(|_| masked_noise(&mut rng, width, height, |f| f <= cutoff))
        .collect();
    let hp = masked_noise(&mut rng, width, height, |f| f > cutoff);

    let channel = |c: usize| -> Vec<f64> {
        lp[c]
            .iter()
            .zip(&hp)
            .map(|(&l, &h)| {
                let v = p.mean_level + p.lp_amplitude * l + p.hp_amplitude * h;
                (p.tint[c] * v).max(0.0)
            })
            .collect()
    };
    ColorImage::new(width, height, channel(0), channel(1), channel(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_seed() {
        let p = SceneParams {
            rng_seed: 11,
            ..Default::default()
        };
        let a = synth_scene(&p, 32, 16).unwrap();
        let b = synth_scene(&p, 32, 16).unwrap();
        assert_eq!(a, b);
        let c = synth_scene(&SceneParams { rng_seed: 12, ..p }, 32, 16).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_params() {
        let bad_tint = SceneParams {
            tint: [1.0, 0.0, 1.0],
            ..Default::default()
        };
        assert!(matches!(
            synth_scene(&bad_tint, 16, 16),
            Err(Error::Scene(_))
        ));
        assert!(synth_scene(&SceneParams::default(), 24, 16).is_err());
        let bad_cut = SceneParams {
            lp_cutoff: 0.7,
            ..Default::default()
        };
        assert!(synth_scene(&bad_cut, 16, 16).is_err());
    }

    #[test]
    fn tint_scales_channels() {
        let base = synth_scene(&SceneParams::default(), 16, 16).unwrap();
        let tinted = synth_scene(
            &SceneParams {
                tint: [2.0, 1.0, 0.5],
                ..Default::default()
            },
            16,
            16,
        )
        .unwrap();
        for k in 0..256 {
            assert!((tinted.r[k] - 2.0 * base.r[k]).abs() < 1e-9);
            assert!((tinted.g[k] - base.g[k]).abs() < 1e-9);
            assert!((tinted.b[k] - 0.5 * base.b[k]).abs() < 1e-9);
        }
    }
}
