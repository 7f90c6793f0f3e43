//! 2D DFT helpers and carrier/highpass energy reports.
//!
//! Power-of-two planes only; the transforms are backed by `rustfft`.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

fn transform(data: &mut [Complex<f64>], width: usize, height: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let (row_fft, col_fft) = if inverse {
        (
            planner.plan_fft_inverse(width),
            planner.plan_fft_inverse(height),
        )
    } else {
        (
            planner.plan_fft_forward(width),
            planner.plan_fft_forward(height),
        )
    };
    for row in data.chunks_exact_mut(width) {
        row_fft.process(row);
    }
    let mut column = vec![Complex::new(0.0, 0.0); height];
    for j in 0..width {
        for i in 0..height {
            column[i] = data[i * width + j];
        }
        col_fft.process(&mut column);
        for i in 0..height {
            data[i * width + j] = column[i];
        }
    }
}

/// Unnormalized forward 2D DFT of a row-major real plane.
pub fn fft2d(data: &[f64], width: usize, height: usize) -> Vec<Complex<f64>> {
    assert_eq!(data.len(), width * height);
    let mut buf: Vec<Complex<f64>> = data.iter().map(|&v| Complex::new(v, 0.0)).collect();
    transform(&mut buf, width, height, false);
    buf
}

/// Inverse of [`fft2d`] (scaled by `1/(width*height)`), real part only.
pub fn ifft2d(spec: &[Complex<f64>], width: usize, height: usize) -> Vec<f64> {
    assert_eq!(spec.len(), width * height);
    let mut buf = spec.to_vec();
    transform(&mut buf, width, height, true);
    let scale = 1.0 / (width * height) as f64;
    buf.into_iter().map(|c| c.re * scale).collect()
}

/// Signed frequency of DFT bin `k` out of `n`, in cycles per sample.
fn signed_freq(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64 / n as f64
    } else {
        k as f64 / n as f64 - 1.0
    }
}

/// Normalized radial frequency of bin `(u, v)` (row, column).
pub fn radial_frequency(u: usize, v: usize, width: usize, height: usize) -> f64 {
    signed_freq(u, height).hypot(signed_freq(v, width))
}

fn wrap_distance(a: usize, b: usize, n: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(n - d)
}

/// Energy fractions of one plane. Fractions are relative to the total
/// non-DC energy; a plane with no AC energy reports zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub plane_id: String,
    /// Sum of `|X|^2` over every bin except DC.
    pub total_energy: f64,
    /// Fractions in the square windows around `(pi,0)`, `(0,pi)`, `(pi,pi)`
    /// where the first coordinate is the vertical frequency.
    pub carrier_fractions: [f64; 3],
    /// Fraction of energy at radial frequency above the cutoff.
    pub highpass_fraction: f64,
}

impl SpectrumReport {
    pub fn carrier_total(&self) -> f64 {
        self.carrier_fractions.iter().sum()
    }
}

/// Default carrier window half-width in bins: `width / 16`.
pub fn default_carrier_radius(width: usize) -> usize {
    (width / 16).max(1)
}

pub fn spectrum_report(
    plane_id: impl Into<String>,
    data: &[f64],
    width: usize,
    height: usize,
    cutoff: f64,
) -> Result<SpectrumReport> {
    spectrum_report_with_radius(
        plane_id,
        data,
        width,
        height,
        cutoff,
        default_carrier_radius(width),
    )
}

pub fn spectrum_report_with_radius(
    plane_id: impl Into<String>,
    data: &[f64],
    width: usize,
    height: usize,
    cutoff: f64,
    radius: usize,
) -> Result<SpectrumReport> {
    if !width.is_power_of_two() || !height.is_power_of_two() {
        return Err(Error::geometry(format!(
            "spectrum needs power-of-two dimensions, got {width}x{height}"
        )));
    }
    if data.len() != width * height {
        return Err(Error::geometry("plane size does not match geometry"));
    }
    if 4 * radius >= width.min(height) {
        return Err(Error::geometry("carrier windows would overlap"));
    }
    let spec = fft2d(data, width, height);
    let carriers = [(height / 2, 0), (0, width / 2), (height / 2, width / 2)];
    let mut total = 0.0;
    let mut carrier = [0.0; 3];
    let mut high = 0.0;
    for u in 0..height {
        for v in 0..width {
            if u == 0 && v == 0 {
                continue;
            }
            let e = spec[u * width + v].norm_sqr();
            total += e;
            if radial_frequency(u, v, width, height) > cutoff {
                high += e;
            }
            for (k, &(cu, cv)) in carriers.iter().enumerate() {
                if wrap_distance(u, cu, height) <= radius && wrap_distance(v, cv, width) <= radius {
                    carrier[k] += e;
                }
            }
        }
    }
    // round-off floor for planes that are constant up to FFT noise
    let floor = 1e-24 * spec[0].norm_sqr().max(1.0);
    let frac = |x: f64| if total > floor { x / total } else { 0.0 };
    Ok(SpectrumReport {
        plane_id: plane_id.into(),
        total_energy: total,
        carrier_fractions: [frac(carrier[0]), frac(carrier[1]), frac(carrier[2])],
        highpass_fraction: frac(high),
    })
}

/// Fraction of non-DC energy above `cutoff`.
pub fn highpass_fraction(data: &[f64], width: usize, height: usize, cutoff: f64) -> Result<f64> {
    Ok(spectrum_report("", data, width, height, cutoff)?.highpass_fraction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn naive_dft(data: &[f64], w: usize, h: usize) -> Vec<Complex<f64>> {
        let mut out = vec![Complex::new(0.0, 0.0); w * h];
        for u in 0..h {
            for v in 0..w {
                let mut acc = Complex::new(0.0, 0.0);
                for i in 0..h {
                    for j in 0..w {
                        let ang =
                            -2.0 * PI * ((u * i) as f64 / h as f64 + (v * j) as f64 / w as f64);
                        acc += Complex::from_polar(data[i * w + j], ang);
                    }
                }
                out[u * w + v] = acc;
            }
        }
        out
    }

    #[test]
    fn fft_matches_naive_dft() {
        let (w, h) = (8, 4);
        let data: Vec<f64> = (0..w * h).map(|k| ((k * 37) % 11) as f64 - 3.0).collect();
        let fast = fft2d(&data, w, h);
        let slow = naive_dft(&data, w, h);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-9);
        }
        let back = ifft2d(&fast, w, h);
        for (a, b) in back.iter().zip(&data) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn parseval() {
        let (w, h) = (32, 16);
        let data: Vec<f64> = (0..w * h)
            .map(|k| ((k * 7919) % 101) as f64 * 0.37)
            .collect();
        let spatial: f64 = data.iter().map(|v| v * v).sum();
        let spectral: f64 =
            fft2d(&data, w, h).iter().map(|c| c.norm_sqr()).sum::<f64>() / (w * h) as f64;
        assert!((spatial - spectral).abs() / spatial < 1e-6);
    }

    #[test]
    fn constant_plane_reports_zero() {
        let r = spectrum_report("c", &[5.0; 64], 8, 8, 0.1).unwrap();
        assert_eq!(r.carrier_fractions, [0.0; 3]);
        assert_eq!(r.highpass_fraction, 0.0);
    }

    #[test]
    fn checkerboard_sits_on_pi_pi() {
        let (w, h) = (32, 32);
        let data: Vec<f64> = (0..w * h)
            .map(|k| {
                if ((k / w) + (k % w)) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        let r = spectrum_report("cb", &data, w, h, 0.1).unwrap();
        assert!((r.carrier_fractions[2] - 1.0).abs() < 1e-12);
        assert!(r.carrier_fractions[0] < 1e-12 && r.carrier_fractions[1] < 1e-12);
        assert!((r.highpass_fraction - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vertical_stripes_sit_on_zero_pi() {
        // (-1)^j varies along a row: horizontal frequency pi
        let (w, h) = (16, 16);
        let data: Vec<f64> = (0..w * h)
            .map(|k| if k % 2 == 0 { 2.0 } else { 0.0 })
            .collect();
        let r = spectrum_report("s", &data, w, h, 0.1).unwrap();
        assert!((r.carrier_fractions[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(spectrum_report("x", &[0.0; 48], 8, 6, 0.1).is_err());
    }
}
