//! Median edge detector prediction for the non-wavelet pipelines.
//!
//! With `a` the left, `b` the upper and `c` the upper-left neighbor, the
//! prediction is `min(a, b)` if `c >= max(a, b)`, `max(a, b)` if
//! `c <= min(a, b)`, and `a + b - c` otherwise. The first row predicts from
//! the left, the first column from above, and the origin from zero.

use crate::cfa::Plane;
use crate::error::{Error, Result};

#[inline]
fn med(a: i64, b: i64, c: i64) -> i64 {
    if c >= a.max(b) {
        a.min(b)
    } else if c <= a.min(b) {
        a.max(b)
    } else {
        a + b - c
    }
}

#[inline]
fn predict_at(data: &[i32], w: usize, i: usize, j: usize) -> i64 {
    let at = |i: usize, j: usize| data[i * w + j] as i64;
    match (i, j) {
        (0, 0) => 0,
        (0, _) => at(0, j - 1),
        (_, 0) => at(i - 1, 0),
        _ => med(at(i, j - 1), at(i - 1, j), at(i - 1, j - 1)),
    }
}

/// Prediction residuals `x - pred`, in raster order.
pub fn med_residuals(p: &Plane) -> Result<Vec<i32>> {
    let w = p.width;
    let mut out = Vec::with_capacity(p.len());
    for i in 0..p.height {
        for j in 0..w {
            let e = p.data[i * w + j] as i64 - predict_at(&p.data, w, i, j);
            out.push(
                i32::try_from(e)
                    .map_err(|_| Error::Unsupported(format!("residual {e} exceeds 32 bits")))?,
            );
        }
    }
    Ok(out)
}

/// Rebuilds a plane from [`med_residuals`].
pub fn med_reconstruct(width: usize, height: usize, residuals: &[i32]) -> Result<Plane> {
    if residuals.len() != width * height {
        return Err(Error::geometry("residual count does not match geometry"));
    }
    let mut data = vec![0i32; width * height];
    for i in 0..height {
        for j in 0..width {
            let v = residuals[i * width + j] as i64 + predict_at(&data, width, i, j);
            data[i * width + j] = i32::try_from(v).map_err(|_| {
                Error::Bitstream(format!("reconstructed sample {v} exceeds 32 bits"))
            })?;
        }
    }
    Plane::from_vec(width, height, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn med_cases() {
        assert_eq!(med(10, 20, 25), 10);
        assert_eq!(med(10, 20, 5), 20);
        assert_eq!(med(10, 20, 12), 18);
    }

    #[test]
    fn smooth_ramp_has_small_residuals() {
        let data: Vec<i32> = (0..64).map(|k| 3 * (k / 8) + 2 * (k % 8)).collect();
        let p = Plane::from_vec(8, 8, data).unwrap();
        let r = med_residuals(&p).unwrap();
        assert_eq!(r[0], 0);
        assert!(r[1..].iter().all(|&e| e == 0 || e == 2 || e == 3), "{r:?}");
    }

    #[test]
    fn roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let w = rng.random_range(1..30);
            let h = rng.random_range(1..30);
            let data = (0..w * h)
                .map(|_| rng.random_range(-70_000..70_000))
                .collect();
            let p = Plane::from_vec(w, h, data).unwrap();
            let r = med_residuals(&p).unwrap();
            assert_eq!(med_reconstruct(w, h, &r).unwrap(), p);
        }
    }
}
