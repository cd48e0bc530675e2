//! R_SC edge-contrast criterion and the Lee local-statistics smoother.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::image::ScalarImage;

/// Samples taken on each side of the pixel along a scan direction.
pub const SEGMENT_LENGTH: usize = 3;
/// Added to the summed side variances before the square root.
pub const EPSILON: f64 = 1e-6;
/// Upper bound on a single directional ratio.
pub const R_MAX: f64 = 1e6;

/// The four scan directions. `x` grows to the right and `y` downwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// 0°, left vs right.
    Horizontal,
    /// 45°, upper right vs lower left.
    Diagonal,
    /// 90°, above vs below.
    Vertical,
    /// 135°, upper left vs lower right.
    AntiDiagonal,
}

impl Direction {
    pub const ALL: [Direction; 4] =
        [Direction::Horizontal, Direction::Diagonal, Direction::Vertical, Direction::AntiDiagonal];

    pub const fn angle_degrees(self) -> u32 {
        match self {
            Direction::Horizontal => 0,
            Direction::Diagonal => 45,
            Direction::Vertical => 90,
            Direction::AntiDiagonal => 135,
        }
    }

    /// Unit step `(dx, dy)` towards the first side; the second side is the
    /// opposite step.
    pub const fn step(self) -> (isize, isize) {
        match self {
            Direction::Horizontal => (-1, 0),
            Direction::Diagonal => (1, -1),
            Direction::Vertical => (0, -1),
            Direction::AntiDiagonal => (-1, -1),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.angle_degrees())
    }
}

/// Lee filter settings for the optional R_SC pre-smoothing.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LeeParams {
    /// Odd window side.
    pub window: usize,
    /// `None` uses the variance of the whole map.
    pub noise_variance: Option<f64>,
}

impl Default for LeeParams {
    fn default() -> Self {
        LeeParams { window: 5, noise_variance: None }
    }
}

fn mean_var(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
    (mean, var)
}

/// Lee smoothing: `out = m + k (in - m)` with `k = v / (v + noise_variance)`,
/// where `m` and `v` are the mean and population variance of the
/// `window x window` neighborhood (edge replicated). `k` is 0 where both
/// variances vanish.
pub fn lee_filter(img: &ScalarImage, window: usize, noise_variance: f64) -> Result<ScalarImage> {
    if window.is_multiple_of(2) {
        return Err(Error::Undefined("Lee window side must be odd"));
    }
    if noise_variance.is_nan() || noise_variance < 0.0 {
        return Err(Error::Undefined("Lee noise variance must be non-negative"));
    }
    let r = (window / 2) as isize;
    let (w, h) = img.dimensions();
    let mut buf = Vec::with_capacity(window * window);
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            buf.clear();
            for dy in -r..=r {
                for dx in -r..=r {
                    buf.push(img.get_clamped(x + dx, y + dy));
                }
            }
            let (m, v) = mean_var(&buf);
            let denom = v + noise_variance;
            let k = if denom > 0.0 { v / denom } else { 0.0 };
            let value = img.get(x as usize, y as usize);
            out.push((m + k * (value - m)).max(0.0));
        }
    }
    ScalarImage::new(w, h, out)
}

fn collect_side(img: &ScalarImage, x: usize, y: usize, step: (isize, isize), len: usize, out: &mut Vec<f64>) {
    out.clear();
    for k in 1..=len as isize {
        out.push(img.get_clamped(x as isize + k * step.0, y as isize + k * step.1));
    }
}

fn ratio(side1: &[f64], side2: &[f64]) -> f64 {
    let (m1, v1) = mean_var(side1);
    let (m2, v2) = mean_var(side2);
    (libm::fabs(m1 - m2) / libm::sqrt(v1 + v2 + EPSILON)).min(R_MAX)
}

/// Contrast ratio at column `x`, row `y` along `dir`: the absolute
/// difference of the two side means over the root of their summed
/// population variances. Each side holds `len` samples, the center excluded;
/// samples past the border are edge replicated.
pub fn directional_ratio(img: &ScalarImage, x: usize, y: usize, dir: Direction, len: usize) -> Result<f64> {
    if len < 2 {
        return Err(Error::SegmentLength(len));
    }
    let (dx, dy) = dir.step();
    let mut s1 = Vec::with_capacity(len);
    let mut s2 = Vec::with_capacity(len);
    collect_side(img, x, y, (dx, dy), len, &mut s1);
    collect_side(img, x, y, (-dx, -dy), len, &mut s2);
    Ok(ratio(&s1, &s2))
}

/// R_SC: the mean over all pixels of `sqrt(sum of squared directional
/// ratios)` across the four directions, optionally after Lee smoothing.
/// Higher is better. Pixels are summed in raster order.
pub fn rsc(edge_map: &ScalarImage, len: usize, lee: Option<LeeParams>) -> Result<f64> {
    if len < 2 {
        return Err(Error::SegmentLength(len));
    }
    let smoothed;
    let map = match lee {
        Some(params) => {
            let nv = match params.noise_variance {
                Some(v) => v,
                None => mean_var(edge_map.values()).1,
            };
            smoothed = lee_filter(edge_map, params.window, nv)?;
            &smoothed
        }
        None => edge_map,
    };

    let (w, h) = map.dimensions();
    let pad = len;
    let pw = w + 2 * pad;
    let padded: Vec<f64> = (0..h + 2 * pad)
        .flat_map(|py| (0..pw).map(move |px| (px as isize - pad as isize, py as isize - pad as isize)))
        .map(|(x, y)| map.get_clamped(x, y))
        .collect();
    let strides = Direction::ALL.map(|d| {
        let (dx, dy) = d.step();
        dx + dy * pw as isize
    });

    let side_stats = |center: usize, stride: isize| {
        let at = |k: usize| padded[(center as isize + k as isize * stride) as usize];
        let n = len as f64;
        let mean = (1..=len).map(at).sum::<f64>() / n;
        let var = (1..=len).map(|k| (at(k) - mean) * (at(k) - mean)).sum::<f64>() / n;
        (mean, var)
    };

    let mut total = 0.0;
    for y in 0..h {
        for x in 0..w {
            let center = (y + pad) * pw + x + pad;
            let mut sum_sq = 0.0;
            for &stride in &strides {
                let (m1, v1) = side_stats(center, stride);
                let (m2, v2) = side_stats(center, -stride);
                let r = (libm::fabs(m1 - m2) / libm::sqrt(v1 + v2 + EPSILON)).min(R_MAX);
                sum_sq += r * r;
            }
            total += libm::sqrt(sum_sq);
        }
    }
    Ok(total / map.len() as f64)
}
