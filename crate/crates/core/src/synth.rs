//! Synthetic handwritten-page generator.
//!
//! Produces a parchment-like background (a low-frequency beige gradient,
//! faint stains and per-pixel grain) covered with lines of dark ink strokes
//! made of short segments and arcs. Output is RGB with components in
//! `[0, 255]` and is fully determined by `(width, height, seed)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::{ColorImage, ColorSpace};
use crate::pixel::PixelVector;

pub const MIN_SIDE: usize = 64;

const PARCHMENT: [f64; 3] = [228.0, 212.0, 176.0];
const INK: [f64; 3] = [58.0, 42.0, 34.0];

/// A generated page and its ink mask (`true` on stroke pixels, row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticDocument {
    pub image: ColorImage,
    pub stroke_mask: Vec<bool>,
}

impl SyntheticDocument {
    pub fn stroke_fraction(&self) -> f64 {
        self.stroke_mask.iter().filter(|&&m| m).count() as f64 / self.stroke_mask.len() as f64
    }
}

struct Canvas {
    width: usize,
    height: usize,
    ink: Vec<bool>,
}

impl Canvas {
    /// Mark every pixel within `radius` of the segment `p0 -> p1`.
    fn segment(&mut self, p0: (f64, f64), p1: (f64, f64), radius: f64) {
        let x_lo = libm::floor(p0.0.min(p1.0) - radius).max(0.0) as usize;
        let y_lo = libm::floor(p0.1.min(p1.1) - radius).max(0.0) as usize;
        let x_hi = (libm::ceil(p0.0.max(p1.0) + radius) as usize).min(self.width - 1);
        let y_hi = (libm::ceil(p0.1.max(p1.1) + radius) as usize).min(self.height - 1);
        let (dx, dy) = (p1.0 - p0.0, p1.1 - p0.1);
        let len_sq = dx * dx + dy * dy;
        for y in y_lo..=y_hi {
            for x in x_lo..=x_hi {
                let (px, py) = (x as f64 - p0.0, y as f64 - p0.1);
                let t = if len_sq > 0.0 { ((px * dx + py * dy) / len_sq).clamp(0.0, 1.0) } else { 0.0 };
                let (ex, ey) = (px - t * dx, py - t * dy);
                if ex * ex + ey * ey <= radius * radius {
                    self.ink[y * self.width + x] = true;
                }
            }
        }
    }

    fn arc(&mut self, center: (f64, f64), r: f64, start: f64, sweep: f64, radius: f64) {
        let steps = 8;
        let point = |k: usize| {
            let a = start + sweep * k as f64 / steps as f64;
            (center.0 + r * libm::cos(a), center.1 + r * libm::sin(a))
        };
        for k in 0..steps {
            self.segment(point(k), point(k + 1), radius);
        }
    }
}

/// Draw one glyph-like cluster of strokes in the box starting at `x` with
/// baseline `base` and x-height `xh`. Returns the advance width.
fn glyph(canvas: &mut Canvas, rng: &mut ChaCha8Rng, x: f64, base: f64, xh: f64, pen: f64) -> f64 {
    let advance = xh * rng.random_range(0.55..1.0);
    let top = base - xh;
    match rng.random_range(0..6) {
        0 => canvas.segment((x, top), (x + rng.random_range(-1.0..1.0), base), pen),
        1 => {
            let ascend = xh * rng.random_range(0.5..0.9);
            canvas.segment((x, top - ascend), (x, base), pen);
        }
        2 => canvas.segment((x, base), (x + advance, top), pen),
        3 => {
            let r = advance * 0.5;
            canvas.arc((x + r, base - r), r, 0.0, 2.0 * PI, pen);
        }
        4 => {
            let r = advance * 0.5;
            canvas.arc((x + r, base - r), r, PI, PI, pen);
            canvas.segment((x + 2.0 * r, base - r), (x + 2.0 * r, base), pen);
        }
        _ => {
            canvas.segment((x, base), (x + advance, base), pen);
            canvas.segment((x + advance * 0.5, top), (x + advance * 0.5, base), pen);
        }
    }
    advance
}

/// Generate a page together with its ink mask.
pub fn generate_document(width: usize, height: usize, seed: u64) -> Result<SyntheticDocument> {
    if width < MIN_SIDE || height < MIN_SIDE {
        return Err(Error::TooSmall { width, height });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut canvas = Canvas { width, height, ink: vec![false; width * height] };

    let spacing = (height as f64 / 14.0).clamp(12.0, 40.0);
    let xh = spacing * 0.42;
    let margin_x = width as f64 * 0.07;
    let margin_y = height as f64 * 0.06 + xh;
    let mut base = margin_y + xh;
    while base < height as f64 - margin_y * 0.5 {
        let mut x = margin_x + rng.random_range(0.0..xh);
        let line_end = width as f64 - margin_x - rng.random_range(0.0..width as f64 * 0.15);
        let slant = rng.random_range(-0.01..0.01);
        while x < line_end {
            let letters = rng.random_range(2..8);
            // pen radius tracks the letter size, as in a scan at a fixed resolution
            let pen = xh * rng.random_range(0.12..0.2);
            for _ in 0..letters {
                let b = base + slant * (x - margin_x);
                x += glyph(&mut canvas, &mut rng, x, b, xh, pen) + xh * 0.2;
                if x >= line_end {
                    break;
                }
            }
            x += xh * rng.random_range(0.8..1.6);
        }
        base += spacing;
    }

    // Background: slow cosine waves, a few soft stains, fine grain.
    let waves: Vec<(f64, f64, f64, f64)> = (0..3)
        .map(|_| {
            let angle = rng.random_range(0.0..PI);
            let wavelength = rng.random_range(0.6..2.0) * width.max(height) as f64;
            (libm::cos(angle) / wavelength, libm::sin(angle) / wavelength, rng.random_range(0.0..2.0 * PI), rng.random_range(3.0..7.0))
        })
        .collect();
    let stains: Vec<(f64, f64, f64, f64)> = (0..rng.random_range(1..4))
        .map(|_| {
            (
                rng.random_range(0.0..width as f64),
                rng.random_range(0.0..height as f64),
                rng.random_range(0.05..0.2) * width.min(height) as f64,
                rng.random_range(0.06..0.16),
            )
        })
        .collect();
    let ink_tint: [f64; 3] = core::array::from_fn(|c| INK[c] + rng.random_range(-8.0..8.0));

    let mut pixels = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let (xf, yf) = (x as f64, y as f64);
            let shade: f64 = waves
                .iter()
                .map(|&(fx, fy, phase, amp)| amp * libm::cos(2.0 * PI * (fx * xf + fy * yf) + phase))
                .sum();
            let stain: f64 = stains
                .iter()
                .map(|&(cx, cy, r, depth)| {
                    let d2 = ((xf - cx) * (xf - cx) + (yf - cy) * (yf - cy)) / (r * r);
                    depth * libm::exp(-d2)
                })
                .sum();
            let grain = rng.random_range(-4.0..4.0);
            let px = if canvas.ink[y * width + x] {
                let jitter = rng.random_range(-6.0..6.0);
                PixelVector(core::array::from_fn(|c| ink_tint[c] + jitter))
            } else {
                PixelVector(core::array::from_fn(|c| {
                    // stains brown the page: blue fades fastest
                    let browning = 1.0 - stain * [0.6, 0.8, 1.2][c];
                    (PARCHMENT[c] + shade) * browning + grain
                }))
            };
            pixels.push(px.clamp_intensity());
        }
    }

    Ok(SyntheticDocument {
        image: ColorImage::new(width, height, ColorSpace::Rgb, pixels)?,
        stroke_mask: canvas.ink,
    })
}

/// Generate a page image; see [`generate_document`] for the ink mask.
pub fn generate_synthetic_document(width: usize, height: usize, seed: u64) -> Result<ColorImage> {
    generate_document(width, height, seed).map(|d| d.image)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(generate_document(96, 80, 5).unwrap(), generate_document(96, 80, 5).unwrap());
        assert_ne!(generate_document(96, 80, 5).unwrap().image, generate_document(96, 80, 6).unwrap().image);
    }

    #[test]
    fn rejects_small_pages() {
        assert_eq!(generate_document(63, 100, 0), Err(Error::TooSmall { width: 63, height: 100 }));
    }

    #[test]
    fn strokes_are_darker_and_cover_a_plausible_fraction() {
        for (w, h, seed) in [(64, 64, 0), (128, 96, 1), (512, 512, 2), (300, 420, 3)] {
            let doc = generate_document(w, h, seed).unwrap();
            let frac = doc.stroke_fraction();
            assert!((0.05..=0.40).contains(&frac), "{w}x{h}: stroke fraction {frac}");
            let (mut ink, mut background, mut ni, mut np) = (0.0, 0.0, 0usize, 0usize);
            for (p, &m) in doc.image.pixels().iter().zip(&doc.stroke_mask) {
                if m {
                    ink += p.norm();
                    ni += 1;
                } else {
                    background += p.norm();
                    np += 1;
                }
            }
            assert!(ink / (ni as f64) < background / (np as f64));
            assert!(doc.image.pixels().iter().all(|p| p.0.iter().all(|c| (0.0..=255.0).contains(c))));
        }
    }
}
