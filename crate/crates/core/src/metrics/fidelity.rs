use crate::error::{Error, Result};
use crate::image::ColorImage;

/// Peak intensity used by [`psnr`].
pub const PEAK: f64 = 255.0;

/// Side of the square tiles [`sr`] partitions the residual into.
pub const SR_TILE: usize = 5;

/// Mean over pixels of the squared Euclidean distance between pixel vectors.
pub fn mse(reference: &ColorImage, filtered: &ColorImage) -> Result<f64> {
    reference.check_same_shape(filtered)?;
    let sum: f64 = reference
        .pixels()
        .iter()
        .zip(filtered.pixels())
        .map(|(&r, &f)| (r - f).norm_squared())
        .sum();
    Ok(sum / reference.len() as f64)
}

/// `10 log10(255^2 / MSE)` in decibels; `f64::INFINITY` when the images match.
pub fn psnr(reference: &ColorImage, filtered: &ColorImage) -> Result<f64> {
    let mse = mse(reference, filtered)?;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * libm::log10(PEAK * PEAK / mse))
}

/// Ratio of region statistics.
///
/// The residual `|reference - filtered|` (per-pixel vector norm) is cut into
/// non-overlapping 5x5 tiles, partial tiles at the right and bottom included.
/// The population standard deviations of all tiles are summed and divided by
/// `m * N`, where `m` is the mean pixel norm of the reference and `N` its
/// pixel count. Lower is better. Not symmetric in its arguments.
pub fn sr(reference: &ColorImage, filtered: &ColorImage) -> Result<f64> {
    reference.check_same_shape(filtered)?;
    let (w, h) = reference.dimensions();
    let n = reference.len() as f64;
    let m = reference.pixels().iter().map(|p| p.norm()).sum::<f64>() / n;
    if m == 0.0 {
        return Err(Error::Undefined("SR needs a reference with non-zero mean intensity"));
    }

    let residual: alloc::vec::Vec<f64> =
        reference.pixels().iter().zip(filtered.pixels()).map(|(&r, &f)| (r - f).norm()).collect();

    let mut tile = alloc::vec::Vec::with_capacity(SR_TILE * SR_TILE);
    let mut total_std = 0.0;
    for ty in (0..h).step_by(SR_TILE) {
        for tx in (0..w).step_by(SR_TILE) {
            tile.clear();
            for y in ty..(ty + SR_TILE).min(h) {
                tile.extend_from_slice(&residual[y * w + tx..y * w + (tx + SR_TILE).min(w)]);
            }
            let count = tile.len() as f64;
            let mean = tile.iter().sum::<f64>() / count;
            let var = tile.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / count;
            total_std += libm::sqrt(var);
        }
    }
    Ok(total_std / (m * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::ColorSpace;
    use crate::pixel::PixelVector;
    use approx::assert_abs_diff_eq;

    fn flat(w: usize, h: usize, v: PixelVector) -> ColorImage {
        ColorImage::filled(w, h, ColorSpace::Rgb, v)
    }

    #[test]
    fn identical_images() {
        let img = ColorImage::from_fn(7, 6, ColorSpace::Rgb, |x, y| PixelVector::new(x as f64, y as f64, 3.0));
        assert_eq!(mse(&img, &img).unwrap(), 0.0);
        assert_eq!(psnr(&img, &img).unwrap(), f64::INFINITY);
        assert_eq!(sr(&img, &img).unwrap(), 0.0);
    }

    #[test]
    fn uniform_offset() {
        let r = flat(4, 4, PixelVector::ZERO);
        let f = flat(4, 4, PixelVector::splat(10.0));
        assert_eq!(mse(&r, &f).unwrap(), 300.0);
        assert_abs_diff_eq!(psnr(&r, &f).unwrap(), 10.0 * libm::log10(65025.0 / 300.0), epsilon = 1e-12);
        assert_abs_diff_eq!(psnr(&r, &f).unwrap(), 23.36, epsilon = 0.01);
    }

    #[test]
    fn single_white_pixel() {
        let r = flat(10, 10, PixelVector::ZERO);
        let mut px = r.pixels().to_vec();
        px[37] = PixelVector::WHITE;
        let f = ColorImage::new(10, 10, ColorSpace::Rgb, px).unwrap();
        assert_abs_diff_eq!(mse(&r, &f).unwrap(), 1950.75, epsilon = 1e-9);
    }

    #[test]
    fn mse_symmetric_sr_not() {
        let a = flat(5, 5, PixelVector::splat(50.0));
        let b = ColorImage::from_fn(5, 5, ColorSpace::Rgb, |x, y| PixelVector::splat(((x + y) % 2) as f64 * 200.0));
        assert_eq!(mse(&a, &b).unwrap(), mse(&b, &a).unwrap());
        let ab = sr(&a, &b).unwrap();
        let ba = sr(&b, &a).unwrap();
        assert!((ab - ba).abs() > 1e-6, "{ab} vs {ba}");
    }

    #[test]
    fn size_and_space_mismatch() {
        let a = flat(5, 5, PixelVector::ZERO);
        assert!(matches!(mse(&a, &flat(5, 4, PixelVector::ZERO)), Err(Error::SizeMismatch { .. })));
        let hsb = ColorImage::filled(5, 5, ColorSpace::Hsb, PixelVector::ZERO);
        assert!(matches!(psnr(&a, &hsb), Err(Error::WrongSpace { .. })));
    }

    #[test]
    fn sr_undefined_for_black_reference() {
        let a = flat(5, 5, PixelVector::ZERO);
        assert!(matches!(sr(&a, &flat(5, 5, PixelVector::splat(1.0))), Err(Error::Undefined(_))));
    }

    #[test]
    fn sr_uniform_shift_is_zero() {
        let r = ColorImage::from_fn(12, 9, ColorSpace::Rgb, |x, y| PixelVector::new(x as f64 * 10.0, y as f64, 40.0));
        let f = r.map_pixels(|p| *p + PixelVector::new(3.0, -2.0, 6.0));
        assert_abs_diff_eq!(sr(&r, &f).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn sr_checkerboard_tile() {
        // Reference norm 100 everywhere; the top-left tile gets a +20 offset on
        // every channel in a checkerboard (13 of 25 pixels), residual sqrt(3)*20.
        let r = flat(10, 10, PixelVector::new(100.0, 0.0, 0.0));
        let f = ColorImage::from_fn(10, 10, ColorSpace::Rgb, |x, y| {
            let base = PixelVector::new(100.0, 0.0, 0.0);
            if x < 5 && y < 5 && (x + y) % 2 == 0 {
                base + PixelVector::splat(20.0)
            } else {
                base
            }
        });
        let a = libm::sqrt(3.0) * 20.0;
        let p = 13.0 / 25.0;
        let tile_std = a * libm::sqrt(p * (1.0 - p));
        let expected = tile_std / (100.0 * 100.0);
        assert_abs_diff_eq!(sr(&r, &f).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 0.00173066, epsilon = 1e-8);
    }

    #[test]
    fn sr_includes_partial_tiles() {
        // 7x7: tiles are 5x5, 2x5, 5x2, 2x2. Put variation only in the 2x2 corner.
        let r = flat(7, 7, PixelVector::new(10.0, 0.0, 0.0));
        let f = ColorImage::from_fn(7, 7, ColorSpace::Rgb, |x, y| {
            if x == 6 && y == 6 { PixelVector::new(14.0, 0.0, 0.0) } else { PixelVector::new(10.0, 0.0, 0.0) }
        });
        // residuals in the corner tile: 0, 0, 0, 4 -> mean 1, var 3
        let expected = libm::sqrt(3.0) / (10.0 * 49.0);
        assert_abs_diff_eq!(sr(&r, &f).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn psnr_decreases_with_mse() {
        let r = flat(3, 3, PixelVector::splat(100.0));
        let mut last = f64::INFINITY;
        for k in 1..20 {
            let f = flat(3, 3, PixelVector::splat(100.0 + k as f64));
            let p = psnr(&r, &f).unwrap();
            assert!(p < last);
            last = p;
        }
    }
}
