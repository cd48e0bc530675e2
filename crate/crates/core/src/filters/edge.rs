use alloc::vec::Vec;

use super::denoise::{dilate, erode};
use super::{Approach, FilterKind};
use crate::error::{Error, Result};
use crate::image::{ColorImage, ScalarImage};
use crate::pixel::PixelVector;

fn require_single(kind: FilterKind, approach: Approach) -> Result<()> {
    if approach.is_dual() {
        Err(Error::InvalidApproach { kind, approach })
    } else {
        Ok(())
    }
}

fn map_window_scalar(img: &ColorImage, mut f: impl FnMut([PixelVector; 9]) -> f64) -> ScalarImage {
    let (w, h) = img.dimensions();
    let px = img.pixels();
    let mut values = Vec::with_capacity(w * h);
    for y in 0..h {
        let up = &px[y.saturating_sub(1) * w..][..w];
        let mid = &px[y * w..][..w];
        let down = &px[(y + 1).min(h - 1) * w..][..w];
        for x in 0..w {
            let (l, r) = (x.saturating_sub(1), (x + 1).min(w - 1));
            values.push(f([up[l], up[x], up[r], mid[l], mid[x], mid[r], down[l], down[x], down[r]]));
        }
    }
    ScalarImage::new(w, h, values).expect("edge magnitudes are finite and non-negative")
}

/// Laplacian edge magnitude.
///
/// Marginal: each channel is convolved with the 4-neighbor kernel
/// `[0 1 0; 1 -4 1; 0 1 0]` and the three responses are combined by their
/// Euclidean norm. Vector: the square root of the squared differences between
/// the center and its four neighbors, summed over all channels.
pub fn laplacian(img: &ColorImage, approach: Approach) -> Result<ScalarImage> {
    require_single(FilterKind::Laplacian, approach)?;
    let out = match approach {
        Approach::Marginal => map_window_scalar(img, |[_, b, _, d, e, f, _, h, _]| {
            let mut energy = 0.0;
            for c in 0..3 {
                let response = b[c] + d[c] + f[c] + h[c] - 4.0 * e[c];
                energy += response * response;
            }
            libm::sqrt(energy)
        }),
        _ => map_window_scalar(img, |[_, b, _, d, e, f, _, h, _]| {
            let mut energy = 0.0;
            for c in 0..3 {
                for n in [b[c], d[c], f[c], h[c]] {
                    let diff = n - e[c];
                    energy += diff * diff;
                }
            }
            libm::sqrt(energy)
        }),
    };
    Ok(out)
}

/// Sobel edge magnitude.
///
/// Marginal: per-channel horizontal and vertical Sobel responses give a
/// per-channel magnitude `sqrt(gh^2 + gv^2)`; the three magnitudes are then
/// combined by their Euclidean norm. Vector: the differences are squared
/// before they are summed,
/// `(c-a)^2 + 2(f-d)^2 + (i-g)^2 + (g-a)^2 + 2(h-b)^2 + (i-c)^2` per channel,
/// with the weight 2 applied to the squared term.
pub fn sobel(img: &ColorImage, approach: Approach) -> Result<ScalarImage> {
    require_single(FilterKind::Sobel, approach)?;
    let out = match approach {
        Approach::Marginal => map_window_scalar(img, |[a, b, c, d, _, f, g, h, i]| {
            let mut energy = 0.0;
            for k in 0..3 {
                let gh = (c[k] - a[k]) + 2.0 * (f[k] - d[k]) + (i[k] - g[k]);
                let gv = (g[k] - a[k]) + 2.0 * (h[k] - b[k]) + (i[k] - c[k]);
                energy += gh * gh + gv * gv;
            }
            libm::sqrt(energy)
        }),
        _ => map_window_scalar(img, |[a, b, c, d, _, f, g, h, i]| {
            let sq = |u: f64, v: f64| (u - v) * (u - v);
            let mut energy = 0.0;
            for k in 0..3 {
                energy += sq(c[k], a[k]) + 2.0 * sq(f[k], d[k]) + sq(i[k], g[k]);
                energy += sq(g[k], a[k]) + 2.0 * sq(h[k], b[k]) + sq(i[k], c[k]);
            }
            libm::sqrt(energy)
        }),
    };
    Ok(out)
}

/// Norm of `dilate(img) - erode(img)` under the given approach.
pub fn morph_gradient(img: &ColorImage, approach: Approach) -> Result<ScalarImage> {
    require_single(FilterKind::MorphGradient, approach)?;
    let hi = dilate(img, approach)?;
    let lo = erode(img, approach)?;
    let values = hi.pixels().iter().zip(lo.pixels()).map(|(&d, &e)| (d - e).norm()).collect();
    Ok(ScalarImage::new(img.width(), img.height(), values).expect("gradient magnitudes are finite"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::ColorSpace;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type EdgeFn = fn(&ColorImage, Approach) -> Result<ScalarImage>;
    const EDGE_FILTERS: [EdgeFn; 3] = [laplacian, sobel, morph_gradient];

    fn random_image(w: usize, h: usize, seed: u64) -> ColorImage {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ColorImage::from_fn(w, h, ColorSpace::Rgb, |_, _| {
            PixelVector::new(rng.random_range(0.0..255.0), rng.random_range(0.0..255.0), rng.random_range(0.0..255.0))
        })
    }

    /// Straight 3x3 correlation of one channel with `kernel`, independent of
    /// the closed forms above.
    fn correlate(window: &[[f64; 3]; 3], kernel: &[[f64; 3]; 3]) -> f64 {
        let mut acc = 0.0;
        for r in 0..3 {
            for c in 0..3 {
                acc += window[r][c] * kernel[r][c];
            }
        }
        acc
    }

    #[test]
    fn constant_image_gives_zero_maps() {
        let img = ColorImage::filled(7, 5, ColorSpace::Rgb, PixelVector::new(30.0, 90.0, 250.0));
        for f in EDGE_FILTERS {
            for a in Approach::SINGLE {
                assert!(f(&img, a).unwrap().values().iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn dual_rejected() {
        let img = ColorImage::filled(3, 3, ColorSpace::Rgb, PixelVector::ZERO);
        for f in EDGE_FILTERS {
            assert!(matches!(f(&img, Approach::MarginalThenVector), Err(Error::InvalidApproach { .. })));
        }
    }

    #[test]
    fn laplacian_window_values() {
        let n = PixelVector::splat(20.0);
        let img = ColorImage::new(
            3,
            3,
            ColorSpace::Rgb,
            alloc::vec![PixelVector::ZERO, n, PixelVector::ZERO, n, PixelVector::splat(10.0), n, PixelVector::ZERO, n, PixelVector::ZERO],
        )
        .unwrap();
        let vector = laplacian(&img, Approach::Vector).unwrap().get(1, 1);
        assert_abs_diff_eq!(vector, libm::sqrt(1200.0), epsilon = 1e-12);
        assert_abs_diff_eq!(vector, 34.641, epsilon = 1e-3);

        let kernel = [[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]];
        let window = [[0.0, 20.0, 0.0], [20.0, 10.0, 20.0], [0.0, 20.0, 0.0]];
        let per_channel = correlate(&window, &kernel);
        assert_eq!(per_channel, 40.0);
        let marginal = laplacian(&img, Approach::Marginal).unwrap().get(1, 1);
        assert_abs_diff_eq!(marginal, per_channel * libm::sqrt(3.0), epsilon = 1e-12);
        assert_abs_diff_eq!(marginal, 69.282, epsilon = 1e-3);
    }

    #[test]
    fn sobel_step_edge_matches_hand_evaluation() {
        // columns 0, 0, 90 in every channel
        let img = ColorImage::from_fn(3, 3, ColorSpace::Rgb, |x, _| {
            PixelVector::splat(if x == 2 { 90.0 } else { 0.0 })
        });
        let window = [[0.0, 0.0, 90.0]; 3];
        let sh = [[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]];
        let sv = [[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]];
        let (fh, fv) = (correlate(&window, &sh), correlate(&window, &sv));
        assert_eq!((fh, fv), (360.0, 0.0));
        let per_channel = libm::sqrt(fh * fh + fv * fv);
        let marginal_expected = libm::sqrt(3.0 * per_channel * per_channel);

        // (c-a)^2 + 2(f-d)^2 + (i-g)^2 = 8100 + 16200 + 8100; vertical terms vanish
        let vector_expected = libm::sqrt(3.0 * (8100.0 + 2.0 * 8100.0 + 8100.0));

        let marginal = sobel(&img, Approach::Marginal).unwrap().get(1, 1);
        let vector = sobel(&img, Approach::Vector).unwrap().get(1, 1);
        assert_abs_diff_eq!(marginal, marginal_expected, epsilon = 1e-9);
        assert_abs_diff_eq!(marginal, 623.538, epsilon = 1e-3);
        assert_abs_diff_eq!(vector, vector_expected, epsilon = 1e-9);
        assert_abs_diff_eq!(vector, 311.769, epsilon = 1e-3);
    }

    #[test]
    fn vector_sobel_is_not_pointwise_above_marginal() {
        // On a clean step the marginal sum of differences exceeds the root of
        // summed squares, so the pointwise ordering does not hold in general.
        let img = random_image(32, 32, 1);
        let m = sobel(&img, Approach::Marginal).unwrap();
        let v = sobel(&img, Approach::Vector).unwrap();
        let above = m.values().iter().zip(v.values()).filter(|(m, v)| v >= m).count();
        assert!(above < img.len());
    }

    #[test]
    fn morph_gradient_on_binary_step() {
        let img = ColorImage::from_fn(8, 6, ColorSpace::Rgb, |x, _| {
            if x < 4 { PixelVector::ZERO } else { PixelVector::WHITE }
        });
        for a in Approach::SINGLE {
            let g = morph_gradient(&img, a).unwrap();
            for y in 0..6 {
                for x in 0..8 {
                    let expected = if x == 3 || x == 4 { libm::sqrt(3.0) * 255.0 } else { 0.0 };
                    assert_abs_diff_eq!(g.get(x, y), expected, epsilon = 1e-9);
                }
            }
            assert_abs_diff_eq!(g.max(), 441.67, epsilon = 0.01);
        }
    }

    #[test]
    fn edge_filters_translation_equivariant() {
        let img = random_image(20, 20, 9);
        let shifted = img.crop(2, 3, 15, 14);
        for f in EDGE_FILTERS {
            for a in Approach::SINGLE {
                let full = f(&img, a).unwrap();
                let part = f(&shifted, a).unwrap();
                for y in 2..12 {
                    for x in 2..13 {
                        assert_eq!(part.get(x, y), full.get(x + 2, y + 3));
                    }
                }
            }
        }
    }
}
