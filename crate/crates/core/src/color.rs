//! RGB <-> HSB conversion.
//!
//! HSB components are stored on the same `[0, 255]` scale as RGB so that
//! norm-based vector ordering weights all three channels alike: hue maps
//! `[0°, 360°)` onto `[0, 255)`, saturation and brightness map `[0, 1]` onto
//! `[0, 255]`. Hue is 0 whenever saturation is 0.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{ColorImage, ColorSpace};
use crate::pixel::PixelVector;

const RANGE_TOLERANCE: f64 = 1e-6;

fn check_range(img: &ColorImage) -> Result<()> {
    for (index, p) in img.pixels().iter().enumerate() {
        for &value in &p.0 {
            if !(-RANGE_TOLERANCE..=255.0 + RANGE_TOLERANCE).contains(&value) {
                return Err(Error::OutOfRange { index, value });
            }
        }
    }
    Ok(())
}

pub fn rgb_pixel_to_hsb(p: PixelVector) -> PixelVector {
    let [r, g, b] = p.clamp_intensity().0;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;

    let saturation = if max > 0.0 { delta / max } else { 0.0 };
    let hue_deg = if delta <= 0.0 {
        0.0
    } else if max == r {
        let h = 60.0 * ((g - b) / delta);
        if h < 0.0 {
            h + 360.0
        } else {
            h
        }
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };

    PixelVector::new(hue_deg / 360.0 * 255.0, saturation * 255.0, max)
}

pub fn hsb_pixel_to_rgb(p: PixelVector) -> PixelVector {
    let [h, s, v] = p.clamp_intensity().0;
    let s = s / 255.0;
    if s <= 0.0 {
        return PixelVector::splat(v);
    }
    let mut hue_deg = h / 255.0 * 360.0;
    if hue_deg >= 360.0 {
        hue_deg -= 360.0;
    }
    let sector = hue_deg / 60.0;
    let chroma = v * s;
    let x = chroma * (1.0 - libm::fabs(sector % 2.0 - 1.0));
    let m = v - chroma;
    let (r, g, b) = match sector as u32 {
        0 => (chroma, x, 0.0),
        1 => (x, chroma, 0.0),
        2 => (0.0, chroma, x),
        3 => (0.0, x, chroma),
        4 => (x, 0.0, chroma),
        _ => (chroma, 0.0, x),
    };
    PixelVector::new(r + m, g + m, b + m).clamp_intensity()
}

pub fn rgb_to_hsb(img: &ColorImage) -> Result<ColorImage> {
    if img.space() != ColorSpace::Rgb {
        return Err(Error::WrongSpace { expected: ColorSpace::Rgb, actual: img.space() });
    }
    check_range(img)?;
    let pixels: Vec<_> = img.pixels().iter().map(|&p| rgb_pixel_to_hsb(p)).collect();
    Ok(img.with_pixels(pixels).retag(ColorSpace::Hsb))
}

pub fn hsb_to_rgb(img: &ColorImage) -> Result<ColorImage> {
    if img.space() != ColorSpace::Hsb {
        return Err(Error::WrongSpace { expected: ColorSpace::Hsb, actual: img.space() });
    }
    check_range(img)?;
    let pixels: Vec<_> = img.pixels().iter().map(|&p| hsb_pixel_to_rgb(p)).collect();
    Ok(img.with_pixels(pixels).retag(ColorSpace::Rgb))
}

/// Convert `img` into `space`, a no-op when it is already there.
pub fn convert(img: &ColorImage, space: ColorSpace) -> Result<ColorImage> {
    match (img.space(), space) {
        (a, b) if a == b => Ok(img.clone()),
        (ColorSpace::Rgb, ColorSpace::Hsb) => rgb_to_hsb(img),
        _ => hsb_to_rgb(img),
    }
}
