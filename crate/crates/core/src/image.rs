//! Image containers.
//!
//! Both image types are row-major and immutable once built: filters always
//! return a fresh image.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::pixel::PixelVector;

/// How the three components of every pixel are interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ColorSpace {
    Rgb,
    /// Hue, saturation and brightness, each rescaled to `[0, 255]`.
    Hsb,
}

impl ColorSpace {
    pub const fn name(self) -> &'static str {
        match self {
            ColorSpace::Rgb => "rgb",
            ColorSpace::Hsb => "hsb",
        }
    }
}

impl fmt::Display for ColorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for ColorSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rgb" => Ok(ColorSpace::Rgb),
            "hsb" | "hsv" => Ok(ColorSpace::Hsb),
            _ => Err(Error::UnknownName { what: "color space", value: s.into() }),
        }
    }
}

/// Clamp `v` into `0..len` and return it as an index.
#[inline]
pub(crate) fn clamp_index(v: isize, len: usize) -> usize {
    v.clamp(0, len as isize - 1) as usize
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColorImage {
    width: usize,
    height: usize,
    space: ColorSpace,
    pixels: Vec<PixelVector>,
}

impl ColorImage {
    pub fn new(width: usize, height: usize, space: ColorSpace, pixels: Vec<PixelVector>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        let expected = width * height;
        if pixels.len() != expected {
            return Err(Error::PixelCount { expected, actual: pixels.len() });
        }
        if let Some(index) = pixels.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(ColorImage { width, height, space, pixels })
    }

    /// An image where every pixel equals `pixel`.
    ///
    /// Panics if either dimension is zero.
    pub fn filled(width: usize, height: usize, space: ColorSpace, pixel: PixelVector) -> Self {
        Self::from_fn(width, height, space, |_, _| pixel)
    }

    /// Build an image from `f(x, y)`, where `x` is the column and `y` the row.
    ///
    /// Panics if either dimension is zero or `f` returns a non-finite pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        space: ColorSpace,
        mut f: impl FnMut(usize, usize) -> PixelVector,
    ) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, space, pixels).expect("invalid image from generator")
    }

    /// Same geometry and color space, new pixel data. Callers guarantee the
    /// length and finiteness.
    pub(crate) fn with_pixels(&self, pixels: Vec<PixelVector>) -> Self {
        debug_assert_eq!(pixels.len(), self.pixels.len());
        ColorImage { width: self.width, height: self.height, space: self.space, pixels }
    }

    pub(crate) fn retag(mut self, space: ColorSpace) -> Self {
        self.space = space;
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn space(&self) -> ColorSpace {
        self.space
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[PixelVector] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<PixelVector> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> PixelVector {
        self.pixels[y * self.width + x]
    }

    /// Pixel lookup with coordinates clamped to the image (edge replication).
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> PixelVector {
        let x = clamp_index(x, self.width);
        let y = clamp_index(y, self.height);
        self.pixels[y * self.width + x]
    }

    /// Grow the image by `margin` pixels on every side, replicating the
    /// outermost rows and columns.
    pub fn pad_replicate(&self, margin: usize) -> ColorImage {
        let m = margin as isize;
        ColorImage::from_fn(self.width + 2 * margin, self.height + 2 * margin, self.space, |x, y| {
            self.get_clamped(x as isize - m, y as isize - m)
        })
    }

    /// Copy out the `width x height` block whose top-left corner is `(x, y)`.
    ///
    /// Panics if the block does not fit inside the image.
    pub fn crop(&self, x: usize, y: usize, width: usize, height: usize) -> ColorImage {
        assert!(x + width <= self.width && y + height <= self.height, "crop out of bounds");
        ColorImage::from_fn(width, height, self.space, |cx, cy| self.get(x + cx, y + cy))
    }

    pub fn map_pixels(&self, f: impl FnMut(&PixelVector) -> PixelVector) -> ColorImage {
        let pixels: Vec<_> = self.pixels.iter().map(f).collect();
        ColorImage::new(self.width, self.height, self.space, pixels).expect("map produced invalid pixel")
    }

    pub(crate) fn check_same_shape(&self, other: &ColorImage) -> Result<()> {
        if self.dimensions() != other.dimensions() {
            return Err(Error::SizeMismatch { left: self.dimensions(), right: other.dimensions() });
        }
        if self.space != other.space {
            return Err(Error::WrongSpace { expected: self.space, actual: other.space });
        }
        Ok(())
    }
}

/// Single-channel map of non-negative magnitudes (edge responses, residuals).
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarImage {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ScalarImage {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        let expected = width * height;
        if values.len() != expected {
            return Err(Error::PixelCount { expected, actual: values.len() });
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if value < 0.0 {
                return Err(Error::Negative { index, value });
            }
        }
        Ok(ScalarImage { width, height, values })
    }

    /// Panics on zero dimensions or a negative/non-finite value.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        Self::new(width, height, values).expect("invalid scalar image from generator")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        self.values[clamp_index(y, self.height) * self.width + clamp_index(x, self.width)]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl FnMut(&f64) -> f64) -> ScalarImage {
        let values: Vec<_> = self.values.iter().map(f).collect();
        ScalarImage::new(self.width, self.height, values).expect("map produced invalid value")
    }
}
