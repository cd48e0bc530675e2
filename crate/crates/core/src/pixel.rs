//! Three-component pixel vectors.

use core::ops::{Add, Index, Mul, Sub};

/// One pixel of a color image: three real components, nominally in `[0, 255]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PixelVector(pub [f64; 3]);

impl PixelVector {
    pub const ZERO: Self = PixelVector([0.0; 3]);
    pub const WHITE: Self = PixelVector([255.0; 3]);

    pub const fn new(c0: f64, c1: f64, c2: f64) -> Self {
        PixelVector([c0, c1, c2])
    }

    pub const fn splat(v: f64) -> Self {
        PixelVector([v; 3])
    }

    pub fn norm_squared(&self) -> f64 {
        let [a, b, c] = self.0;
        a * a + b * b + c * c
    }

    /// Euclidean norm of the vector.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_squared())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn map(self, mut f: impl FnMut(f64) -> f64) -> Self {
        let [a, b, c] = self.0;
        PixelVector([f(a), f(b), f(c)])
    }

    pub fn clamp_intensity(self) -> Self {
        self.map(|c| c.clamp(0.0, 255.0))
    }
}

/// Euclidean norm `sqrt(c0^2 + c1^2 + c2^2)`.
pub fn pixel_norm(v: PixelVector) -> f64 {
    v.norm()
}

impl Index<usize> for PixelVector {
    type Output = f64;

    fn index(&self, channel: usize) -> &f64 {
        &self.0[channel]
    }
}

impl Add for PixelVector {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        PixelVector([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for PixelVector {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        PixelVector([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Mul<f64> for PixelVector {
    type Output = Self;

    fn mul(self, k: f64) -> Self {
        self.map(|c| c * k)
    }
}

impl From<[f64; 3]> for PixelVector {
    fn from(c: [f64; 3]) -> Self {
        PixelVector(c)
    }
}
