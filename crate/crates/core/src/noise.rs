//! Seeded synthetic degradations: additive Gaussian, multiplicative speckle
//! and whole-pixel salt & pepper, each at a weak and a strong level.
//!
//! All randomness comes from a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`; equal inputs and seeds give bit-equal
//! outputs. Results are clamped to `[0, 255]`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::image::{ColorImage, ColorSpace};
use crate::pixel::PixelVector;

/// Name of the generator behind every noise model, for reproducibility logs.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha, seed_from_u64)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NoiseKind {
    Gaussian,
    Speckle,
    SaltPepper,
}

impl NoiseKind {
    pub const fn name(self) -> &'static str {
        match self {
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::Speckle => "speckle",
            NoiseKind::SaltPepper => "salt_pepper",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(NoiseKind::Gaussian),
            "speckle" => Ok(NoiseKind::Speckle),
            "salt_pepper" | "salt-pepper" | "saltpepper" => Ok(NoiseKind::SaltPepper),
            _ => Err(Error::UnknownName { what: "noise kind", value: s.into() }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Strength {
    Weak,
    Strong,
}

/// One of the six degradation models, with its parameter and seed.
///
/// `parameter` is the standard deviation in intensity levels for Gaussian
/// noise, the variance of the multiplicative factor for speckle, and the
/// fraction of corrupted pixels for salt & pepper.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub strength: Strength,
    pub parameter: f64,
    pub seed: u64,
}

impl NoiseSpec {
    /// Default parameter for each model and level.
    pub const fn default_parameter(kind: NoiseKind, strength: Strength) -> f64 {
        match (kind, strength) {
            (NoiseKind::Gaussian, Strength::Weak) => 10.0,
            (NoiseKind::Gaussian, Strength::Strong) => 30.0,
            (NoiseKind::Speckle, Strength::Weak) => 0.04,
            (NoiseKind::Speckle, Strength::Strong) => 0.16,
            (NoiseKind::SaltPepper, Strength::Weak) => 0.02,
            (NoiseKind::SaltPepper, Strength::Strong) => 0.10,
        }
    }

    pub fn new(kind: NoiseKind, strength: Strength, seed: u64) -> Self {
        NoiseSpec { kind, strength, parameter: Self::default_parameter(kind, strength), seed }
    }

    /// Noise model `id` in `1..=6` with its default parameter: odd ids are weak,
    /// even ids strong; 1-2 Gaussian, 3-4 speckle, 5-6 salt & pepper.
    pub fn from_id(id: u8, seed: u64) -> Result<Self> {
        let kind = match id {
            1 | 2 => NoiseKind::Gaussian,
            3 | 4 => NoiseKind::Speckle,
            5 | 6 => NoiseKind::SaltPepper,
            _ => return Err(Error::UnknownName { what: "noise id", value: alloc::format!("{id}") }),
        };
        let strength = if id % 2 == 1 { Strength::Weak } else { Strength::Strong };
        Ok(Self::new(kind, strength, seed))
    }

    pub const fn id(&self) -> u8 {
        let base = match self.kind {
            NoiseKind::Gaussian => 1,
            NoiseKind::Speckle => 3,
            NoiseKind::SaltPepper => 5,
        };
        match self.strength {
            Strength::Weak => base,
            Strength::Strong => base + 1,
        }
    }

    pub fn with_parameter(mut self, parameter: f64) -> Self {
        self.parameter = parameter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            NoiseKind::Gaussian => check_sigma(self.parameter),
            NoiseKind::Speckle => check_unit_open(self.parameter, "speckle variance"),
            NoiseKind::SaltPepper => check_unit_open(self.parameter, "salt & pepper density"),
        }
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidNoise { model: "gaussian sigma", value: sigma })
    }
}

fn check_unit_open(value: f64, model: &'static str) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidNoise { model, value })
    }
}

/// Adds an independent `N(0, sigma^2)` deviate to every component.
pub fn add_gaussian(img: &ColorImage, sigma: f64, seed: u64) -> Result<ColorImage> {
    check_sigma(sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("sigma checked");
    Ok(img.map_pixels(|p| p.map(|c| (c + normal.sample(&mut rng)).clamp(0.0, 255.0))))
}

/// Multiplicative noise `out = in + in * n`, `n ~ N(0, variance)` per component.
pub fn add_speckle(img: &ColorImage, variance: f64, seed: u64) -> Result<ColorImage> {
    check_unit_open(variance, "speckle variance")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, libm::sqrt(variance)).expect("variance checked");
    Ok(img.map_pixels(|p| p.map(|c| (c + c * normal.sample(&mut rng)).clamp(0.0, 255.0))))
}

/// Replaces `round(density * N)` distinct pixels with black or white. The
/// whole vector is replaced, never a single channel.
pub fn add_salt_pepper(img: &ColorImage, density: f64, seed: u64) -> Result<ColorImage> {
    check_unit_open(density, "salt & pepper density")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = img.len();
    let count = libm::round(density * n as f64) as usize;
    let chosen = index::sample(&mut rng, n, count.min(n));
    let mut pixels: Vec<PixelVector> = img.pixels().to_vec();
    for i in chosen.iter() {
        pixels[i] = if rng.random_bool(0.5) { PixelVector::WHITE } else { PixelVector::ZERO };
    }
    Ok(img.with_pixels(pixels))
}

/// Corrupts an RGB image according to `spec`.
pub fn apply_noise(img: &ColorImage, spec: &NoiseSpec) -> Result<ColorImage> {
    if img.space() != ColorSpace::Rgb {
        return Err(Error::WrongSpace { expected: ColorSpace::Rgb, actual: img.space() });
    }
    spec.validate()?;
    match spec.kind {
        NoiseKind::Gaussian => add_gaussian(img, spec.parameter, spec.seed),
        NoiseKind::Speckle => add_speckle(img, spec.parameter, spec.seed),
        NoiseKind::SaltPepper => add_salt_pepper(img, spec.parameter, spec.seed),
    }
}
