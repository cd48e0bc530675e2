//! Denoising and edge-detection filters on a fixed 3x3 neighborhood.
//!
//! Borders use edge replication throughout. Denoising filters accept all
//! four [`Approach`]es; edge filters and the mean filter only accept the
//! single-pass marginal and vector approaches.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::image::{ColorImage, ScalarImage};

mod denoise;
mod edge;
mod window;

pub use denoise::{closing, dilate, erode, mean_filter, median_filter, morph_denoise, opening};
pub use edge::{laplacian, morph_gradient, sobel};
pub use window::Window3x3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Approach {
    /// Each channel filtered independently.
    #[cfg_attr(feature = "serde", serde(rename = "marginal"))]
    Marginal,
    /// Pixels filtered as whole vectors.
    #[cfg_attr(feature = "serde", serde(rename = "vector"))]
    Vector,
    /// A marginal pass followed by a vector pass.
    #[cfg_attr(feature = "serde", serde(rename = "mv"))]
    MarginalThenVector,
    /// A vector pass followed by a marginal pass.
    #[cfg_attr(feature = "serde", serde(rename = "vm"))]
    VectorThenMarginal,
}

impl Approach {
    pub const ALL: [Approach; 4] = [
        Approach::Marginal,
        Approach::Vector,
        Approach::MarginalThenVector,
        Approach::VectorThenMarginal,
    ];
    pub const SINGLE: [Approach; 2] = [Approach::Marginal, Approach::Vector];

    pub const fn name(self) -> &'static str {
        match self {
            Approach::Marginal => "marginal",
            Approach::Vector => "vector",
            Approach::MarginalThenVector => "mv",
            Approach::VectorThenMarginal => "vm",
        }
    }

    pub const fn is_dual(self) -> bool {
        matches!(self, Approach::MarginalThenVector | Approach::VectorThenMarginal)
    }

    /// The single-pass approaches in execution order.
    pub const fn passes(self) -> &'static [Approach] {
        match self {
            Approach::Marginal => &[Approach::Marginal],
            Approach::Vector => &[Approach::Vector],
            Approach::MarginalThenVector => &[Approach::Marginal, Approach::Vector],
            Approach::VectorThenMarginal => &[Approach::Vector, Approach::Marginal],
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Approach {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "marginal" | "m" => Ok(Approach::Marginal),
            "vector" | "v" => Ok(Approach::Vector),
            "mv" => Ok(Approach::MarginalThenVector),
            "vm" => Ok(Approach::VectorThenMarginal),
            _ => Err(Error::UnknownName { what: "approach", value: s.into() }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FilterKind {
    Mean,
    Median,
    /// `opening(closing(image))`.
    MorphDenoise,
    Laplacian,
    Sobel,
    /// Dilation minus erosion.
    MorphGradient,
}

impl FilterKind {
    pub const ALL: [FilterKind; 6] = [
        FilterKind::Mean,
        FilterKind::Median,
        FilterKind::MorphDenoise,
        FilterKind::Laplacian,
        FilterKind::Sobel,
        FilterKind::MorphGradient,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            FilterKind::Mean => "mean",
            FilterKind::Median => "median",
            FilterKind::MorphDenoise => "morph_denoise",
            FilterKind::Laplacian => "laplacian",
            FilterKind::Sobel => "sobel",
            FilterKind::MorphGradient => "morph_gradient",
        }
    }

    pub const fn is_edge(self) -> bool {
        matches!(self, FilterKind::Laplacian | FilterKind::Sobel | FilterKind::MorphGradient)
    }

    pub const fn is_denoising(self) -> bool {
        !self.is_edge()
    }

    /// Whether `approach` is meaningful for this filter.
    pub const fn accepts(self, approach: Approach) -> bool {
        match self {
            FilterKind::Median | FilterKind::MorphDenoise => true,
            _ => !approach.is_dual(),
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "morph" | "morphological" => Ok(FilterKind::MorphDenoise),
            "gradient" => Ok(FilterKind::MorphGradient),
            _ => FilterKind::ALL
                .into_iter()
                .find(|k| k.name() == lower)
                .ok_or_else(|| Error::UnknownName { what: "filter kind", value: s.into() }),
        }
    }
}

/// A filter and the approach it runs under. The kernel is always 3x3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FilterSpec {
    pub kind: FilterKind,
    pub approach: Approach,
}

impl FilterSpec {
    pub fn new(kind: FilterKind, approach: Approach) -> Result<Self> {
        let spec = FilterSpec { kind, approach };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind.accepts(self.approach) {
            Ok(())
        } else {
            Err(Error::InvalidApproach { kind: self.kind, approach: self.approach })
        }
    }
}

fn single_pass(img: &ColorImage, kind: FilterKind, approach: Approach) -> Result<ColorImage> {
    match kind {
        FilterKind::Mean => mean_filter(img, approach),
        FilterKind::Median => median_filter(img, approach),
        FilterKind::MorphDenoise => morph_denoise(img, approach),
        _ => Err(Error::NotDenoising { kind }),
    }
}

/// Run a denoising filter. Dual approaches chain two complete passes.
pub fn apply_denoise(img: &ColorImage, spec: FilterSpec) -> Result<ColorImage> {
    if spec.kind.is_edge() {
        return Err(Error::NotDenoising { kind: spec.kind });
    }
    spec.validate()?;
    let mut passes = spec.approach.passes().iter();
    let first = passes.next().expect("at least one pass");
    let mut out = single_pass(img, spec.kind, *first)?;
    for &next in passes {
        out = single_pass(&out, spec.kind, next)?;
    }
    Ok(out)
}

pub fn apply_edge(img: &ColorImage, spec: FilterSpec) -> Result<ScalarImage> {
    match spec.kind {
        FilterKind::Laplacian => laplacian(img, spec.approach),
        FilterKind::Sobel => sobel(img, spec.approach),
        FilterKind::MorphGradient => morph_gradient(img, spec.approach),
        kind => Err(Error::NotEdge { kind }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::ColorSpace;
    use crate::pixel::PixelVector;

    #[test]
    fn edge_filters_reject_dual() {
        for kind in [FilterKind::Laplacian, FilterKind::Sobel, FilterKind::MorphGradient, FilterKind::Mean] {
            for approach in [Approach::MarginalThenVector, Approach::VectorThenMarginal] {
                assert_eq!(FilterSpec::new(kind, approach), Err(Error::InvalidApproach { kind, approach }));
            }
        }
    }

    #[test]
    fn apply_denoise_rejects_edge_kind() {
        let img = ColorImage::filled(3, 3, ColorSpace::Rgb, PixelVector::splat(1.0));
        let spec = FilterSpec { kind: FilterKind::Sobel, approach: Approach::Marginal };
        assert_eq!(apply_denoise(&img, spec), Err(Error::NotDenoising { kind: FilterKind::Sobel }));
        let spec = FilterSpec { kind: FilterKind::Median, approach: Approach::Marginal };
        assert_eq!(apply_edge(&img, spec), Err(Error::NotEdge { kind: FilterKind::Median }));
    }

    #[test]
    fn parse_names() {
        for a in Approach::ALL {
            assert_eq!(a.name().parse::<Approach>().unwrap(), a);
        }
        for k in FilterKind::ALL {
            assert_eq!(k.name().parse::<FilterKind>().unwrap(), k);
        }
        assert!("diagonal".parse::<Approach>().is_err());
        assert!("prewitt".parse::<FilterKind>().is_err());
    }
}
