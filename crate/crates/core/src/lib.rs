//! Color-image filtering under the marginal, vector and dual approaches.
//!
//! Every pixel is a three-component real vector. A *marginal* filter treats
//! each component as an independent gray-level plane; a *vector* filter
//! works on whole pixel vectors, ordering them by Euclidean norm or combining
//! their joint finite differences. The *dual* approaches chain one marginal
//! and one vector pass.
//!
//! The crate is `no_std` and only needs `alloc`. File IO, the benchmark
//! harness and the command-line tool live in the `colorfilt` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod color;
pub mod error;
pub mod filters;
pub mod image;
pub mod metrics;
pub mod noise;
pub mod pixel;
pub mod synth;

pub use color::{hsb_to_rgb, rgb_to_hsb};
pub use error::{Error, Result};
pub use filters::{Approach, FilterKind, FilterSpec};
pub use image::{ColorImage, ColorSpace, ScalarImage};
pub use metrics::{Direction, LeeParams, MetricReport};
pub use noise::{NoiseKind, NoiseSpec, Strength};
pub use pixel::{pixel_norm, PixelVector};
