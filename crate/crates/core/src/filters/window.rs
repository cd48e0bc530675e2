use crate::image::{clamp_index, ColorImage};
use crate::pixel::PixelVector;

/// The 3x3 neighborhood of a pixel, labeled `a..i` in row-major order:
///
/// ```text
/// a b c
/// d e f
/// g h i
/// ```
///
/// `e` is the center. Samples outside the image are replicated from the edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window3x3 {
    pub samples: [PixelVector; 9],
}

impl Window3x3 {
    pub const CENTER: usize = 4;

    pub fn gather(img: &ColorImage, x: usize, y: usize) -> Self {
        let idx = window_indices(img.width(), img.height(), x, y);
        let px = img.pixels();
        Window3x3 { samples: idx.map(|i| px[i]) }
    }

    pub fn center(&self) -> PixelVector {
        self.samples[Self::CENTER]
    }

    pub fn contains(&self, p: &PixelVector) -> bool {
        self.samples.iter().any(|s| s == p)
    }
}

/// Flat indices of the 3x3 window around `(x, y)` with edge replication.
#[inline]
pub(crate) fn window_indices(width: usize, height: usize, x: usize, y: usize) -> [usize; 9] {
    let (x, y) = (x as isize, y as isize);
    let cols = [clamp_index(x - 1, width), x as usize, clamp_index(x + 1, width)];
    let rows = [
        clamp_index(y - 1, height) * width,
        y as usize * width,
        clamp_index(y + 1, height) * width,
    ];
    [
        rows[0] + cols[0],
        rows[0] + cols[1],
        rows[0] + cols[2],
        rows[1] + cols[0],
        rows[1] + cols[1],
        rows[1] + cols[2],
        rows[2] + cols[0],
        rows[2] + cols[1],
        rows[2] + cols[2],
    ]
}

/// Build an image of the same shape by evaluating `f` on every window's
/// sample indices.
pub(crate) fn map_windows(
    img: &ColorImage,
    mut f: impl FnMut(&[usize; 9]) -> PixelVector,
) -> ColorImage {
    let (w, h) = img.dimensions();
    let mut out = alloc::vec::Vec::with_capacity(w * h);
    for y in 0..h {
        let (up, mid, down) = (y.saturating_sub(1) * w, y * w, (y + 1).min(h - 1) * w);
        for x in 0..w {
            let (l, r) = (x.saturating_sub(1), (x + 1).min(w - 1));
            out.push(f(&[up + l, up + x, up + r, mid + l, mid + x, mid + r, down + l, down + x, down + r]));
        }
    }
    img.with_pixels(out)
}
