use alloc::vec::Vec;

use super::window::map_windows;
use super::{Approach, FilterKind};
use crate::error::{Error, Result};
use crate::image::ColorImage;
use crate::pixel::PixelVector;

fn require_single(kind: FilterKind, approach: Approach) -> Result<()> {
    if approach.is_dual() {
        Err(Error::InvalidApproach { kind, approach })
    } else {
        Ok(())
    }
}

fn norms(img: &ColorImage) -> Vec<f64> {
    img.pixels().iter().map(PixelVector::norm).collect()
}

/// Unweighted centroid of every 3x3 window.
///
/// Both approaches compute the same centroid along separate code paths: the
/// marginal path averages each channel plane on its own, the vector path sums
/// whole vectors and scales the sum.
pub fn mean_filter(img: &ColorImage, approach: Approach) -> Result<ColorImage> {
    require_single(FilterKind::Mean, approach)?;
    let px = img.pixels();
    let out = match approach {
        Approach::Marginal => {
            let planes: [Vec<f64>; 3] = core::array::from_fn(|c| px.iter().map(|p| p[c]).collect());
            map_windows(img, |idx| {
                PixelVector(core::array::from_fn(|c| {
                    idx.iter().map(|&i| planes[c][i]).sum::<f64>() / 9.0
                }))
            })
        }
        _ => map_windows(img, |idx| {
            let sum = idx.iter().fold(PixelVector::ZERO, |acc, &i| acc + px[i]);
            sum * (1.0 / 9.0)
        }),
    };
    Ok(out)
}

#[derive(Clone, Copy, PartialEq)]
enum Rank {
    Min,
    Median,
    Max,
}

/// Compare-exchange network that leaves the median of nine keys in slot 4
/// (Paeth's 19-comparison median-of-9).
#[inline(always)]
fn median_of_9<T: Copy>(p: &mut [T; 9], min: impl Fn(T, T) -> T, max: impl Fn(T, T) -> T) -> T {
    const PAIRS: [(usize, usize); 19] = [
        (1, 2), (4, 5), (7, 8),
        (0, 1), (3, 4), (6, 7),
        (1, 2), (4, 5), (7, 8),
        (0, 3), (5, 8), (4, 7),
        (3, 6), (1, 4), (2, 5),
        (4, 7), (4, 2), (6, 4),
        (4, 2),
    ];
    for (a, b) in PAIRS {
        let (lo, hi) = (min(p[a], p[b]), max(p[a], p[b]));
        p[a] = lo;
        p[b] = hi;
    }
    p[4]
}

/// Order-preserving integer key for a finite float (total order, -0 < +0).
#[inline(always)]
fn ordered_bits(v: f64) -> u64 {
    let bits = v.to_bits();
    if bits >> 63 == 1 {
        !bits
    } else {
        bits | (1 << 63)
    }
}

#[inline(always)]
fn from_ordered_bits(key: u64) -> f64 {
    if key >> 63 == 1 {
        f64::from_bits(key & !(1 << 63))
    } else {
        f64::from_bits(!key)
    }
}

#[inline(always)]
fn sort3<T: Ord + Copy>(a: T, b: T, c: T) -> (T, T, T) {
    let (lo, hi) = (a.min(b), a.max(b));
    (lo.min(c), lo.max(hi.min(c)), hi.max(c))
}

#[inline(always)]
fn median3<T: Ord + Copy>(a: T, b: T, c: T) -> T {
    a.min(b).max(a.max(b).min(c))
}

/// Sort each column triple of a 3-row band once; every window then takes the
/// median of (largest column minimum, median of column medians, smallest
/// column maximum), which is the median of its nine samples.
fn sorted_columns<T: Ord + Copy>(up: &[T], mid: &[T], down: &[T], lo: &mut [T], md: &mut [T], hi: &mut [T]) {
    for x in 0..up.len() {
        (lo[x], md[x], hi[x]) = sort3(up[x], mid[x], down[x]);
    }
}

#[inline(always)]
fn window_median<T: Ord + Copy>(lo: &[T], md: &[T], hi: &[T], l: usize, x: usize, r: usize) -> T {
    median3(lo[l].max(lo[x]).max(lo[r]), median3(md[l], md[x], md[r]), hi[l].min(hi[x]).min(hi[r]))
}

fn marginal_median(img: &ColorImage) -> ColorImage {
    let (w, h) = img.dimensions();
    let px = img.pixels();
    let mut out = alloc::vec![[0.0; 3]; w * h];
    let (mut lo, mut md, mut hi) = (alloc::vec![0u64; w], alloc::vec![0u64; w], alloc::vec![0u64; w]);
    for c in 0..3 {
        // integer keys keep the comparisons branch-free
        let plane: Vec<u64> = px.iter().map(|p| ordered_bits(p[c])).collect();
        for y in 0..h {
            let up = &plane[y.saturating_sub(1) * w..][..w];
            let mid = &plane[y * w..][..w];
            let down = &plane[(y + 1).min(h - 1) * w..][..w];
            sorted_columns(up, mid, down, &mut lo, &mut md, &mut hi);
            for x in 0..w {
                let key = window_median(&lo, &md, &hi, x.saturating_sub(1), x, (x + 1).min(w - 1));
                out[y * w + x][c] = from_ordered_bits(key);
            }
        }
    }
    img.with_pixels(out.into_iter().map(PixelVector).collect())
}

fn vector_median(img: &ColorImage) -> ColorImage {
    let (w, h) = img.dimensions();
    let px = img.pixels();
    let norm_bits: Vec<u64> = px.iter().map(|p| ordered_bits(p.norm())).collect();
    let mut out = px.to_vec();

    // Border windows repeat samples, so ties must follow window slots a..i.
    let mut by_slot = |x: usize, y: usize| {
        let idx = super::window::window_indices(w, h, x, y);
        let mut keys: [u128; 9] = core::array::from_fn(|k| (norm_bits[idx[k]] as u128) << 4 | k as u128);
        let slot = (median_of_9(&mut keys, u128::min, u128::max) & 0xf) as usize;
        out[y * w + x] = px[idx[slot]];
    };
    for y in 0..h {
        if y == 0 || y + 1 >= h {
            (0..w).for_each(|x| by_slot(x, y));
        } else {
            by_slot(0, y);
            if w > 1 {
                by_slot(w - 1, y);
            }
        }
    }

    // Interior windows hold nine distinct pixels whose slot order is their
    // raster order, so (norm, pixel index) keys give the same ranking.
    if w >= 3 && h >= 3 {
        let keys: Vec<u128> = norm_bits.iter().enumerate().map(|(i, &n)| (n as u128) << 64 | i as u128).collect();
        let (mut lo, mut md, mut hi) = (alloc::vec![0u128; w], alloc::vec![0u128; w], alloc::vec![0u128; w]);
        for y in 1..h - 1 {
            sorted_columns(&keys[(y - 1) * w..][..w], &keys[y * w..][..w], &keys[(y + 1) * w..][..w], &mut lo, &mut md, &mut hi);
            for x in 1..w - 1 {
                let key = window_median(&lo, &md, &hi, x - 1, x, x + 1);
                out[y * w + x] = px[key as u64 as usize];
            }
        }
    }
    img.with_pixels(out)
}

/// Separable 3x3 extremum over `keys`, returning for every pixel the index of
/// the selected sample. Rows are reduced first, then columns; keeping the
/// first extremum in each pass reproduces raster-order tie-breaking over the
/// full window.
fn extremum_indices(w: usize, h: usize, keys: &[f64], rank: Rank) -> Vec<usize> {
    // (key, index) pairs; a candidate replaces the best only when strictly better
    let pick = |best: (f64, usize), cand: (f64, usize)| {
        let better = if rank == Rank::Min { cand.0 < best.0 } else { cand.0 > best.0 };
        if better {
            cand
        } else {
            best
        }
    };
    let mut horizontal = Vec::with_capacity(w * h);
    for (y, row) in keys.chunks_exact(w).enumerate() {
        let base = y * w;
        for x in 0..w {
            let (l, r) = (x.saturating_sub(1), (x + 1).min(w - 1));
            let best = pick(pick((row[l], base + l), (row[x], base + x)), (row[r], base + r));
            horizontal.push(best);
        }
    }
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        let up = &horizontal[y.saturating_sub(1) * w..][..w];
        let mid = &horizontal[y * w..][..w];
        let down = &horizontal[(y + 1).min(h - 1) * w..][..w];
        out.extend(up.iter().zip(mid).zip(down).map(|((&a, &b), &c)| pick(pick(a, b), c).1));
    }
    out
}

fn marginal_extremum<const MIN: bool>(img: &ColorImage) -> ColorImage {
    let (w, h) = img.dimensions();
    let px = img.pixels();
    let pick = |a: f64, b: f64| if MIN { a.min(b) } else { a.max(b) };
    let reduce = |a: &PixelVector, b: &PixelVector, c: &PixelVector| {
        PixelVector([pick(pick(a.0[0], b.0[0]), c.0[0]), pick(pick(a.0[1], b.0[1]), c.0[1]), pick(pick(a.0[2], b.0[2]), c.0[2])])
    };
    let mut rows = Vec::with_capacity(w * h);
    for row in px.chunks_exact(w) {
        for x in 0..w {
            rows.push(reduce(&row[x.saturating_sub(1)], &row[x], &row[(x + 1).min(w - 1)]));
        }
    }
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        let up = &rows[y.saturating_sub(1) * w..][..w];
        let mid = &rows[y * w..][..w];
        let down = &rows[(y + 1).min(h - 1) * w..][..w];
        out.extend(up.iter().zip(mid).zip(down).map(|((a, b), c)| reduce(a, b, c)));
    }
    img.with_pixels(out)
}

fn vector_extremum(img: &ColorImage, rank: Rank) -> ColorImage {
    let px = img.pixels();
    let selected = extremum_indices(img.width(), img.height(), &norms(img), rank);
    img.with_pixels(selected.into_iter().map(|i| px[i]).collect())
}

fn rank_filter(img: &ColorImage, rank: Rank, kind: FilterKind, approach: Approach) -> Result<ColorImage> {
    match (approach, rank) {
        (Approach::Marginal, Rank::Median) => Ok(marginal_median(img)),
        (Approach::Vector, Rank::Median) => Ok(vector_median(img)),
        (Approach::Marginal, Rank::Min) => Ok(marginal_extremum::<true>(img)),
        (Approach::Marginal, _) => Ok(marginal_extremum::<false>(img)),
        (Approach::Vector, _) => Ok(vector_extremum(img, rank)),
        (dual, _) => Err(Error::InvalidApproach { kind, approach: dual }),
    }
}

/// 3x3 median filter.
///
/// Marginal: the per-channel median of the nine samples. Vector: the sample
/// whose norm has rank 5 of 9. Dual approaches chain a marginal and a vector
/// pass in the named order.
pub fn median_filter(img: &ColorImage, approach: Approach) -> Result<ColorImage> {
    match approach {
        Approach::MarginalThenVector => {
            median_filter(&median_filter(img, Approach::Marginal)?, Approach::Vector)
        }
        Approach::VectorThenMarginal => {
            median_filter(&median_filter(img, Approach::Vector)?, Approach::Marginal)
        }
        single => rank_filter(img, Rank::Median, FilterKind::Median, single),
    }
}

/// Flat 3x3 erosion: per-channel minimum, or the minimum-norm sample.
pub fn erode(img: &ColorImage, approach: Approach) -> Result<ColorImage> {
    rank_filter(img, Rank::Min, FilterKind::MorphDenoise, approach)
}

/// Flat 3x3 dilation: per-channel maximum, or the maximum-norm sample.
pub fn dilate(img: &ColorImage, approach: Approach) -> Result<ColorImage> {
    rank_filter(img, Rank::Max, FilterKind::MorphDenoise, approach)
}

/// Erosion followed by dilation.
pub fn opening(img: &ColorImage, approach: Approach) -> Result<ColorImage> {
    dilate(&erode(img, approach)?, approach)
}

/// Dilation followed by erosion.
pub fn closing(img: &ColorImage, approach: Approach) -> Result<ColorImage> {
    erode(&dilate(img, approach)?, approach)
}

/// `opening(closing(img))`, with dual approaches chaining two full passes.
pub fn morph_denoise(img: &ColorImage, approach: Approach) -> Result<ColorImage> {
    match approach {
        Approach::MarginalThenVector => {
            morph_denoise(&morph_denoise(img, Approach::Marginal)?, Approach::Vector)
        }
        Approach::VectorThenMarginal => {
            morph_denoise(&morph_denoise(img, Approach::Vector)?, Approach::Marginal)
        }
        single => opening(&closing(img, single)?, single),
    }
}
