//! PNG and binary PPM (P6) reading and writing, 8-bit RGB only.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use colorfilt_core::{ColorImage, ColorSpace, PixelVector, ScalarImage};
use image::codecs::png::PngEncoder;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ColorType, DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat};

use crate::error::{Error, Result};

fn image_err(path: &Path) -> impl FnOnce(image::ImageError) -> Error + '_ {
    move |source| Error::Image { path: path.to_path_buf(), source }
}

/// Load an 8-bit, 3-channel PNG or PPM as an RGB image with components in
/// `[0, 255]`. Grayscale, alpha and 16-bit inputs are rejected.
pub fn load_image(path: impl AsRef<Path>) -> Result<ColorImage> {
    let path = path.as_ref();
    let reader = image::ImageReader::open(path)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })?
        .with_guessed_format()
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let decoded = reader.decode().map_err(image_err(path))?;
    let rgb = match decoded {
        DynamicImage::ImageRgb8(rgb) => rgb,
        other => {
            return Err(Error::Unsupported { path: path.to_path_buf(), format: format!("{:?}", other.color()) });
        }
    };
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let pixels = rgb
        .pixels()
        .map(|p| PixelVector::new(p[0] as f64, p[1] as f64, p[2] as f64))
        .collect();
    Ok(ColorImage::new(w, h, ColorSpace::Rgb, pixels)?)
}

fn quantize(v: f64) -> u8 {
    v.clamp(0.0, 255.0).round() as u8
}

fn format_for(path: &Path) -> Result<ImageFormat> {
    match ImageFormat::from_path(path) {
        Ok(f @ (ImageFormat::Png | ImageFormat::Pnm)) => Ok(f),
        _ => Err(Error::Unsupported {
            path: path.to_path_buf(),
            format: "output extension (use .png or .ppm)".into(),
        }),
    }
}

fn write_bytes(path: &Path, bytes: &[u8], width: usize, height: usize, color: ExtendedColorType) -> Result<()> {
    let format = format_for(path)?;
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let out = BufWriter::new(file);
    let (w, h) = (width as u32, height as u32);
    match format {
        ImageFormat::Png => PngEncoder::new(out).write_image(bytes, w, h, color),
        _ => {
            let subtype = if color == ExtendedColorType::L8 {
                PnmSubtype::Graymap(SampleEncoding::Binary)
            } else {
                PnmSubtype::Pixmap(SampleEncoding::Binary)
            };
            PnmEncoder::new(out).with_subtype(subtype).write_image(bytes, w, h, color)
        }
    }
    .map_err(image_err(path))
}

/// Save an RGB image as 8-bit PNG or P6 PPM (chosen by extension). Components
/// are clamped to `[0, 255]` and rounded to the nearest integer.
pub fn save_image(img: &ColorImage, path: impl AsRef<Path>) -> Result<()> {
    if img.space() != ColorSpace::Rgb {
        return Err(colorfilt_core::Error::WrongSpace { expected: ColorSpace::Rgb, actual: img.space() }.into());
    }
    let bytes: Vec<u8> = img.pixels().iter().flat_map(|p| p.0.map(quantize)).collect();
    write_bytes(path.as_ref(), &bytes, img.width(), img.height(), ColorType::Rgb8.into())
}

/// Save an edge map as 8-bit grayscale after a linear rescale mapping its
/// maximum to 255. Returns the scale factor applied (1 for an all-zero map).
pub fn save_scalar_image(map: &ScalarImage, path: impl AsRef<Path>) -> Result<f64> {
    let max = map.max();
    let scale = if max > 0.0 { 255.0 / max } else { 1.0 };
    let bytes: Vec<u8> = map.values().iter().map(|v| quantize(v * scale)).collect();
    write_bytes(path.as_ref(), &bytes, map.width(), map.height(), ColorType::L8.into())?;
    Ok(scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ColorImage {
        ColorImage::from_fn(13, 7, ColorSpace::Rgb, |x, y| {
            PixelVector::new((x * 19) as f64, (y * 36) as f64, ((x * y) % 256) as f64)
        })
    }

    #[test]
    fn png_and_ppm_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let img = sample();
        for name in ["a.png", "a.ppm"] {
            let path = dir.path().join(name);
            save_image(&img, &path).unwrap();
            assert_eq!(load_image(&path).unwrap(), img, "{name}");
        }
        let ppm = std::fs::read(dir.path().join("a.ppm")).unwrap();
        assert_eq!(&ppm[..2], b"P6");
    }

    #[test]
    fn save_quantizes() {
        let dir = tempfile::tempdir().unwrap();
        let img = ColorImage::filled(2, 2, ColorSpace::Rgb, PixelVector::new(-3.0, 12.4, 300.0));
        let path = dir.path().join("q.png");
        save_image(&img, &path).unwrap();
        let back = load_image(&path).unwrap();
        assert_eq!(back.get(1, 1), PixelVector::new(0.0, 12.0, 255.0));
        // idempotent once quantized
        save_image(&back, &path).unwrap();
        assert_eq!(load_image(&path).unwrap(), back);
    }

    #[test]
    fn rejects_grayscale_and_16_bit() {
        let dir = tempfile::tempdir().unwrap();
        let gray = dir.path().join("g.png");
        image::GrayImage::new(4, 4).save(&gray).unwrap();
        assert!(matches!(load_image(&gray), Err(Error::Unsupported { .. })));
        let deep = dir.path().join("d.png");
        image::ImageBuffer::<image::Rgb<u16>, _>::new(4, 4).save(&deep).unwrap();
        assert!(matches!(load_image(&deep), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn missing_file_is_an_error() {
        assert!(matches!(load_image("/nonexistent/x.png"), Err(Error::Io { .. })));
    }

    #[test]
    fn loads_full_page_size() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("page.png");
        let page = ColorImage::filled(3000, 2000, ColorSpace::Rgb, PixelVector::new(230.0, 215.0, 180.0));
        save_image(&page, &path).unwrap();
        assert_eq!(load_image(&path).unwrap().dimensions(), (3000, 2000));
    }

    #[test]
    fn scalar_maps_are_rescaled() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("edges.png");
        let map = ScalarImage::from_fn(4, 1, |x, _| x as f64 * 100.0);
        let scale = save_scalar_image(&map, &path).unwrap();
        assert!((scale - 255.0 / 300.0).abs() < 1e-12);
        let gray = image::open(&path).unwrap().to_luma8();
        assert_eq!(gray.as_raw(), &vec![0, 85, 170, 255]);
    }
}
