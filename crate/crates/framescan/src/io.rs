//! Image file boundary: PNG/JPEG in, PNG out.

use std::path::Path;

use framescan_core::image::to_grayscale;
use framescan_core::{GrayImage, RgbImage};
use image::ImageFormat;

use crate::{Error, Result};

pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let img = image::open(path).map_err(|source| match source {
        image::ImageError::IoError(e) => Error::io(path, e),
        source => Error::Image { path: path.to_path_buf(), source },
    })?;
    let rgb = img.to_rgb8();
    let (w, h) = rgb.dimensions();
    Ok(RgbImage::new(w as usize, h as usize, rgb.into_raw())?)
}

pub fn load_gray(path: impl AsRef<Path>) -> Result<GrayImage> {
    load_image(path).map(|img| to_grayscale(&img))
}

pub fn save_image(path: impl AsRef<Path>, img: &RgbImage) -> Result<()> {
    let path = path.as_ref();
    let buf = image::RgbImage::from_raw(img.width() as u32, img.height() as u32, img.data().to_vec())
        .expect("RgbImage buffer length is validated on construction");
    buf.save_with_format(path, ImageFormat::Png).map_err(|source| match source {
        image::ImageError::IoError(e) => Error::io(path, e),
        source => Error::Image { path: path.to_path_buf(), source },
    })
}

/// Writes a single-channel PNG.
pub fn save_gray(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    let path = path.as_ref();
    let buf = image::GrayImage::from_raw(img.width() as u32, img.height() as u32, img.data().to_vec())
        .expect("GrayImage buffer length is validated on construction");
    buf.save_with_format(path, ImageFormat::Png).map_err(|source| match source {
        image::ImageError::IoError(e) => Error::io(path, e),
        source => Error::Image { path: path.to_path_buf(), source },
    })
}
