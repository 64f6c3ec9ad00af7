//! Raster types and the few pixel operations every metric builds on.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Interleaved 8-bit RGB raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument("image dimensions must be non-zero"));
        }
        if width.checked_mul(height).and_then(|n| n.checked_mul(3)) != Some(data.len()) {
            return Err(Error::InvalidArgument("rgb data length must equal width * height * 3"));
        }
        Ok(Self { width, height, data })
    }

    /// Solid-color image.
    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        let n = width
            .checked_mul(height)
            .ok_or(Error::InvalidArgument("image too large"))?;
        let mut data = Vec::with_capacity(n * 3);
        for _ in 0..n {
            data.extend_from_slice(&rgb);
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

/// Row-major 8-bit luminance raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument("image dimensions must be non-zero"));
        }
        if width.checked_mul(height) != Some(data.len()) {
            return Err(Error::InvalidArgument("gray data length must equal width * height"));
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        let n = width
            .checked_mul(height)
            .ok_or(Error::InvalidArgument("image too large"))?;
        Self::new(width, height, vec![value; n])
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument("image dimensions must be non-zero"));
        }
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Ok(Self { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.data[y * self.width + x] = value;
    }

    /// Signed-coordinate lookup; `None` outside the raster.
    #[inline]
    pub(crate) fn get_signed(&self, x: isize, y: isize) -> Option<u8> {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            None
        } else {
            Some(self.data[y as usize * self.width + x as usize])
        }
    }

    /// Replicates the luminance into all three channels.
    pub fn to_rgb(&self) -> RgbImage {
        let mut data = Vec::with_capacity(self.data.len() * 3);
        for &v in &self.data {
            data.extend_from_slice(&[v, v, v]);
        }
        RgbImage { width: self.width, height: self.height, data }
    }
}

/// BT.601 luma of one pixel, rounded half away from zero.
#[inline]
pub fn luma(rgb: [u8; 3]) -> u8 {
    let y = 0.299 * f64::from(rgb[0]) + 0.587 * f64::from(rgb[1]) + 0.114 * f64::from(rgb[2]);
    // `libm::round` rounds half away from zero.
    libm::round(y).clamp(0.0, 255.0) as u8
}

pub fn to_grayscale(img: &RgbImage) -> GrayImage {
    let data = img.data.chunks_exact(3).map(|p| luma([p[0], p[1], p[2]])).collect();
    GrayImage { width: img.width, height: img.height, data }
}

/// Nearest-neighbor resize: source index = floor(dst * src_dim / dst_dim).
pub fn resize_nearest(img: &GrayImage, out_w: usize, out_h: usize) -> Result<GrayImage> {
    if out_w == 0 || out_h == 0 {
        return Err(Error::InvalidArgument("resize target dimensions must be non-zero"));
    }
    if out_w == img.width && out_h == img.height {
        return Ok(img.clone());
    }
    let cols: Vec<usize> = (0..out_w).map(|dx| dx * img.width / out_w).collect();
    let mut data = Vec::with_capacity(out_w * out_h);
    for dy in 0..out_h {
        let sy = dy * img.height / out_h;
        let row = &img.data[sy * img.width..(sy + 1) * img.width];
        data.extend(cols.iter().map(|&sx| row[sx]));
    }
    Ok(GrayImage { width: out_w, height: out_h, data })
}
