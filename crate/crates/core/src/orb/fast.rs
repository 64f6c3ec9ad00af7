//! FAST segment-test corner candidates.

use alloc::vec::Vec;

use crate::image::GrayImage;
use crate::{Error, Result};

/// Bresenham circle of radius 3, clockwise from twelve o'clock.
pub const CIRCLE: [(isize, isize); 16] = [
    (0, -3),
    (1, -3),
    (2, -2),
    (3, -1),
    (3, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 3),
    (-1, 3),
    (-2, 2),
    (-3, 1),
    (-3, 0),
    (-3, -1),
    (-2, -2),
    (-1, -3),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FastParams {
    margin: u8,
    arc_len: usize,
}

impl FastParams {
    /// `margin` is the intensity threshold K in gray levels, `arc_len` the
    /// number of contiguous circle pixels n that must all clear it.
    pub fn new(margin: u8, arc_len: usize) -> Result<Self> {
        if margin == 0 {
            return Err(Error::InvalidArgument("fast margin must be at least 1"));
        }
        if !(9..=16).contains(&arc_len) {
            return Err(Error::InvalidArgument("fast arc length must be in 9..=16"));
        }
        Ok(Self { margin, arc_len })
    }

    pub fn margin(&self) -> u8 {
        self.margin
    }

    pub fn arc_len(&self) -> usize {
        self.arc_len
    }
}

impl Default for FastParams {
    fn default() -> Self {
        Self { margin: 20, arc_len: 12 }
    }
}

/// True when `mask` (16 circle flags) has a cyclic run of at least `n` set bits.
#[inline]
fn has_cyclic_run(mask: u16, n: usize) -> bool {
    if mask == 0 {
        return false;
    }
    let mut run = u32::from(mask) | (u32::from(mask) << 16);
    for _ in 1..n {
        run &= run >> 1;
        if run == 0 {
            return false;
        }
    }
    true
}

/// Pixels at least three pixels from the border that pass the segment test,
/// as `(x, y)` in row-major order.
pub fn fast_detect(img: &GrayImage, params: &FastParams) -> Vec<(usize, usize)> {
    let (w, h) = (img.width(), img.height());
    let mut corners = Vec::new();
    if w < 7 || h < 7 {
        return corners;
    }
    let data = img.data();
    let stride = w as isize;
    let offsets: [isize; 16] = CIRCLE.map(|(dx, dy)| dy * stride + dx);
    let k = i16::from(params.margin);

    for y in 3..h - 3 {
        for x in 3..w - 3 {
            let center = y * w + x;
            let c = i16::from(data[center]);
            let (hi, lo) = (c + k, c - k);
            let mut bright = 0u16;
            let mut dark = 0u16;
            for (bit, off) in offsets.iter().enumerate() {
                let v = i16::from(data[(center as isize + off) as usize]);
                if v > hi {
                    bright |= 1 << bit;
                } else if v < lo {
                    dark |= 1 << bit;
                }
            }
            if has_cyclic_run(bright, params.arc_len) || has_cyclic_run(dark, params.arc_len) {
                corners.push((x, y));
            }
        }
    }
    corners
}
