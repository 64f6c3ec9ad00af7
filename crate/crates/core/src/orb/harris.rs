//! Harris corner response and Harris-ranked keypoint selection.

use alloc::vec::Vec;
use core::cmp::Ordering;

use super::Keypoint;
use crate::image::GrayImage;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarrisParams {
    k: f64,
    window: usize,
}

impl HarrisParams {
    /// `k` must lie in `[0.04, 0.06]`; `window` is the half-width of the
    /// summation window.
    pub fn new(k: f64, window: usize) -> Result<Self> {
        if !(0.04..=0.06).contains(&k) {
            return Err(Error::InvalidArgument("harris k must be in [0.04, 0.06]"));
        }
        Ok(Self { k, window })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Distance from the border that the window plus gradient stencil needs.
    pub fn border(&self) -> usize {
        self.window + 1
    }
}

impl Default for HarrisParams {
    fn default() -> Self {
        Self { k: 0.04, window: 3 }
    }
}

/// `det(P) - k * trace(P)^2` where `P` sums the gradient outer products over
/// the window centred on `(x, y)`. Gradients are central differences.
pub fn harris_response(img: &GrayImage, x: usize, y: usize, params: &HarrisParams) -> Result<f64> {
    let b = params.border();
    if x < b || y < b || x + b >= img.width() || y + b >= img.height() {
        return Err(Error::OutOfBounds { x, y });
    }
    let w = params.window;
    let (mut sxx, mut syy, mut sxy) = (0.0f64, 0.0f64, 0.0f64);
    for py in y - w..=y + w {
        for px in x - w..=x + w {
            let ix = (f64::from(img.get(px + 1, py)) - f64::from(img.get(px - 1, py))) / 2.0;
            let iy = (f64::from(img.get(px, py + 1)) - f64::from(img.get(px, py - 1))) / 2.0;
            sxx += ix * ix;
            syy += iy * iy;
            sxy += ix * iy;
        }
    }
    let det = sxx * syy - sxy * sxy;
    let trace = sxx + syy;
    Ok(det - params.k * trace * trace)
}

/// Scores every candidate whose window fits, then keeps the `max` strongest.
/// Ties resolve to the lowest `(y, x)`.
pub fn retain_best(
    corners: &[(usize, usize)],
    img: &GrayImage,
    params: &HarrisParams,
    max: usize,
) -> Vec<Keypoint> {
    let mut scored: Vec<Keypoint> = corners
        .iter()
        .filter_map(|&(x, y)| {
            harris_response(img, x, y, params)
                .ok()
                .map(|response| Keypoint { x, y, response, orientation: 0.0 })
        })
        .collect();
    scored.sort_by(|a, b| match b.response.total_cmp(&a.response) {
        Ordering::Equal => (a.y, a.x).cmp(&(b.y, b.x)),
        other => other,
    });
    scored.truncate(max);
    scored
}
