//! Pure image-similarity primitives used by the `framescan` tool.
//!
//! Everything here works on in-memory rasters and is `no_std` (with `alloc`):
//! grayscale conversion and nearest-neighbor resizing, an orthonormal 2-D DCT,
//! single-scale ORB (FAST corners ranked by Harris response, intensity-centroid
//! orientation, steered BRIEF descriptors, cross-checked Hamming matching),
//! global SSIM, and 64-bit perceptual hashes.
//!
//! Transcendental math goes through `libm`, so descriptor patterns, DCT tables
//! and hashes are bit-identical across platforms.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dct;
mod error;
pub mod hash;
pub mod image;
pub mod orb;
pub mod ssim;

pub use crate::error::Error;
pub use crate::hash::{ahash, dhash, hamming, phash, HashAlgo, PerceptualHash};
pub use crate::image::{GrayImage, RgbImage};
pub use crate::orb::{orb_similarity, OrbConfig, OrbMatcher, OrbSimilarity};
pub use crate::ssim::{ssim_score, SsimBreakdown, SsimParams};

pub type Result<T, E = Error> = core::result::Result<T, E>;
