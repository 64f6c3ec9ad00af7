//! Single-scale ORB: FAST candidates, Harris ranking, intensity-centroid
//! orientation, steered BRIEF and cross-checked matching, reduced to one
//! similarity score in `[0, 1]`.

mod brief;
mod fast;
mod harris;
mod matching;

use alloc::vec::Vec;
use core::f64::consts::TAU;

pub use self::brief::{describe, BinaryDescriptor, DescriptorPattern, DEFAULT_PATTERN_SEED, DESCRIPTOR_BITS, PATCH_SIZE};
pub use self::fast::{fast_detect, FastParams, CIRCLE};
pub use self::harris::{harris_response, retain_best, HarrisParams};
pub use self::matching::{match_descriptors, DescriptorMatch};

use crate::image::GrayImage;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Keypoint {
    pub x: usize,
    pub y: usize,
    /// Harris response.
    pub response: f64,
    /// Radians in `[0, 2pi)`.
    pub orientation: f64,
}

/// Intensity-centroid angle `atan2(m01, m10)` over the disc of `radius`
/// around the keypoint, normalized to `[0, 2pi)`. A patch with zero first
/// moments has orientation 0.
pub fn orientation(img: &GrayImage, kp: &Keypoint, radius: usize) -> Result<f64> {
    let (x, y) = (kp.x, kp.y);
    if x < radius || y < radius || x + radius >= img.width() || y + radius >= img.height() {
        return Err(Error::OutOfBounds { x, y });
    }
    let r = radius as i64;
    let (mut m10, mut m01) = (0i64, 0i64);
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy > r * r {
                continue;
            }
            let v = i64::from(img.get((x as i64 + dx) as usize, (y as i64 + dy) as usize));
            m10 += dx * v;
            m01 += dy * v;
        }
    }
    if m10 == 0 && m01 == 0 {
        return Ok(0.0);
    }
    let mut angle = libm::atan2(m01 as f64, m10 as f64);
    if angle < 0.0 {
        angle += TAU;
    }
    if angle >= TAU {
        angle = 0.0;
    }
    Ok(angle)
}

/// Knobs for the whole detect/describe/match chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbConfig {
    pub fast: FastParams,
    pub harris: HarrisParams,
    /// Keypoints kept per image after Harris ranking.
    pub max_keypoints: usize,
    /// Largest Hamming distance (of 256) counted as a good match.
    pub match_threshold: u32,
    /// Disc radius for the intensity centroid.
    pub orientation_radius: usize,
    pub pattern_seed: u64,
}

impl Default for OrbConfig {
    fn default() -> Self {
        Self {
            fast: FastParams::default(),
            harris: HarrisParams::default(),
            max_keypoints: 500,
            match_threshold: 64,
            orientation_radius: PATCH_SIZE / 2,
            pattern_seed: DEFAULT_PATTERN_SEED,
        }
    }
}

/// Oriented keypoints of one image with their descriptors, index-aligned.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Features {
    pub keypoints: Vec<Keypoint>,
    pub descriptors: Vec<BinaryDescriptor>,
}

impl Features {
    pub fn len(&self) -> usize {
        self.keypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keypoints.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbSimilarity {
    pub score: f64,
    pub good_matches: usize,
    pub keypoints_a: usize,
    pub keypoints_b: usize,
    /// Set when an input was smaller than the descriptor patch.
    pub degenerate: bool,
}

impl OrbSimilarity {
    fn degenerate() -> Self {
        Self { score: 0.0, good_matches: 0, keypoints_a: 0, keypoints_b: 0, degenerate: true }
    }
}

/// ORB pipeline with its descriptor pattern built once; cheap to share
/// across threads.
#[derive(Debug, Clone)]
pub struct OrbMatcher {
    config: OrbConfig,
    pattern: DescriptorPattern,
}

impl Default for OrbMatcher {
    fn default() -> Self {
        Self::new(OrbConfig::default())
    }
}

impl OrbMatcher {
    pub fn new(config: OrbConfig) -> Self {
        let pattern = DescriptorPattern::generate(config.pattern_seed);
        Self { config, pattern }
    }

    pub fn config(&self) -> &OrbConfig {
        &self.config
    }

    pub fn pattern(&self) -> &DescriptorPattern {
        &self.pattern
    }

    /// False for images smaller than the 31x31 descriptor patch.
    pub fn fits(&self, img: &GrayImage) -> bool {
        !is_too_small(img)
    }

    /// Minimum distance from the border at which every stage fits.
    pub fn border(&self) -> usize {
        3.max(self.config.harris.border())
            .max(self.config.orientation_radius)
            .max(self.pattern.reach())
    }

    /// Harris-ranked, oriented keypoints.
    pub fn detect(&self, img: &GrayImage) -> Vec<Keypoint> {
        let b = self.border();
        let (w, h) = (img.width(), img.height());
        if w <= 2 * b || h <= 2 * b {
            return Vec::new();
        }
        let candidates: Vec<(usize, usize)> = fast_detect(img, &self.config.fast)
            .into_iter()
            .filter(|&(x, y)| x >= b && y >= b && x + b < w && y + b < h)
            .collect();
        let mut kps = retain_best(&candidates, img, &self.config.harris, self.config.max_keypoints);
        for kp in &mut kps {
            // border() guarantees the disc fits
            kp.orientation = orientation(img, kp, self.config.orientation_radius).unwrap_or(0.0);
        }
        kps
    }

    pub fn features(&self, img: &GrayImage) -> Features {
        let mut out = Features::default();
        for kp in self.detect(img) {
            if let Some(d) = describe(img, &kp, &self.pattern) {
                out.keypoints.push(kp);
                out.descriptors.push(d);
            }
        }
        out
    }

    /// Good matches over the smaller keypoint count, clamped to `[0, 1]`.
    pub fn compare_features(&self, a: &Features, b: &Features) -> OrbSimilarity {
        let good_matches = match_descriptors(&a.descriptors, &b.descriptors)
            .iter()
            .filter(|m| m.distance <= self.config.match_threshold)
            .count();
        let (ka, kb) = (a.len(), b.len());
        let score = if ka == 0 || kb == 0 {
            0.0
        } else {
            (good_matches as f64 / ka.min(kb).max(1) as f64).clamp(0.0, 1.0)
        };
        OrbSimilarity { score, good_matches, keypoints_a: ka, keypoints_b: kb, degenerate: false }
    }

    pub fn similarity(&self, a: &GrayImage, b: &GrayImage) -> OrbSimilarity {
        if is_too_small(a) || is_too_small(b) {
            return OrbSimilarity::degenerate();
        }
        self.compare_features(&self.features(a), &self.features(b))
    }
}

fn is_too_small(img: &GrayImage) -> bool {
    img.width() < PATCH_SIZE || img.height() < PATCH_SIZE
}

/// One-off comparison; build an [`OrbMatcher`] to amortize the pattern.
pub fn orb_similarity(a: &GrayImage, b: &GrayImage, config: &OrbConfig) -> OrbSimilarity {
    OrbMatcher::new(*config).similarity(a, b)
}
