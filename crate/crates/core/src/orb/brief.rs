//! Steered BRIEF: a fixed random comparison pattern rotated to each
//! keypoint's orientation.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::Keypoint;
use crate::image::GrayImage;

pub const DESCRIPTOR_BITS: usize = 256;
pub const PATCH_SIZE: usize = 31;
pub const DEFAULT_PATTERN_SEED: u64 = 0x0b5e_55ed_c0ff_ee00;

/// 256-bit binary descriptor, bit `i` in word `i / 64`, position `i % 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BinaryDescriptor(pub [u64; 4]);

impl BinaryDescriptor {
    pub const ZERO: Self = Self([0; 4]);
    pub const ONES: Self = Self([u64::MAX; 4]);

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set_bit(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn hamming(&self, other: &Self) -> u32 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a ^ b).count_ones()).sum()
    }
}

/// SplitMix64; small, portable and good enough for drawing a test pattern.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller.
    fn next_gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
    }
}

/// Point-pair comparison pattern, offsets relative to the keypoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptorPattern {
    pairs: Vec<[(i32, i32); 2]>,
    reach: usize,
}

impl DescriptorPattern {
    /// Gaussian offsets with sigma = patch / 5, clamped to the 31x31 patch.
    /// Degenerate pairs (p == q) are redrawn.
    pub fn generate(seed: u64) -> Self {
        let half = (PATCH_SIZE / 2) as i32;
        let sigma = PATCH_SIZE as f64 / 5.0;
        let mut rng = SplitMix64(seed);
        let draw = |rng: &mut SplitMix64| -> (i32, i32) {
            let x = libm::round(rng.next_gaussian() * sigma) as i32;
            let y = libm::round(rng.next_gaussian() * sigma) as i32;
            (x.clamp(-half, half), y.clamp(-half, half))
        };
        let mut pairs = Vec::with_capacity(DESCRIPTOR_BITS);
        while pairs.len() < DESCRIPTOR_BITS {
            let p = draw(&mut rng);
            let q = draw(&mut rng);
            if p != q {
                pairs.push([p, q]);
            }
        }
        let max_sq = pairs
            .iter()
            .flatten()
            .map(|&(x, y)| x * x + y * y)
            .max()
            .unwrap_or(0);
        let reach = libm::ceil(libm::sqrt(f64::from(max_sq))) as usize;
        Self { pairs, reach }
    }

    pub fn pairs(&self) -> &[[(i32, i32); 2]] {
        &self.pairs
    }

    /// Upper bound on `|dx|` and `|dy|` of any rotated, rounded sample point.
    pub fn reach(&self) -> usize {
        self.reach
    }
}

impl Default for DescriptorPattern {
    fn default() -> Self {
        Self::generate(DEFAULT_PATTERN_SEED)
    }
}

/// Rotates every pair by the keypoint orientation and sets bit `i` iff
/// `I(p_i) < I(q_i)`. Returns `None` when a sample falls outside the image.
pub fn describe(img: &GrayImage, kp: &Keypoint, pattern: &DescriptorPattern) -> Option<BinaryDescriptor> {
    let (sin, cos) = libm::sincos(kp.orientation);
    let (cx, cy) = (kp.x as isize, kp.y as isize);
    let sample = |(px, py): (i32, i32)| -> Option<u8> {
        let (px, py) = (f64::from(px), f64::from(py));
        let rx = libm::round(cos * px - sin * py) as isize;
        let ry = libm::round(sin * px + cos * py) as isize;
        img.get_signed(cx + rx, cy + ry)
    };
    let mut desc = BinaryDescriptor::ZERO;
    for (i, &[p, q]) in pattern.pairs.iter().enumerate() {
        if sample(p)? < sample(q)? {
            desc.set_bit(i);
        }
    }
    Some(desc)
}
