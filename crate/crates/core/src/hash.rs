//! 64-bit perceptual hashes. Bit 0 of the row-major bit sequence is the most
//! significant bit of the value.

use alloc::vec::Vec;
use core::fmt;

use crate::dct::Dct2d;
use crate::image::{resize_nearest, GrayImage};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum HashAlgo {
    /// Mean threshold over an 8x8 thumbnail.
    Average,
    /// Horizontal neighbor comparisons over a 9x8 thumbnail.
    Difference,
    /// Low-frequency DCT coefficients of a 32x32 thumbnail.
    #[default]
    Dct,
}

impl HashAlgo {
    pub fn name(self) -> &'static str {
        match self {
            HashAlgo::Average => "ahash",
            HashAlgo::Difference => "dhash",
            HashAlgo::Dct => "phash",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "ahash" | "average" => Some(HashAlgo::Average),
            "dhash" | "difference" => Some(HashAlgo::Difference),
            "phash" | "dct" => Some(HashAlgo::Dct),
            _ => None,
        }
    }
}

impl fmt::Display for HashAlgo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PerceptualHash {
    pub bits: u64,
    pub algo: HashAlgo,
}

impl PerceptualHash {
    pub fn new(bits: u64, algo: HashAlgo) -> Self {
        Self { bits, algo }
    }

    /// Hamming distance; hashes from different algorithms are incomparable.
    pub fn distance(&self, other: &Self) -> Result<u32> {
        hamming(self, other)
    }
}

/// `{:016x}` of the bits.
impl fmt::Display for PerceptualHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.bits)
    }
}

fn pack(bits: impl IntoIterator<Item = bool>) -> u64 {
    bits.into_iter().fold(0u64, |acc, b| (acc << 1) | u64::from(b))
}

pub fn ahash(img: &GrayImage) -> PerceptualHash {
    let small = resize_nearest(img, 8, 8).expect("non-zero target");
    let sum: u32 = small.data().iter().map(|&v| u32::from(v)).sum();
    let mean = f64::from(sum) / 64.0;
    let bits = pack(small.data().iter().map(|&v| f64::from(v) > mean));
    PerceptualHash::new(bits, HashAlgo::Average)
}

pub fn dhash(img: &GrayImage) -> PerceptualHash {
    let small = resize_nearest(img, 9, 8).expect("non-zero target");
    let bits = pack((0..8).flat_map(|r| {
        let small = &small;
        (0..8).map(move |c| small.get(c, r) > small.get(c + 1, r))
    }));
    PerceptualHash::new(bits, HashAlgo::Difference)
}

pub fn phash(img: &GrayImage) -> PerceptualHash {
    PhashHasher::new().hash(img)
}

/// pHash with the 32-point DCT basis cached.
#[derive(Debug, Clone)]
pub struct PhashHasher {
    dct: Dct2d,
}

impl Default for PhashHasher {
    fn default() -> Self {
        Self::new()
    }
}

impl PhashHasher {
    const SIZE: usize = 32;
    const LOW: usize = 8;

    pub fn new() -> Self {
        Self { dct: Dct2d::new(Self::SIZE).expect("non-zero size") }
    }

    pub fn hash(&self, img: &GrayImage) -> PerceptualHash {
        let small = resize_nearest(img, Self::SIZE, Self::SIZE).expect("non-zero target");
        // Removing the mean only moves the DC term, which is excluded below,
        // and makes flat inputs transform to exact zeros.
        let sum: u32 = small.data().iter().map(|&v| u32::from(v)).sum();
        let mean = f64::from(sum) / (Self::SIZE * Self::SIZE) as f64;
        let block: Vec<f64> = small.data().iter().map(|&v| f64::from(v) - mean).collect();
        let coef = self.dct.forward(&block).expect("block is SIZE x SIZE");

        let low: Vec<f64> = (0..Self::LOW)
            .flat_map(|v| (0..Self::LOW).map(move |u| (v, u)))
            .map(|(v, u)| coef[v * Self::SIZE + u])
            .collect();
        let mut ac: Vec<f64> = low[1..].to_vec();
        ac.sort_by(f64::total_cmp);
        // 63 values: the middle order statistic.
        let median = ac[(ac.len() - 1) / 2];
        let bits = pack(low.iter().enumerate().map(|(i, &c)| i != 0 && c > median));
        PerceptualHash::new(bits, HashAlgo::Dct)
    }
}

pub fn hash_with(img: &GrayImage, algo: HashAlgo) -> PerceptualHash {
    match algo {
        HashAlgo::Average => ahash(img),
        HashAlgo::Difference => dhash(img),
        HashAlgo::Dct => phash(img),
    }
}

pub fn hamming(a: &PerceptualHash, b: &PerceptualHash) -> Result<u32> {
    if a.algo != b.algo {
        return Err(Error::AlgorithmMismatch);
    }
    Ok((a.bits ^ b.bits).count_ones())
}
