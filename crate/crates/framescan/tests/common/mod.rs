#![allow(dead_code)]

use std::path::{Path, PathBuf};

use framescan::core::hash::phash;
use framescan::core::GrayImage;
use framescan::io::save_gray;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FRAME_W: usize = 128;
pub const FRAME_H: usize = 96;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn noise_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
    GrayImage::from_fn(w, h, |_, _| rng.gen()).unwrap()
}

/// Random-gray cells with small bright and dark squares on top.
pub fn speckle_texture(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
    let cell = 12;
    let cols = w.div_ceil(cell) + 1;
    let rows = h.div_ceil(cell) + 1;
    let grid: Vec<u8> = (0..cols * rows).map(|_| rng.gen_range(50..=200)).collect();
    let mut img = GrayImage::from_fn(w, h, |x, y| grid[(y / cell) * cols + x / cell]).unwrap();
    for _ in 0..w * h / 150 {
        let size = rng.gen_range(1..=3);
        let (x0, y0) = (rng.gen_range(0..w), rng.gen_range(0..h));
        let v: u8 = if rng.gen() { rng.gen_range(0..40) } else { rng.gen_range(215..=255) };
        for y in y0..(y0 + size).min(h) {
            for x in x0..(x0 + size).min(w) {
                img.set(x, y, v);
            }
        }
    }
    img
}

pub fn salt_and_pepper(rng: &mut ChaCha8Rng, img: &GrayImage, fraction: f64) -> GrayImage {
    let mut out = img.clone();
    let count = (img.len() as f64 * fraction).round() as usize;
    for _ in 0..count {
        let (x, y) = (rng.gen_range(0..img.width()), rng.gen_range(0..img.height()));
        out.set(x, y, if rng.gen() { 255 } else { 0 });
    }
    out
}

pub fn frame_name(index: usize) -> String {
    format!("frame_{index:06}.png")
}

/// Unrelated texture frames with the test image composited into
/// `planted` (a small banner overlays the top-left corner of each copy).
pub struct PlantedFixture {
    pub frames_dir: PathBuf,
    pub test_image: PathBuf,
}

pub fn write_planted_fixture(root: &Path, frames: usize, planted: std::ops::RangeInclusive<usize>, seed: u64) -> PlantedFixture {
    let mut r = rng(seed);
    let frames_dir = root.join("frames");
    std::fs::create_dir_all(&frames_dir).unwrap();
    let test = speckle_texture(&mut r, FRAME_W, FRAME_H);
    let test_image = root.join("test.png");
    save_gray(&test_image, &test).unwrap();
    for i in 0..frames {
        let frame = if planted.contains(&i) {
            let mut f = test.clone();
            for y in 0..6 {
                for x in 0..24 {
                    f.set(x, y, 240);
                }
            }
            f
        } else {
            speckle_texture(&mut r, FRAME_W, FRAME_H)
        };
        save_gray(frames_dir.join(frame_name(i)), &frame).unwrap();
    }
    PlantedFixture { frames_dir, test_image }
}

/// `count` textures whose pHashes are pairwise more than `min_gap` apart.
pub fn distinct_bases(r: &mut ChaCha8Rng, count: usize, min_gap: u32) -> Vec<GrayImage> {
    let mut bases: Vec<GrayImage> = Vec::new();
    while bases.len() < count {
        let cand = speckle_texture(r, 64, 64);
        let h = phash(&cand);
        if bases.iter().all(|b| phash(b).distance(&h).unwrap() > min_gap) {
            bases.push(cand);
        }
    }
    bases
}
