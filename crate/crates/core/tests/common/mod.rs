#![allow(dead_code)]

use framescan_core::GrayImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
    GrayImage::from_fn(w, h, |_, _| rng.gen()).unwrap()
}

/// Random-gray rectangular cells: plenty of distinct, well-separated corners.
pub fn block_texture(rng: &mut ChaCha8Rng, w: usize, h: usize, cell: usize) -> GrayImage {
    let cols = w.div_ceil(cell) + 1;
    let rows = h.div_ceil(cell) + 1;
    let grid: Vec<u8> = (0..cols * rows).map(|_| rng.gen()).collect();
    let jitter_x: Vec<usize> = (0..cols).map(|_| rng.gen_range(0..cell / 2)).collect();
    GrayImage::from_fn(w, h, |x, y| {
        let r = y / cell;
        let c = (x + jitter_x[r % cols]) / cell;
        grid[r * cols + c]
    })
    .unwrap()
}

/// 90 degree clockwise rotation: output (x', y') = (h - 1 - y, x).
pub fn rotate_cw(img: &GrayImage) -> GrayImage {
    let (w, h) = (img.width(), img.height());
    GrayImage::from_fn(h, w, |xr, yr| img.get(yr, h - 1 - xr)).unwrap()
}

/// Blocky background sprinkled with small bright and dark squares; every
/// square is a FAST corner and its surroundings are unique.
pub fn speckle_texture(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
    let mut img = block_texture(rng, w, h, 12);
    let spots = w * h / 150;
    for _ in 0..spots {
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
