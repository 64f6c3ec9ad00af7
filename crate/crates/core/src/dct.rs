//! Orthonormal type-II 2-D DCT.
//!
//! Blocks are square and row-major: `block[y * n + x]`. The coefficient for
//! horizontal frequency `u` and vertical frequency `v` is stored at
//! `coef[v * n + u]`, so the top-left corner holds the low frequencies.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// Precomputed basis for an `n`-point transform, reusable across blocks.
#[derive(Debug, Clone)]
pub struct Dct2d {
    n: usize,
    // basis[k * n + i] = alpha(k) * cos((2i + 1) k pi / 2n)
    basis: Vec<f64>,
}

impl Dct2d {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dct size must be at least 1"));
        }
        let nf = n as f64;
        let mut basis = Vec::with_capacity(n * n);
        for k in 0..n {
            let alpha = if k == 0 { libm::sqrt(1.0 / nf) } else { libm::sqrt(2.0 / nf) };
            for i in 0..n {
                let angle = (2 * i + 1) as f64 * k as f64 * PI / (2.0 * nf);
                basis.push(alpha * libm::cos(angle));
            }
        }
        Ok(Self { n, basis })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Forward transform of one `n x n` block.
    pub fn forward(&self, block: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if block.len() != n * n {
            return Err(Error::InvalidArgument("dct block length must be n * n"));
        }
        // rows: tmp[y][u] = sum_x block[y][x] * basis[u][x]
        let mut tmp = vec![0.0; n * n];
        for y in 0..n {
            let row = &block[y * n..(y + 1) * n];
            for u in 0..n {
                let b = &self.basis[u * n..(u + 1) * n];
                tmp[y * n + u] = row.iter().zip(b).map(|(f, c)| f * c).sum();
            }
        }
        // columns: out[v][u] = sum_y tmp[y][u] * basis[v][y]
        let mut out = vec![0.0; n * n];
        for v in 0..n {
            let b = &self.basis[v * n..(v + 1) * n];
            for u in 0..n {
                out[v * n + u] = (0..n).map(|y| tmp[y * n + u] * b[y]).sum();
            }
        }
        Ok(out)
    }
}

/// One-shot orthonormal 2-D DCT of an `n x n` row-major block.
pub fn dct2d(block: &[f64], n: usize) -> Result<Vec<f64>> {
    Dct2d::new(n)?.forward(block)
}
