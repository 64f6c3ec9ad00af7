//! Global SSIM: luminance, contrast and structure comparisons computed from
//! whole-image statistics and combined as `L^a * C^b * S^c`.

use crate::image::GrayImage;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimParams {
    /// Dynamic range of the pixel values.
    pub dynamic_range: f64,
    pub k1: f64,
    pub k2: f64,
    /// Exponents on L, C and S.
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self { dynamic_range: 255.0, k1: 0.01, k2: 0.03, alpha: 1.0, beta: 1.0, gamma: 1.0 }
    }
}

impl SsimParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.dynamic_range > 0.0) {
            return Err(Error::InvalidArgument("ssim dynamic range must be positive"));
        }
        if !(self.k1 > 0.0 && self.k1 < 1.0 && self.k2 > 0.0 && self.k2 < 1.0) {
            return Err(Error::InvalidArgument("ssim stabilizer constants must be in (0, 1)"));
        }
        if !(self.alpha > 0.0 && self.beta > 0.0 && self.gamma > 0.0) {
            return Err(Error::InvalidArgument("ssim exponents must be positive"));
        }
        Ok(())
    }

    /// Stabilizers `(q1, q2, q3)` for L, C and S.
    pub fn stabilizers(&self) -> (f64, f64, f64) {
        let q1 = (self.k1 * self.dynamic_range) * (self.k1 * self.dynamic_range);
        let q2 = (self.k2 * self.dynamic_range) * (self.k2 * self.dynamic_range);
        (q1, q2, q2 / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimBreakdown {
    pub luminance: f64,
    pub contrast: f64,
    pub structure: f64,
    pub score: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub std_x: f64,
    pub std_y: f64,
    pub covariance: f64,
}

pub fn luminance_mean(img: &GrayImage) -> f64 {
    let sum: u64 = img.data().iter().map(|&v| u64::from(v)).sum();
    sum as f64 / img.len() as f64
}

/// Sample variance (divisor N - 1) as the exact same sum `covariance` uses.
fn sample_variance(img: &GrayImage) -> Result<f64> {
    raw_covariance(img, img)
}

fn raw_covariance(x: &GrayImage, y: &GrayImage) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::UndefinedVariance);
    }
    let (ux, uy) = (luminance_mean(x), luminance_mean(y));
    let sum: f64 = x
        .data()
        .iter()
        .zip(y.data())
        .map(|(&a, &b)| (f64::from(a) - ux) * (f64::from(b) - uy))
        .sum();
    Ok(sum / (x.len() - 1) as f64)
}

/// Sample standard deviation.
pub fn contrast_std(img: &GrayImage) -> Result<f64> {
    sample_variance(img).map(libm::sqrt)
}

/// Sample covariance of two equally sized images.
pub fn covariance(x: &GrayImage, y: &GrayImage) -> Result<f64> {
    if x.width() != y.width() || x.height() != y.height() {
        return Err(Error::InvalidArgument("covariance needs images of identical dimensions"));
    }
    raw_covariance(x, y)
}

fn is_integer(v: f64) -> bool {
    libm::trunc(v) == v
}

/// `base^exp`, keeping the sign of a non-positive base when `exp` is fractional.
fn signed_pow(base: f64, exp: f64) -> f64 {
    if base > 0.0 || is_integer(exp) {
        libm::pow(base, exp)
    } else {
        let mag = libm::pow(libm::fabs(base), exp);
        if base < 0.0 { -mag } else { mag }
    }
}

pub fn ssim_score(x: &GrayImage, y: &GrayImage, params: &SsimParams) -> Result<SsimBreakdown> {
    if x.width() != y.width() || x.height() != y.height() {
        return Err(Error::InvalidArgument("ssim needs images of identical dimensions"));
    }
    params.validate()?;
    let (q1, q2, q3) = params.stabilizers();

    let (ux, uy) = (luminance_mean(x), luminance_mean(y));
    let (vx, vy) = (sample_variance(x)?, sample_variance(y)?);
    let sxy = raw_covariance(x, y)?;
    // sqrt(vx * vy) rather than sqrt(vx) * sqrt(vy): exact when vx == vy.
    let sx_sy = libm::sqrt(vx * vy);

    let luminance = (2.0 * ux * uy + q1) / (ux * ux + uy * uy + q1);
    let contrast = (2.0 * sx_sy + q2) / (vx + vy + q2);
    let structure = (sxy + q3) / (sx_sy + q3);

    let score = if structure > 0.0 || (is_integer(params.alpha) && is_integer(params.beta) && is_integer(params.gamma)) {
        libm::pow(luminance, params.alpha) * libm::pow(contrast, params.beta) * libm::pow(structure, params.gamma)
    } else {
        libm::pow(luminance, params.alpha) * libm::pow(contrast, params.beta) * signed_pow(structure, params.gamma)
    };

    Ok(SsimBreakdown {
        luminance,
        contrast,
        structure,
        score,
        mean_x: ux,
        mean_y: uy,
        std_x: libm::sqrt(vx),
        std_y: libm::sqrt(vy),
        covariance: sxy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn row(values: &[u8]) -> GrayImage {
        GrayImage::new(values.len(), 1, values.to_vec()).unwrap()
    }

    #[test]
    fn mean_examples() {
        assert_eq!(luminance_mean(&GrayImage::filled(5, 3, 37).unwrap()), 37.0);
        assert_eq!(luminance_mean(&row(&[0, 255])), 127.5);
    }

    #[test]
    fn std_examples() {
        assert_eq!(contrast_std(&GrayImage::filled(4, 4, 9).unwrap()).unwrap(), 0.0);
        assert!((contrast_std(&row(&[0, 2])).unwrap() - core::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(contrast_std(&row(&[4])), Err(Error::UndefinedVariance));
    }

    #[test]
    fn covariance_examples() {
        assert_eq!(covariance(&row(&[0, 2]), &row(&[2, 0])).unwrap(), -2.0);
        assert_eq!(covariance(&row(&[5, 5, 5]), &row(&[1, 9, 200])).unwrap(), 0.0);
        let x = row(&[3, 1, 4, 1, 5, 9, 2, 6]);
        let s = contrast_std(&x).unwrap();
        assert!((covariance(&x, &x).unwrap() - s * s).abs() < 1e-12);
        assert!(covariance(&x, &row(&[1, 2])).is_err());
    }

    #[test]
    fn identical_images_are_exactly_one() {
        let x = row(&[3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5]);
        let b = ssim_score(&x, &x, &SsimParams::default()).unwrap();
        assert_eq!((b.luminance, b.contrast, b.structure, b.score), (1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn black_vs_white() {
        let a = GrayImage::filled(8, 8, 0).unwrap();
        let b = GrayImage::filled(8, 8, 255).unwrap();
        let r = ssim_score(&a, &b, &SsimParams::default()).unwrap();
        let q1 = 6.5025;
        assert_eq!((r.contrast, r.structure), (1.0, 1.0));
        assert!((r.luminance - q1 / (255.0 * 255.0 + q1)).abs() < 1e-15);
        assert!((r.score - 1.0e-4).abs() < 1e-6);
    }

    #[test]
    fn negative_structure_with_fractional_exponent() {
        let x = row(&[0, 255, 0, 255]);
        let y = row(&[255, 0, 255, 0]);
        let p = SsimParams { gamma: 0.5, ..SsimParams::default() };
        let r = ssim_score(&x, &y, &p).unwrap();
        assert!(r.structure < 0.0);
        assert!(r.score < 0.0 && r.score.is_finite());
        let expect = r.luminance * r.contrast * -libm::sqrt(-r.structure);
        assert!((r.score - expect).abs() < 1e-12);

        let unit = ssim_score(&x, &y, &SsimParams::default()).unwrap();
        assert!((unit.score - unit.luminance * unit.contrast * unit.structure).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = GrayImage::filled(4, 4, 0).unwrap();
        let b = GrayImage::filled(4, 5, 0).unwrap();
        assert!(ssim_score(&a, &b, &SsimParams::default()).is_err());
        let one = GrayImage::new(1, 1, vec![3]).unwrap();
        assert_eq!(ssim_score(&one, &one, &SsimParams::default()), Err(Error::UndefinedVariance));
        let bad = SsimParams { alpha: 0.0, ..SsimParams::default() };
        assert!(ssim_score(&a, &a, &bad).is_err());
    }
}
