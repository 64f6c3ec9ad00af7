//! Frame-by-frame comparison of a video against the test image.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use framescan_core::hash::{hash_with, HashAlgo, PerceptualHash};
use framescan_core::image::resize_nearest;
use framescan_core::orb::{FastParams, Features, HarrisParams, OrbConfig, OrbMatcher, DEFAULT_PATTERN_SEED};
use framescan_core::ssim::{ssim_score, SsimParams};
use framescan_core::GrayImage;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dedup::{dedup, DedupConfig, DedupReport};
use crate::error::FrameError;
use crate::ingest::{enumerate_frames, FrameRef, FrameSource};
use crate::{io, Error, Result};

pub const REPORT_VERSION: u32 = 1;

mod algo_name {
    use framescan_core::hash::HashAlgo;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(algo: &HashAlgo, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(algo.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<HashAlgo, D::Error> {
        let name = String::deserialize(d)?;
        HashAlgo::from_name(&name).ok_or_else(|| D::Error::custom(format!("unknown hash algorithm {name:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbSettings {
    pub fast_margin: u8,
    pub fast_arc: usize,
    pub harris_k: f64,
    pub harris_window: usize,
    pub max_keypoints: usize,
    pub match_threshold: u32,
    pub orientation_radius: usize,
    pub pattern_seed: u64,
}

impl Default for OrbSettings {
    fn default() -> Self {
        let c = OrbConfig::default();
        Self {
            fast_margin: c.fast.margin(),
            fast_arc: c.fast.arc_len(),
            harris_k: c.harris.k(),
            harris_window: c.harris.window(),
            max_keypoints: c.max_keypoints,
            match_threshold: c.match_threshold,
            orientation_radius: c.orientation_radius,
            pattern_seed: DEFAULT_PATTERN_SEED,
        }
    }
}

impl OrbSettings {
    pub fn to_config(&self) -> Result<OrbConfig> {
        Ok(OrbConfig {
            fast: FastParams::new(self.fast_margin, self.fast_arc)?,
            harris: HarrisParams::new(self.harris_k, self.harris_window)?,
            max_keypoints: self.max_keypoints,
            match_threshold: self.match_threshold,
            orientation_radius: self.orientation_radius,
            pattern_seed: self.pattern_seed,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsimSettings {
    pub dynamic_range: f64,
    pub k1: f64,
    pub k2: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for SsimSettings {
    fn default() -> Self {
        let p = SsimParams::default();
        Self { dynamic_range: p.dynamic_range, k1: p.k1, k2: p.k2, a: p.alpha, b: p.beta, c: p.gamma }
    }
}

impl SsimSettings {
    pub fn to_params(&self) -> Result<SsimParams> {
        let p = SsimParams {
            dynamic_range: self.dynamic_range,
            k1: self.k1,
            k2: self.k2,
            alpha: self.a,
            beta: self.b,
            gamma: self.c,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DedupSettings {
    #[serde(with = "algo_name")]
    pub algo: HashAlgo,
    pub threshold: u32,
    /// Defaults to `bin/` inside the frames directory.
    pub bin_dir: Option<PathBuf>,
}

impl Default for DedupSettings {
    fn default() -> Self {
        Self { algo: HashAlgo::Dct, threshold: 10, bin_dir: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub orb_threshold: f64,
    pub ssim_threshold: f64,
    /// Frames at or below this hash distance are flagged.
    pub hash_threshold: u32,
    /// Sampling stride; overrides the interval carried by the frame source.
    pub interval: usize,
    pub dedup_enabled: bool,
    #[serde(with = "algo_name")]
    pub hash_algo: HashAlgo,
    pub orb: OrbSettings,
    pub ssim: SsimSettings,
    pub dedup: DedupSettings,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            orb_threshold: 0.5,
            ssim_threshold: 0.8,
            hash_threshold: 10,
            interval: 10,
            dedup_enabled: false,
            hash_algo: HashAlgo::Dct,
            orb: OrbSettings::default(),
            ssim: SsimSettings::default(),
            dedup: DedupSettings::default(),
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.orb_threshold) {
            return Err(Error::Config(format!("orb threshold {} outside [0, 1]", self.orb_threshold)));
        }
        if !(0.0..=1.0).contains(&self.ssim_threshold) {
            return Err(Error::Config(format!("ssim threshold {} outside [0, 1]", self.ssim_threshold)));
        }
        if self.hash_threshold > 64 {
            return Err(Error::Config(format!("hash threshold {} exceeds 64 bits", self.hash_threshold)));
        }
        if self.dedup.threshold > 64 {
            return Err(Error::Config(format!("dedup threshold {} exceeds 64 bits", self.dedup.threshold)));
        }
        if self.interval == 0 {
            return Err(Error::Config("frame interval must be at least 1".into()));
        }
        self.orb.to_config()?;
        self.ssim.to_params()?;
        Ok(())
    }

    fn flag(&self, orb: f64, ssim: f64, hash_distance: u32) -> (bool, bool, bool) {
        (orb >= self.orb_threshold, ssim >= self.ssim_threshold, hash_distance <= self.hash_threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub index: u64,
    pub orb: f64,
    pub ssim: f64,
    pub hash_distance: u32,
    pub flagged_orb: bool,
    pub flagged_ssim: bool,
    pub flagged_hash: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Detected,
    NotDetected,
}

impl Verdict {
    fn from_flags(mut flags: impl Iterator<Item = bool>) -> Self {
        if flags.any(|f| f) { Verdict::Detected } else { Verdict::NotDetected }
    }

    pub fn is_detected(self) -> bool {
        self == Verdict::Detected
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScorePeak {
    pub index: u64,
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistancePeak {
    pub index: u64,
    pub distance: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub orb: Verdict,
    pub ssim: Verdict,
    pub hash: Verdict,
}

impl Verdicts {
    pub fn any_detected(&self) -> bool {
        self.orb.is_detected() || self.ssim.is_detected() || self.hash.is_detected()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub version: u32,
    pub test_image: String,
    pub config: ScanConfig,
    pub records: Vec<FrameRecord>,
    pub max_orb: Option<ScorePeak>,
    pub max_ssim: Option<ScorePeak>,
    pub min_hash: Option<DistancePeak>,
    pub verdict: Verdicts,
    pub errors: Vec<FrameError>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dedup: Option<DedupReport>,
}

impl ScanReport {
    /// Derives peaks and verdicts from `records` (sorted by index here).
    /// Ties go to the lowest frame index.
    pub fn assemble(
        test_image: String,
        config: ScanConfig,
        mut records: Vec<FrameRecord>,
        errors: Vec<FrameError>,
        dedup: Option<DedupReport>,
    ) -> Self {
        records.sort_by_key(|r| r.index);
        let mut max_orb: Option<ScorePeak> = None;
        let mut max_ssim: Option<ScorePeak> = None;
        let mut min_hash: Option<DistancePeak> = None;
        for r in &records {
            if max_orb.map_or(true, |p| r.orb > p.score) {
                max_orb = Some(ScorePeak { index: r.index, score: r.orb });
            }
            if max_ssim.map_or(true, |p| r.ssim > p.score) {
                max_ssim = Some(ScorePeak { index: r.index, score: r.ssim });
            }
            if min_hash.map_or(true, |p| r.hash_distance < p.distance) {
                min_hash = Some(DistancePeak { index: r.index, distance: r.hash_distance });
            }
        }
        let verdict = Verdicts {
            orb: Verdict::from_flags(records.iter().map(|r| r.flagged_orb)),
            ssim: Verdict::from_flags(records.iter().map(|r| r.flagged_ssim)),
            hash: Verdict::from_flags(records.iter().map(|r| r.flagged_hash)),
        };
        Self {
            version: REPORT_VERSION,
            test_image,
            config,
            records,
            max_orb,
            max_ssim,
            min_hash,
            verdict,
            errors,
            dedup,
        }
    }
}

/// Test-image state shared read-only by every frame worker.
pub struct Reference {
    image: GrayImage,
    features: Features,
    hash: PerceptualHash,
    matcher: OrbMatcher,
    ssim: SsimParams,
}

impl Reference {
    pub fn new(image: GrayImage, cfg: &ScanConfig) -> Result<Self> {
        if image.len() < 2 {
            return Err(Error::Config("test image needs at least two pixels".into()));
        }
        let matcher = OrbMatcher::new(cfg.orb.to_config()?);
        let features = if matcher.fits(&image) { matcher.features(&image) } else { Features::default() };
        let hash = hash_with(&image, cfg.hash_algo);
        Ok(Self { image, features, hash, matcher, ssim: cfg.ssim.to_params()? })
    }

    /// `(orb score, ssim score, hash distance)` of one frame.
    pub fn measure(&self, frame: &GrayImage) -> Result<(f64, f64, u32)> {
        let orb = if self.matcher.fits(frame) && self.matcher.fits(&self.image) {
            let f = self.matcher.features(frame);
            self.matcher.compare_features(&f, &self.features).score
        } else {
            0.0
        };
        let resized = resize_nearest(frame, self.image.width(), self.image.height())?;
        let ssim = ssim_score(&resized, &self.image, &self.ssim)?.score;
        let distance = hash_with(frame, self.hash.algo).distance(&self.hash)?;
        Ok((orb, ssim, distance))
    }
}

fn measure_frame(reference: &Reference, cfg: &ScanConfig, frame: &FrameRef) -> Result<FrameRecord, FrameError> {
    let fail = |e: Error| FrameError { index: Some(frame.index), path: frame.path.clone(), message: e.to_string() };
    let gray = io::load_gray(&frame.path).map_err(fail)?;
    let (orb, ssim, hash_distance) = reference.measure(&gray).map_err(fail)?;
    let (flagged_orb, flagged_ssim, flagged_hash) = cfg.flag(orb, ssim, hash_distance);
    Ok(FrameRecord { index: frame.index, orb, ssim, hash_distance, flagged_orb, flagged_ssim, flagged_hash })
}

fn run_dedup(frames: Vec<FrameRef>, src: &FrameSource, cfg: &ScanConfig) -> Result<(Vec<FrameRef>, Vec<FrameError>, DedupReport)> {
    let bin_dir = cfg.dedup.bin_dir.clone().unwrap_or_else(|| src.frames_location().join("bin"));
    let dcfg = DedupConfig { algo: cfg.dedup.algo, threshold: cfg.dedup.threshold, bin_dir };
    let paths: Vec<PathBuf> = frames.iter().map(|f| f.path.clone()).collect();
    let report = dedup(&paths, &dcfg)?;
    let kept: HashSet<&Path> = report.kept.iter().map(PathBuf::as_path).collect();
    let by_path = |p: &Path| frames.iter().find(|f| f.path == p).map(|f| f.index);
    let errors = report
        .errors
        .iter()
        .map(|e| FrameError { index: by_path(&e.path), ..e.clone() })
        .collect();
    let remaining = frames.iter().filter(|f| kept.contains(f.path.as_path())).cloned().collect();
    Ok((remaining, errors, report))
}

/// Scores every sampled frame against the test image on a pool of `workers`
/// threads. Output does not depend on the worker count.
pub fn scan(src: &FrameSource, test_image: &Path, cfg: &ScanConfig, workers: usize) -> Result<ScanReport> {
    cfg.validate()?;
    let test = io::load_gray(test_image)?;
    let reference = Reference::new(test, cfg)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;

    pool.install(|| {
        let frames = enumerate_frames(&src.clone().with_interval(cfg.interval))?;
        let (frames, mut errors, dedup_report) = if cfg.dedup_enabled {
            let (f, e, r) = run_dedup(frames, src, cfg)?;
            (f, e, Some(r))
        } else {
            (frames, Vec::new(), None)
        };

        let results: Vec<Result<FrameRecord, FrameError>> =
            frames.par_iter().map(|f| measure_frame(&reference, cfg, f)).collect();
        let mut records = Vec::with_capacity(results.len());
        for r in results {
            match r {
                Ok(rec) => records.push(rec),
                Err(e) => errors.push(e),
            }
        }
        errors.sort_by(|a, b| (a.index, &a.path).cmp(&(b.index, &b.path)));
        Ok(ScanReport::assemble(
            test_image.display().to_string(),
            cfg.clone(),
            records,
            errors,
            dedup_report,
        ))
    })
}
