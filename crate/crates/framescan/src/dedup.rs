//! Near-duplicate frame binning.
//!
//! Frames are visited in input order. A frame whose hash lies within the
//! threshold of an already kept frame is moved into the bin directory; every
//! other frame is kept. The first frame is always kept.

use std::collections::HashSet;
use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use framescan_core::hash::{hash_with, HashAlgo, PerceptualHash};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::FrameError;
use crate::{io, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DedupConfig {
    pub algo: HashAlgo,
    /// Largest Hamming distance treated as a duplicate, `0..=64`.
    pub threshold: u32,
    pub bin_dir: PathBuf,
}

impl DedupConfig {
    pub fn new(bin_dir: impl Into<PathBuf>) -> Self {
        Self { algo: HashAlgo::Dct, threshold: 10, bin_dir: bin_dir.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinnedFrame {
    pub path: PathBuf,
    /// Kept frame it duplicated.
    pub matched: PathBuf,
    pub distance: u32,
    pub moved_to: PathBuf,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DedupReport {
    pub kept: Vec<PathBuf>,
    pub binned: Vec<BinnedFrame>,
    pub errors: Vec<FrameError>,
}

/// `bin_dir/name`, or `stem-1.ext`, `stem-2.ext`, ... if that is taken.
fn unique_destination(bin_dir: &Path, original: &Path, taken: &HashSet<PathBuf>) -> PathBuf {
    let name = original.file_name().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("frame"));
    let first = bin_dir.join(&name);
    if !first.exists() && !taken.contains(&first) {
        return first;
    }
    let stem = name.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    let ext = name.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    (1..)
        .map(|n| bin_dir.join(format!("{stem}-{n}{ext}")))
        .find(|p| !p.exists() && !taken.contains(p))
        .expect("unbounded search")
}

fn move_file(from: &Path, to: &Path) -> std::io::Result<()> {
    match fs::rename(from, to) {
        Err(e) if e.kind() == ErrorKind::CrossesDevices => {
            fs::copy(from, to)?;
            fs::remove_file(from)
        }
        other => other,
    }
}

pub(crate) fn hash_frames(paths: &[PathBuf], algo: HashAlgo) -> Vec<Result<PerceptualHash, String>> {
    paths
        .par_iter()
        .map(|p| io::load_gray(p).map(|g| hash_with(&g, algo)).map_err(|e| e.to_string()))
        .collect()
}

/// Hashes run on the current rayon pool; moves happen one at a time in input
/// order.
pub fn dedup(frame_paths: &[PathBuf], cfg: &DedupConfig) -> Result<DedupReport> {
    if cfg.threshold > 64 {
        return Err(Error::Config(format!("dedup threshold {} exceeds 64 bits", cfg.threshold)));
    }
    fs::create_dir_all(&cfg.bin_dir).map_err(|e| Error::io(&cfg.bin_dir, e))?;

    let hashes = hash_frames(frame_paths, cfg.algo);
    let mut report = DedupReport::default();
    let mut kept: Vec<(usize, PerceptualHash)> = Vec::new();
    let mut taken = HashSet::new();

    for (i, (path, hash)) in frame_paths.iter().zip(hashes).enumerate() {
        let hash = match hash {
            Ok(h) => h,
            Err(message) => {
                report.errors.push(FrameError { index: None, path: path.clone(), message });
                continue;
            }
        };
        let nearest = kept
            .iter()
            .map(|(k, h)| (*k, (h.bits ^ hash.bits).count_ones()))
            .min_by_key(|&(k, d)| (d, k));
        match nearest {
            Some((k, distance)) if distance <= cfg.threshold => {
                let dest = unique_destination(&cfg.bin_dir, path, &taken);
                match move_file(path, &dest) {
                    Ok(()) => {
                        taken.insert(dest.clone());
                        report.binned.push(BinnedFrame {
                            path: path.clone(),
                            matched: frame_paths[k].clone(),
                            distance,
                            moved_to: dest,
                        });
                    }
                    Err(e) => report.errors.push(FrameError {
                        index: None,
                        path: path.clone(),
                        message: format!("failed to move into {}: {e}", cfg.bin_dir.display()),
                    }),
                }
            }
            _ => {
                kept.push((i, hash));
                report.kept.push(path.clone());
            }
        }
    }
    Ok(report)
}
