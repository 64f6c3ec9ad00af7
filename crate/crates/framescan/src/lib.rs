//! Scan a video's frames for a copyrighted test image.
//!
//! Frames come from a directory of `frame_NNNNNN.png` files (or an external
//! decoder that produces one). Each sampled frame is compared with the test
//! image by ORB feature matching, global SSIM and perceptual-hash distance;
//! thresholds on those scores decide whether the image was used. Near-duplicate
//! frames can be moved into a bin directory before scoring.
//!
//! The metrics themselves live in [`framescan_core`]; this crate adds file IO,
//! the pipeline, reports and the command line.

pub mod cli;
pub mod dedup;
mod error;
pub mod ingest;
pub mod io;
pub mod report;
pub mod scan;

pub use framescan_core as core;

pub use crate::dedup::{dedup, BinnedFrame, DedupConfig, DedupReport};
pub use crate::error::{Error, FrameError};
pub use crate::ingest::{enumerate_frames, FrameRef, FrameSource};
pub use crate::report::{emit_report, read_json, write_csv, write_json};
pub use crate::scan::{scan, FrameRecord, ScanConfig, ScanReport, Verdict};

pub type Result<T, E = Error> = std::result::Result<T, E>;
