//! Turns a frame directory, or a video run through an external decoder, into
//! an ordered, interval-sampled list of frames.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use crate::{Error, Result};

/// printf-style pattern handed to decoders; enumeration accepts `.jpg` too.
pub const FRAME_PATTERN: &str = "frame_%06d.png";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameSource {
    /// Directory of `frame_NNNNNN.png` / `.jpg` files.
    FramesDir { dir: PathBuf, interval: usize },
    /// A video decoded into `outdir` by a user command. The command template
    /// may use `{input}`, `{outdir}` and `{pattern}`.
    ExternalDecoder { input: PathBuf, outdir: PathBuf, command: String, interval: usize },
}

impl FrameSource {
    pub fn frames_dir(dir: impl Into<PathBuf>, interval: usize) -> Self {
        FrameSource::FramesDir { dir: dir.into(), interval }
    }

    pub fn interval(&self) -> usize {
        match self {
            FrameSource::FramesDir { interval, .. } | FrameSource::ExternalDecoder { interval, .. } => *interval,
        }
    }

    pub fn with_interval(mut self, value: usize) -> Self {
        match &mut self {
            FrameSource::FramesDir { interval, .. } | FrameSource::ExternalDecoder { interval, .. } => {
                *interval = value
            }
        }
        self
    }

    /// Directory the frames are (or will be) read from.
    pub fn frames_location(&self) -> &Path {
        match self {
            FrameSource::FramesDir { dir, .. } => dir,
            FrameSource::ExternalDecoder { outdir, .. } => outdir,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FrameRef {
    pub index: u64,
    pub path: PathBuf,
}

/// Parses `frame_<digits>.<png|jpg>` with at least six digits.
pub fn parse_frame_name(name: &str) -> Option<u64> {
    let stem = name.strip_prefix("frame_")?;
    let digits = stem.strip_suffix(".png").or_else(|| stem.strip_suffix(".jpg"))?;
    if digits.len() < 6 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}

/// Fills the decoder template; every substitution is shell-quoted.
pub fn render_decoder_command(template: &str, input: &Path, outdir: &Path) -> String {
    template
        .replace("{input}", &shell_quote(&input.to_string_lossy()))
        .replace("{outdir}", &shell_quote(&outdir.to_string_lossy()))
        .replace("{pattern}", &shell_quote(FRAME_PATTERN))
}

fn run_decoder(input: &Path, outdir: &Path, template: &str) -> Result<()> {
    fs::create_dir_all(outdir).map_err(|e| Error::io(outdir, e))?;
    let cmd = render_decoder_command(template, input, outdir);
    let out = Command::new("sh")
        .arg("-c")
        .arg(&cmd)
        .output()
        .map_err(|e| Error::io("sh", e))?;
    if !out.status.success() {
        let mut output = String::from_utf8_lossy(&out.stdout).into_owned();
        output.push_str(&String::from_utf8_lossy(&out.stderr));
        return Err(Error::Decoder { status: out.status.to_string(), output: output.trim().to_owned() });
    }
    Ok(())
}

fn list_frames_dir(dir: &Path, interval: usize) -> Result<Vec<FrameRef>> {
    if interval == 0 {
        return Err(Error::Config("frame interval must be at least 1".into()));
    }
    let mut frames = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name();
        let Some(index) = name.to_str().and_then(parse_frame_name) else { continue };
        if entry.file_type().map_err(|e| Error::io(entry.path(), e))?.is_dir() {
            continue;
        }
        frames.push(FrameRef { index, path: entry.path() });
    }
    if frames.is_empty() {
        return Err(Error::EmptySource(dir.to_path_buf()));
    }
    // ".jpg" < ".png", so after sorting the png of a duplicated index comes
    // last; keep it.
    frames.sort();
    frames.dedup_by(|later, earlier| {
        if later.index == earlier.index {
            std::mem::swap(later, earlier);
            true
        } else {
            false
        }
    });
    frames.retain(|f| f.index % interval as u64 == 0);
    Ok(frames)
}

/// Frames whose index is a multiple of the source interval, ascending.
pub fn enumerate_frames(src: &FrameSource) -> Result<Vec<FrameRef>> {
    match src {
        FrameSource::FramesDir { dir, interval } => list_frames_dir(dir, *interval),
        FrameSource::ExternalDecoder { input, outdir, command, interval } => {
            if *interval == 0 {
                return Err(Error::Config("frame interval must be at least 1".into()));
            }
            run_decoder(input, outdir, command)?;
            list_frames_dir(outdir, *interval)
        }
    }
}
