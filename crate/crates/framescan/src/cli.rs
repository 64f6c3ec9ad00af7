//! `framescan` command line.
//!
//! Exit status: 0 on success (whether or not the image was detected), 1 on a
//! runtime failure, 2 on a usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use framescan_core::hash::{hash_with, HashAlgo};
use framescan_core::image::resize_nearest;
use framescan_core::orb::OrbMatcher;
use framescan_core::ssim::{ssim_score, SsimParams};

use crate::dedup::{dedup, DedupConfig};
use crate::ingest::{enumerate_frames, FrameSource};
use crate::report::emit_report;
use crate::scan::{scan, DedupSettings, ScanConfig, ScanReport};
use crate::{io, Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "framescan", version, about = "Detect a copyrighted test image inside video frames")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every sampled frame against the test image and report detections.
    Scan(ScanArgs),
    /// Move near-duplicate frames into a bin directory.
    Dedup(DedupArgs),
    /// Print ORB, SSIM and hash distance for one image pair.
    Compare(CompareArgs),
    /// Print the 64-bit perceptual hash of an image as 16 hex digits.
    Hash(HashArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Phash,
    Ahash,
    Dhash,
}

impl From<AlgoArg> for HashAlgo {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Phash => HashAlgo::Dct,
            AlgoArg::Ahash => HashAlgo::Average,
            AlgoArg::Dhash => HashAlgo::Difference,
        }
    }
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Directory of frame_NNNNNN.png files.
    #[arg(long, required_unless_present = "video", conflicts_with = "video")]
    pub frames_dir: Option<PathBuf>,
    /// Video file, decoded with --decoder-cmd.
    #[arg(long)]
    pub video: Option<PathBuf>,
    /// Decoder template using {input}, {outdir} and {pattern}.
    #[arg(long, env = "FRAMESCAN_DECODER_CMD", requires = "video")]
    pub decoder_cmd: Option<String>,
    /// Where decoded frames are written (default: a directory under the system temp dir).
    #[arg(long, requires = "video")]
    pub extract_dir: Option<PathBuf>,
    #[arg(long)]
    pub test_image: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub interval: usize,
    #[arg(long, default_value_t = 0.5)]
    pub orb_threshold: f64,
    #[arg(long, default_value_t = 0.8)]
    pub ssim_threshold: f64,
    /// Flag threshold for hash distance; also the dedup threshold.
    #[arg(long, default_value_t = 10)]
    pub hash_threshold: u32,
    /// Bin near-duplicate frames before scoring.
    #[arg(long)]
    pub dedup: bool,
    #[arg(long)]
    pub bin_dir: Option<PathBuf>,
    #[arg(long)]
    pub report_json: Option<PathBuf>,
    #[arg(long)]
    pub report_csv: Option<PathBuf>,
    /// Worker threads for frame scoring (default: available cores).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DedupArgs {
    #[arg(long)]
    pub frames_dir: PathBuf,
    #[arg(long)]
    pub bin_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgoArg::Phash)]
    pub algo: AlgoArg,
    #[arg(long, default_value_t = 10)]
    pub threshold: u32,
    /// Write the dedup report as JSON.
    #[arg(long)]
    pub report_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub image_a: PathBuf,
    #[arg(long)]
    pub image_b: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgoArg::Phash)]
    pub algo: AlgoArg,
    /// Dump image A's keypoints as CSV (x,y,response,orientation).
    #[arg(long)]
    pub keypoints_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HashArgs {
    #[arg(long)]
    pub image: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgoArg::Phash)]
    pub algo: AlgoArg,
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(cli.command, &mut out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

fn write_out(out: &mut impl Write, text: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(text).map_err(|e| Error::io("<stdout>", e))
}

pub fn execute(command: Command, out: &mut impl Write) -> Result<()> {
    match command {
        Command::Scan(args) => run_scan(args, out),
        Command::Dedup(args) => run_dedup(args, out),
        Command::Compare(args) => run_compare(args, out),
        Command::Hash(args) => {
            let img = io::load_gray(&args.image)?;
            write_out(out, format_args!("{}\n", hash_with(&img, args.algo.into())))
        }
    }
}

fn frame_source(args: &ScanArgs) -> Result<FrameSource> {
    if let Some(dir) = &args.frames_dir {
        return Ok(FrameSource::frames_dir(dir, args.interval));
    }
    let input = args.video.clone().expect("clap requires --frames-dir or --video");
    let command = args
        .decoder_cmd
        .clone()
        .ok_or_else(|| Error::Config("--video needs --decoder-cmd or FRAMESCAN_DECODER_CMD".into()))?;
    let outdir = args
        .extract_dir
        .clone()
        .unwrap_or_else(|| std::env::temp_dir().join(format!("framescan-{}", std::process::id())));
    Ok(FrameSource::ExternalDecoder { input, outdir, command, interval: args.interval })
}

fn print_summary(report: &ScanReport, out: &mut impl Write) -> Result<()> {
    write_out(out, format_args!("frames scored: {} (errors: {})\n", report.records.len(), report.errors.len()))?;
    if let Some(d) = &report.dedup {
        write_out(out, format_args!("dedup: kept {}, binned {}\n", d.kept.len(), d.binned.len()))?;
    }
    if let Some(p) = report.max_orb {
        write_out(out, format_args!("max orb: {:.6} at frame {}\n", p.score, p.index))?;
    }
    if let Some(p) = report.max_ssim {
        write_out(out, format_args!("max ssim: {:.6} at frame {}\n", p.score, p.index))?;
    }
    if let Some(p) = report.min_hash {
        write_out(out, format_args!("min hash distance: {} at frame {}\n", p.distance, p.index))?;
    }
    let name = |v: crate::Verdict| if v.is_detected() { "detected" } else { "not_detected" };
    let v = report.verdict;
    write_out(out, format_args!("verdict: orb={} ssim={} hash={}\n", name(v.orb), name(v.ssim), name(v.hash)))?;
    if v.any_detected() {
        write_out(out, format_args!("DETECTED\n"))
    } else {
        write_out(out, format_args!("not detected\n"))
    }
}

fn run_scan(args: ScanArgs, out: &mut impl Write) -> Result<()> {
    let src = frame_source(&args)?;
    let cfg = ScanConfig {
        orb_threshold: args.orb_threshold,
        ssim_threshold: args.ssim_threshold,
        hash_threshold: args.hash_threshold,
        interval: args.interval,
        dedup_enabled: args.dedup,
        dedup: DedupSettings { threshold: args.hash_threshold, bin_dir: args.bin_dir.clone(), ..DedupSettings::default() },
        ..ScanConfig::default()
    };
    let workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let report = scan(&src, &args.test_image, &cfg, workers)?;
    emit_report(&report, args.report_json.as_deref(), args.report_csv.as_deref())?;
    print_summary(&report, out)
}

fn run_dedup(args: DedupArgs, out: &mut impl Write) -> Result<()> {
    let frames = enumerate_frames(&FrameSource::frames_dir(&args.frames_dir, 1))?;
    let paths: Vec<PathBuf> = frames.into_iter().map(|f| f.path).collect();
    let cfg = DedupConfig { algo: args.algo.into(), threshold: args.threshold, bin_dir: args.bin_dir };
    let report = dedup(&paths, &cfg)?;
    if let Some(p) = &args.report_json {
        let file = File::create(p).map_err(|e| Error::io(p, e))?;
        serde_json::to_writer_pretty(BufWriter::new(file), &report)?;
    }
    for e in &report.errors {
        eprintln!("warning: {}: {}", e.path.display(), e.message);
    }
    write_out(
        out,
        format_args!("kept {}, binned {}, errors {}\n", report.kept.len(), report.binned.len(), report.errors.len()),
    )
}

fn write_keypoints(path: &Path, matcher: &OrbMatcher, img: &framescan_core::GrayImage) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(["x", "y", "response", "orientation"])?;
    for kp in matcher.features(img).keypoints {
        w.serialize((kp.x, kp.y, kp.response, kp.orientation))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn run_compare(args: CompareArgs, out: &mut impl Write) -> Result<()> {
    let a = io::load_gray(&args.image_a)?;
    let b = io::load_gray(&args.image_b)?;
    let matcher = OrbMatcher::default();
    let orb = matcher.similarity(&a, &b);
    let b_sized = resize_nearest(&b, a.width(), a.height())?;
    let ssim = ssim_score(&a, &b_sized, &SsimParams::default())?;
    let algo = HashAlgo::from(args.algo);
    let distance = hash_with(&a, algo).distance(&hash_with(&b, algo))?;
    if let Some(p) = &args.keypoints_csv {
        write_keypoints(p, &matcher, &a)?;
    }
    write_out(out, format_args!("orb: {:.6}\n", orb.score))?;
    write_out(out, format_args!("ssim: {:.6}\n", ssim.score))?;
    write_out(out, format_args!("hash_distance: {distance}\n"))
}
