mod common;

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use common::*;
use framescan::core::GrayImage;
use framescan::io::save_gray;
use framescan::report::{read_json, write_csv, write_json};
use framescan::scan::{DedupSettings, FrameRecord, ScanReport};
use framescan::{dedup, enumerate_frames, scan, DedupConfig, FrameSource, ScanConfig, Verdict};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_framescan"))
}

fn cfg_interval_1() -> ScanConfig {
    ScanConfig { interval: 1, ..ScanConfig::default() }
}

#[test]
fn identity_frame_is_the_peak() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(1);
    let frames = dir.path().join("frames");
    fs::create_dir(&frames).unwrap();
    let test = speckle_texture(&mut r, FRAME_W, FRAME_H);
    let test_path = dir.path().join("test.png");
    save_gray(&test_path, &test).unwrap();
    for i in 0..5 {
        let img = if i == 3 { test.clone() } else { speckle_texture(&mut r, FRAME_W, FRAME_H) };
        save_gray(frames.join(frame_name(i)), &img).unwrap();
    }
    let report = scan(&FrameSource::frames_dir(&frames, 1), &test_path, &cfg_interval_1(), 2).unwrap();
    let hit = &report.records[3];
    assert!(hit.orb >= 0.99);
    assert_eq!(hit.ssim, 1.0);
    assert_eq!(hit.hash_distance, 0);
    assert_eq!(report.max_orb.unwrap().index, 3);
    assert_eq!(report.max_ssim.unwrap().index, 3);
    assert_eq!(report.min_hash.unwrap().index, 3);
    assert!(report.verdict.any_detected());
}

#[test]
fn noise_frames_are_not_detected() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(2);
    let frames = dir.path().join("frames");
    fs::create_dir(&frames).unwrap();
    let test_path = dir.path().join("test.png");
    save_gray(&test_path, &speckle_texture(&mut r, FRAME_W, FRAME_H)).unwrap();
    for i in 0..8 {
        save_gray(frames.join(frame_name(i)), &noise_image(&mut r, 160, 120)).unwrap();
    }
    let cfg = ScanConfig { orb_threshold: 0.5, ssim_threshold: 0.8, hash_threshold: 5, ..cfg_interval_1() };
    let report = scan(&FrameSource::frames_dir(&frames, 1), &test_path, &cfg, 1).unwrap();
    assert_eq!(report.records.len(), 8);
    assert_eq!(report.verdict.orb, Verdict::NotDetected);
    assert_eq!(report.verdict.ssim, Verdict::NotDetected);
    assert_eq!(report.verdict.hash, Verdict::NotDetected);
}

#[test]
fn broken_frames_become_error_entries() {
    let dir = tempfile::tempdir().unwrap();
    let fx = write_planted_fixture(dir.path(), 6, 2..=2, 3);
    fs::write(fx.frames_dir.join(frame_name(4)), b"not a png").unwrap();
    let report = scan(&FrameSource::frames_dir(&fx.frames_dir, 1), &fx.test_image, &cfg_interval_1(), 1).unwrap();
    assert_eq!(report.records.len(), 5);
    assert_eq!(report.errors.len(), 1);
    assert_eq!(report.errors[0].index, Some(4));

    let missing = dir.path().join("nope.png");
    assert!(scan(&FrameSource::frames_dir(&fx.frames_dir, 1), &missing, &cfg_interval_1(), 1).is_err());
}

#[test]
fn raising_orb_threshold_never_creates_detection() {
    let dir = tempfile::tempdir().unwrap();
    let fx = write_planted_fixture(dir.path(), 8, 5..=5, 4);
    let src = FrameSource::frames_dir(&fx.frames_dir, 1);
    let mut previous = true;
    for t in [0.0, 0.1, 0.3, 0.6, 0.9, 0.99, 1.0] {
        let cfg = ScanConfig { orb_threshold: t, ..cfg_interval_1() };
        let detected = scan(&src, &fx.test_image, &cfg, 1).unwrap().verdict.orb.is_detected();
        assert!(previous || !detected, "threshold {t} turned detection on");
        previous = detected;
    }
}

#[test]
fn dedup_runs_before_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(5);
    let frames = dir.path().join("frames");
    fs::create_dir(&frames).unwrap();
    let a = speckle_texture(&mut r, FRAME_W, FRAME_H);
    let b = speckle_texture(&mut r, FRAME_W, FRAME_H);
    for (i, img) in [&a, &a, &b, &a, &b].iter().enumerate() {
        save_gray(frames.join(frame_name(i)), img).unwrap();
    }
    let test_path = dir.path().join("test.png");
    save_gray(&test_path, &b).unwrap();
    let bin_dir = dir.path().join("bin");
    let cfg = ScanConfig {
        dedup_enabled: true,
        dedup: DedupSettings { bin_dir: Some(bin_dir.clone()), ..DedupSettings::default() },
        ..cfg_interval_1()
    };
    let report = scan(&FrameSource::frames_dir(&frames, 1), &test_path, &cfg, 2).unwrap();
    let idx: Vec<u64> = report.records.iter().map(|r| r.index).collect();
    assert_eq!(idx, vec![0, 2]);
    let d = report.dedup.as_ref().unwrap();
    assert_eq!(d.binned.len(), 3);
    assert_eq!(fs::read_dir(&bin_dir).unwrap().count(), 3);
    assert_eq!(report.min_hash.unwrap().index, 2);
}

#[test]
fn json_round_trip_and_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let fx = write_planted_fixture(dir.path(), 5, 1..=2, 6);
    let report = scan(&FrameSource::frames_dir(&fx.frames_dir, 1), &fx.test_image, &cfg_interval_1(), 1).unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    write_json(&report, &json).unwrap();
    write_csv(&report, &csv).unwrap();
    assert_eq!(read_json(&json).unwrap(), report);

    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    for key in ["version", "test_image", "config", "records", "max_orb", "max_ssim", "min_hash", "verdict", "errors"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["max_orb"]["index"], 1);
    assert_eq!(v["min_hash"]["distance"], report.min_hash.unwrap().distance);

    let mut rdr = csv::Reader::from_path(&csv).unwrap();
    let rows: Vec<FrameRecord> = rdr.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows, report.records);
}

#[test]
fn report_survives_dedup_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let fx = write_planted_fixture(dir.path(), 4, 1..=3, 7);
    let cfg = ScanConfig { dedup_enabled: true, ..cfg_interval_1() };
    let report = scan(&FrameSource::frames_dir(&fx.frames_dir, 1), &fx.test_image, &cfg, 1).unwrap();
    assert_eq!(report.dedup.as_ref().unwrap().binned.len(), 2);
    assert!(fx.frames_dir.join("bin").is_dir());
    let json = serde_json::to_string(&report).unwrap();
    assert_eq!(serde_json::from_str::<ScanReport>(&json).unwrap(), report);
}

#[test]
fn five_frame_dedup_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(8);
    let bases = distinct_bases(&mut r, 3, 20);
    let (a, b, c) = (&bases[0], &bases[1], &bases[2]);
    let noisy = salt_and_pepper(&mut r, a, 0.005);
    let names = ["a.png", "a_copy.png", "b.png", "a_noisy.png", "c.png"];
    let paths: Vec<PathBuf> = names
        .iter()
        .zip([a, a, b, &noisy, c])
        .map(|(n, img)| {
            let p = dir.path().join(n);
            save_gray(&p, img).unwrap();
            p
        })
        .collect();
    let report = dedup(&paths, &DedupConfig::new(dir.path().join("bin"))).unwrap();
    assert_eq!(report.kept, vec![paths[0].clone(), paths[2].clone(), paths[4].clone()]);
    assert_eq!(report.binned.len(), 2);
    assert_eq!((&report.binned[0].path, report.binned[0].distance), (&paths[1], 0));
    assert_eq!(&report.binned[1].path, &paths[3]);
    assert!(report.binned[1].distance <= 10);
    assert!(report.binned.iter().all(|b| b.matched == paths[0]));
}

#[test]
fn external_decoder_source() {
    let dir = tempfile::tempdir().unwrap();
    let fx = write_planted_fixture(dir.path(), 12, 10..=10, 9);
    let src = FrameSource::ExternalDecoder {
        input: fx.frames_dir.clone(),
        outdir: dir.path().join("decoded"),
        command: "cp {input}/frame_*.png {outdir}/".into(),
        interval: 10,
    };
    let frames = enumerate_frames(&src).unwrap();
    assert_eq!(frames.iter().map(|f| f.index).collect::<Vec<_>>(), vec![0, 10]);
    let report = scan(&src, &fx.test_image, &ScanConfig::default(), 1).unwrap();
    assert_eq!(report.max_ssim.unwrap().index, 10);
}

// ---- command line -------------------------------------------------------

#[test]
fn cli_hash_of_constant_image() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("constant.png");
    save_gray(&p, &GrayImage::filled(40, 30, 99).unwrap()).unwrap();
    for algo in ["ahash", "dhash", "phash"] {
        let out = bin().args(["hash", "--image"]).arg(&p).args(["--algo", algo]).output().unwrap();
        assert!(out.status.success());
        assert_eq!(String::from_utf8(out.stdout).unwrap(), "0000000000000000\n");
    }
}

#[test]
fn cli_compare_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.png");
    save_gray(&p, &speckle_texture(&mut rng(10), 100, 80)).unwrap();
    let kp = dir.path().join("kp.csv");
    let out = bin()
        .args(["compare", "--image-a"])
        .arg(&p)
        .arg("--image-b")
        .arg(&p)
        .arg("--keypoints-csv")
        .arg(&kp)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ssim: 1.000000"), "{text}");
    assert!(text.contains("orb: 1.000000"), "{text}");
    assert!(text.contains("hash_distance: 0"), "{text}");
    let dump = fs::read_to_string(&kp).unwrap();
    assert!(dump.starts_with("x,y,response,orientation\n"));
    assert!(dump.lines().count() > 10);
}

#[test]
fn cli_scan_planted_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let fx = write_planted_fixture(dir.path(), 60, 30..=35, 11);
    let json = dir.path().join("report.json");
    let csv = dir.path().join("report.csv");
    let out = bin()
        .arg("scan")
        .arg("--frames-dir")
        .arg(&fx.frames_dir)
        .arg("--test-image")
        .arg(&fx.test_image)
        .arg("--report-json")
        .arg(&json)
        .arg("--report-csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "DETECTED"), "{text}");
    let report = read_json(&json).unwrap();
    assert_eq!(report.verdict.ssim, Verdict::Detected);
    // default interval 10 samples 0, 10, ..., 50
    assert_eq!(report.records.len(), 6);
    assert_eq!(report.max_ssim.unwrap().index, 30);
}

#[test]
fn cli_scan_video_with_env_decoder() {
    let dir = tempfile::tempdir().unwrap();
    let fx = write_planted_fixture(dir.path(), 3, 2..=2, 12);
    let out = bin()
        .env("FRAMESCAN_DECODER_CMD", "cp {input}/frame_*.png {outdir}/")
        .arg("scan")
        .arg("--video")
        .arg(&fx.frames_dir)
        .arg("--extract-dir")
        .arg(dir.path().join("x"))
        .args(["--interval", "1", "--test-image"])
        .arg(&fx.test_image)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().lines().any(|l| l.starts_with("max ssim:") && l.ends_with("at frame 2")));
}

#[test]
fn cli_dedup_moves_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames");
    fs::create_dir(&frames).unwrap();
    let img = speckle_texture(&mut rng(13), 64, 64);
    for i in 0..3 {
        save_gray(frames.join(frame_name(i)), &img).unwrap();
    }
    let bin_dir = dir.path().join("bin");
    let out = bin()
        .arg("dedup")
        .arg("--frames-dir")
        .arg(&frames)
        .arg("--bin-dir")
        .arg(&bin_dir)
        .args(["--algo", "dhash", "--threshold", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "kept 1, binned 2, errors 0\n");
    assert!(frames.join(frame_name(0)).exists());
    assert!(bin_dir.join(frame_name(1)).exists() && bin_dir.join(frame_name(2)).exists());
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bin().arg("frobnicate").output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["scan", "--nope"]).output().unwrap().status.code(), Some(2));
    let out = bin().args(["hash", "--image"]).arg(dir.path().join("missing.png")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));
    let out = bin()
        .args(["scan", "--frames-dir"])
        .arg(dir.path())
        .args(["--test-image"])
        .arg(dir.path().join("missing.png"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
}
