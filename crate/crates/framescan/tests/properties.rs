use framescan::report::{read_json, write_json};
use framescan::scan::{FrameRecord, ScanReport};
use framescan::ScanConfig;
use proptest::prelude::*;

fn record() -> impl Strategy<Value = FrameRecord> {
    (0u64..10_000, 0.0f64..=1.0, -1.0f64..=1.0, 0u32..=64).prop_map(|(index, orb, ssim, hash_distance)| {
        FrameRecord { index, orb, ssim, hash_distance, flagged_orb: false, flagged_ssim: false, flagged_hash: false }
    })
}

fn records() -> impl Strategy<Value = Vec<FrameRecord>> {
    prop::collection::vec(record(), 0..40).prop_map(|mut v| {
        v.sort_by_key(|r| r.index);
        v.dedup_by_key(|r| r.index);
        v.reverse();
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn peaks_match_brute_force(recs in records()) {
        let report = ScanReport::assemble("t.png".into(), ScanConfig::default(), recs.clone(), vec![], None);
        prop_assert!(report.records.windows(2).all(|w| w[0].index < w[1].index));
        match report.max_orb {
            None => prop_assert!(recs.is_empty()),
            Some(p) => {
                let best = recs.iter().map(|r| r.orb).fold(f64::MIN, f64::max);
                let first = recs.iter().filter(|r| r.orb == best).map(|r| r.index).min().unwrap();
                prop_assert_eq!((p.score, p.index), (best, first));
            }
        }
        if let Some(p) = report.min_hash {
            let best = recs.iter().map(|r| r.hash_distance).min().unwrap();
            let first = recs.iter().filter(|r| r.hash_distance == best).map(|r| r.index).min().unwrap();
            prop_assert_eq!((p.distance, p.index), (best, first));
        }
    }

    #[test]
    fn json_round_trip_is_exact(recs in records()) {
        let report = ScanReport::assemble("t.png".into(), ScanConfig::default(), recs, vec![], None);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        write_json(&report, &path).unwrap();
        prop_assert_eq!(read_json(&path).unwrap(), report);
    }
}
