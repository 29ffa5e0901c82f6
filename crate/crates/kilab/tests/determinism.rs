use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use kilab::battery::BatteryConfig;
use kilab::config::{parse, SuiteConfig};
use kilab::suite::run_and_write;

fn snapshot(dir: &Path) -> BTreeMap<String, String> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect()
}

fn cheap_suite(seed: u64, threads: usize) -> SuiteConfig {
    let batteries = [6, 8, 9, 10, 11].iter().filter_map(|&c| BatteryConfig::for_criterion(c)).collect();
    SuiteConfig { seed, threads: Some(threads), batteries }
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_and_write(&cheap_suite(5, 1), a.path()).unwrap();
    run_and_write(&cheap_suite(5, 6), b.path()).unwrap();
    let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
    assert_eq!(sa.len(), 6);
    assert_eq!(sa, sb);
}

#[test]
fn seed_moves_only_the_seeded_battery() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_and_write(&cheap_suite(5, 2), a.path()).unwrap();
    run_and_write(&cheap_suite(6, 2), b.path()).unwrap();
    let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
    let data = |s: &BTreeMap<String, String>, f: &str| {
        let v: serde_json::Value = serde_json::from_str(&s[f]).unwrap();
        v["data"].clone()
    };
    assert_ne!(data(&sa, "01-explicit_constants.json"), data(&sb, "01-explicit_constants.json"));
    assert_eq!(data(&sa, "02-spectral_identity.json"), data(&sb, "02-spectral_identity.json"));
}

#[test]
fn shipped_default_config_matches_code() {
    let text = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/config/default_suite.json")).unwrap();
    assert_eq!(parse::<SuiteConfig>(&text).unwrap(), SuiteConfig::default_suite());
}
