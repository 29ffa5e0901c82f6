//! Runs a list of batteries and writes one JSON report per battery plus a
//! summary CSV.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::battery::{BatteryConfig, BatteryOutcome};
use crate::config::SuiteConfig;
use crate::format::{to_csv_string, to_json_string};
use crate::meta::Metadata;
use crate::Error;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SUMMARY_HEADER: [&str; 6] = ["index", "battery", "criterion", "pass", "checks_passed", "checks_total"];

#[derive(Debug, Serialize)]
struct BatteryFile<'a> {
    #[serde(flatten)]
    outcome: &'a BatteryOutcome,
    config: &'a BatteryConfig,
    metadata: Metadata,
}

#[derive(Debug)]
pub struct SuiteResult {
    pub outcomes: Vec<BatteryOutcome>,
    pub files: Vec<PathBuf>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

/// Runs every battery in order. Parallelism lives inside the batteries and
/// never changes what is written.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<BatteryOutcome>, Error> {
    let run = || config.batteries.iter().map(|b| b.run(config.seed)).collect::<Vec<_>>();
    match config.threads {
        Some(0) => Err(Error::Usage("threads must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Usage(format!("cannot start {n} threads: {e}")))?;
            Ok(pool.install(run))
        }
        None => Ok(run()),
    }
}

pub fn battery_file_name(index: usize, battery: &BatteryConfig) -> String {
    format!("{:02}-{}.json", index + 1, battery.name())
}

pub fn battery_json(config: &SuiteConfig, battery: &BatteryConfig, outcome: &BatteryOutcome) -> String {
    to_json_string(&BatteryFile { outcome, config: battery, metadata: Metadata::new(config.seed, battery) })
}

pub fn summary_csv(outcomes: &[BatteryOutcome]) -> String {
    let rows: Vec<Vec<String>> = outcomes
        .iter()
        .enumerate()
        .map(|(i, o)| {
            vec![
                (i + 1).to_string(),
                o.battery.to_string(),
                o.criterion.to_string(),
                o.pass.to_string(),
                o.checks.iter().filter(|c| c.pass).count().to_string(),
                o.checks.len().to_string(),
            ]
        })
        .collect();
    to_csv_string(&SUMMARY_HEADER, &rows)
}

/// Runs the suite and writes its reports under `out_dir`.
pub fn run_and_write(config: &SuiteConfig, out_dir: &Path) -> Result<SuiteResult, Error> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let outcomes = run_suite(config)?;
    let mut files = Vec::new();
    for (i, (battery, outcome)) in config.batteries.iter().zip(&outcomes).enumerate() {
        let path = out_dir.join(battery_file_name(i, battery));
        fs::write(&path, battery_json(config, battery, outcome)).map_err(|e| Error::io(&path, e))?;
        files.push(path);
    }
    let path = out_dir.join(SUMMARY_FILE);
    fs::write(&path, summary_csv(&outcomes)).map_err(|e| Error::io(&path, e))?;
    files.push(path);
    Ok(SuiteResult { outcomes, files })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite_writes_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let config = SuiteConfig { seed: 1, threads: Some(1), batteries: vec![] };
        let r = run_and_write(&config, dir.path()).unwrap();
        assert!(r.pass());
        let text = fs::read_to_string(dir.path().join(SUMMARY_FILE)).unwrap();
        assert_eq!(text, "index,battery,criterion,pass,checks_passed,checks_total\n");
    }

    #[test]
    fn zero_threads_is_a_usage_error() {
        let config = SuiteConfig { seed: 1, threads: Some(0), batteries: vec![] };
        assert!(matches!(run_suite(&config), Err(Error::Usage(_))));
    }
}
