use serde::Serialize;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Attached to every JSON report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metadata {
    pub seed: u64,
    pub config_hash: String,
    pub version: &'static str,
}

impl Metadata {
    /// Hashes the compact JSON form of `config`.
    pub fn new<T: Serialize>(seed: u64, config: &T) -> Self {
        let canonical = serde_json::to_vec(config).expect("config serializes");
        Metadata { seed, config_hash: format!("{:x}", Sha256::digest(&canonical)), version: VERSION }
    }
}
