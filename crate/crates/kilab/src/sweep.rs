//! Convergence sweeps with the per-h work spread over the rayon pool.

use kilab_core::harness::{convergence_row, summarize, zeros_lemma_check, ConvergenceReport, SweepConfig, ZerosLemmaReport};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{HList, Positive, SitesConfig};

/// Rows come back in `h_list` order however the pool schedules them.
pub fn run_parallel(config: &SweepConfig) -> kilab_core::Result<ConvergenceReport> {
    config.validate()?;
    let rows = config
        .h_list
        .par_iter()
        .map(|&h| convergence_row(config, h))
        .collect::<kilab_core::Result<Vec<_>>>()?;
    Ok(summarize(config, rows))
}

pub fn zeros_lemma_parallel(config: &SweepConfig) -> kilab_core::Result<Vec<ZerosLemmaReport>> {
    config.validate()?;
    config.h_list.par_iter().map(|&h| zeros_lemma_check(config, h)).collect()
}

pub const SINC_H: [f64; 5] = [1.0, 0.5, 0.25, 0.125, 0.0625];
pub const GAUSSIAN_H: [f64; 5] = [1.0, std::f64::consts::FRAC_1_SQRT_2, 0.5, 0.353_553_390_593_273_8, 0.25];

/// The overridable knobs of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSettings {
    pub h_list: HList,
    pub t: Positive,
    pub padding: Positive,
    pub points_per_unit: Positive,
    pub sites: SitesConfig,
    pub cap: usize,
    pub trust_threshold: Positive,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self::sinc()
    }
}

impl SweepSettings {
    pub fn sinc() -> Self {
        SweepSettings {
            h_list: HList(SINC_H.to_vec()),
            t: Positive(kilab_core::harness::DEFAULT_MEASURE_HALF_WIDTH),
            padding: Positive(kilab_core::harness::DEFAULT_PADDING),
            points_per_unit: Positive(kilab_core::harness::DEFAULT_POINTS_PER_UNIT),
            sites: SitesConfig::default(),
            cap: kilab_core::collocate::DEFAULT_DENSE_CAP,
            trust_threshold: Positive(kilab_core::harness::DEFAULT_TRUST_THRESHOLD),
        }
    }

    pub fn gaussian() -> Self {
        SweepSettings { h_list: HList(GAUSSIAN_H.to_vec()), ..Self::sinc() }
    }

    pub fn apply(&self, config: &mut SweepConfig) {
        config.h_list = self.h_list.0.clone();
        config.t = self.t.0;
        config.padding = self.padding.0;
        config.points_per_unit = self.points_per_unit.0;
        config.rule = self.sites.rule();
        config.cap = self.cap;
        config.trust_threshold = self.trust_threshold.0;
    }
}
