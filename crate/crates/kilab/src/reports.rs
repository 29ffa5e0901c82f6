//! On-disk formats: site files, kernel reports, convergence CSV/JSON and
//! band-limited reports.

use std::path::Path;

use kilab_core::bandlimited::BernsteinJacksonReport;
use kilab_core::harness::{ConvergenceReport, ConvergenceRow, SweepConfig};
use kilab_core::kernels::{InterpolatorReport, KernelFamily, RegularityReport};
use kilab_core::sites::SiteSequence;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::format::{fmt_f64, fmt_opt, to_csv_string};
use crate::meta::Metadata;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteFile {
    pub index_lo: i64,
    pub index_hi: i64,
    pub points: Vec<f64>,
    /// `null` when the window holds a single point.
    pub q: Option<f64>,
    #[serde(rename = "Q")]
    pub big_q: Option<f64>,
    pub kadec_margin: f64,
}

impl SiteFile {
    pub fn from_sites(s: &SiteSequence) -> Self {
        let finite = |v: f64| v.is_finite().then_some(v);
        SiteFile {
            index_lo: s.index_lo(),
            index_hi: s.index_hi(),
            points: s.points().to_vec(),
            q: finite(s.q()),
            big_q: finite(s.big_q()),
            kadec_margin: s.kadec_margin(),
        }
    }

    /// Rebuilds the sequence; separation data is recomputed, not trusted.
    pub fn to_sites(&self) -> Result<SiteSequence, Error> {
        let expected = self.index_hi - self.index_lo + 1;
        if expected != self.points.len() as i64 {
            return Err(Error::Input(format!(
                "index range [{}, {}] does not match {} points",
                self.index_lo,
                self.index_hi,
                self.points.len()
            )));
        }
        Ok(SiteSequence::from_points(self.index_lo, self.points.clone())?)
    }
}

pub fn read_sites(path: &Path) -> Result<SiteSequence, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: SiteFile = crate::config::parse(&text)?;
    file.to_sites()
}

/// `{kind, parameter, m, M, ratio, flags: {A1, A2, A3}}`; `M` lists `M_j` for
/// `j = -J..=J` without `j = 0`.
pub fn kernel_report(kernel: &KernelFamily, r: &InterpolatorReport) -> Value {
    let big_m: Vec<f64> = r.bands.iter().filter(|(j, _)| *j != 0).map(|(_, v)| *v).collect();
    json!({
        "kind": kernel.kind().name(),
        "parameter": kernel.parameter(),
        "m": r.m,
        "M": big_m,
        "ratio": r.ratio,
        "flags": {"A1": r.flags.a1, "A2": r.flags.a2, "A3": r.flags.a3},
        "j_window": r.j_window,
        "decay_ratio": r.decay_ratio,
        "tail_sum": r.tail_sum,
    })
}

/// Sweep form: one entry per parameter and `{R1, R2, R3}` flags.
pub fn regularity_report(r: &RegularityReport) -> Value {
    let parameter: Vec<f64> = r.entries.iter().map(|e| e.parameter).collect();
    let m: Vec<f64> = r.entries.iter().map(|e| e.report.m).collect();
    let big_m: Vec<Vec<f64>> = r
        .entries
        .iter()
        .map(|e| e.report.bands.iter().filter(|(j, _)| *j != 0).map(|(_, v)| *v).collect())
        .collect();
    let ratio: Vec<f64> = r.entries.iter().map(|e| e.report.ratio).collect();
    let a_flags: Vec<Value> = r
        .entries
        .iter()
        .map(|e| json!({"A1": e.report.flags.a1, "A2": e.report.flags.a2, "A3": e.report.flags.a3}))
        .collect();
    json!({
        "kind": r.kind.name(),
        "parameter": parameter,
        "m": m,
        "M": big_m,
        "ratio": ratio,
        "max_ratio": r.max_ratio,
        "ratios_decreasing": r.ratios_decreasing,
        "r3_max_sample": r.entries.iter().map(|e| e.r3_max_sample).collect::<Vec<f64>>(),
        "member_flags": a_flags,
        "flags": {"R1": r.r1, "R2": r.r2, "R3": r.r3},
    })
}

pub const CONVERGENCE_HEADER: [&str; 8] =
    ["h", "n_sites", "cond_est", "err_l2", "err_w2j", "seminorm_ratio", "site_residual", "flags"];

fn row_record(r: &ConvergenceRow) -> Vec<String> {
    vec![
        fmt_f64(r.h),
        r.n_sites.to_string(),
        fmt_f64(r.cond_est),
        fmt_f64(r.err_l2),
        fmt_opt(r.err_w2j),
        fmt_f64(r.seminorm_ratio),
        fmt_f64(r.site_residual),
        r.flags.to_string(),
    ]
}

pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let rows: Vec<Vec<String>> = report.rows.iter().map(row_record).collect();
    to_csv_string(&CONVERGENCE_HEADER, &rows)
}

pub fn row_json(r: &ConvergenceRow) -> Value {
    json!({
        "h": r.h,
        "n_sites": r.n_sites,
        "cond_est": r.cond_est,
        "err_l2": r.err_l2,
        "err_w2j": r.err_w2j,
        "seminorm_ratio": r.seminorm_ratio,
        "site_residual": r.site_residual,
        "fill_distance": r.fill_distance,
        "flags": r.flags.to_string(),
    })
}

pub fn sweep_config_json(c: &SweepConfig) -> Value {
    json!({
        "function": c.function.id(),
        "k": c.k,
        "j": c.j,
        "h_list": c.h_list,
        "route": c.route.name(),
        "t": c.t,
        "padding": c.padding,
        "points_per_unit": c.points_per_unit,
        "cap": c.cap,
        "trust_threshold": c.trust_threshold,
        "rule": format!("{:?}", c.rule),
    })
}

/// Mirrors the CSV rows, plus the fit, the exclusions and the metadata.
pub fn convergence_json(config: &SweepConfig, report: &ConvergenceReport, seed: u64) -> Value {
    let cfg = sweep_config_json(config);
    json!({
        "config": cfg,
        "rows": report.rows.iter().map(row_json).collect::<Vec<_>>(),
        "fitted_rate": report.fitted_rate,
        "fitted_rate_w2j": report.fitted_rate_w2j,
        "excluded_rows": report.excluded,
        "fit_note": report.fit_note,
        "tail_bound": report.tail_bound,
        "metadata": Metadata::new(seed, &cfg),
    })
}

pub fn bandlimited_json(r: &BernsteinJacksonReport) -> Value {
    json!({
        "h": r.h,
        "bernstein_lhs": r.bernstein_lhs,
        "seminorm_g": r.seminorm_g,
        "jackson_lhs": r.jackson_lhs,
        "ratio_jackson": r.ratio_jackson,
        "condition": r.condition,
        "site_residual": r.site_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use kilab_core::sites::{build_perturbed_lattice, PerturbationRule};

    #[test]
    fn site_file_round_trip() {
        let s = build_perturbed_lattice(5, &PerturbationRule::sinusoidal(0.2), true).unwrap();
        let text = crate::format::to_json_string(&SiteFile::from_sites(&s));
        for key in ["\"index_lo\": -5", "\"index_hi\": 5", "\"Q\":", "\"kadec_margin\":"] {
            assert!(text.contains(key), "{text}");
        }
        let back: SiteFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_sites().unwrap(), s);
        let single = SiteSequence::from_points(0, vec![0.5]).unwrap();
        let text = crate::format::to_json_string(&SiteFile::from_sites(&single));
        assert!(text.contains("\"q\": null"));
    }

    #[test]
    fn mismatched_site_file_is_rejected() {
        let f = SiteFile { index_lo: 0, index_hi: 3, points: vec![0.0, 1.0], q: None, big_q: None, kadec_margin: 0.0 };
        assert!(f.to_sites().is_err());
    }
}
