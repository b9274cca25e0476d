use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;

/// Contents of `report.json`.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub input: String,
    pub config: ConfigEcho,
    pub timings_ms: BTreeMap<&'static str, f64>,
    pub fcm_iterations: Option<usize>,
    pub objective_trace: Option<Vec<f64>>,
    pub converged: Option<bool>,
    pub centers: Option<Vec<f64>>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Default, Serialize)]
pub struct ConfigEcho {
    pub clusters: Option<usize>,
    pub fuzzifier: Option<f64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub seed: Option<u64>,
    pub window: Option<usize>,
    pub he_mode: Option<&'static str>,
    pub skip_he: bool,
    pub skip_median: bool,
    pub ascii: bool,
}

pub fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub fn path_string(p: &Path) -> String {
    p.display().to_string()
}
