//! JSON report payloads emitted by the subcommands.

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct PohozaevReport {
    pub lv4_vs_kinetic: f64,
    pub lv4_vs_mass: f64,
    pub energy_vs_kinetic: f64,
}

#[derive(Debug, Serialize)]
pub struct GroundStateReport {
    pub n_points: usize,
    pub r_max: f64,
    pub tol: f64,
    pub cache_hit: bool,
    pub iterations: usize,
    pub mass: f64,
    pub kinetic: f64,
    pub lv4: f64,
    pub energy: f64,
    pub c_hls: f64,
    pub pohozaev: PohozaevReport,
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub ratio: f64,
    pub eta0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_minus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub regime: String,
}

#[derive(Debug, Serialize)]
pub struct EvolveReport {
    pub outcome: String,
    pub t_final: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blowup_reason: Option<String>,
    pub max_eta: f64,
    pub samples: usize,
    pub mass_drift_rel: f64,
    pub energy_drift_rel: f64,
    /// Verdict of the initial-data classifier, for labeling; runs outside
    /// the theory still execute and are marked here.
    pub classification: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory_csv: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checkpoints: Vec<String>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum TbEntry {
    Estimate {
        t_b: f64,
        r0: f64,
        r0_rate: f64,
        conditional: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        binding: Option<String>,
        c_local: f64,
    },
    HypothesisFailed {
        hypothesis_failed: String,
        measured: f64,
        required: f64,
    },
    NotApplicable {
        not_applicable: String,
    },
}

#[derive(Debug, Serialize)]
pub struct TbReport {
    pub lambda: f64,
    pub lambda_source: String,
    pub e_q: f64,
    pub gamma: f64,
    pub r_virial: f64,
    pub prop31: TbEntry,
    pub prop32: TbEntry,
    pub prop33: TbEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory_tail_check: Option<TrajectoryTailCheck>,
}

#[derive(Debug, Serialize)]
pub struct TrajectoryTailCheck {
    pub bound: f64,
    pub samples_checked: usize,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation_t: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckResult>,
}
