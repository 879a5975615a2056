use serde::{Deserialize, Serialize};

use crate::coupling::CouplingFeature;
use crate::generation::{AmplifyNotes, RefinementEntry};
use crate::skeleton::MRSkeleton;
use crate::validation::{Decision, MutantRate};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub schema_version: u32,
    pub seed: u64,
    pub k: usize,
    pub m: usize,
    pub tasks: Vec<TaskReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub similarity: Vec<TargetSimilarity>,
    /// Pairs that produced no executable candidate (`target :: candidate`).
    #[serde(default)]
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TaskReport {
    pub target: String,
    pub pairs: Vec<PairRecord>,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PairRecord {
    pub candidate: String,
    pub slug: String,
    pub features: Vec<CouplingFeature>,
    pub mutants: usize,
    pub attempts: Vec<AttemptRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AttemptRecord {
    pub attempt: usize,
    pub received: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default)]
    pub refinement: Vec<RefinementEntry>,
    /// Type-checks and runs without a class-level error.
    pub compiles: bool,
    pub invocation_count: usize,
    pub is_mtc: bool,
    /// compiles and isMtc.
    pub executable: bool,
    pub passes_original: bool,
    /// executable and passes on the corpus as committed.
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplified: Option<AmplifiedRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_mutant: Vec<MutantRate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<Decision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton: Option<MRSkeleton>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton_error: Option<String>,
}

impl AttemptRecord {
    pub fn retained(&self) -> bool {
        self.decision.is_some_and(Decision::is_retained)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AmplifiedRecord {
    pub m: usize,
    pub degraded: bool,
    #[serde(flatten)]
    pub notes: AmplifyNotes,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Metrics {
    pub num_generated: usize,
    pub num_executable: usize,
    pub num_valid: usize,
    pub pct_executable_mtc: f64,
    pub pct_valid_mtc: f64,
    pub task_successful: bool,
    pub pct_false_alarm: f64,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl Metrics {
    /// Percentages are fractions of the attempts that received a reply;
    /// false alarms are a fraction of executable MTCs.
    pub fn from_attempts<'a>(attempts: impl IntoIterator<Item = &'a AttemptRecord>) -> Metrics {
        let (mut generated, mut executable, mut valid) = (0, 0, 0);
        for a in attempts {
            generated += a.received as usize;
            executable += a.executable as usize;
            valid += a.valid as usize;
        }
        Metrics {
            num_generated: generated,
            num_executable: executable,
            num_valid: valid,
            pct_executable_mtc: ratio(executable, generated),
            pct_valid_mtc: ratio(valid, generated),
            task_successful: valid > 0,
            pct_false_alarm: ratio(executable - valid, executable),
        }
    }

    pub fn of_task(task: &TaskReport) -> Metrics {
        Metrics::from_attempts(task.pairs.iter().flat_map(|p| &p.attempts))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TargetSimilarity {
    pub target: String,
    pub references: Vec<String>,
    pub l1: bool,
    pub l2: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

/// The metrics block as printed by the CLI.
pub fn render_metrics(report: &RunReport) -> String {
    let mut out = String::new();
    for t in &report.tasks {
        let m = &t.metrics;
        out.push_str(&format!(
            "{}: generated={} executable={} valid={} pctExecutableMtc={:.3} pctValidMtc={:.3} pctFalseAlarm={:.3} taskSuccessful={}\n",
            t.target, m.num_generated, m.num_executable, m.num_valid, m.pct_executable_mtc, m.pct_valid_mtc, m.pct_false_alarm, m.task_successful
        ));
    }
    for s in &report.similarity {
        out.push_str(&format!("{}: l1={} l2={}\n", s.target, s.l1, s.l2));
    }
    out
}

pub fn to_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
