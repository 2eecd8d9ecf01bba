//! Parameter sweeps: config ingestion, per-cell pipeline runs, and CSV/JSON
//! result emission.
//!
//! Every cell is seeded independently from the base seed and the cell's own
//! parameters, so adding or removing cells never perturbs the others.
//! Epsilon values travel as decimal strings and are echoed verbatim in row
//! keys to keep output keys free of float-printing drift.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::clustering::{cluster_atypical, zone_homogeneity};
use crate::codec::{make_layout, Codec};
use crate::error::{Error, Result};
use crate::exponent::{case1_report, case2_report, chi, chi_threshold, error_exponent};
use crate::render::format_significant;
use crate::source::SourceModel;
use crate::typicality::{partition_sequences, TypicalPartition};

/// Significant digits used for every float in CSV and JSON output.
const FLOAT_DIGITS: usize = 12;

/// Wall-clock runtimes are floored to this granularity (ms) so repeated
/// sweeps with one seed emit identical files; desk-scale cells report 0.
const RUNTIME_GRANULARITY_MS: u64 = 1000;

/// One sweep: a single source, crossed over block lengths, slacks, and
/// cluster counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub pmf: Vec<f64>,
    pub n_values: Vec<usize>,
    /// Decimal strings, echoed verbatim in outputs.
    pub epsilon_values: Vec<String>,
    pub k_values: Vec<usize>,
    pub trials: u64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub emit_sequences: bool,
}

impl SweepConfig {
    pub fn from_slice(bytes: &[u8]) -> Result<Self> {
        Ok(serde_json::from_slice(bytes)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_slice(&std::fs::read(path)?)
    }

    /// Validates the config and returns the source model it describes.
    pub fn validate(&self) -> Result<SourceModel> {
        let model = SourceModel::new(&self.pmf)?;
        if self.n_values.is_empty() {
            return Err(Error::Config("n_values must not be empty".into()));
        }
        if self.n_values.iter().any(|&n| n == 0) {
            return Err(Error::Config("n_values entries must be >= 1".into()));
        }
        if self.epsilon_values.is_empty() {
            return Err(Error::Config("epsilon_values must not be empty".into()));
        }
        for text in &self.epsilon_values {
            let parsed: f64 = text
                .parse()
                .map_err(|_| Error::Config(format!("epsilon {text:?} is not a decimal")))?;
            if !(parsed > 0.0) || !parsed.is_finite() {
                return Err(Error::Config(format!(
                    "epsilon {text:?} must be a finite positive value"
                )));
            }
        }
        if self.k_values.is_empty() {
            return Err(Error::Config("k_values must not be empty".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        Ok(model)
    }
}

/// One output row per sweep cell. `None` numeric fields render as
/// "skipped"; infinities render as "inf".
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub epsilon: String,
    pub k: usize,
    pub entropy: f64,
    pub prob_typical: Option<f64>,
    pub prob_atypical: Option<f64>,
    pub plc: Option<f64>,
    pub poe2_case: Option<f64>,
    pub chi: Option<f64>,
    pub chi_threshold: Option<f64>,
    pub e1: Option<f64>,
    pub e2: Option<f64>,
    pub verdict: Option<bool>,
    pub homogeneity_fraction: Option<f64>,
    pub empirical_error: Option<f64>,
    pub empirical_stderr: Option<f64>,
    pub case_tag: String,
    pub runtime_ms: u64,
    pub reason: String,
}

/// CSV header, exactly in `ResultRow` field order.
pub const CSV_HEADER: [&str; 19] = [
    "n",
    "epsilon",
    "k",
    "entropy",
    "prob_typical",
    "prob_atypical",
    "plc",
    "poe2_case",
    "chi",
    "chi_threshold",
    "e1",
    "e2",
    "verdict",
    "homogeneity_fraction",
    "empirical_error",
    "empirical_stderr",
    "case_tag",
    "runtime_ms",
    "reason",
];

/// FNV-1a, pinned here so per-cell seeds stay stable across toolchains.
pub(crate) fn fnv1a64(data: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &byte in data {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Deterministic seed for one cell and role ("cluster" or "mc").
pub fn cell_seed(base_seed: u64, n: usize, epsilon_text: &str, k: usize, role: &str) -> u64 {
    base_seed ^ fnv1a64(format!("{n}|{epsilon_text}|{k}|{role}").as_bytes())
}

fn float_cell(value: Option<f64>) -> String {
    match value {
        Some(x) => format_significant(x, FLOAT_DIGITS),
        None => "skipped".into(),
    }
}

fn verdict_cell(verdict: Option<bool>) -> String {
    match verdict {
        Some(true) => "true".into(),
        Some(false) => "false".into(),
        None => "skipped".into(),
    }
}

impl ResultRow {
    fn csv_record(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.epsilon.clone(),
            self.k.to_string(),
            format_significant(self.entropy, FLOAT_DIGITS),
            float_cell(self.prob_typical),
            float_cell(self.prob_atypical),
            float_cell(self.plc),
            float_cell(self.poe2_case),
            float_cell(self.chi),
            float_cell(self.chi_threshold),
            float_cell(self.e1),
            float_cell(self.e2),
            verdict_cell(self.verdict),
            float_cell(self.homogeneity_fraction),
            float_cell(self.empirical_error),
            float_cell(self.empirical_stderr),
            self.case_tag.clone(),
            self.runtime_ms.to_string(),
            self.reason.clone(),
        ]
    }

    fn json_object(&self) -> Value {
        let float = |v: Option<f64>| -> Value {
            match v {
                Some(x) if x.is_finite() => {
                    // Round-trip through the 12-significant-digit rendering
                    // so JSON and CSV carry the same values.
                    let rounded: f64 = format_significant(x, FLOAT_DIGITS)
                        .parse()
                        .expect("rendered float parses");
                    serde_json::json!(rounded)
                }
                Some(x) => Value::String(format_significant(x, 1)),
                None => Value::String("skipped".into()),
            }
        };
        serde_json::json!({
            "n": self.n,
            "epsilon": self.epsilon,
            "k": self.k,
            "entropy": float(Some(self.entropy)),
            "prob_typical": float(self.prob_typical),
            "prob_atypical": float(self.prob_atypical),
            "plc": float(self.plc),
            "poe2_case": float(self.poe2_case),
            "chi": float(self.chi),
            "chi_threshold": float(self.chi_threshold),
            "e1": float(self.e1),
            "e2": float(self.e2),
            "verdict": match self.verdict {
                Some(b) => Value::Bool(b),
                None => Value::String("skipped".into()),
            },
            "homogeneity_fraction": float(self.homogeneity_fraction),
            "empirical_error": float(self.empirical_error),
            "empirical_stderr": float(self.empirical_stderr),
            "case_tag": self.case_tag,
            "runtime_ms": self.runtime_ms,
            "reason": self.reason,
        })
    }

    fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Config("row is not an object".into()))?;
        let get = |key: &str| -> Result<&Value> {
            obj.get(key)
                .ok_or_else(|| Error::Config(format!("row missing field {key}")))
        };
        let int = |key: &str| -> Result<u64> {
            get(key)?
                .as_u64()
                .ok_or_else(|| Error::Config(format!("field {key} is not an integer")))
        };
        let text = |key: &str| -> Result<String> {
            Ok(get(key)?
                .as_str()
                .ok_or_else(|| Error::Config(format!("field {key} is not a string")))?
                .to_string())
        };
        let float = |key: &str| -> Result<Option<f64>> {
            match get(key)? {
                Value::Number(n) => Ok(Some(n.as_f64().unwrap_or(f64::NAN))),
                Value::String(s) if s == "skipped" => Ok(None),
                Value::String(s) if s == "inf" => Ok(Some(f64::INFINITY)),
                Value::String(s) if s == "-inf" => Ok(Some(f64::NEG_INFINITY)),
                other => Err(Error::Config(format!("field {key} has bad value {other}"))),
            }
        };
        let verdict = match get("verdict")? {
            Value::Bool(b) => Some(*b),
            Value::String(s) if s == "skipped" => None,
            other => return Err(Error::Config(format!("bad verdict {other}"))),
        };
        Ok(ResultRow {
            n: int("n")? as usize,
            epsilon: text("epsilon")?,
            k: int("k")? as usize,
            entropy: float("entropy")?
                .ok_or_else(|| Error::Config("entropy must be numeric".into()))?,
            prob_typical: float("prob_typical")?,
            prob_atypical: float("prob_atypical")?,
            plc: float("plc")?,
            poe2_case: float("poe2_case")?,
            chi: float("chi")?,
            chi_threshold: float("chi_threshold")?,
            e1: float("e1")?,
            e2: float("e2")?,
            verdict,
            homogeneity_fraction: float("homogeneity_fraction")?,
            empirical_error: float("empirical_error")?,
            empirical_stderr: float("empirical_stderr")?,
            case_tag: text("case_tag")?,
            runtime_ms: int("runtime_ms")?,
            reason: text("reason")?,
        })
    }
}

/// Runs every `(n, epsilon, k)` cell, ordered by those keys. Infeasible
/// cells are emitted as skipped rows with a reason; the sweep never aborts
/// on a cell.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<ResultRow>> {
    let model = config.validate()?;

    let mut cells: Vec<(usize, String, f64, usize)> = Vec::new();
    for &n in &config.n_values {
        for eps_text in &config.epsilon_values {
            let eps: f64 = eps_text.parse().expect("validated");
            for &k in &config.k_values {
                cells.push((n, eps_text.clone(), eps, k));
            }
        }
    }
    cells.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.2.partial_cmp(&b.2).expect("finite epsilon"))
            .then(a.1.cmp(&b.1))
            .then(a.3.cmp(&b.3))
    });

    let mut partitions: HashMap<(usize, String), Result<TypicalPartition>> = HashMap::new();
    let mut rows = Vec::with_capacity(cells.len());
    for (n, eps_text, eps, k) in cells {
        let key = (n, eps_text.clone());
        let partition = partitions
            .entry(key)
            .or_insert_with(|| partition_sequences(&model, n, eps));
        rows.push(run_cell(config, &model, n, &eps_text, eps, k, partition));
    }
    Ok(rows)
}

fn skipped_row(n: usize, eps_text: &str, k: usize, entropy: f64, reason: String) -> ResultRow {
    ResultRow {
        n,
        epsilon: eps_text.to_string(),
        k,
        entropy,
        prob_typical: None,
        prob_atypical: None,
        plc: None,
        poe2_case: None,
        chi: None,
        chi_threshold: None,
        e1: None,
        e2: None,
        verdict: None,
        homogeneity_fraction: None,
        empirical_error: None,
        empirical_stderr: None,
        case_tag: "skipped".into(),
        runtime_ms: 0,
        reason,
    }
}

#[allow(clippy::too_many_arguments)]
fn run_cell(
    config: &SweepConfig,
    model: &SourceModel,
    n: usize,
    eps_text: &str,
    eps: f64,
    k: usize,
    partition: &Result<TypicalPartition>,
) -> ResultRow {
    let start = Instant::now();
    let partition = match partition {
        Ok(p) => p,
        Err(err) => return skipped_row(n, eps_text, k, model.entropy_bits(), err.to_string()),
    };

    let n1 = n as f64 * (model.entropy_bits() + eps);
    let mut row = skipped_row(n, eps_text, k, model.entropy_bits(), String::new());
    row.prob_typical = Some(partition.prob_typical());
    row.prob_atypical = Some(partition.prob_atypical());
    row.chi = (k >= 1).then(|| chi(k, n, model.entropy_bits(), eps));
    row.chi_threshold = chi_threshold(n, model.entropy_bits(), eps).ok();
    row.e1 = error_exponent(partition.prob_atypical(), n1).ok();

    let b = partition.atypical_list().len();
    if b == 0 {
        row.reason = "atypical set empty; clustering skipped".into();
        // The codec still runs without a cluster model; every draw is
        // typical, so the empirical error is exactly zero.
        if let Ok(layout) = make_layout(partition, k.max(1)) {
            if let Ok(codec) = Codec::new(partition, None, layout) {
                let seed = cell_seed(config.base_seed, n, eps_text, k, "mc");
                if let Ok(estimate) = codec.empirical_error(model, config.trials, seed) {
                    row.empirical_error = Some(estimate.estimate);
                    row.empirical_stderr = Some(estimate.std_error);
                }
            }
        }
        row.runtime_ms = floored_runtime(start);
        return row;
    }
    if k < 2 || k > b {
        row.reason = format!("k={k} out of range for |B|={b}");
        row.runtime_ms = floored_runtime(start);
        return row;
    }

    let cluster_seed = cell_seed(config.base_seed, n, eps_text, k, "cluster");
    let clusters = match cluster_atypical(partition, model, k, cluster_seed) {
        Ok(c) => c,
        Err(err) => {
            row.reason = err.to_string();
            row.runtime_ms = floored_runtime(start);
            return row;
        }
    };

    let report = if b == k {
        case2_report(partition, &clusters)
    } else {
        case1_report(partition, &clusters)
    };
    let report = match report {
        Ok(r) => r,
        Err(err) => {
            row.reason = err.to_string();
            row.runtime_ms = floored_runtime(start);
            return row;
        }
    };

    row.case_tag = report.case_tag.to_string();
    row.plc = Some(clusters.plc());
    row.poe2_case = Some(report.poe2);
    row.chi = Some(report.chi);
    row.chi_threshold = Some(report.chi_threshold);
    row.e1 = Some(report.e1);
    row.e2 = Some(report.e2);
    row.verdict = Some(report.verdict_e2_gt_e1);
    if let Ok(homogeneity) = zone_homogeneity(&clusters, partition) {
        row.homogeneity_fraction = Some(homogeneity.homogeneous_fraction);
    }
    if !clusters.converged() {
        row.reason = "clustering hit the refinement round limit".into();
    }

    match make_layout(partition, k)
        .and_then(|layout| Codec::new(partition, Some(&clusters), layout))
    {
        Ok(codec) => {
            let seed = cell_seed(config.base_seed, n, eps_text, k, "mc");
            match codec.empirical_error(model, config.trials, seed) {
                Ok(estimate) => {
                    row.empirical_error = Some(estimate.estimate);
                    row.empirical_stderr = Some(estimate.std_error);
                }
                Err(err) => row.reason = err.to_string(),
            }
        }
        Err(err) => row.reason = err.to_string(),
    }

    row.runtime_ms = floored_runtime(start);
    row
}

fn floored_runtime(start: Instant) -> u64 {
    (start.elapsed().as_millis() as u64 / RUNTIME_GRANULARITY_MS) * RUNTIME_GRANULARITY_MS
}

/// Renders rows as CSV with the fixed header. Errors without creating
/// output when `rows` is empty.
pub fn rows_to_csv(rows: &[ResultRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyRows);
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record(row.csv_record())?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Config(format!("csv flush failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let text = rows_to_csv(rows)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Renders rows as a JSON array of objects.
pub fn rows_to_json(rows: &[ResultRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyRows);
    }
    let array = Value::Array(rows.iter().map(|r| r.json_object()).collect());
    Ok(format!("{}\n", serde_json::to_string_pretty(&array)?))
}

pub fn emit_json(rows: &[ResultRow], path: &Path) -> Result<()> {
    let text = rows_to_json(rows)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Parses rows back from the JSON form.
pub fn parse_rows_json(bytes: &[u8]) -> Result<Vec<ResultRow>> {
    let value: Value = serde_json::from_slice(bytes)?;
    let array = value
        .as_array()
        .ok_or_else(|| Error::Config("expected a JSON array of rows".into()))?;
    array.iter().map(ResultRow::from_json).collect()
}

/// Exponent reports for every cell of a config, one JSON object per cell.
/// Infeasible cells carry a `skipped` reason instead of a report.
pub fn analyze_cells(config: &SweepConfig) -> Result<Vec<Value>> {
    let model = config.validate()?;
    let mut out = Vec::new();
    let mut partitions: HashMap<(usize, String), Result<TypicalPartition>> = HashMap::new();
    for &n in &config.n_values {
        for eps_text in &config.epsilon_values {
            let eps: f64 = eps_text.parse().expect("validated");
            let partition = partitions
                .entry((n, eps_text.clone()))
                .or_insert_with(|| partition_sequences(&model, n, eps));
            for &k in &config.k_values {
                let cell = serde_json::json!({
                    "n": n,
                    "epsilon": eps_text,
                    "k": k,
                });
                let mut cell = cell.as_object().expect("object").clone();
                match partition {
                    Err(err) => {
                        cell.insert("skipped".into(), Value::String(err.to_string()));
                    }
                    Ok(partition) => {
                        let b = partition.atypical_list().len();
                        if b == 0 || k < 2 || k > b {
                            let reason = if b == 0 {
                                "atypical set empty".to_string()
                            } else {
                                format!("k={k} out of range for |B|={b}")
                            };
                            cell.insert("skipped".into(), Value::String(reason));
                        } else {
                            let seed = cell_seed(config.base_seed, n, eps_text, k, "cluster");
                            let report = cluster_atypical(partition, &model, k, seed)
                                .and_then(|clusters| {
                                    if b == k {
                                        case2_report(partition, &clusters)
                                    } else {
                                        case1_report(partition, &clusters)
                                    }
                                });
                            match report {
                                Ok(report) => {
                                    cell.insert("report".into(), report.to_json());
                                }
                                Err(err) => {
                                    cell.insert("skipped".into(), Value::String(err.to_string()));
                                }
                            }
                        }
                    }
                }
                out.push(Value::Object(cell));
            }
        }
    }
    Ok(out)
}

/// Writes per-(n, epsilon) sequence lists next to `stem`, returning the
/// created paths. Used by the CLI when sequence emission is requested.
pub fn emit_sequence_files(config: &SweepConfig, stem: &Path) -> Result<Vec<PathBuf>> {
    let model = config.validate()?;
    let mut written = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for &n in &config.n_values {
        for eps_text in &config.epsilon_values {
            if !seen.insert((n, eps_text.clone())) {
                continue;
            }
            let eps: f64 = eps_text.parse().expect("validated");
            let partition = match partition_sequences(&model, n, eps) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let base = stem.to_string_lossy();
            let typical = PathBuf::from(format!("{base}_n{n}_eps{eps_text}.typical.csv"));
            let atypical = PathBuf::from(format!("{base}_n{n}_eps{eps_text}.atypical.csv"));
            partition.write_sequence_csvs(&typical, &atypical)?;
            written.push(typical);
            written.push(atypical);
        }
    }
    Ok(written)
}
