use std::fmt::Display;
use std::path::Path;

use permcirc_core::permanent::NormReport;
use permcirc_core::pipeline::Error;
use permcirc_core::DyadicAmplitude;
use serde::Serialize;

pub const EXIT_DISAGREEMENT: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_SIZE_CAP: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Display) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    pub fn size_cap(message: impl Display) -> Self {
        Failure {
            code: EXIT_SIZE_CAP,
            message: message.to_string(),
        }
    }

    pub fn mismatch(message: impl Display) -> Self {
        Failure {
            code: EXIT_MISMATCH,
            message: message.to_string(),
        }
    }

    pub fn disagreement(message: impl Display) -> Self {
        Failure {
            code: EXIT_DISAGREEMENT,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_size_cap() {
            Failure::size_cap(e)
        } else {
            Failure::input(e)
        }
    }
}

/// Sampled `per(G)` and the amplitude it implies.
#[derive(Debug, Serialize)]
pub struct Estimate {
    pub permanent: f64,
    pub permanent_stderr: f64,
    pub amplitude: f64,
    pub amplitude_stderr: f64,
}

#[derive(Debug, Default, Serialize)]
pub struct Timings {
    pub prepare_ms: f64,
    pub encode_ms: Option<f64>,
    pub evaluate_ms: f64,
    pub total_ms: f64,
}

/// Output of `permcirc amp`.
#[derive(Debug, Serialize)]
pub struct RunResult {
    pub schema_version: u32,
    pub backend: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(rename = "in")]
    pub in_bits: String,
    #[serde(rename = "out")]
    pub out_bits: String,
    pub circuit_hash: String,
    pub inserted_hh_pairs: usize,
    pub h: u32,
    /// Free variables after the boundary is fixed.
    pub variables: usize,
    pub matrix_size: Option<usize>,
    /// Exact result; absent for the sampling backend.
    pub amplitude: Option<DyadicAmplitude>,
    pub estimate: Option<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheckResult>,
    pub notes: Vec<String>,
    pub timings: Timings,
}

#[derive(Debug, Serialize)]
pub struct CrossCheckResult {
    pub k_sv: String,
    pub agree: bool,
}

/// Output of `permcirc norm`.
#[derive(Debug, Serialize)]
pub struct NormResult {
    pub schema_version: u32,
    pub mode: String,
    #[serde(rename = "in")]
    pub in_bits: String,
    #[serde(rename = "out")]
    pub out_bits: String,
    #[serde(flatten)]
    pub report: NormReport,
}

#[derive(Debug, Serialize)]
pub struct BenchRun {
    pub repeat: usize,
    pub backend: &'static str,
    pub seconds: f64,
    pub permanent: String,
}

#[derive(Debug, Serialize)]
pub struct BenchResult {
    pub schema_version: u32,
    pub n: usize,
    pub seed: u64,
    pub threads: usize,
    pub runs: Vec<BenchRun>,
    /// One flag per repeat: every backend returned the same value.
    pub agree: Vec<bool>,
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable result");
    text.push('\n');
    emit(&text, path)
}
