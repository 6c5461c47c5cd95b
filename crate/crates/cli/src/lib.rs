//! Command dispatch for the `conecalc` binary: JSON documents in, JSON
//! reports out, with verdict exit codes.

pub mod commands;
pub mod input;
pub mod oracle;
pub mod render;
pub mod suite;

use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

pub const DEFAULT_MAX_DIM: usize = 6;

/// Every command, as a space-separated path.
pub const COMMANDS: &[&str] = &[
    "hilbert",
    "saturate",
    "truncate",
    "preimage",
    "fan-verify",
    "dioph subspace",
    "dioph closure",
    "dioph simplex",
    "dioph anchored",
    "pwl straighten",
    "pwl trunc-check",
    "pwl verify",
    "toric polytope",
    "toric h0",
    "toric fixmob",
    "toric ord",
    "toric bsl",
    "toric region",
    "toric chambers",
    "toric coxgen",
    "toric restrict",
];

/// Commands whose output depends on the seed.
pub const SAMPLING_COMMANDS: &[&str] = &["pwl verify"];

#[derive(Debug)]
pub enum CliError {
    Schema { path: String, message: String },
    Guard { path: String, dim: usize, max: usize },
    Domain(conecalc::Error),
    Usage(String),
}

impl From<conecalc::Error> for CliError {
    fn from(e: conecalc::Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use conecalc::Error as E;
        match self {
            CliError::Domain(E::StabilizationViolated { .. }) => EXIT_COUNTEREXAMPLE,
            CliError::Domain(E::SearchExhausted(_) | E::Uncertifiable(_)) => EXIT_INCONCLUSIVE,
            _ => EXIT_USAGE,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Schema { path, message } => {
                json!({"error": {"kind": "schema", "path": path, "message": message}})
            }
            CliError::Guard { path, dim, max } => json!({"error": {
                "kind": "dimension_guard",
                "path": path,
                "message": format!("dimension {dim} exceeds CONECALC_MAX_DIM = {max}"),
            }}),
            CliError::Domain(e) => json!({"error": {"kind": "domain", "message": e.to_string()}}),
            CliError::Usage(m) => json!({"error": {"kind": "usage", "message": m}}),
        }
    }
}

/// A report and the exit code it carries.
#[derive(Clone, Debug, PartialEq)]
pub struct Response {
    pub value: Value,
    pub code: i32,
}

impl Response {
    pub fn ok(value: Value) -> Self {
        Self { value, code: EXIT_OK }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub seed: u64,
    pub max_dim: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            seed: 0,
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

impl Settings {
    /// Reads `CONECALC_MAX_DIM`, falling back to the default.
    pub fn from_env(seed: u64) -> Result<Self, CliError> {
        let max_dim = match std::env::var("CONECALC_MAX_DIM") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("CONECALC_MAX_DIM must be a nonnegative integer, got {v:?}")))?,
            Err(_) => DEFAULT_MAX_DIM,
        };
        Ok(Self { seed, max_dim })
    }
}

/// Runs one command on a JSON input document.
pub fn execute(command: &str, input: &str, settings: &Settings) -> Response {
    match commands::dispatch(command, input, settings) {
        Ok(r) => r,
        Err(e) => Response {
            value: e.to_json(),
            code: e.exit_code(),
        },
    }
}

/// Canonical JSON text for a report.
pub fn to_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
