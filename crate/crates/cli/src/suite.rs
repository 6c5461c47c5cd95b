//! Scenario files: lists of commands with inputs and expected outputs.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::input::parse;
use crate::{execute, CliError, Response, Settings, COMMANDS, EXIT_COUNTEREXAMPLE, EXIT_OK, SAMPLING_COMMANDS};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub command: String,
    #[serde(default)]
    pub input: Option<Value>,
    /// Path of the input document, relative to the suite file.
    #[serde(default)]
    pub input_file: Option<String>,
    /// The whole expected output.
    #[serde(default)]
    pub expected: Option<Value>,
    /// Expected values at JSON pointers into the output.
    #[serde(default)]
    pub expect: BTreeMap<String, Value>,
    #[serde(default)]
    pub expected_exit: i32,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteFile {
    #[serde(default)]
    pub scenarios: Vec<Scenario>,
}

/// Pointers at which `expected` and `actual` differ.
pub fn diff(expected: &Value, actual: &Value, at: &str, out: &mut Vec<Value>) {
    match (expected, actual) {
        (Value::Object(a), Value::Object(b)) => {
            let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
            for k in keys {
                let p = format!("{at}/{}", k.replace('~', "~0").replace('/', "~1"));
                match (a.get(k), b.get(k)) {
                    (Some(x), Some(y)) => diff(x, y, &p, out),
                    (x, y) => out.push(json!({"path": p, "expected": x, "actual": y})),
                }
            }
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                diff(x, y, &format!("{at}/{i}"), out);
            }
        }
        (x, y) if x != y => out.push(json!({"path": at, "expected": x, "actual": y})),
        _ => {}
    }
}

fn run_one(sc: &Scenario, base: &Path, settings: &Settings) -> Value {
    let fail = |status: &str, message: String| json!({"name": sc.name, "status": status, "message": message});
    if !COMMANDS.contains(&sc.command.as_str()) {
        return fail("error", format!("unknown command {:?}", sc.command));
    }
    if SAMPLING_COMMANDS.contains(&sc.command.as_str()) && sc.seed.is_none() {
        return fail("error", "this command samples; a seed is required".into());
    }
    let input = match (&sc.input, &sc.input_file) {
        (Some(v), None) => v.to_string(),
        (None, Some(f)) => match std::fs::read_to_string(base.join(f)) {
            Ok(s) => s,
            Err(e) => return fail("missing", format!("cannot read input file {f:?}: {e}")),
        },
        _ => {
            return fail(
                "error",
                "exactly one of \"input\" and \"input_file\" is required".into(),
            )
        }
    };
    let s = Settings {
        seed: sc.seed.unwrap_or(settings.seed),
        ..*settings
    };
    let Response { value, code } = execute(&sc.command, &input, &s);
    let mut diffs = Vec::new();
    if let Some(e) = &sc.expected {
        diff(e, &value, "", &mut diffs);
    }
    for (ptr, e) in &sc.expect {
        match value.pointer(ptr) {
            Some(a) => diff(e, a, ptr, &mut diffs),
            None => diffs.push(json!({"path": ptr, "expected": e, "actual": null})),
        }
    }
    if code != sc.expected_exit {
        diffs.push(json!({"path": "exit", "expected": sc.expected_exit, "actual": code}));
    }
    json!({
        "name": sc.name,
        "status": if diffs.is_empty() { "pass" } else { "fail" },
        "exit": code,
        "diff": diffs,
        "output": value,
    })
}

/// Runs every scenario; exits nonzero when any scenario fails.
pub fn run_suite(path: &Path, settings: &Settings) -> Response {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let err = CliError::Usage(format!("cannot read suite file {}: {e}", path.display()));
            return Response {
                value: err.to_json(),
                code: err.exit_code(),
            };
        }
    };
    let file: SuiteFile = match parse(&text) {
        Ok(f) => f,
        Err(e) => {
            return Response {
                value: e.to_json(),
                code: e.exit_code(),
            }
        }
    };
    let base = path.parent().unwrap_or(Path::new("."));
    let results: Vec<Value> = file.scenarios.iter().map(|sc| run_one(sc, base, settings)).collect();
    let passed = results.iter().filter(|r| r["status"] == "pass").count();
    let failed = results.len() - passed;
    Response {
        code: if failed == 0 { EXIT_OK } else { EXIT_COUNTEREXAMPLE },
        value: json!({"passed": passed, "failed": failed, "results": results}),
    }
}
