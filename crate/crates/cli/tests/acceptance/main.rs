//! End-to-end acceptance criteria. Each criterion prints one PASS or FAIL
//! line; the process fails if any criterion does.

mod dioph;
mod oracle;
mod polyhedral;
mod toric;

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

pub type Outcome = Result<String, String>;

pub fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    budget_secs: Option<f64>,
    run: fn() -> Outcome,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "Hilbert bases match brute-force enumeration",
        budget_secs: Some(60.0),
        run: polyhedral::hilbert_bases,
    },
    Criterion {
        id: 2,
        title: "saturation laws",
        budget_secs: None,
        run: polyhedral::saturation_laws,
    },
    Criterion {
        id: 3,
        title: "simplex approximations",
        budget_secs: None,
        run: dioph::simplex,
    },
    Criterion {
        id: 4,
        title: "anchored approximations",
        budget_secs: None,
        run: dioph::anchored,
    },
    Criterion {
        id: 5,
        title: "closure of multiples",
        budget_secs: None,
        run: dioph::closure,
    },
    Criterion {
        id: 6,
        title: "toric base-locus invariants",
        budget_secs: Some(120.0),
        run: toric::invariant_suite,
    },
    Criterion {
        id: 7,
        title: "F2 chambers and truncation",
        budget_secs: None,
        run: toric::f2_chambers,
    },
    Criterion {
        id: 8,
        title: "straightening against asymptotic orders",
        budget_secs: None,
        run: toric::straightening,
    },
    Criterion {
        id: 9,
        title: "parameters outside the base locus",
        budget_secs: None,
        run: toric::property_l,
    },
    Criterion {
        id: 10,
        title: "section ring generators and restriction",
        budget_secs: None,
        run: toric::sections,
    },
    Criterion {
        id: 11,
        title: "CLI suite is byte-identical across runs",
        budget_secs: None,
        run: cli_determinism,
    },
];

fn cli_determinism() -> Outcome {
    let suite = Path::new(env!("CARGO_MANIFEST_DIR")).join("suites/acceptance.json");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_conecalc"))
            .arg("suite")
            .arg(&suite)
            .env_remove("CONECALC_MAX_DIM")
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(
        a.status.success(),
        format!("suite failed: {}", String::from_utf8_lossy(&a.stdout)),
    )?;
    ensure(a.stdout == b.stdout, "outputs differ")?;
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    Ok(format!(
        "{} scenarios, {} bytes, identical",
        report["passed"],
        a.stdout.len()
    ))
}

fn main() -> ExitCode {
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in CRITERIA.iter().filter(|c| filter.is_empty() || filter.contains(&c.id)) {
        let start = Instant::now();
        let mut outcome = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        if let (Ok(_), Some(b)) = (&outcome, c.budget_secs) {
            if secs > b {
                outcome = Err(format!("took {secs:.1} s, budget {b} s"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS {:>2} {} ({secs:.1} s): {detail}", c.id, c.title),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {} ({secs:.1} s): {why}", c.id, c.title);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
