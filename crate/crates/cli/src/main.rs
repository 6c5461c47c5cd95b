use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use conecalc_cli::{execute, render, suite, to_text, CliError, Response, Settings, EXIT_USAGE};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
}

/// Exact computations on cones, monoids, Diophantine approximations,
/// piecewise-linear maps and toric varieties. Reads a JSON document on
/// stdin and writes a JSON report on stdout.
#[derive(Parser)]
#[command(name = "conecalc", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Seed for every sampling step.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Read the input document from a file instead of stdin.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hilbert basis of a pointed rational cone.
    Hilbert,
    /// Saturation of an affine monoid.
    Saturate,
    /// Truncation of an affine monoid.
    Truncate,
    /// Preimage of a monoid under a linear map, saturated.
    Preimage,
    /// Check that cones form a fan with the given support.
    FanVerify,
    /// Diophantine approximation of symbolic real points.
    #[command(subcommand)]
    Dioph(Dioph),
    /// Piecewise-linear maps on monoids: straightening and certificates.
    #[command(subcommand)]
    Pwl(Pwl),
    /// Divisors on toric varieties.
    #[command(subcommand)]
    Toric(Toric),
    /// Run a scenario file.
    Suite { file: PathBuf },
}

#[derive(Subcommand)]
enum Dioph {
    /// Smallest rational affine subspace containing a point or its image.
    Subspace,
    /// Closure of the multiples of a point in a torus.
    Closure,
    /// Simplex of rational approximations.
    Simplex,
    /// Two-anchor approximation.
    Anchored,
}

#[derive(Subcommand)]
enum Pwl {
    /// Straightening along rays.
    Straighten,
    /// Least truncation on which the map is additive.
    TruncCheck,
    /// Verify a piecewise-linear claim.
    Verify,
}

#[derive(Subcommand)]
enum Toric {
    /// Polytope of sections of a divisor.
    Polytope,
    /// Dimension of the space of global sections.
    H0,
    /// Fixed and mobile parts of a divisor.
    Fixmob,
    /// Asymptotic orders of vanishing along every ray.
    Ord,
    /// Stable and diminished base loci.
    Bsl,
    /// Parameters of a segment outside the base locus of a prime divisor.
    Region,
    /// Chambers on which the asymptotic orders are linear.
    Chambers,
    /// Generators of a multigraded section ring.
    Coxgen,
    /// Dimension of the restricted section space on a prime divisor.
    Restrict,
}

fn name(cmd: &Cmd) -> String {
    match cmd {
        Cmd::Hilbert => "hilbert".into(),
        Cmd::Saturate => "saturate".into(),
        Cmd::Truncate => "truncate".into(),
        Cmd::Preimage => "preimage".into(),
        Cmd::FanVerify => "fan-verify".into(),
        Cmd::Dioph(d) => format!(
            "dioph {}",
            match d {
                Dioph::Subspace => "subspace",
                Dioph::Closure => "closure",
                Dioph::Simplex => "simplex",
                Dioph::Anchored => "anchored",
            }
        ),
        Cmd::Pwl(p) => format!(
            "pwl {}",
            match p {
                Pwl::Straighten => "straighten",
                Pwl::TruncCheck => "trunc-check",
                Pwl::Verify => "verify",
            }
        ),
        Cmd::Toric(t) => format!(
            "toric {}",
            match t {
                Toric::Polytope => "polytope",
                Toric::H0 => "h0",
                Toric::Fixmob => "fixmob",
                Toric::Ord => "ord",
                Toric::Bsl => "bsl",
                Toric::Region => "region",
                Toric::Chambers => "chambers",
                Toric::Coxgen => "coxgen",
                Toric::Restrict => "restrict",
            }
        ),
        Cmd::Suite { .. } => "suite".into(),
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    let mut s = String::new();
    match path {
        Some(p) => {
            s = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?
        }
        None => {
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        }
    }
    Ok(s)
}

fn run(cli: &Cli) -> Response {
    let fail = |e: CliError| Response {
        value: e.to_json(),
        code: e.exit_code(),
    };
    let settings = match Settings::from_env(cli.seed) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    if let Cmd::Suite { file } = &cli.command {
        return suite::run_suite(file, &settings);
    }
    match read_input(&cli.input) {
        Ok(input) => execute(&name(&cli.command), &input, &settings),
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let r = run(&cli);
    let text = match cli.format {
        Format::Json => to_text(&r.value),
        Format::Table => render::table(&r.value),
    };
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if let Some(e) = r.value.get("error") {
        eprintln!("error: {}", e["message"].as_str().unwrap_or("unknown"));
    }
    ExitCode::from(r.code as u8)
}
