//! `ccstack`: solve, verify and scan stacked N+4-body central configurations.
//!
//! Exit codes: 0 success, 1 domain-negative outcome (infeasible, singular,
//! not central or not centered, empty scan), 2 usage or input error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use ccstack::io::read_configuration;
use ccstack::{
    band_summary, coefficients, export_csv, lambda_star, scan, solve_masses, verify, Error,
    RangeSpec, ScanGrid, ScanOptions, DEFAULT_TOLERANCE,
};

/// Append one line of stdout output to the buffer.
macro_rules! say {
    ($w:expr, $($arg:tt)*) => {{
        $w.push_str(&format!($($arg)*));
        $w.push('\n');
    }};
}

const THREADS_ENV: &str = "CCSTACK_THREADS";

#[derive(Parser)]
#[command(
    name = "ccstack",
    version,
    about = "Stacked central configurations of the N+4-body problem"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the axis masses M1, M2 for given polygon size and axis offsets.
    Solve {
        /// Number of polygon vertices (>= 2).
        #[arg(long)]
        n: usize,
        /// Inner axis offset, 0 < r1 < r2.
        #[arg(long, allow_negative_numbers = true)]
        r1: f64,
        /// Outer axis offset.
        #[arg(long, allow_negative_numbers = true)]
        r2: f64,
        /// Print a single JSON object instead of text.
        #[arg(long)]
        json: bool,
        /// Assemble the N+4 configuration and check its residual.
        #[arg(long)]
        verify: bool,
    },
    /// Check whether a configuration file is a central configuration.
    Verify {
        /// JSON file: {"bodies": [{"mass": m, "position": [x, y, z]}, ...]}.
        config: PathBuf,
        /// Bound on the relative residual.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Scan the (r1, gap) plane and write a CSV of feasibility cells.
    ///
    /// Ranges are written lo:hi:step. Points are lo + i*step below hi, plus
    /// a final point when it falls within step/2 of hi. The worker count can
    /// be capped with the CCSTACK_THREADS environment variable.
    Scan {
        #[arg(long)]
        n: usize,
        /// r1 range, lo:hi:step.
        #[arg(long)]
        r1: RangeSpec,
        /// Gap (r2 - r1) range, lo:hi:step.
        #[arg(long)]
        gap: RangeSpec,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Verify every feasible cell end to end.
        #[arg(long)]
        verify: bool,
    },
    /// Print the multiplier of the unit regular n-gon.
    LambdaStar {
        #[arg(long)]
        n: usize,
    },
}

/// Failure that maps onto an exit code.
enum Failure {
    Usage(String),
    Domain,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut w = String::new();
    let outcome = match cli.command {
        Command::Solve {
            n,
            r1,
            r2,
            json,
            verify,
        } => cmd_solve(&mut w, n, r1, r2, json, verify),
        Command::Verify { config, tol, json } => cmd_verify(&mut w, &config, tol, json),
        Command::Scan {
            n,
            r1,
            gap,
            out,
            verify,
        } => cmd_scan(&mut w, n, r1, gap, &out, verify),
        Command::LambdaStar { n } => cmd_lambda_star(&mut w, n),
    };
    // a closed pipe downstream is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(w.as_bytes());
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// At least 17 significant digits, fixed notation for moderate magnitudes.
fn sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..15).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        format!("{x:.16e}")
    }
}

fn num(x: Option<f64>) -> Value {
    x.filter(|v| v.is_finite()).map_or(Value::Null, Value::from)
}

fn check_n(n: usize) -> Result<(), Failure> {
    if n < 2 {
        return Err(Failure::Usage(format!("--n must be at least 2, got {n}")));
    }
    Ok(())
}

fn cmd_solve(
    w: &mut String,
    n: usize,
    r1: f64,
    r2: f64,
    as_json: bool,
    check: bool,
) -> Result<(), Failure> {
    check_n(n)?;
    let c = coefficients(n, r1, r2)?;
    let mut out = json!({
        "lambda_star": c.lambda_star,
        "a11": c.a11, "a12": c.a12, "a21": c.a21, "a22": c.a22,
        "b1": c.b1, "b2": c.b2,
        "M1": null, "M2": null, "lambda": null,
        "feasible": false, "residual": null, "reason": null,
    });
    let mut notes = Vec::new();
    let ok = match solve_masses(&c) {
        Err(Error::SingularSystem {
            determinant,
            condition,
        }) => {
            out["reason"] = json!("singular");
            notes.push(format!("determinant = {}", sig(determinant)));
            notes.push(format!("condition   = {}", sig(condition)));
            false
        }
        Err(e) => return Err(e.into()),
        Ok(s) => {
            out["M1"] = num(Some(s.m1));
            out["M2"] = num(Some(s.m2));
            out["lambda"] = num(Some(s.lambda));
            out["feasible"] = json!(s.feasible);
            notes.push(format!("determinant = {}", sig(s.determinant)));
            if !s.feasible {
                out["reason"] = json!("infeasible");
                false
            } else if check {
                let outcome = verify(&s.configuration(&c)?, DEFAULT_TOLERANCE)?;
                out["residual"] = num(Some(outcome.report.relative_max));
                notes.push(format!("lambda(U/I) = {}", sig(outcome.lambda)));
                if !outcome.is_cc {
                    out["reason"] = json!("not-central");
                }
                outcome.is_cc
            } else {
                true
            }
        }
    };

    if as_json {
        say!(w, "{out}");
    } else {
        for key in [
            "lambda_star",
            "a11",
            "a12",
            "a21",
            "a22",
            "b1",
            "b2",
            "M1",
            "M2",
            "lambda",
        ] {
            match out[key].as_f64() {
                Some(v) => say!(w, "{key:<11} = {}", sig(v)),
                None => say!(w, "{key:<11} = -"),
            }
        }
        for line in &notes {
            say!(w, "{line}");
        }
        say!(w, "feasible    = {}", out["feasible"]);
        if let Some(r) = out["residual"].as_f64() {
            say!(w, "residual    = {}", sig(r));
        }
        if let Some(reason) = out["reason"].as_str() {
            say!(w, "reason      = {reason}");
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Domain)
    }
}

fn cmd_verify(
    w: &mut String,
    path: &std::path::Path,
    tol: f64,
    as_json: bool,
) -> Result<(), Failure> {
    let config = read_configuration(path)?;
    let blank = json!({
        "lambda_star": null,
        "a11": null, "a12": null, "a21": null, "a22": null,
        "b1": null, "b2": null,
        "M1": null, "M2": null,
        "lambda": null, "feasible": false, "residual": null, "reason": null,
    });
    let outcome = match verify(&config, tol) {
        // a well-formed input whose weighted centroid is off the origin is
        // simply not central
        Err(Error::NotCentered { norm }) => {
            if as_json {
                let mut out = blank;
                out["reason"] = json!("not-centered");
                say!(w, "{out}");
            } else {
                say!(w, "centroid_norm = {}", sig(norm));
                say!(w, "central       = false");
                say!(w, "reason        = not-centered");
            }
            return Err(Failure::Domain);
        }
        other => other?,
    };
    let report = &outcome.report;
    if as_json {
        let mut out = blank;
        out["lambda"] = num(Some(outcome.lambda));
        out["feasible"] = json!(outcome.is_cc);
        out["residual"] = num(Some(report.relative_max));
        if !outcome.is_cc {
            out["reason"] = json!("not-central");
        }
        say!(w, "{out}");
    } else {
        say!(w, "lambda       = {}", sig(outcome.lambda));
        say!(w, "max_norm     = {}", sig(report.max_norm));
        say!(w, "relative_max = {}", sig(report.relative_max));
        for (k, norm) in report.norms().into_iter().enumerate() {
            say!(w, "body {k:>4}    = {}", sig(norm));
        }
        say!(w, "central      = {}", outcome.is_cc);
    }
    if outcome.is_cc {
        Ok(())
    } else {
        Err(Failure::Domain)
    }
}

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Failure::Usage(format!("{THREADS_ENV}: {e}"))),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(Failure::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

fn cmd_scan(
    w: &mut String,
    n: usize,
    r1: RangeSpec,
    gap: RangeSpec,
    out: &std::path::Path,
    check: bool,
) -> Result<(), Failure> {
    check_n(n)?;
    let threads = threads_from_env()?;
    let grid: ScanGrid = scan(
        n,
        r1,
        gap,
        ScanOptions {
            verify: check,
            threads,
        },
    )?;
    export_csv(&grid, out)?;
    let band = band_summary(&grid);
    say!(w, "cells          = {}", grid.cells.len());
    say!(w, "feasible_cells = {}", band.feasible_cells);
    if band.empty {
        say!(w, "delta_hat      = -");
    } else {
        say!(w, "delta_hat      = {}", sig(band.delta_hat));
        for (r1, g) in &band.per_r1_max_gap {
            say!(w, "r1 {:<24} max_gap {}", sig(*r1), sig(*g));
        }
    }
    if check {
        let worst = grid
            .feasible_cells()
            .filter_map(|c| c.residual_check)
            .fold(0.0f64, f64::max);
        say!(w, "max_residual   = {}", sig(worst));
    }
    if band.empty {
        Err(Failure::Domain)
    } else {
        Ok(())
    }
}

fn cmd_lambda_star(w: &mut String, n: usize) -> Result<(), Failure> {
    check_n(n)?;
    say!(w, "{}", sig(lambda_star::<f64>(n)?));
    Ok(())
}
