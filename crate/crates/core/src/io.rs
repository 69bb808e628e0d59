//! JSON form of configurations and residual reports.
//!
//! ```json
//! {"bodies": [{"mass": 1.0, "position": [1.0, 0.0, 0.0]}, ...]}
//! ```
//!
//! Numbers are written with 17 significant digits so that every `f64`
//! survives a write/read cycle unchanged.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::central_config::ResidualReport;
use crate::error::{Error, Result};
use crate::geometry::{Body, Configuration, Point3};
use crate::scalar::Real;

/// `x` with 17 significant digits in scientific notation. The output is a
/// valid JSON number for finite `x`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfiguration {
    bodies: Vec<RawBody>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBody {
    mass: f64,
    position: [f64; 3],
}

pub fn configuration_to_json<T: Real>(config: &Configuration<T>) -> String {
    let mut out = String::from("{\"bodies\": [");
    for (k, b) in config.bodies().iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        let p = b.position;
        let _ = write!(
            out,
            "{{\"mass\": {}, \"position\": [{}, {}, {}]}}",
            fmt_f64(b.mass.as_f64()),
            fmt_f64(p.x.as_f64()),
            fmt_f64(p.y.as_f64()),
            fmt_f64(p.z.as_f64()),
        );
    }
    out.push_str("]}\n");
    out
}

/// Parses and validates a configuration. Errors name the offending field,
/// e.g. `bodies[2].mass`.
pub fn configuration_from_json(text: &str) -> Result<Configuration<f64>> {
    let raw: RawConfiguration = serde_json::from_str(text).map_err(|e| {
        Error::format(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    if raw.bodies.len() < 2 {
        return Err(Error::format(
            "bodies",
            format!("need at least 2 bodies, got {}", raw.bodies.len()),
        ));
    }
    for (k, b) in raw.bodies.iter().enumerate() {
        if !(b.mass.is_finite() && b.mass > 0.0) {
            return Err(Error::format(
                format!("bodies[{k}].mass"),
                format!("must be a positive finite number, got {}", b.mass),
            ));
        }
        if let Some(i) = b.position.iter().position(|v| !v.is_finite()) {
            return Err(Error::format(
                format!("bodies[{k}].position[{i}]"),
                "must be finite",
            ));
        }
    }
    Configuration::new(
        raw.bodies
            .into_iter()
            .map(|b| Body::new(b.mass, Point3::from_array(b.position)))
            .collect(),
    )
}

pub fn read_configuration(path: impl AsRef<Path>) -> Result<Configuration<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    configuration_from_json(&text)
}

pub fn write_configuration<T: Real>(
    config: &Configuration<T>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, configuration_to_json(config)).map_err(|e| Error::io(path, e))
}

/// `{"lambda": …, "max_norm": …, "relative_max": …, "per_body": [[x, y, z], …]}`
pub fn report_to_json<T: Real>(report: &ResidualReport<T>) -> String {
    let num = |x: T| {
        let x = x.as_f64();
        if x.is_finite() {
            fmt_f64(x)
        } else {
            "null".to_string()
        }
    };
    let per_body: Vec<String> = report
        .per_body
        .iter()
        .map(|r| format!("[{}, {}, {}]", num(r.x), num(r.y), num(r.z)))
        .collect();
    format!(
        "{{\"lambda\": {}, \"max_norm\": {}, \"relative_max\": {}, \"per_body\": [{}]}}",
        num(report.lambda_used),
        num(report.max_norm),
        num(report.relative_max),
        per_body.join(", ")
    )
}
