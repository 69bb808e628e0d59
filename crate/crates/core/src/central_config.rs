//! Central-configuration residuals and the multiplier λ.
//!
//! A configuration is central when, for every body k,
//!
//! ```text
//! Σ_{j≠k} m_j m_k (q_j − q_k) / |q_j − q_k|³ = −λ m_k q_k
//! ```
//!
//! for a common λ, which for a centered configuration equals U / I. The
//! residual is the left side minus the right side. Summation over `j` runs in
//! ascending index order so that results are bit-reproducible.

use crate::error::{Error, Result};
use crate::geometry::{
    inertia, potential, regular_polygon, weighted_centroid, Body, Configuration, Point3,
};
use crate::scalar::Real;

/// Default bound on [`ResidualReport::relative_max`] for a CC verdict.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Largest `|Σ m_j q_j|` accepted by [`verify`].
pub const CENTROID_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport<T> {
    pub lambda_used: T,
    /// One residual vector per body, in configuration order.
    pub per_body: Vec<Point3<T>>,
    /// Largest Euclidean norm in `per_body`.
    pub max_norm: T,
    /// `max_norm` divided by the scale of the λ term, so that verdicts do not
    /// depend on the overall size of the configuration.
    pub relative_max: T,
}

impl<T: Real> ResidualReport<T> {
    fn from_vectors(lambda: T, per_body: Vec<Point3<T>>, scale: T) -> Self {
        let max_norm = per_body
            .iter()
            .map(|r| r.norm())
            .fold(T::zero(), |a, b| a.max(b));
        let relative_max = if max_norm == T::zero() {
            T::zero()
        } else if scale > T::zero() {
            max_norm / scale
        } else {
            T::infinity()
        };
        Self {
            lambda_used: lambda,
            per_body,
            max_norm,
            relative_max,
        }
    }

    pub fn norms(&self) -> Vec<T> {
        self.per_body.iter().map(|r| r.norm()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome<T> {
    pub is_cc: bool,
    /// `U / I`.
    pub lambda: T,
    pub report: ResidualReport<T>,
}

/// `Σ_{j≠k} m_j (q_j − q_k) / |q_j − q_k|³`, the gravitational pull on body k
/// per unit of its own mass.
pub(crate) fn pull_on<T: Real>(bodies: &[Body<T>], k: usize) -> Point3<T> {
    let qk = bodies[k].position;
    bodies
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .fold(Point3::zero(), |acc, (_, b)| {
            let d = b.position - qk;
            let r = d.norm();
            acc + d * (b.mass / (r * r * r))
        })
}

/// Per-body defect `Σ_{j≠k} m_j m_k (q_j − q_k)/|q_j − q_k|³ + λ m_k q_k`.
pub fn residual<T: Real>(config: &Configuration<T>, lambda: T) -> Result<ResidualReport<T>> {
    check_lambda(lambda)?;
    let bodies = config.bodies();
    let per_body: Vec<Point3<T>> = (0..bodies.len())
        .map(|k| {
            let b = bodies[k];
            pull_on(bodies, k) * b.mass + b.position * (lambda * b.mass)
        })
        .collect();
    let scale = lambda.abs()
        * bodies
            .iter()
            .map(|b| b.mass * b.position.norm())
            .fold(T::zero(), |a, b| a.max(b));
    Ok(ResidualReport::from_vectors(lambda, per_body, scale))
}

/// Per-body defect of the mass-normalized form
/// `Σ_{j≠k} m_j (1/|q_j − q_k|³ − λ/M)(q_j − q_k)` with `M` the total mass.
///
/// For a centered configuration this equals [`residual`] divided by `m_k`.
pub fn residual_normalized<T: Real>(
    config: &Configuration<T>,
    lambda: T,
) -> Result<ResidualReport<T>> {
    check_lambda(lambda)?;
    let bodies = config.bodies();
    let lambda_over_mass = lambda / config.total_mass();
    let per_body: Vec<Point3<T>> = (0..bodies.len())
        .map(|k| {
            let qk = bodies[k].position;
            bodies.iter().enumerate().filter(|&(j, _)| j != k).fold(
                Point3::zero(),
                |acc, (_, b)| {
                    let d = b.position - qk;
                    let r = d.norm();
                    acc + d * (b.mass * (T::one() / (r * r * r) - lambda_over_mass))
                },
            )
        })
        .collect();
    let scale = lambda.abs()
        * bodies
            .iter()
            .map(|b| b.position.norm())
            .fold(T::zero(), |a, b| a.max(b));
    Ok(ResidualReport::from_vectors(lambda, per_body, scale))
}

/// Decides CC status at `λ = U / I`. The configuration must already be
/// centered; it is never recentered here.
pub fn verify<T: Real>(config: &Configuration<T>, tol: T) -> Result<VerifyOutcome<T>> {
    if !(tol.is_finite() && tol > T::zero()) {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let centroid = weighted_centroid(config).norm();
    let moment_scale: T = config
        .bodies()
        .iter()
        .map(|b| b.mass * b.position.norm())
        .sum();
    let centroid_tol = T::lit(CENTROID_TOLERANCE).max(T::epsilon() * T::lit(8.0) * moment_scale);
    if !(centroid <= centroid_tol) {
        return Err(Error::NotCentered {
            norm: centroid.as_f64(),
        });
    }
    let lambda = potential(config) / inertia(config);
    let report = residual(config, lambda)?;
    Ok(VerifyOutcome {
        is_cc: report.relative_max <= tol,
        lambda,
        report,
    })
}

/// The λ that best zeroes body `k`'s residual on its own: the projection of
/// the pull onto the body's position, `−(pull · q_k) / |q_k|²`.
pub fn lambda_from_body<T: Real>(config: &Configuration<T>, k: usize) -> Result<T> {
    let bodies = config.bodies();
    let body = bodies
        .get(k)
        .ok_or_else(|| Error::invalid(format!("body index {k} out of range")))?;
    let r2 = body.position.norm_squared();
    if r2 == T::zero() {
        return Err(Error::invalid(format!("body {k} sits at the origin")));
    }
    Ok(-pull_on(bodies, k).dot(body.position) / r2)
}

/// Multiplier of the unit-mass, unit-circumradius regular `n`-gon, read off
/// the x-component of the first vertex's equation.
pub fn lambda_star<T: Real>(n: usize) -> Result<T> {
    let bodies: Vec<Body<T>> = regular_polygon(n)?
        .into_iter()
        .map(|q| Body::new(T::one(), q))
        .collect();
    // vertex 0 is (1, 0, 0), so −λ* is the x-component of its pull
    Ok(-pull_on(&bodies, 0).x)
}

fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "lambda must be finite, got {lambda}"
        )))
    }
}
