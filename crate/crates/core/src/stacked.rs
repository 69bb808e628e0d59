//! Closed-form axis masses for the polygon-plus-axis family.
//!
//! By symmetry the `n + 4` equations of a stacked configuration reduce to
//! three: one polygon vertex, the inner axis body and the outer axis body.
//! Eliminating λ leaves the 2×2 system
//!
//! ```text
//! a11·M1 + a12·M2 = b1
//! a21·M1 + a22·M2 = b2
//! ```
//!
//! whose solution gives the axis masses, after which
//! `λ = λ* + 2·M1/(1+r1²)^{3/2} + 2·M2/(1+r2²)^{3/2}`.

use crate::central_config::lambda_star;
use crate::error::{Error, Result};
use crate::geometry::{build_stacked, Configuration, StackedParams};
use crate::scalar::Real;

/// `|det|` must exceed this multiple of `max(|a11·a22|, |a12·a21|)`.
pub const SINGULAR_THRESHOLD: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSystem<T> {
    pub n: usize,
    pub r1: T,
    pub r2: T,
    pub a11: T,
    pub a12: T,
    pub a21: T,
    pub a22: T,
    pub b1: T,
    pub b2: T,
    pub lambda_star: T,
}

impl<T: Real> CoefficientSystem<T> {
    pub fn determinant(&self) -> T {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// Numerator of `M1` in Cramer's rule.
    pub fn m1_numerator(&self) -> T {
        self.b1 * self.a22 - self.b2 * self.a12
    }

    /// Numerator of `M2` in Cramer's rule.
    pub fn m2_numerator(&self) -> T {
        self.b2 * self.a11 - self.b1 * self.a21
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassSolution<T> {
    pub m1: T,
    pub m2: T,
    pub lambda: T,
    pub determinant: T,
    pub feasible: bool,
}

impl<T: Real> MassSolution<T> {
    /// Assembles the `n + 4` body configuration. Fails unless both masses are
    /// positive.
    pub fn configuration(&self, coeffs: &CoefficientSystem<T>) -> Result<Configuration<T>> {
        build_stacked(&StackedParams::new(
            coeffs.n, coeffs.r1, coeffs.r2, self.m1, self.m2,
        )?)
    }
}

/// Outcome of the three ways of asking whether the masses come out positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    /// `det < 0`, `b1·a22 − b2·a12 < 0` and `b2·a11 − b1·a21 < 0`.
    pub sign_conditions_hold: bool,
    /// `a11/a21 < b1/b2 < a12/a22`.
    pub chain: Chain,
    pub masses_positive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chain {
    Holds,
    Violated,
    /// One of `a21`, `b2`, `a22` is zero.
    Indeterminate,
}

impl Chain {
    pub fn holds(self) -> bool {
        self == Chain::Holds
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Chain::Holds => "true",
            Chain::Violated => "false",
            Chain::Indeterminate => "indeterminate",
        }
    }
}

/// `1 / (1 + r²)^{3/2}`: inverse cubed distance from a unit-circle vertex to
/// the axis point at height `r`.
pub(crate) fn vertex_axis_inv_cube<T: Real>(r: T) -> T {
    let s = T::one() + r * r;
    T::one() / (s * s.sqrt())
}

pub fn coefficients<T: Real>(n: usize, r1: T, r2: T) -> Result<CoefficientSystem<T>> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "polygon count must be >= 2, got {n}"
        )));
    }
    if !(r1.is_finite() && r2.is_finite()) {
        return Err(Error::invalid("axis offsets must be finite"));
    }
    if r1 <= T::zero() {
        return Err(Error::invalid(format!("r1 must be positive, got {r1}")));
    }
    if r1 >= r2 {
        return Err(Error::Ordering {
            r1: r1.as_f64(),
            r2: r2.as_f64(),
        });
    }
    let ls = lambda_star::<T>(n)?;
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let nn = T::from_usize_lossy(n);
    let s1 = vertex_axis_inv_cube(r1);
    let s2 = vertex_axis_inv_cube(r2);
    let sum_sq = (r1 + r2) * (r1 + r2);
    let diff_sq = (r1 - r2) * (r1 - r2);

    Ok(CoefficientSystem {
        n,
        r1,
        r2,
        a11: T::one() / (four * r1 * r1 * r1) - two * s1,
        a12: T::one() / (sum_sq * r1) - T::one() / (diff_sq * r1) - two * s2,
        a21: T::one() / (sum_sq * r2) + T::one() / (diff_sq * r2) - two * s1,
        a22: T::one() / (four * r2 * r2 * r2) - two * s2,
        b1: ls - nn * s1,
        b2: ls - nn * s2,
        lambda_star: ls,
    })
}

pub fn solve_masses<T: Real>(coeffs: &CoefficientSystem<T>) -> Result<MassSolution<T>> {
    let c = coeffs;
    let det = c.determinant();
    let scale = (c.a11 * c.a22).abs().max((c.a12 * c.a21).abs());
    if !(det.abs() > T::lit(SINGULAR_THRESHOLD) * scale) || !det.is_finite() {
        let frob_sq = c.a11 * c.a11 + c.a12 * c.a12 + c.a21 * c.a21 + c.a22 * c.a22;
        return Err(Error::SingularSystem {
            determinant: det.as_f64(),
            condition: (frob_sq / det.abs()).as_f64(),
        });
    }
    let m1 = c.m1_numerator() / det;
    let m2 = c.m2_numerator() / det;
    let two = T::lit(2.0);
    let lambda = c.lambda_star
        + two * m1 * vertex_axis_inv_cube(c.r1)
        + two * m2 * vertex_axis_inv_cube(c.r2);
    Ok(MassSolution {
        m1,
        m2,
        lambda,
        determinant: det,
        feasible: m1 > T::zero() && m2 > T::zero(),
    })
}

pub fn feasible<T: Real>(coeffs: &CoefficientSystem<T>) -> FeasibilityVerdict {
    let c = coeffs;
    let zero = T::zero();
    let sign_conditions_hold =
        c.determinant() < zero && c.m1_numerator() < zero && c.m2_numerator() < zero;
    let chain = if c.a21 == zero || c.b2 == zero || c.a22 == zero {
        Chain::Indeterminate
    } else {
        let mid = c.b1 / c.b2;
        if c.a11 / c.a21 < mid && mid < c.a12 / c.a22 {
            Chain::Holds
        } else {
            Chain::Violated
        }
    };
    let masses_positive = solve_masses(c).map(|s| s.feasible).unwrap_or(false);
    FeasibilityVerdict {
        sign_conditions_hold,
        chain,
        masses_positive,
    }
}

/// Coefficients, masses and verdict for one `(n, r1, r2)`.
pub fn solve_stacked<T: Real>(
    n: usize,
    r1: T,
    r2: T,
) -> Result<(CoefficientSystem<T>, MassSolution<T>)> {
    let coeffs = coefficients(n, r1, r2)?;
    let solution = solve_masses(&coeffs)?;
    Ok((coeffs, solution))
}

/// Largest spread, over the four axis bodies, of their distances to the
/// `n` polygon vertices. Zero up to rounding for every stacked configuration.
pub fn axis_equidistance_spread<T: Real>(config: &Configuration<T>, n: usize) -> Result<T> {
    let bodies = config.bodies();
    if bodies.len() != n + 4 {
        return Err(Error::invalid(format!(
            "expected {} bodies for a stacked configuration, got {}",
            n + 4,
            bodies.len()
        )));
    }
    let mut spread = T::zero();
    for axis in &bodies[n..] {
        let (lo, hi) = bodies[..n]
            .iter()
            .map(|v| (v.position - axis.position).norm())
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), d| {
                (lo.min(d), hi.max(d))
            });
        spread = spread.max(hi - lo);
    }
    Ok(spread)
}
