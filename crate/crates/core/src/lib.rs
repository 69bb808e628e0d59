//! Stacked central configurations of the Newtonian N+4-body problem.
//!
//! `N` unit masses sit on the unit circle in the xy-plane; two equal-mass
//! pairs sit at `(0, 0, ±r1)` and `(0, 0, ±r2)` on the perpendicular axis.
//! The crate builds these configurations, evaluates the central-configuration
//! equations, solves the axis masses in closed form, scans the `(r1, r2)`
//! plane for positive solutions and provides the circulant-matrix and
//! pair-difference machinery that constrains the masses.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the CLI and the file
//! formats use.

// NaN must fail validation, so `!(x > 0)` is preferred over `x <= 0`
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod central_config;
pub mod error;
pub mod geometry;
pub mod io;
pub mod region_scan;
pub mod scalar;
pub mod stacked;
pub mod symmetry;

pub use central_config::{
    lambda_from_body, lambda_star, residual, residual_normalized, verify, DEFAULT_TOLERANCE,
};
pub use error::{Error, Result};
pub use geometry::{build_stacked, inertia, potential, regular_polygon, weighted_centroid};
pub use region_scan::{band_summary, export_csv, scan, BandEstimate, RangeSpec, ScanOptions};
pub use scalar::Real;
pub use stacked::{coefficients, feasible, solve_masses, solve_stacked, Chain, FeasibilityVerdict};
pub use symmetry::{
    circulant_eigen, equal_mass_kernel_check, f_value, pair_system, polygon_constraint_matrix,
    KernelReport,
};

pub type Point3 = geometry::Point3<f64>;
pub type Body = geometry::Body<f64>;
pub type Configuration = geometry::Configuration<f64>;
pub type StackedParams = geometry::StackedParams<f64>;
pub type ResidualReport = central_config::ResidualReport<f64>;
pub type VerifyOutcome = central_config::VerifyOutcome<f64>;
pub type CoefficientSystem = stacked::CoefficientSystem<f64>;
pub type MassSolution = stacked::MassSolution<f64>;
pub type PairSystem = symmetry::PairSystem<f64>;
pub type CirculantMatrix = symmetry::CirculantMatrix<f64>;
pub type FeasibilityCell = region_scan::FeasibilityCell<f64>;
pub type ScanGrid = region_scan::ScanGrid<f64>;
