//! Checkable consequences of the mass-symmetry argument: the monotone
//! function `f`, the 2×2 system in the axis-pair mass differences, circulant
//! matrices and their Fourier eigenstructure, and the polygon constraint
//! matrix whose kernel carries the polygon masses.
//!
//! Planar positions are identified with complex numbers here: vertex `k` of
//! the unit polygon is `exp(2πi k/n)`, the same point that
//! [`regular_polygon`](crate::geometry::regular_polygon) returns as
//! `(cos, sin, 0)`.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{unit_root, COLLISION_DISTANCE};
use crate::scalar::Real;

/// `f(x) = x·(1/x³ − λ/M) = 1/x² − (λ/M)·x`.
pub fn f_value<T: Real>(x: T, lambda_over_m: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::invalid(format!("f needs x > 0, got {x}")));
    }
    Ok(T::one() / (x * x) - lambda_over_m * x)
}

/// `f'(x) = −2/x³ − λ/M`, negative for every `x > 0` when `λ/M ≥ 0`.
pub fn f_derivative<T: Real>(x: T, lambda_over_m: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::invalid(format!("f' needs x > 0, got {x}")));
    }
    Ok(-T::lit(2.0) / (x * x * x) - lambda_over_m)
}

/// Linear map taking the axis-pair mass differences
/// `(d12, d34) = (m_{N+1} − m_{N+2}, m_{N+3} − m_{N+4})` to the two
/// difference equations of the z-components. A stacked CC must have
/// `(d12, d34)` in its kernel.
///
/// Row 1: `[f(2r1), f(r1+r2) + f(r2−r1)]`.
/// Row 2: `[f(r2−r1) − f(r1+r2), −f(2r2)]`; the outer-pair equation is
/// naturally written against `m_{N+4} − m_{N+3}`, whose sign is folded into
/// the second column here so both rows act on the same ordered vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSystem<T> {
    pub alpha: [[T; 2]; 2],
    pub lambda_over_m: T,
    pub r1: T,
    pub r2: T,
}

impl<T: Real> PairSystem<T> {
    pub fn determinant(&self) -> T {
        let a = &self.alpha;
        a[0][0] * a[1][1] - a[0][1] * a[1][0]
    }

    pub fn apply(&self, d12: T, d34: T) -> [T; 2] {
        let a = &self.alpha;
        [a[0][0] * d12 + a[0][1] * d34, a[1][0] * d12 + a[1][1] * d34]
    }

    /// Largest entry magnitude squared, the natural scale of the determinant.
    pub fn entry_scale(&self) -> T {
        let m = self
            .alpha
            .iter()
            .flatten()
            .fold(T::zero(), |acc, v| acc.max(v.abs()));
        m * m
    }
}

pub fn pair_system<T: Real>(r1: T, r2: T, lambda_over_m: T) -> Result<PairSystem<T>> {
    if !(r1 > T::zero()) {
        return Err(Error::invalid(format!("r1 must be positive, got {r1}")));
    }
    if (r2 - r1).abs() < T::lit(COLLISION_DISTANCE) {
        return Err(Error::Collision {
            first: 0,
            second: 2,
            distance: (r2 - r1).abs().as_f64(),
        });
    }
    if r1 > r2 {
        return Err(Error::Ordering {
            r1: r1.as_f64(),
            r2: r2.as_f64(),
        });
    }
    if !(lambda_over_m > T::zero()) || !lambda_over_m.is_finite() {
        return Err(Error::invalid(format!(
            "lambda/M must be positive, got {lambda_over_m}"
        )));
    }
    let two = T::lit(2.0);
    let f = |x: T| f_value(x, lambda_over_m);
    let near = f(r2 - r1)?;
    let far = f(r1 + r2)?;
    Ok(PairSystem {
        alpha: [[f(two * r1)?, far + near], [near - far, -f(two * r2)?]],
        lambda_over_m,
        r1,
        r2,
    })
}

/// Square matrix whose row `i` is the first row cyclically shifted right by
/// `i`: entry `(i, j)` is `first_row[(j − i) mod n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantMatrix<T> {
    first_row: Vec<Complex<T>>,
}

impl<T: Real> CirculantMatrix<T> {
    pub fn new(first_row: Vec<Complex<T>>) -> Result<Self> {
        if first_row.is_empty() {
            return Err(Error::invalid(
                "circulant matrix needs a non-empty first row",
            ));
        }
        Ok(Self { first_row })
    }

    pub fn first_row(&self) -> &[Complex<T>] {
        &self.first_row
    }

    pub fn dim(&self) -> usize {
        self.first_row.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        let n = self.dim();
        self.first_row[(j + n - i % n) % n]
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex<T>>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::invalid(format!(
                "vector length {} does not match matrix dimension {n}",
                v.len()
            )));
        }
        Ok((0..n)
            .map(|i| {
                (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
                    acc + self.entry(i, j) * v[j]
                })
            })
            .collect())
    }
}

/// `exp(2πi m/n)`.
pub fn root_of_unity<T: Real>(m: usize, n: usize) -> Complex<T> {
    let p = unit_root::<T>(m, n);
    Complex::new(p.x, p.y)
}

/// Eigenvalue and eigenvector.
pub type Eigenpair<T> = (Complex<T>, Vec<Complex<T>>);

/// Eigenpairs of the circulant with the given first row. For `k = 0..n`,
/// with `ρ = exp(2πi k/n)`, the eigenvalue is `Σ_j first_row[j]·ρ^j` and the
/// eigenvector is `(ρ, ρ², …, ρⁿ)`.
pub fn circulant_eigen<T: Real>(first_row: &[Complex<T>]) -> Result<Vec<Eigenpair<T>>> {
    let n = first_row.len();
    if n == 0 {
        return Err(Error::invalid(
            "circulant matrix needs a non-empty first row",
        ));
    }
    Ok((0..n)
        .map(|k| {
            let value = first_row
                .iter()
                .enumerate()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (j, &a)| {
                    acc + a * root_of_unity::<T>(k * j % n, n)
                });
            let vector = (1..=n).map(|m| root_of_unity::<T>(k * m % n, n)).collect();
            (value, vector)
        })
        .collect())
}

/// The circulant matrix `C` of the polygon equations with the axis terms
/// dropped: `c_{k,j} = (1/|ω^{j−k} − 1|³ − λ/M)(ω^{j−k} − 1)` for `j ≠ k`,
/// zero on the diagonal, with `ω = exp(2πi/n)`. Equal polygon masses put the
/// all-ones vector in its kernel exactly when `λ/M = λ*(n)/n`.
pub fn polygon_constraint_matrix<T: Real>(
    n: usize,
    lambda_over_m: T,
) -> Result<CirculantMatrix<T>> {
    if n < 3 {
        return Err(Error::invalid(format!(
            "the polygon constraint matrix needs n >= 3, got {n}"
        )));
    }
    if !(lambda_over_m > T::zero()) || !lambda_over_m.is_finite() {
        return Err(Error::invalid(format!(
            "lambda/M must be positive, got {lambda_over_m}"
        )));
    }
    let one = Complex::new(T::one(), T::zero());
    let row = (0..n)
        .map(|j| {
            if j == 0 {
                return Complex::new(T::zero(), T::zero());
            }
            let d = root_of_unity::<T>(j, n) - one;
            let r = d.norm();
            d * (T::one() / (r * r * r) - lambda_over_m)
        })
        .collect();
    CirculantMatrix::new(row)
}

/// Numerical kernel of a circulant, from a singular value decomposition
/// carried out in double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelReport {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Count of singular values above `tol · σ_max`.
    pub rank: usize,
    /// Angle in radians between the all-ones vector and the right singular
    /// vector of the smallest singular value.
    pub ones_angle: f64,
    /// `|C·1| / (σ_max·√n)`; zero when the all-ones vector is in the kernel.
    pub ones_residual: f64,
}

impl KernelReport {
    pub fn kernel_dim(&self) -> usize {
        self.singular_values.len() - self.rank
    }
}

pub fn kernel_report<T: Real>(c: &CirculantMatrix<T>, tol: f64) -> KernelReport {
    let n = c.dim();
    let dense = DMatrix::from_fn(n, n, |i, j| {
        let e = c.entry(i, j);
        Complex::new(e.re.as_f64(), e.im.as_f64())
    });
    let svd = dense.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let sigma_max = singular_values[0];
    let rank = singular_values
        .iter()
        .filter(|&&s| s > tol * sigma_max)
        .count();

    // right singular vector of the smallest singular value: conjugate row of V^H
    let last = order[n - 1];
    let v: Vec<Complex<f64>> = (0..n).map(|j| v_t[(last, j)].conj()).collect();
    let mean = v.iter().sum::<Complex<f64>>() / n as f64;
    let parallel = mean.norm() * (n as f64).sqrt();
    let perpendicular = v.iter().map(|&z| (z - mean).norm_sqr()).sum::<f64>().sqrt();
    let ones_angle = perpendicular.atan2(parallel);

    let ones = nalgebra::DVector::from_element(n, Complex::new(1.0, 0.0));
    let product = (&dense * &ones).norm();
    let ones_residual = if sigma_max > 0.0 {
        product / (sigma_max * (n as f64).sqrt())
    } else {
        0.0
    };
    KernelReport {
        singular_values,
        rank,
        ones_angle,
        ones_residual,
    }
}

/// True iff the numerical kernel of `c` is one-dimensional and the all-ones
/// vector lies in it, both judged at relative tolerance `tol`.
pub fn equal_mass_kernel_check<T: Real>(c: &CirculantMatrix<T>, tol: f64) -> bool {
    let report = kernel_report(c, tol);
    report.kernel_dim() == 1 && report.ones_residual <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::central_config::lambda_star;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_value(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(f_value(1.0, 1.0).unwrap(), 0.0);
        assert_eq!(f_value(2.0, 0.25).unwrap(), 2.0 * (1.0 / 8.0 - 0.25));
        assert_eq!(f_value(2.0, 0.25).unwrap(), -0.25);
        assert!(f_value(0.0, 0.1).is_err());
        assert!(f_value(-1.0, 0.1).is_err());
    }

    #[test]
    fn pair_system_examples() {
        let p = pair_system(1.0f64, 2.0, 0.1).unwrap();
        assert!(p.determinant().abs() > 1e-3);
        assert_eq!(p.apply(0.0, 0.0), [0.0, 0.0]);
        // d12 = 0 with a regular system forces d34 = 0: the only solution of
        // α·(0, d34) = 0 is d34 = 0 because the second column is nonzero
        assert!(p.alpha[0][1] != 0.0 || p.alpha[1][1] != 0.0);
        assert!(matches!(
            pair_system(1.0, 1.0, 0.1),
            Err(Error::Collision { .. })
        ));
        assert!(matches!(
            pair_system(2.0, 1.0, 0.1),
            Err(Error::Ordering { .. })
        ));
        assert!(pair_system(1.0, 2.0, 0.0).is_err());
    }

    /// Brute-force z-components of the axis-body equations in the
    /// mass-normalized form, with four arbitrary axis masses.
    fn axis_z_equations(r1: f64, r2: f64, mu: f64, m: [f64; 4]) -> [f64; 4] {
        let z = [r1, -r1, r2, -r2];
        let mut out = [0.0; 4];
        for l in 0..4 {
            // polygon contribution is identical for the ± pair up to sign and
            // cancels in the differences; include it anyway
            let s = (1.0 + z[l] * z[l]).sqrt();
            let mut sum = 5.0 * (1.0 / (s * s * s) - mu) * (-z[l]);
            for j in 0..4 {
                if j != l {
                    let d = z[j] - z[l];
                    sum += m[j] * (1.0 / d.abs().powi(3) - mu) * d;
                }
            }
            out[l] = sum;
        }
        out
    }

    #[test]
    fn pair_system_matches_brute_force_differences() {
        let (r1, r2, mu) = (0.8, 1.7, 0.3);
        let p = pair_system(r1, r2, mu).unwrap();
        let m = [0.9, 0.4, 1.3, 2.2];
        let e = axis_z_equations(r1, r2, mu, m);
        let [row1, row2] = p.apply(m[0] - m[1], m[2] - m[3]);
        // the inner pair's equations sum to row 1; the outer pair's to −row 2
        assert_abs_diff_eq!(e[0] + e[1], row1, epsilon = 1e-12);
        assert_abs_diff_eq!(e[2] + e[3], -row2, epsilon = 1e-12);
    }

    #[test]
    fn circulant_entry_layout() {
        let m = CirculantMatrix::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        let d = m.to_dense();
        assert_eq!(d[0], vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(d[1], vec![c(3.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(d[2], vec![c(2.0, 0.0), c(3.0, 0.0), c(1.0, 0.0)]);
        assert!(CirculantMatrix::<f64>::new(vec![]).is_err());
        assert!(m.mul_vec(&[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn eigen_examples() {
        // characteristic polynomial of [[0,1,1],[1,0,1],[1,1,0]] is
        // -(x-2)(x+1)^2
        let e = circulant_eigen(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let mut re: Vec<f64> = e.iter().map(|(v, _)| v.re).collect();
        re.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(re[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(re[1], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(re[2], 2.0, epsilon = 1e-15);
        assert!(e.iter().all(|(v, _)| v.im.abs() < 1e-15));

        let scalar =
            circulant_eigen(&[c(2.5, -1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(scalar.iter().all(|(v, _)| *v == c(2.5, -1.0)));

        let first = &circulant_eigen(&[c(1.0, 0.0); 5]).unwrap()[0].1;
        assert!(first.iter().all(|z| *z == c(1.0, 0.0)));

        assert!(circulant_eigen::<f64>(&[]).is_err());
    }

    #[test]
    fn constraint_matrix_structure() {
        let m = polygon_constraint_matrix(6, 0.3).unwrap();
        for k in 0..6 {
            assert_eq!(m.entry(k, k), c(0.0, 0.0));
        }
        for k in 1..6 {
            for j in 1..6 {
                assert_eq!(m.entry(k - 1, j - 1), m.entry(k, j));
            }
        }
        let sq = polygon_constraint_matrix(4, 0.2).unwrap();
        for j in 1..4 {
            assert_abs_diff_eq!(
                sq.entry(0, j).norm(),
                sq.entry(0, 4 - j).norm(),
                epsilon = 1e-15
            );
        }
        assert!(polygon_constraint_matrix(2, 0.2).is_err());
        assert!(polygon_constraint_matrix(3, 0.0).is_err());
    }

    #[test]
    fn ones_in_kernel_exactly_at_polygon_multiplier() {
        for n in 3..=12 {
            let mu = lambda_star::<f64>(n).unwrap() / n as f64;
            let m = polygon_constraint_matrix(n, mu).unwrap();
            let prod = m.mul_vec(&vec![c(1.0, 0.0); n]).unwrap();
            assert!(prod.iter().all(|z| z.norm() < 1e-12), "n = {n}");

            let off = polygon_constraint_matrix(n, mu * 1.1).unwrap();
            let report = kernel_report(&off, 1e-8);
            assert!(report.ones_residual > 1e-8);
            assert!(!equal_mass_kernel_check(&off, 1e-8));
        }
    }

    #[test]
    fn zero_circulant_has_full_kernel() {
        let z = CirculantMatrix::new(vec![c(0.0, 0.0); 3]).unwrap();
        let r = kernel_report(&z, 1e-8);
        assert_eq!(r.kernel_dim(), 3);
        assert!(!equal_mass_kernel_check(&z, 1e-8));
    }

    #[test]
    fn rank_one_deficient_circulant_passes_check() {
        // first row (2, -1, -1): eigenvalue 0 on the all-ones direction, 3 elsewhere
        let m = CirculantMatrix::new(vec![c(2.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let r = kernel_report(&m, 1e-10);
        assert_eq!(r.rank, 2);
        assert!(r.ones_angle < 1e-12);
        assert!(equal_mass_kernel_check(&m, 1e-10));
    }
}
