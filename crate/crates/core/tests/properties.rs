use ccstack::central_config::{residual, residual_normalized};
use ccstack::geometry::{inertia, potential, weighted_centroid};
use ccstack::symmetry::{
    circulant_eigen, f_derivative, f_value, polygon_constraint_matrix, CirculantMatrix,
};
use ccstack::{Body, Configuration, Point3};
use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;

fn body_strategy() -> impl Strategy<Value = (f64, [f64; 3])> {
    (0.2f64..4.0, prop::array::uniform3(-2.0f64..2.0))
}

/// Random configuration shifted so that `Σ m_j q_j = 0`.
fn centered_config(max_bodies: usize) -> impl Strategy<Value = Configuration> {
    prop::collection::vec(body_strategy(), 2..=max_bodies).prop_filter_map(
        "bodies too close",
        |raw| {
            let total: f64 = raw.iter().map(|(m, _)| m).sum();
            let mut shift = [0.0; 3];
            for (m, p) in &raw {
                for i in 0..3 {
                    shift[i] += m * p[i] / total;
                }
            }
            let bodies: Vec<Body> = raw
                .iter()
                .map(|(m, p)| {
                    Body::new(
                        *m,
                        Point3::new(p[0] - shift[0], p[1] - shift[1], p[2] - shift[2]),
                    )
                })
                .collect();
            for j in 0..bodies.len() {
                for k in (j + 1)..bodies.len() {
                    if (bodies[j].position - bodies[k].position).norm() < 0.05 {
                        return None;
                    }
                }
            }
            Configuration::new(bodies).ok()
        },
    )
}

/// Rodrigues rotation about a (normalized) axis.
fn rotation(axis: [f64; 3], angle: f64) -> impl Fn(Point3) -> Point3 {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let k = Point3::new(axis[0] / n, axis[1] / n, axis[2] / n);
    let (s, c) = angle.sin_cos();
    move |v: Point3| {
        let cross = Point3::new(
            k.y * v.z - k.z * v.y,
            k.z * v.x - k.x * v.z,
            k.x * v.y - k.y * v.x,
        );
        v * c + cross * s + k * (k.dot(v) * (1.0 - c))
    }
}

fn axis_strategy() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-1.0f64..1.0).prop_filter("degenerate axis", |a| {
        a.iter().map(|x| x * x).sum::<f64>() > 1e-2
    })
}

fn rel_close(a: Point3, b: Point3, scale: f64, tol: f64) -> bool {
    (a - b).norm() <= tol * scale.max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn potential_and_inertia_ignore_body_order(config in centered_config(8), seed in any::<u64>()) {
        let mut bodies = config.bodies().to_vec();
        // deterministic shuffle from the seed
        let mut state = seed | 1;
        for i in (1..bodies.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            bodies.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let shuffled = Configuration::new(bodies).unwrap();
        let u = potential(&config);
        let i = inertia(&config);
        prop_assert!((potential(&shuffled) - u).abs() <= 1e-12 * u);
        prop_assert!((inertia(&shuffled) - i).abs() <= 1e-12 * i);
    }

    #[test]
    fn potential_translation_invariant(config in centered_config(8), t in prop::array::uniform3(-5.0f64..5.0)) {
        let shift = Point3::new(t[0], t[1], t[2]);
        let moved = config.map_positions(|q| q + shift).unwrap();
        let u = potential(&config);
        prop_assert!((potential(&moved) - u).abs() <= 1e-12 * u);
    }

    #[test]
    fn inertia_rotation_invariant(config in centered_config(8), axis in axis_strategy(), angle in 0.0f64..6.3) {
        let rotated = config.map_positions(rotation(axis, angle)).unwrap();
        let i = inertia(&config);
        prop_assert!((inertia(&rotated) - i).abs() <= 1e-12 * i);
    }

    #[test]
    fn residual_forms_agree_after_mass_normalization(config in centered_config(8), lambda in 0.01f64..5.0) {
        let full = residual(&config, lambda).unwrap();
        let normalized = residual_normalized(&config, lambda).unwrap();
        for (k, b) in config.bodies().iter().enumerate() {
            let a = full.per_body[k] * (1.0 / b.mass);
            let n = normalized.per_body[k];
            let scale = a.norm().max(n.norm()).max(lambda * b.position.norm());
            prop_assert!(rel_close(a, n, scale, 1e-12), "body {k}: {a:?} vs {n:?}");
        }
    }

    #[test]
    fn residual_scale_covariance(config in centered_config(8), lambda in 0.01f64..5.0) {
        let base = residual(&config, lambda).unwrap();
        for c in [0.5, 2.0, 10.0] {
            let scaled = config.map_positions(|q| q * c).unwrap();
            let r = residual(&scaled, lambda / (c * c * c)).unwrap();
            for (k, b) in config.bodies().iter().enumerate() {
                let expected = base.per_body[k] * (1.0 / (c * c));
                let scale = expected.norm().max(lambda * b.mass * b.position.norm() / (c * c));
                prop_assert!(rel_close(r.per_body[k], expected, scale, 1e-12), "c = {c}, body {k}");
            }
        }
    }

    #[test]
    fn residual_rotates_with_configuration(config in centered_config(8), lambda in 0.01f64..5.0,
                                           axis in axis_strategy(), angle in 0.0f64..6.3) {
        let rot = rotation(axis, angle);
        let base = residual(&config, lambda).unwrap();
        let rotated = residual(&config.map_positions(&rot).unwrap(), lambda).unwrap();
        let scale = base.max_norm.max(1.0);
        prop_assert!((rotated.max_norm - base.max_norm).abs() <= 1e-13 * scale * 10.0);
        for k in 0..config.len() {
            prop_assert!(rel_close(rotated.per_body[k], rot(base.per_body[k]), scale, 1e-12));
        }
    }

    #[test]
    fn f_strictly_decreasing(x1 in 0.01f64..20.0, dx in 1e-6f64..20.0, mu in 0.0f64..5.0) {
        let x2 = x1 + dx;
        prop_assert!(f_value(x1, mu).unwrap() > f_value(x2, mu).unwrap());
        prop_assert!(f_derivative(x1, mu).unwrap() < 0.0);
    }

    #[test]
    fn f_derivative_matches_central_difference(x in 0.05f64..20.0, mu in 0.0f64..5.0) {
        let h = 1e-5 * x;
        let fd = (f_value(x + h, mu).unwrap() - f_value(x - h, mu).unwrap()) / (2.0 * h);
        let d = f_derivative(x, mu).unwrap();
        prop_assert!((fd - d).abs() <= 1e-6 * d.abs(), "{fd} vs {d}");
    }

    #[test]
    fn f_separates_gap_and_sum(r1 in 0.01f64..10.0, gap in 1e-4f64..10.0, mu in 0.0f64..5.0) {
        let r2 = r1 + gap;
        prop_assert_ne!(f_value(r2 - r1, mu).unwrap(), f_value(r2 + r1, mu).unwrap());
    }

    #[test]
    fn circulant_eigenpairs(row in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..=16)) {
        let row: Vec<Complex<f64>> = row.into_iter().map(|(re, im)| Complex::new(re, im)).collect();
        let m = CirculantMatrix::new(row.clone()).unwrap();
        let pairs = circulant_eigen(&row).unwrap();
        let trace: Complex<f64> = pairs.iter().map(|(v, _)| *v).sum();
        let n = row.len() as f64;
        prop_assert!((trace - row[0] * n).norm() <= 1e-12 * n * 10.0);
        for (value, vector) in &pairs {
            let av = m.mul_vec(vector).unwrap();
            for (a, v) in av.iter().zip(vector) {
                prop_assert!((a - value * v).norm() <= 1e-12 * n * 3.0 * 10.0);
            }
        }
    }

    #[test]
    fn circulant_matches_dense_eigensolver(row in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..=6)) {
        let row: Vec<Complex<f64>> = row.into_iter().map(|(re, im)| Complex::new(re, im)).collect();
        let n = row.len();
        let m = CirculantMatrix::new(row.clone()).unwrap();
        let dense = DMatrix::from_fn(n, n, |i, j| m.entry(i, j));
        let brute = dense.schur().eigenvalues().expect("complex Schur form is triangular");
        let mut fourier: Vec<Complex<f64>> = circulant_eigen(&row).unwrap().into_iter().map(|(v, _)| v).collect();
        // greedy nearest matching is enough to bound the multiset distance
        for b in brute.iter() {
            let (idx, d) = fourier
                .iter()
                .enumerate()
                .map(|(i, f)| (i, (f - b).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            prop_assert!(d <= 1e-10, "eigenvalue {b} unmatched (closest {d})");
            fourier.swap_remove(idx);
        }
    }

    #[test]
    fn constraint_matrix_shift_identity(n in 3usize..40, mu in 0.01f64..3.0) {
        let c = polygon_constraint_matrix(n, mu).unwrap();
        for k in 1..=n {
            for j in 1..=n {
                prop_assert_eq!(c.entry(k - 1, j - 1), c.entry(k % n, j % n));
            }
        }
    }
}

#[test]
fn centered_strategy_really_centers() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    for _ in 0..50 {
        let c = centered_config(8).new_tree(&mut runner).unwrap().current();
        assert!(weighted_centroid(&c).norm() < 1e-12);
    }
}
