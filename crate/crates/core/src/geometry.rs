//! Bodies, configurations and the scalar functionals over them.
//!
//! Units are nondimensional throughout: the gravitational constant is 1, the
//! polygon circumradius is 1 and every polygon body carries unit mass.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Pairwise distances below this are treated as a collision.
pub const COLLISION_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Point3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array([x, y, z]: [T; 3]) -> Self {
        Self::new(x, y, z)
    }

    pub fn cast<U: Real>(self) -> Point3<U> {
        Point3::new(
            U::lit(self.x.as_f64()),
            U::lit(self.y.as_f64()),
            U::lit(self.z.as_f64()),
        )
    }
}

impl<T: Real> Add for Point3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl<T: Real> Sub for Point3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl<T: Real> Mul<T> for Point3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Neg for Point3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Body<T> {
    pub mass: T,
    pub position: Point3<T>,
}

impl<T: Real> Body<T> {
    pub fn new(mass: T, position: Point3<T>) -> Self {
        Self { mass, position }
    }
}

/// An ordered list of at least two bodies with positive masses and no
/// collisions. The order is significant: downstream analyses index bodies
/// as polygon vertices first, then the inner and the outer axis pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration<T> {
    bodies: Vec<Body<T>>,
}

impl<T: Real> Configuration<T> {
    pub fn new(bodies: Vec<Body<T>>) -> Result<Self> {
        if bodies.len() < 2 {
            return Err(Error::invalid(format!(
                "a configuration needs at least 2 bodies, got {}",
                bodies.len()
            )));
        }
        for (k, body) in bodies.iter().enumerate() {
            if !(body.mass.is_finite() && body.mass > T::zero()) {
                return Err(Error::invalid(format!(
                    "body {k} has non-positive or non-finite mass {}",
                    body.mass
                )));
            }
            if !body.position.is_finite() {
                return Err(Error::invalid(format!(
                    "body {k} has a non-finite position"
                )));
            }
        }
        let threshold = T::lit(COLLISION_DISTANCE);
        for j in 0..bodies.len() {
            for k in (j + 1)..bodies.len() {
                let d = (bodies[j].position - bodies[k].position).norm();
                if d < threshold {
                    return Err(Error::Collision {
                        first: j,
                        second: k,
                        distance: d.as_f64(),
                    });
                }
            }
        }
        Ok(Self { bodies })
    }

    pub fn bodies(&self) -> &[Body<T>] {
        &self.bodies
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn into_bodies(self) -> Vec<Body<T>> {
        self.bodies
    }

    pub fn total_mass(&self) -> T {
        self.bodies.iter().map(|b| b.mass).sum()
    }

    /// Applies `f` to every position and revalidates.
    pub fn map_positions(&self, f: impl Fn(Point3<T>) -> Point3<T>) -> Result<Self> {
        Self::new(
            self.bodies
                .iter()
                .map(|b| Body::new(b.mass, f(b.position)))
                .collect(),
        )
    }
}

/// Parameters of the polygon-plus-axis family: `n` unit masses on the unit
/// circle in the xy-plane, masses `m1` at `(0,0,±r1)` and `m2` at `(0,0,±r2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackedParams<T> {
    pub n: usize,
    pub r1: T,
    pub r2: T,
    pub m1: T,
    pub m2: T,
}

impl<T: Real> StackedParams<T> {
    pub fn new(n: usize, r1: T, r2: T, m1: T, m2: T) -> Result<Self> {
        let params = Self { n, r1, r2, m1, m2 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(format!(
                "polygon count must be >= 2, got {}",
                self.n
            )));
        }
        if !(self.r1.is_finite() && self.r2.is_finite()) {
            return Err(Error::invalid("axis offsets must be finite"));
        }
        if self.r1 <= T::zero() {
            return Err(Error::invalid(format!(
                "r1 must be positive, got {}",
                self.r1
            )));
        }
        if (self.r2 - self.r1).abs() < T::lit(COLLISION_DISTANCE) {
            return Err(Error::Collision {
                first: self.n,
                second: self.n + 2,
                distance: (self.r2 - self.r1).abs().as_f64(),
            });
        }
        if self.r1 > self.r2 {
            return Err(Error::Ordering {
                r1: self.r1.as_f64(),
                r2: self.r2.as_f64(),
            });
        }
        for (name, m) in [("M1", self.m1), ("M2", self.m2)] {
            if !(m.is_finite() && m > T::zero()) {
                return Err(Error::invalid(format!("{name} must be positive, got {m}")));
            }
        }
        Ok(())
    }
}

/// Vertices of the regular `n`-gon on the unit circle, counterclockwise from
/// `(1, 0, 0)`.
pub fn regular_polygon<T: Real>(n: usize) -> Result<Vec<Point3<T>>> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "polygon count must be >= 2, got {n}"
        )));
    }
    Ok((0..n).map(|j| unit_root(j, n)).collect())
}

/// `exp(2πi j/n)` embedded in the xy-plane. Quarter-turn points are exact.
pub(crate) fn unit_root<T: Real>(j: usize, n: usize) -> Point3<T> {
    let j = j % n;
    if 4 * j == n {
        return Point3::new(T::zero(), T::one(), T::zero());
    }
    if 2 * j == n {
        return Point3::new(-T::one(), T::zero(), T::zero());
    }
    if 4 * j == 3 * n {
        return Point3::new(T::zero(), -T::one(), T::zero());
    }
    if j == 0 {
        return Point3::new(T::one(), T::zero(), T::zero());
    }
    let angle = T::TAU() * T::from_usize_lossy(j) / T::from_usize_lossy(n);
    Point3::new(angle.cos(), angle.sin(), T::zero())
}

/// Builds the `n + 4` body configuration in contractual order: polygon
/// vertices (mass 1), then `(0,0,r1)`, `(0,0,-r1)` with mass `m1`, then
/// `(0,0,r2)`, `(0,0,-r2)` with mass `m2`.
pub fn build_stacked<T: Real>(params: &StackedParams<T>) -> Result<Configuration<T>> {
    params.validate()?;
    let mut bodies: Vec<Body<T>> = regular_polygon(params.n)?
        .into_iter()
        .map(|q| Body::new(T::one(), q))
        .collect();
    let on_axis = |z: T| Point3::new(T::zero(), T::zero(), z);
    bodies.push(Body::new(params.m1, on_axis(params.r1)));
    bodies.push(Body::new(params.m1, on_axis(-params.r1)));
    bodies.push(Body::new(params.m2, on_axis(params.r2)));
    bodies.push(Body::new(params.m2, on_axis(-params.r2)));
    Configuration::new(bodies)
}

/// Newtonian potential `Σ_{j<k} m_j m_k / |q_j - q_k|`.
pub fn potential<T: Real>(config: &Configuration<T>) -> T {
    let b = config.bodies();
    let mut total = T::zero();
    for j in 0..b.len() {
        for k in (j + 1)..b.len() {
            total = total + b[j].mass * b[k].mass / (b[j].position - b[k].position).norm();
        }
    }
    total
}

/// Moment of inertia about the origin, `Σ m_k |q_k|²`.
pub fn inertia<T: Real>(config: &Configuration<T>) -> T {
    config
        .bodies()
        .iter()
        .map(|b| b.mass * b.position.norm_squared())
        .sum()
}

/// Mass-weighted position sum `Σ m_j q_j` (not divided by the total mass).
pub fn weighted_centroid<T: Real>(config: &Configuration<T>) -> Point3<T> {
    config
        .bodies()
        .iter()
        .fold(Point3::zero(), |acc, b| acc + b.position * b.mass)
}
