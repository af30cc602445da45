//! Point algebra, the source/interpolation inversion map, angular
//! separations, and the semi-regular ring gridding of a sphere.

use thiserror::Error;

use crate::linalg::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("ring grid needs n_theta >= 2, got {0}")]
    TooFewRings(usize),
    #[error("ring grid radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("separation statistics need at least 2 points, got {0}")]
    TooFewPoints(usize),
}

/// Cartesian 3-vector. Generic over the scalar backend so the kernel
/// closed forms can run in extended precision or with dual numbers;
/// plain geometry uses `Vec3<f64>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec3<S = f64> {
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Scalar> Vec3<S> {
    #[inline]
    pub fn new(x: S, y: S, z: S) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Vec3::new(S::zero(), S::zero(), S::zero())
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> S {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> S {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn scale(&self, s: S) -> Self {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    #[inline]
    pub fn add(&self, other: &Self) -> Self {
        Vec3::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }

    #[inline]
    pub fn sub(&self, other: &Self) -> Self {
        Vec3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn is_zero(&self) -> bool {
        self.x == S::zero() && self.y == S::zero() && self.z == S::zero()
    }
}

impl Vec3<f64> {
    /// Convert the coordinates into another scalar backend (exact).
    pub fn lift<S: Scalar>(&self) -> Vec3<S> {
        Vec3::new(
            S::from_f64(self.x),
            S::from_f64(self.y),
            S::from_f64(self.z),
        )
    }
}

/// Map a point to its inversion partner through the unit sphere,
/// `x / |x|^2`. Exterior source points pair with interior interpolation
/// points and vice versa; the map is an involution and fixes the unit
/// sphere pointwise.
pub fn kelvin_map<S: Scalar>(x: &Vec3<S>) -> Result<Vec3<S>, GeometryError> {
    let n2 = x.norm_sq();
    if n2 == S::zero() {
        return Err(GeometryError::ZeroVector);
    }
    Ok(x.scale(S::one() / n2))
}

/// Great-circle angle between the directions of `a` and `b`, in radians.
/// The cosine is clamped to `[-1, 1]` before `acos`.
pub fn angular_separation(a: &Vec3, b: &Vec3) -> Result<f64, GeometryError> {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    let c = (a.dot(b) / (na * nb)).clamp(-1.0, 1.0);
    Ok(c.acos())
}

/// A ring-gridded set of points on a sphere.
#[derive(Clone, Debug)]
pub struct PointConfig {
    radius: f64,
    n_theta: usize,
    points: Vec<Vec3>,
}

impl PointConfig {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Separation statistics of a point configuration, in radians.
///
/// `min_sep` is the smallest angle between any two distinct points;
/// `max_min_sep` is the largest nearest-neighbor angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparationStats {
    pub min_sep: f64,
    pub max_min_sep: f64,
}

/// Grid a sphere of the given radius with `n_theta` latitude rings
/// (poles included) keeping a minimum angular separation of
/// `delta_theta = pi / (n_theta - 1)` between points.
///
/// The first ring is the single north pole, the last the single south
/// pole. A ring at colatitude `theta_n = (n-1) delta_theta` gets the
/// largest number of equally spaced points whose adjacent separation is
/// still at least `delta_theta`, with longitudes starting at zero.
/// Points are emitted ring by ring, north pole first, so the ordering is
/// reproducible.
///
/// `n_theta = 2` degenerates to the two poles alone; this is allowed.
pub fn ring_grid(n_theta: usize, radius: f64) -> Result<PointConfig, GeometryError> {
    if n_theta < 2 {
        return Err(GeometryError::TooFewRings(n_theta));
    }
    if !(radius > 0.0) {
        return Err(GeometryError::NonPositiveRadius(radius));
    }

    let delta_theta = std::f64::consts::PI / (n_theta - 1) as f64;
    let mut points = vec![Vec3::new(0.0, 0.0, radius)];

    for n in 2..n_theta {
        let theta = (n - 1) as f64 * delta_theta;
        let n_phi = ring_capacity(theta, delta_theta);
        let delta_phi = 2.0 * std::f64::consts::PI / n_phi as f64;
        for m in 0..n_phi {
            let phi = m as f64 * delta_phi;
            points.push(Vec3::new(
                radius * theta.sin() * phi.cos(),
                radius * theta.sin() * phi.sin(),
                radius * theta.cos(),
            ));
        }
    }

    points.push(Vec3::new(0.0, 0.0, -radius));
    Ok(PointConfig {
        radius,
        n_theta,
        points,
    })
}

/// Largest number of equally spaced points on the ring at colatitude
/// `theta` whose adjacent pairs stay at least `delta_theta` apart.
/// Searched linearly from 1; the adjacent separation is monotone
/// decreasing in the count, so the first violation ends the search.
/// Rings whose spacing lands exactly on the bound (the equator of an
/// odd grid) must not be rejected by one ulp, hence the 1e-12 slack.
fn ring_capacity(theta: f64, delta_theta: f64) -> usize {
    let mut n_phi = 1;
    loop {
        let candidate = n_phi + 1;
        let delta_phi = 2.0 * std::f64::consts::PI / candidate as f64;
        let a = Vec3::new(theta.sin(), 0.0, theta.cos());
        let b = Vec3::new(
            theta.sin() * delta_phi.cos(),
            theta.sin() * delta_phi.sin(),
            theta.cos(),
        );
        let sep = angular_separation(&a, &b).expect("ring points are nonzero");
        if sep < delta_theta - 1e-12 {
            return n_phi;
        }
        n_phi = candidate;
    }
}

/// Minimum pairwise separation and maximum nearest-neighbor separation
/// over a configuration. Quadratic in the point count.
pub fn separation_stats(config: &PointConfig) -> Result<SeparationStats, GeometryError> {
    let pts = config.points();
    if pts.len() < 2 {
        return Err(GeometryError::TooFewPoints(pts.len()));
    }

    let mut min_sep = f64::INFINITY;
    let mut max_min_sep = 0.0_f64;
    for (k, p) in pts.iter().enumerate() {
        let mut nearest = f64::INFINITY;
        for (j, q) in pts.iter().enumerate() {
            if j == k {
                continue;
            }
            let sep = angular_separation(p, q).expect("grid points are nonzero");
            nearest = nearest.min(sep);
        }
        min_sep = min_sep.min(nearest);
        max_min_sep = max_min_sep.max(nearest);
    }
    Ok(SeparationStats {
        min_sep,
        max_min_sep,
    })
}
