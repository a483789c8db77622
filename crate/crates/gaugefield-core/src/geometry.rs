//! Coordinate types, uniform grids, and closed polyline paths.
//!
//! Everything downstream (sources, quadrature, circulation) works in these
//! terms. All types are plain immutable values.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("circle loop needs at least 8 segments, got {0}")]
    TooFewSegments(usize),
    #[error("circle loop radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("circle loop axis must be a nonzero vector")]
    ZeroAxis,
    #[error("winding must be nonzero")]
    ZeroWinding,
    #[error("closed path needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("consecutive path vertices at index {0} coincide")]
    DegenerateSegment(usize),
    #[error("closed path must not repeat its first vertex at the end")]
    ExplicitClosure,
    #[error("grid spacing must be strictly positive")]
    NonPositiveSpacing,
    #[error("grid needs at least 2 points per axis")]
    GridTooSmall,
}

/// Cartesian point or vector, in any consistent length unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit vector along `self`; `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Cylindrical radius about the z-axis.
    pub fn rho(self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Cylindrical point: `rho >= 0`, `theta` normalized into `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylPoint {
    pub rho: f64,
    pub theta: f64,
    pub z: f64,
}

impl CylPoint {
    /// Construct with `theta` wrapped into `(-pi, pi]`. Panics on `rho < 0`.
    pub fn new(rho: f64, theta: f64, z: f64) -> Self {
        assert!(rho >= 0.0, "cylindrical radius must be nonnegative");
        CylPoint { rho, theta: wrap_angle(theta), z }
    }
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t <= -PI {
        t += TAU;
    } else if t > PI {
        t -= TAU;
    }
    t
}

/// `(rho, theta, z) -> (rho cos theta, rho sin theta, z)`.
pub fn cyl_to_cart(p: CylPoint) -> Vec3 {
    Vec3::new(p.rho * p.theta.cos(), p.rho * p.theta.sin(), p.z)
}

/// Inverse of [`cyl_to_cart`]. On the axis (`rho = 0`) theta is reported as 0.
pub fn cart_to_cyl(v: Vec3) -> CylPoint {
    let rho = v.rho();
    let theta = if rho > 0.0 { wrap_angle(v.y.atan2(v.x)) } else { 0.0 };
    CylPoint { rho, theta, z: v.z }
}

/// Axis-aligned uniform grid: `dims` sample points per axis spaced by
/// `spacing` starting at `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Vec3,
    pub spacing: [f64; 3],
    pub dims: [usize; 3],
}

impl GridSpec {
    pub fn new(origin: Vec3, spacing: [f64; 3], dims: [usize; 3]) -> Result<Self, GeometryError> {
        if spacing.iter().any(|&h| !(h > 0.0)) {
            return Err(GeometryError::NonPositiveSpacing);
        }
        if dims.iter().any(|&n| n < 2) {
            return Err(GeometryError::GridTooSmall);
        }
        Ok(GridSpec { origin, spacing, dims })
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing[0] * self.spacing[1] * self.spacing[2]
    }

    /// Grid sample points `origin + i * spacing`.
    pub fn points(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.index_iter()
            .map(move |[i, j, k]| {
                Vec3::new(
                    self.origin.x + i as f64 * self.spacing[0],
                    self.origin.y + j as f64 * self.spacing[1],
                    self.origin.z + k as f64 * self.spacing[2],
                )
            })
    }

    /// Cell midpoints `origin + (i + 1/2) * spacing`; the grid covers
    /// `dims[a] * spacing[a]` along each axis when used as integration cells.
    pub fn cell_centers(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.index_iter()
            .map(move |[i, j, k]| {
                Vec3::new(
                    self.origin.x + (i as f64 + 0.5) * self.spacing[0],
                    self.origin.y + (j as f64 + 0.5) * self.spacing[1],
                    self.origin.z + (k as f64 + 0.5) * self.spacing[2],
                )
            })
    }

    fn index_iter(&self) -> impl Iterator<Item = [usize; 3]> {
        let [nx, ny, nz] = self.dims;
        (0..nx).flat_map(move |i| (0..ny).flat_map(move |j| (0..nz).map(move |k| [i, j, k])))
    }
}

/// Closed loop in space: the segment from the last vertex back to the first
/// is implicit, so vertices never repeat.
#[derive(Debug, Clone, PartialEq)]
pub struct PolylinePath {
    vertices: Vec<Vec3>,
}

impl PolylinePath {
    pub fn closed(vertices: Vec<Vec3>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        if vertices[0] == vertices[vertices.len() - 1] {
            return Err(GeometryError::ExplicitClosure);
        }
        for i in 0..vertices.len() {
            let j = (i + 1) % vertices.len();
            if vertices[i] == vertices[j] {
                return Err(GeometryError::DegenerateSegment(i));
            }
        }
        Ok(PolylinePath { vertices })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len()
    }

    /// Closed segment list: `(v_i, v_{i+1 mod n})`.
    pub fn segments(&self) -> impl Iterator<Item = (Vec3, Vec3)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Same loop traversed in the opposite direction.
    pub fn reversed(&self) -> PolylinePath {
        let mut v = self.vertices.clone();
        v.reverse();
        PolylinePath { vertices: v }
    }

    pub fn perimeter(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }
}

/// Regular n-gon approximating a circle, counter-clockwise about `axis`.
pub fn circle_loop(
    center: Vec3,
    radius: f64,
    axis: Vec3,
    n_segments: usize,
) -> Result<PolylinePath, GeometryError> {
    wound_circle_loop(center, radius, axis, n_segments, 1)
}

/// Closed loop winding `winding` times about `axis` (sign = orientation),
/// with `segments_per_turn` vertices per turn.
pub fn wound_circle_loop(
    center: Vec3,
    radius: f64,
    axis: Vec3,
    segments_per_turn: usize,
    winding: i32,
) -> Result<PolylinePath, GeometryError> {
    if segments_per_turn < 8 {
        return Err(GeometryError::TooFewSegments(segments_per_turn));
    }
    if !(radius > 0.0) {
        return Err(GeometryError::NonPositiveRadius(radius));
    }
    if winding == 0 {
        return Err(GeometryError::ZeroWinding);
    }
    let w = axis.normalized().ok_or(GeometryError::ZeroAxis)?;
    let (u, v) = plane_basis(w);
    let n = segments_per_turn * winding.unsigned_abs() as usize;
    let total = TAU * winding as f64;
    let vertices = (0..n)
        .map(|i| {
            let phi = total * i as f64 / n as f64;
            center + u * (radius * phi.cos()) + v * (radius * phi.sin())
        })
        .collect();
    PolylinePath::closed(vertices)
}

/// Right-handed orthonormal basis `(u, v)` for the plane normal to unit `w`.
fn plane_basis(w: Vec3) -> (Vec3, Vec3) {
    let seed = if w.x.abs() < 0.9 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
    let u = w.cross(seed).normalized().expect("seed not parallel to axis");
    let v = w.cross(u);
    (u, v)
}
