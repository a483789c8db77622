//! Circulation, winding, enclosed flux, and the Aharonov-Bohm phase.
//!
//! Circulation is a closed segment sum. Providers integrate each segment via
//! [`LineField::segment_integral`]; the default samples the field at the
//! segment midpoint, while gauge-transformed providers integrate their
//! gradient part by exact endpoint differences of the gauge function, so
//! gauge invariance of the circulation holds to machine precision instead of
//! being a quadrature race.

use thiserror::Error;

use crate::geometry::{PolylinePath, Vec3};
use crate::sources::SolenoidParams;

#[derive(Debug, Error, PartialEq)]
pub enum AbPhaseError {
    #[error("field evaluation produced a non-finite value on segment {0}")]
    NonFiniteSegment(usize),
    #[error("path touches or crosses the winding axis near vertex {0}")]
    AxisIntersection(usize),
    #[error("path vertex {0} lies within the margin of the solenoid wall")]
    PathNearWall(usize),
    #[error("path spans the solenoid interior but is not planar")]
    NonPlanarInteriorPath,
    #[error("path needs at least 8 segments for a phase, got {0}")]
    TooFewSegments(usize),
}

/// A vector field that can be line-integrated along straight segments.
pub trait LineField {
    fn at(&self, r: Vec3, t: f64) -> Vec3;

    /// Line integral along the segment from `a` to `b`; default is the
    /// midpoint rule, one evaluation per segment.
    fn segment_integral(&self, a: Vec3, b: Vec3, t: f64) -> f64 {
        self.at((a + b) * 0.5, t).dot(b - a)
    }
}

/// Adapter so plain closures `(r, t) -> Vec3` act as a [`LineField`].
pub struct FieldFn<F>(pub F);

impl<F: Fn(Vec3, f64) -> Vec3> LineField for FieldFn<F> {
    fn at(&self, r: Vec3, t: f64) -> Vec3 {
        (self.0)(r, t)
    }
}

impl<T: LineField + ?Sized> LineField for &T {
    fn at(&self, r: Vec3, t: f64) -> Vec3 {
        (**self).at(r, t)
    }
    fn segment_integral(&self, a: Vec3, b: Vec3, t: f64) -> f64 {
        (**self).segment_integral(a, b, t)
    }
}

/// Closed line integral of `field` around `path` at time `t`.
pub fn circulation<F: LineField>(
    field: &F,
    path: &PolylinePath,
    t: f64,
) -> Result<f64, AbPhaseError> {
    let mut total = 0.0;
    for (idx, (a, b)) in path.segments().enumerate() {
        let term = field.segment_integral(a, b, t);
        if !term.is_finite() {
            return Err(AbPhaseError::NonFiniteSegment(idx));
        }
        total += term;
    }
    Ok(total)
}

/// An infinite line, for winding-number queries.
#[derive(Debug, Clone, Copy)]
pub struct AxisLine {
    pub point: Vec3,
    pub direction: Vec3,
}

impl AxisLine {
    pub const Z: AxisLine = AxisLine {
        point: Vec3::ZERO,
        direction: Vec3::new(0.0, 0.0, 1.0),
    };
}

/// Signed number of turns of `path` about `axis`: accumulated projected
/// angle divided by 2 pi, rounded. Robust for polylines that never approach
/// the axis closer than about one segment length.
pub fn winding_number(path: &PolylinePath, axis: &AxisLine) -> Result<i32, AbPhaseError> {
    let w = axis
        .direction
        .normalized()
        .ok_or(AbPhaseError::AxisIntersection(0))?;
    let seed = if w.x.abs() < 0.9 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
    let u = w.cross(seed).normalized().expect("seed not parallel");
    let v = w.cross(u);

    let verts = path.vertices();
    let scale: f64 = path.perimeter() / verts.len() as f64;
    let mut angles = Vec::with_capacity(verts.len());
    for (i, &vert) in verts.iter().enumerate() {
        let d = vert - axis.point;
        let (pu, pv) = (d.dot(u), d.dot(v));
        if pu.hypot(pv) < 1e-9 * scale.max(1e-300) {
            return Err(AbPhaseError::AxisIntersection(i));
        }
        angles.push(pv.atan2(pu));
    }
    let mut total = 0.0;
    for i in 0..angles.len() {
        let next = angles[(i + 1) % angles.len()];
        total += crate::geometry::wrap_angle(next - angles[i]);
    }
    Ok((total / std::f64::consts::TAU).round() as i32)
}

/// Fraction of the wall radius within which paths are rejected as
/// ambiguous against the flux-disk discretization.
const WALL_MARGIN_FRAC: f64 = 1e-3;

/// Magnetic flux enclosed by `path` for a z-axis solenoid.
///
/// Paths staying wholly outside the cylinder enclose `winding * flux`.
/// Planar paths spanning the interior integrate `B` over a fan-triangulated
/// spanning surface with midpoint sampling. Vertices within the wall margin
/// are rejected.
pub fn enclosed_flux(s: &SolenoidParams, path: &PolylinePath) -> Result<f64, AbPhaseError> {
    let margin = WALL_MARGIN_FRAC * s.radius;
    for (i, v) in path.vertices().iter().enumerate() {
        if (v.rho() - s.radius).abs() < margin {
            return Err(AbPhaseError::PathNearWall(i));
        }
    }
    let fully_outside = path
        .segments()
        .all(|(a, b)| segment_min_rho(a, b) >= s.radius + margin);
    if fully_outside {
        let w = winding_number(path, &AxisLine::Z)?;
        return Ok(w as f64 * s.flux);
    }

    // interior-crossing branch: needs a planar spanning surface
    let verts = path.vertices();
    let centroid = verts.iter().fold(Vec3::ZERO, |acc, &v| acc + v) * (1.0 / verts.len() as f64);
    let mut normal = Vec3::ZERO;
    for (a, b) in path.segments() {
        normal = normal + (a - centroid).cross(b - centroid);
    }
    let n_hat = normal
        .normalized()
        .ok_or(AbPhaseError::NonPlanarInteriorPath)?;
    let scale = verts
        .iter()
        .map(|&v| (v - centroid).norm())
        .fold(0.0, f64::max);
    for &v in verts {
        if (v - centroid).dot(n_hat).abs() > 1e-9 * scale {
            return Err(AbPhaseError::NonPlanarInteriorPath);
        }
    }

    // fan triangulation, subdivided until triangles resolve the wall
    let target_edge = s.radius / 64.0;
    let mut flux = 0.0;
    for (a, b) in path.segments() {
        flux += triangle_flux(s, centroid, a, b, target_edge, 6);
    }
    Ok(flux)
}

/// Minimum distance from the segment `ab` to the z-axis, in projection.
fn segment_min_rho(a: Vec3, b: Vec3) -> f64 {
    let (ax, ay) = (a.x, a.y);
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return a.rho();
    }
    let t = (-(ax * dx + ay * dy) / len2).clamp(0.0, 1.0);
    ((ax + t * dx).hypot(ay + t * dy)).min(a.rho()).min(b.rho())
}

/// Signed flux of B through one triangle, subdividing near the wall.
fn triangle_flux(
    s: &SolenoidParams,
    a: Vec3,
    b: Vec3,
    c: Vec3,
    target_edge: f64,
    depth: usize,
) -> f64 {
    let longest = (b - a).norm().max((c - b).norm()).max((a - c).norm());
    if depth == 0 || longest <= target_edge {
        let center = (a + b + c) * (1.0 / 3.0);
        let area_vec = (b - a).cross(c - a) * 0.5;
        return s.b_field(center).dot(area_vec);
    }
    let (mab, mbc, mca) = ((a + b) * 0.5, (b + c) * 0.5, (c + a) * 0.5);
    triangle_flux(s, a, mab, mca, target_edge, depth - 1)
        + triangle_flux(s, mab, b, mbc, target_edge, depth - 1)
        + triangle_flux(s, mca, mbc, c, target_edge, depth - 1)
        + triangle_flux(s, mab, mbc, mca, target_edge, depth - 1)
}

/// Inputs for an AB-phase evaluation, units hbar = c = 1.
pub struct ABConfig<F: LineField> {
    pub charge: f64,
    pub path: PolylinePath,
    pub field: F,
    pub time: f64,
}

/// `phase = q * circulation(A)` in radians (hbar = c = 1), so an enclosing
/// unit-winding loop around flux Phi gives `q * Phi`.
pub fn ab_phase<F: LineField>(cfg: &ABConfig<F>) -> Result<f64, AbPhaseError> {
    if cfg.path.segment_count() < 8 {
        return Err(AbPhaseError::TooFewSegments(cfg.path.segment_count()));
    }
    Ok(cfg.charge * circulation(&cfg.field, &cfg.path, cfg.time)?)
}
