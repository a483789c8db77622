//! Central finite-difference gradient, divergence, curl, and time derivative
//! on functional field providers.
//!
//! These always differentiate closures, never pre-sampled grids, so identity
//! residuals stay attributable to the operator under test rather than to
//! interpolation.

use thiserror::Error;

use crate::geometry::Vec3;

#[derive(Debug, Error, PartialEq)]
pub enum DiffOpsError {
    #[error("finite-difference step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("central-difference order must be 2 or 4, got {0}")]
    BadOrder(u8),
}

/// Central-difference scheme: step `h` and order 2 or 4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDScheme {
    pub h: f64,
    pub order: u8,
}

impl FDScheme {
    pub fn new(h: f64, order: u8) -> Result<Self, DiffOpsError> {
        if !(h > 0.0) {
            return Err(DiffOpsError::NonPositiveStep(h));
        }
        if order != 2 && order != 4 {
            return Err(DiffOpsError::BadOrder(order));
        }
        Ok(FDScheme { h, order })
    }

    /// Suggested step: 1e-3 times the problem's characteristic length,
    /// balancing truncation against cancellation at f64 precision.
    pub fn default_for_scale(scale: f64) -> Self {
        FDScheme { h: 1e-3 * scale, order: 2 }
    }

    /// Stencil as `(offset multiple of h, coefficient of 1/h)` pairs.
    pub fn stencil(&self) -> &'static [(i32, f64)] {
        match self.order {
            2 => &[(-1, -0.5), (1, 0.5)],
            4 => &[
                (-2, 1.0 / 12.0),
                (-1, -8.0 / 12.0),
                (1, 8.0 / 12.0),
                (2, -1.0 / 12.0),
            ],
            _ => unreachable!("validated on construction"),
        }
    }
}

const AXES: [Vec3; 3] = [
    Vec3::new(1.0, 0.0, 0.0),
    Vec3::new(0.0, 1.0, 0.0),
    Vec3::new(0.0, 0.0, 1.0),
];

/// Directional derivative of a scalar function along `axis`.
fn partial_scalar<F: FnMut(Vec3) -> f64>(f: &mut F, p: Vec3, s: &FDScheme, axis: usize) -> f64 {
    let mut acc = 0.0;
    for &(m, c) in s.stencil() {
        acc += c * f(p + AXES[axis] * (m as f64 * s.h));
    }
    acc / s.h
}

fn partial_vec<F: FnMut(Vec3) -> Vec3>(f: &mut F, p: Vec3, s: &FDScheme, axis: usize) -> Vec3 {
    let mut acc = Vec3::ZERO;
    for &(m, c) in s.stencil() {
        acc = acc + f(p + AXES[axis] * (m as f64 * s.h)) * c;
    }
    acc / s.h
}

/// Central-difference gradient of a scalar field at `p`.
pub fn grad_fd<F: FnMut(Vec3) -> f64>(mut f: F, p: Vec3, s: &FDScheme) -> Vec3 {
    Vec3::new(
        partial_scalar(&mut f, p, s, 0),
        partial_scalar(&mut f, p, s, 1),
        partial_scalar(&mut f, p, s, 2),
    )
}

/// Central-difference curl of a vector field at `p`.
pub fn curl_fd<F: FnMut(Vec3) -> Vec3>(mut f: F, p: Vec3, s: &FDScheme) -> Vec3 {
    let dx = partial_vec(&mut f, p, s, 0);
    let dy = partial_vec(&mut f, p, s, 1);
    let dz = partial_vec(&mut f, p, s, 2);
    Vec3::new(dy.z - dz.y, dz.x - dx.z, dx.y - dy.x)
}

/// Central-difference divergence of a vector field at `p`.
pub fn div_fd<F: FnMut(Vec3) -> Vec3>(mut f: F, p: Vec3, s: &FDScheme) -> f64 {
    partial_vec(&mut f, p, s, 0).x
        + partial_vec(&mut f, p, s, 1).y
        + partial_vec(&mut f, p, s, 2).z
}

/// Central time derivative `(F(p, t+dt) - F(p, t-dt)) / (2 dt)`.
pub fn dt_fd<F: FnMut(Vec3, f64) -> Vec3>(mut f: F, p: Vec3, t: f64, dt: f64) -> Vec3 {
    (f(p, t + dt) - f(p, t - dt)) * (0.5 / dt)
}
