//! Analytic electromagnetic sources with closed-form fields and potentials.
//!
//! These serve double duty: inputs to the integral operators in
//! [`crate::potentials`], and oracles for what those operators must return.
//! Units are Heaviside-Lorentz with c = hbar = 1 throughout the crate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Vec3;

#[derive(Debug, Error, PartialEq)]
pub enum SourceError {
    #[error("solenoid radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("thin flux tube distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("field evaluated at its singular point")]
    SingularEvaluation,
    #[error("compact field support radius must be positive, got {0}")]
    NonPositiveSupport(f64),
}

/// Infinite solenoid along the z-axis: uniform `B_z = flux / (pi R^2)` for
/// `rho <= R`, zero outside. The boundary is assigned to the interior branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolenoidParams {
    pub flux: f64,
    pub radius: f64,
}

impl SolenoidParams {
    pub fn new(flux: f64, radius: f64) -> Result<Self, SourceError> {
        if !(radius > 0.0) {
            return Err(SourceError::NonPositiveRadius(radius));
        }
        Ok(SolenoidParams { flux, radius })
    }

    /// Interior flux density `B = flux / (pi R^2)`.
    pub fn b_inside(&self) -> f64 {
        self.flux / (PI * self.radius * self.radius)
    }

    /// Magnetic field at `p`.
    pub fn b_field(&self, p: Vec3) -> Vec3 {
        if p.rho() <= self.radius {
            Vec3::new(0.0, 0.0, self.b_inside())
        } else {
            Vec3::ZERO
        }
    }

    /// Closed-form Coulomb-gauge vector potential: azimuthal, magnitude
    /// `flux * rho / (2 pi R^2)` inside and `flux / (2 pi rho)` outside,
    /// counter-clockwise about +z for positive flux.
    pub fn a_analytic(&self, p: Vec3) -> Vec3 {
        let rho = p.rho();
        if rho == 0.0 {
            return Vec3::ZERO;
        }
        let mag = if rho <= self.radius {
            self.flux * rho / (2.0 * PI * self.radius * self.radius)
        } else {
            self.flux / (2.0 * PI * rho)
        };
        // theta_hat = (-y, x, 0) / rho
        Vec3::new(-p.y / rho * mag, p.x / rho * mag, 0.0)
    }
}

/// `delta A = delta Phi / (2 pi d)`: magnitude of the vector potential a
/// perpendicular distance `d` from a thin tube carrying flux `dflux`.
/// Direction (perpendicular to d in the z = const plane) is the caller's.
pub fn thin_tube_a(dflux: f64, d: f64) -> Result<f64, SourceError> {
    if !(d > 0.0) {
        return Err(SourceError::NonPositiveDistance(d));
    }
    Ok(dflux / (2.0 * PI * d))
}

/// Flux program for a time-varying solenoid; the derivative is closed-form
/// so residual checks never pay numerical-differentiation error for it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FluxLaw {
    Linear { phi0: f64, rate: f64 },
    Sinusoidal { amplitude: f64, omega: f64 },
}

impl FluxLaw {
    pub fn flux(&self, t: f64) -> f64 {
        match *self {
            FluxLaw::Linear { phi0, rate } => phi0 + rate * t,
            FluxLaw::Sinusoidal { amplitude, omega } => amplitude * (omega * t).sin(),
        }
    }

    pub fn dflux_dt(&self, t: f64) -> f64 {
        match *self {
            FluxLaw::Linear { rate, .. } => rate,
            FluxLaw::Sinusoidal { amplitude, omega } => amplitude * omega * (omega * t).cos(),
        }
    }
}

/// Solenoid whose flux follows a [`FluxLaw`] in time (quasi-static).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeVaryingSolenoid {
    pub radius: f64,
    pub law: FluxLaw,
}

impl TimeVaryingSolenoid {
    pub fn new(radius: f64, law: FluxLaw) -> Result<Self, SourceError> {
        if !(radius > 0.0) {
            return Err(SourceError::NonPositiveRadius(radius));
        }
        Ok(TimeVaryingSolenoid { radius, law })
    }

    pub fn at_time(&self, t: f64) -> SolenoidParams {
        SolenoidParams { flux: self.law.flux(t), radius: self.radius }
    }

    pub fn b_field(&self, p: Vec3, t: f64) -> Vec3 {
        self.at_time(t).b_field(p)
    }

    /// Induced azimuthal electric field from Faraday's law:
    /// `E_theta = -(dPhi/dt) rho / (2 pi R^2)` inside, `-(dPhi/dt) / (2 pi rho)`
    /// outside; continuous at the wall.
    pub fn induced_e(&self, p: Vec3, t: f64) -> Vec3 {
        let rho = p.rho();
        if rho == 0.0 {
            return Vec3::ZERO;
        }
        let dphi = self.law.dflux_dt(t);
        let mag = if rho <= self.radius {
            -dphi * rho / (2.0 * PI * self.radius * self.radius)
        } else {
            -dphi / (2.0 * PI * rho)
        };
        Vec3::new(-p.y / rho * mag, p.x / rho * mag, 0.0)
    }
}

/// Point charge, Heaviside-Lorentz: `|E| = |q| / (4 pi d^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointCharge {
    pub charge: f64,
    pub position: Vec3,
}

impl PointCharge {
    /// `E(p) = q (p - pos) / (4 pi |p - pos|^3)`. Evaluating at the charge
    /// itself is an error, not an infinity.
    pub fn e_field(&self, p: Vec3) -> Result<Vec3, SourceError> {
        let d = p - self.position;
        let dist = d.norm();
        if dist == 0.0 {
            return Err(SourceError::SingularEvaluation);
        }
        Ok(d * (self.charge / (4.0 * PI * dist * dist * dist)))
    }

    /// Coulomb potential `q / (4 pi |p - pos|)`, the oracle for Eq.-(3)-style
    /// reconstruction.
    pub fn v_analytic(&self, p: Vec3) -> Result<f64, SourceError> {
        let dist = (p - self.position).norm();
        if dist == 0.0 {
            return Err(SourceError::SingularEvaluation);
        }
        Ok(self.charge / (4.0 * PI * dist))
    }
}

/// Divergence-free field with exactly compact support: `F = grad(psi) x z_hat`
/// for the classic C-infinity bump `psi = amp * exp(-1 / (1 - (s/a)^2))`,
/// identically (bitwise) zero for `|r| >= a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompactTestField {
    pub support_radius: f64,
    pub amplitude: f64,
}

impl CompactTestField {
    pub fn new(support_radius: f64, amplitude: f64) -> Result<Self, SourceError> {
        if !(support_radius > 0.0) {
            return Err(SourceError::NonPositiveSupport(support_radius));
        }
        Ok(CompactTestField { support_radius, amplitude })
    }

    pub fn field(&self, p: Vec3) -> Vec3 {
        let a2 = self.support_radius * self.support_radius;
        let u = p.norm_sq() / a2;
        if u >= 1.0 {
            return Vec3::ZERO;
        }
        let om = 1.0 - u;
        // d psi / du = -psi / (1-u)^2; grad psi = (dpsi/du) * 2 r / a^2
        let psi = self.amplitude * (-1.0 / om).exp();
        let c = -2.0 * psi / (om * om * a2);
        // grad(psi) x z_hat = c * (r x z_hat) = c * (y, -x, 0)
        Vec3::new(c * p.y, -c * p.x, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{circle_loop, Vec3};

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn solenoid_b_branches() {
        let s = SolenoidParams::new(PI, 1.0).unwrap();
        assert_eq!(s.b_field(Vec3::new(0.5, 0.0, 3.0)), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(s.b_field(Vec3::new(2.0, 0.0, 0.0)), Vec3::ZERO);
        // boundary belongs to the interior
        assert_eq!(s.b_field(Vec3::new(1.0, 0.0, 0.0)).z, 1.0);
        let s2 = SolenoidParams::new(2.0 * PI, 2.0).unwrap();
        assert!(approx(s2.b_field(Vec3::new(1.0, 0.0, 0.0)).z, 0.5, 1e-15));
    }

    #[test]
    fn solenoid_a_analytic_branches() {
        let s = SolenoidParams::new(1.0, 1.0).unwrap();
        let inner = s.a_analytic(Vec3::new(0.5, 0.0, 0.0));
        assert!(approx(inner.norm(), 0.5 / (2.0 * PI), 1e-15));
        let outer = s.a_analytic(Vec3::new(5.0, 0.0, 0.0));
        assert!(approx(outer.norm(), 1.0 / (10.0 * PI), 1e-15));
        // continuity at the wall
        let wall = s.a_analytic(Vec3::new(1.0, 0.0, 0.0));
        assert!(approx(wall.norm(), 1.0 / (2.0 * PI), 1e-15));
        // counter-clockwise about +z: at +x the potential points along +y
        assert!(inner.y > 0.0 && inner.x.abs() < 1e-18);
        // azimuthal direction everywhere
        let p = Vec3::new(0.3, -0.8, 2.0);
        assert!(s.a_analytic(p).dot(Vec3::new(p.x, p.y, 0.0)).abs() < 1e-16);
    }

    #[test]
    fn thin_tube_formula() {
        assert!(approx(thin_tube_a(2.0 * PI, 1.0).unwrap(), 1.0, 1e-15));
        assert!(approx(thin_tube_a(1.0, 0.5).unwrap(), 1.0 / PI, 1e-15));
        assert!(thin_tube_a(1.0, 1e6).unwrap() < 1e-6);
        assert_eq!(thin_tube_a(1.0, 0.0), Err(SourceError::NonPositiveDistance(0.0)));
    }

    #[test]
    fn thin_tube_is_small_radius_solenoid_limit() {
        // exterior branch is R-independent, so the limit is exact up to fp
        let d = 0.7;
        let flux = 3.2;
        let s = SolenoidParams::new(flux, d / 1000.0).unwrap();
        let a = s.a_analytic(Vec3::new(d, 0.0, 0.0)).norm();
        assert!(approx(a, thin_tube_a(flux, d).unwrap(), 1e-6));
    }

    #[test]
    fn point_charge_field() {
        let c = PointCharge { charge: 4.0 * PI, position: Vec3::ZERO };
        let e = c.e_field(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert!(approx(e.norm(), 1.0, 1e-15));
        assert!(e.x > 0.0);
        let e2 = c.e_field(Vec3::new(0.0, 2.0, 0.0)).unwrap();
        assert!(approx(e2.norm(), 0.25, 1e-15));
        let neg = PointCharge { charge: -4.0 * PI, position: Vec3::ZERO };
        let e3 = neg.e_field(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert!(approx(e3.norm(), 1.0, 1e-15));
        assert!(e3.x < 0.0);
        assert_eq!(c.e_field(Vec3::ZERO), Err(SourceError::SingularEvaluation));
    }

    #[test]
    fn flux_law_derivative_matches_finite_difference() {
        let laws = [
            FluxLaw::Linear { phi0: 0.4, rate: 2.5 },
            FluxLaw::Sinusoidal { amplitude: 1.3, omega: 0.7 },
        ];
        let dt = 1e-5;
        for law in laws {
            for t in [0.0, 0.3, 1.7, -2.0] {
                let fd = (law.flux(t + dt) - law.flux(t - dt)) / (2.0 * dt);
                let exact = law.dflux_dt(t);
                assert!((fd - exact).abs() <= 1e-8 * exact.abs().max(1.0));
            }
        }
    }

    #[test]
    fn induced_e_faraday_oracle() {
        // dPhi/dt = 2 pi, R = 0.5, probe rho = 1: E_theta = -1
        let s = TimeVaryingSolenoid::new(0.5, FluxLaw::Linear { phi0: 0.0, rate: 2.0 * PI })
            .unwrap();
        let e = s.induced_e(Vec3::new(1.0, 0.0, 0.0), 0.0);
        assert!(approx(e.y, -1.0, 1e-15));
        // static flux: no induction
        let st = TimeVaryingSolenoid::new(0.5, FluxLaw::Linear { phi0: 1.0, rate: 0.0 }).unwrap();
        assert_eq!(st.induced_e(Vec3::new(1.0, 0.3, 0.0), 0.2), Vec3::ZERO);
        // continuity at rho = R
        let just_in = s.induced_e(Vec3::new(0.5, 0.0, 0.0), 0.0);
        let just_out = s.induced_e(Vec3::new(0.5 + 1e-12, 0.0, 0.0), 0.0);
        assert!(approx(just_in.y, just_out.y, 1e-9));
    }

    #[test]
    fn induced_e_circulation_equals_minus_flux_rate() {
        let s = TimeVaryingSolenoid::new(1.0, FluxLaw::Linear { phi0: 0.0, rate: 3.0 }).unwrap();
        let loop_path = circle_loop(Vec3::ZERO, 2.5, Vec3::new(0.0, 0.0, 1.0), 720).unwrap();
        let mut circ = 0.0;
        for (a, b) in loop_path.segments() {
            let mid = (a + b) * 0.5;
            circ += s.induced_e(mid, 0.0).dot(b - a);
        }
        assert!((circ - (-3.0)).abs() / 3.0 < 1e-3);
    }

    #[test]
    fn compact_field_support_and_divergence() {
        let f = CompactTestField::new(2.0, 1.0).unwrap();
        // bitwise zero outside the support
        for p in [
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(0.0, 0.0, 2.0 + 1e-12),
            Vec3::new(5.0, 5.0, 5.0),
        ] {
            let v = f.field(p);
            assert!(v.x == 0.0 && v.y == 0.0 && v.z == 0.0);
        }
        // divergence-free inside, by central differences
        let h = 1e-4;
        for p in [Vec3::new(0.5, 0.3, -0.2), Vec3::new(-1.0, 0.7, 0.4)] {
            let dx = (f.field(p + Vec3::new(h, 0.0, 0.0)).x - f.field(p - Vec3::new(h, 0.0, 0.0)).x)
                / (2.0 * h);
            let dy = (f.field(p + Vec3::new(0.0, h, 0.0)).y - f.field(p - Vec3::new(0.0, h, 0.0)).y)
                / (2.0 * h);
            let dz = (f.field(p + Vec3::new(0.0, 0.0, h)).z - f.field(p - Vec3::new(0.0, 0.0, h)).z)
                / (2.0 * h);
            assert!((dx + dy + dz).abs() < 1e-7);
        }
    }
}
