//! Executable checks for the flux-cylinder closed forms, the
//! `E = -grad V - dA/dt` identity, and the surface-term decay probe.
//!
//! Each check emits [`Check`] entries into a [`VerificationReport`] with an
//! explicit tolerance, so the battery is machine-readable and scriptable.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffops::FDScheme;
use crate::geometry::Vec3;
use crate::potentials::{scalar_potential, vector_potential};
use crate::quadrature::{ConvergenceTrace, QuadratureError, QuadratureSpec};
use crate::sources::{CompactTestField, SolenoidParams, TimeVaryingSolenoid};

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("angular kernel requires rho > 0 and rho' >= 0, got ({rho}, {rho_p})")]
    BadKernelInput { rho: f64, rho_p: f64 },
    #[error("angular kernel integrand is singular at rho = rho' = {0}")]
    KernelSingular(f64),
    #[error("angular kernel needs at least 64 theta nodes, got {0}")]
    TooFewThetaNodes(usize),
    #[error("radial assembly needs positive node counts")]
    EmptyAssembly,
    #[error("decay probe needs >= 4 strictly increasing radii")]
    BadRadii,
    #[error("decay radii must exceed twice the field-point distance")]
    RadiiTooClose,
    #[error("radiation probe needs a positive wavevector, got {0}")]
    BadWavevector(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// One named residual with its tolerance and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Check {
    pub fn within(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            pass: value.abs() <= tolerance,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// A convergence trace attached to a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedTrace {
    pub name: String,
    pub trace: ConvergenceTrace,
}

/// Machine-readable residual battery. Serialization is deterministic:
/// declaration-ordered checks, no wall-clock metadata.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub traces: Vec<NamedTrace>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.traces.extend(other.traces);
    }
}

/// Field-point/source-radius pair for the angular kernel, evaluated in the
/// theta = 0 plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularKernelInput {
    pub rho: f64,
    pub rho_p: f64,
}

impl AngularKernelInput {
    pub fn new(rho: f64, rho_p: f64) -> Result<Self, VerifyError> {
        if !(rho > 0.0) || rho_p < 0.0 {
            return Err(VerifyError::BadKernelInput { rho, rho_p });
        }
        Ok(AngularKernelInput { rho, rho_p })
    }
}

/// Angular factor of the thin-tube superposition, by midpoint quadrature:
/// `K(rho, rho') = Int_{-pi}^{pi} cos(alpha) / (2 pi d) dtheta'` with
/// `cos(alpha) = (rho - rho' cos theta') / d` and
/// `d^2 = rho^2 + rho'^2 - 2 rho rho' cos theta'`.
///
/// Exactly at `rho = rho'` the integrand has a non-integrable point and the
/// principal value is not defined here; that input is an error.
pub fn angular_kernel(input: AngularKernelInput, n_theta: usize) -> Result<f64, VerifyError> {
    if n_theta < 64 {
        return Err(VerifyError::TooFewThetaNodes(n_theta));
    }
    if input.rho == input.rho_p {
        return Err(VerifyError::KernelSingular(input.rho));
    }
    let (rho, rho_p) = (input.rho, input.rho_p);
    let h = TAU / n_theta as f64;
    let mut sum = 0.0;
    for i in 0..n_theta {
        let theta = -PI + (i as f64 + 0.5) * h;
        let d2 = rho * rho + rho_p * rho_p - 2.0 * rho * rho_p * theta.cos();
        sum += (rho - rho_p * theta.cos()) / (TAU * d2);
    }
    Ok(sum * h)
}

/// Closed form of the angular kernel: `[1 + Sign(rho - rho')] / (2 rho)`,
/// with `Sign(0) = 0` so the wall value is the mean of the one-sided limits.
pub fn angular_kernel_closed(input: AngularKernelInput) -> f64 {
    let sign = if input.rho > input.rho_p {
        1.0
    } else if input.rho < input.rho_p {
        -1.0
    } else {
        0.0
    };
    (1.0 + sign) / (2.0 * input.rho)
}

/// Which kernel the radial assembly composes over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMode {
    Closed,
    Numeric { n_theta: usize },
}

/// Azimuthal vector-potential magnitude of the flux cylinder assembled from
/// the angular kernel: `A_theta(rho) = Int_0^R B rho' K(rho, rho') drho'`,
/// midpoint rule in `rho'`. Midpoint nodes never hit the `rho = rho'`
/// singularity unless `rho` itself coincides with a node; that collision is
/// resolved by offsetting the node a millionth of a cell.
pub fn radial_assembly(
    s: &SolenoidParams,
    rho: f64,
    n_rho: usize,
    mode: KernelMode,
) -> Result<f64, VerifyError> {
    if n_rho == 0 {
        return Err(VerifyError::EmptyAssembly);
    }
    let b = s.b_inside();
    let h = s.radius / n_rho as f64;
    let mut sum = 0.0;
    for j in 0..n_rho {
        let mut rho_p = (j as f64 + 0.5) * h;
        if rho_p == rho {
            rho_p += 1e-6 * h;
        }
        let input = AngularKernelInput::new(rho, rho_p)?;
        let k = match mode {
            KernelMode::Closed => angular_kernel_closed(input),
            KernelMode::Numeric { n_theta } => angular_kernel(input, n_theta)?,
        };
        sum += b * rho_p * k;
    }
    Ok(sum * h)
}

/// Residual battery for `E = -grad V - dA/dt` on a quasi-static solenoid.
///
/// Per probe: `V` is reconstructed from the induced E (it vanishes by
/// symmetry, but it is computed, not assumed), `dA/dt` is a central time
/// difference of the reconstructed A, and the residual is
/// `|E + grad V + dA/dt| / |E|`. A static solenoid has `|E| = 0` and the
/// check degrades to an absolute one, noted in the report.
#[allow(clippy::too_many_arguments)]
pub fn verify_eq13(
    s: &TimeVaryingSolenoid,
    probes: &[Vec3],
    t: f64,
    spec: &QuadratureSpec,
    fd: &FDScheme,
    dt: f64,
    tolerance: f64,
) -> Result<VerificationReport, VerifyError> {
    let mut report = VerificationReport::default();
    for &p in probes {
        let e_exact = s.induced_e(p, t);

        let mut grad_v = Vec3::ZERO;
        let axes = [
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ];
        for (axis_idx, axis) in axes.iter().enumerate() {
            let mut deriv = 0.0;
            for &(m, c) in fd.stencil() {
                let q = p + *axis * (m as f64 * fd.h);
                let v = scalar_potential(|rp, tt| s.induced_e(rp, tt), &[], q, t, spec)?;
                deriv += c * v.value;
            }
            deriv /= fd.h;
            match axis_idx {
                0 => grad_v.x = deriv,
                1 => grad_v.y = deriv,
                _ => grad_v.z = deriv,
            }
        }

        let a_plus = vector_potential(|rp, tt| s.b_field(rp, tt), p, t + dt, spec)?.value;
        let a_minus = vector_potential(|rp, tt| s.b_field(rp, tt), p, t - dt, spec)?.value;
        let da_dt = (a_plus - a_minus) * (0.5 / dt);

        let residual_vec = e_exact + grad_v + da_dt;
        let e_mag = e_exact.norm();
        let rho = p.rho();
        if e_mag > 0.0 {
            report.push(Check::within(
                format!("eq13_rel_residual_rho_{rho:.4}"),
                residual_vec.norm() / e_mag,
                tolerance,
            ));
        } else {
            report.push(
                Check::within(
                    format!("eq13_abs_residual_rho_{rho:.4}"),
                    residual_vec.norm(),
                    tolerance,
                )
                .with_note("static source: |E| = 0, residual reported absolutely"),
            );
        }
    }
    Ok(report)
}

/// Power-law shape of the decay-probe field. All variants point along
/// `z_hat x r_hat` so the surface integrand does not vanish identically;
/// only the magnitude scaling is prescribed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayKind {
    Compact { support_radius: f64, amplitude: f64 },
    DipoleLike,
    CoulombLike,
    RadiationLike { k: f64 },
}

impl DecayKind {
    fn name(&self) -> &'static str {
        match self {
            DecayKind::Compact { .. } => "compact",
            DecayKind::DipoleLike => "dipole_like",
            DecayKind::CoulombLike => "coulomb_like",
            DecayKind::RadiationLike { .. } => "radiation_like",
        }
    }

    fn field(&self, r: Vec3) -> Vec3 {
        let dist = r.norm();
        if dist == 0.0 {
            return Vec3::ZERO;
        }
        let tangent = Vec3::new(0.0, 0.0, 1.0).cross(r * (1.0 / dist));
        match *self {
            DecayKind::Compact { support_radius, amplitude } => {
                CompactTestField { support_radius, amplitude }.field(r)
            }
            DecayKind::DipoleLike => tangent * (1.0 / (dist * dist * dist)),
            DecayKind::CoulombLike => tangent * (1.0 / (dist * dist)),
            DecayKind::RadiationLike { k } => tangent * ((k * dist).sin() / dist),
        }
    }
}

/// Surface-term decay scan: sphere radii, E-field shape, fixed field point.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayProbe {
    pub kind: DecayKind,
    pub radii: Vec<f64>,
    pub field_point: Vec3,
}

impl DecayProbe {
    pub fn new(kind: DecayKind, radii: Vec<f64>, field_point: Vec3) -> Result<Self, VerifyError> {
        if radii.len() < 4 || radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(VerifyError::BadRadii);
        }
        if radii[0] < 2.0 * field_point.norm() {
            return Err(VerifyError::RadiiTooClose);
        }
        if let DecayKind::RadiationLike { k } = kind {
            if !(k > 0.0) {
                return Err(VerifyError::BadWavevector(k));
            }
        }
        Ok(DecayProbe { kind, radii, field_point })
    }
}

// product sphere rule: midpoint in both angles, sin(theta) weight
const SPHERE_N_THETA: usize = 24;
const SPHERE_N_PHI: usize = 48;

/// `S(R_s) = | (1/4pi) Int r_hat' x [E(r') / |r - r'|] r'^2 dOmega' |` over
/// the sphere of radius `R_s`, with a 24 x 48 product rule (1152 nodes).
pub fn surface_term_magnitude(kind: &DecayKind, field_point: Vec3, sphere_radius: f64) -> f64 {
    let h_t = PI / SPHERE_N_THETA as f64;
    let h_p = TAU / SPHERE_N_PHI as f64;
    let mut acc = Vec3::ZERO;
    for i in 0..SPHERE_N_THETA {
        let theta = (i as f64 + 0.5) * h_t;
        let (st, ct) = (theta.sin(), theta.cos());
        for j in 0..SPHERE_N_PHI {
            let phi = -PI + (j as f64 + 0.5) * h_p;
            let n = Vec3::new(st * phi.cos(), st * phi.sin(), ct);
            let rp = n * sphere_radius;
            let e = kind.field(rp);
            let w = st * h_t * h_p;
            let dist = (field_point - rp).norm();
            acc = acc + n.cross(e * (1.0 / dist)) * w;
        }
    }
    (acc * (sphere_radius * sphere_radius / (4.0 * PI))).norm()
}

/// Log-log slope of `S` against the sphere radius, least-squares over the
/// last three radii (the asymptotic regime), with the per-kind verdicts:
/// compact must vanish identically, dipole-like fit to -2, coulomb-like to
/// -1, radiation-like reported but not pass/failed.
pub fn surface_decay_report(probe: &DecayProbe) -> VerificationReport {
    let values: Vec<f64> = probe
        .radii
        .iter()
        .map(|&r| surface_term_magnitude(&probe.kind, probe.field_point, r))
        .collect();
    let mut report = VerificationReport::default();
    let name = probe.kind.name();
    report.traces.push(NamedTrace {
        name: format!("decay_{name}_surface_terms"),
        trace: ConvergenceTrace {
            entries: probe.radii.iter().copied().zip(values.iter().copied()).collect(),
            estimated_order: None,
        },
    });
    match probe.kind {
        DecayKind::Compact { .. } => {
            let max = values.iter().copied().fold(0.0, f64::max);
            report.push(
                Check::within(format!("decay_{name}_exact_zero"), max, 0.0).with_note(
                    "integrand identically zero beyond the support; slope is exact zero",
                ),
            );
        }
        DecayKind::DipoleLike => {
            let slope = loglog_slope_last3(&probe.radii, &values);
            report.push(Check::within(format!("decay_{name}_slope_plus_2"), slope + 2.0, 0.1));
        }
        DecayKind::CoulombLike => {
            let slope = loglog_slope_last3(&probe.radii, &values);
            report.push(Check::within(format!("decay_{name}_slope_plus_1"), slope + 1.0, 0.1));
        }
        DecayKind::RadiationLike { .. } => {
            let slope = loglog_slope_last3(&probe.radii, &values);
            let mut check = Check::within(format!("decay_{name}_slope"), slope, f64::INFINITY);
            check.pass = true;
            check.note = Some(String::from(
                "reported only: the surface term does not vanish by power counting; \
                 its vanishing relies on the gradient producing an extra 1/|r - r'| power",
            ));
            report.push(check);
        }
    }
    report
}

fn loglog_slope_last3(radii: &[f64], values: &[f64]) -> f64 {
    let n = radii.len();
    let xs: Vec<f64> = radii[n - 3..].iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = values[n - 3..].iter().map(|v| v.ln()).collect();
    let xm = xs.iter().sum::<f64>() / 3.0;
    let ym = ys.iter().sum::<f64>() / 3.0;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    num / den
}
