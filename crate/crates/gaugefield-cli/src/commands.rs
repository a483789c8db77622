//! The four subcommands: potential tables, AB-phase evaluation, the
//! verification battery, and analytic solenoid reference tables.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use gaugefield_core::abphase::{circulation, winding_number, AxisLine, FieldFn, LineField};
use gaugefield_core::diffops::FDScheme;
use gaugefield_core::geometry::{wound_circle_loop, GridSpec, Vec3};
use gaugefield_core::potentials::{
    a_squared_functional, coulomb_residual, scalar_potential, vector_potential, GaugeFunction,
};
use gaugefield_core::quadrature::{QuadratureError, QuadratureSpec};
use gaugefield_core::sources::{FluxLaw, SolenoidParams, TimeVaryingSolenoid};
use gaugefield_core::verify::{
    angular_kernel, angular_kernel_closed, radial_assembly, surface_decay_report, verify_eq13,
    AngularKernelInput, Check, DecayKind, DecayProbe, KernelMode, VerificationReport,
};

use crate::config::{
    CheckName, PotentialKind, Quantity, RunConfig, Source,
};
use crate::table::FieldTable;
use crate::CliError;

fn num_err(e: QuadratureError) -> CliError {
    CliError::Numerical(e.to_string())
}

/// `potential`: reconstruct A or V at the configured probes, emit a CSV.
pub fn cmd_potential(cfg: &RunConfig) -> Result<String, CliError> {
    let source = cfg.require_source()?.build()?;
    let spec = cfg.require_quadrature()?.to_spec()?;
    let probes = cfg.require_probes()?.resolve()?;
    let quantity = cfg
        .quantity
        .ok_or_else(|| CliError::Config(String::from("missing key `quantity`")))?;
    let t = cfg.time;

    match quantity {
        Quantity::VectorPotential => {
            let b_field: Box<dyn Fn(Vec3, f64) -> Vec3> = match &source {
                Source::Solenoid(s) => {
                    let s = *s;
                    Box::new(move |p, _| s.b_field(p))
                }
                Source::TimeVarying(s) => {
                    let s = *s;
                    Box::new(move |p, tt| s.b_field(p, tt))
                }
                Source::Bump(b) => {
                    let b = *b;
                    Box::new(move |p, _| b.field(p))
                }
                Source::Charge(_) => {
                    return Err(CliError::Config(String::from(
                        "source `point_charge` has no magnetic field; use quantity `scalar_potential`",
                    )))
                }
            };
            let mut table = FieldTable::new(&["x", "y", "z", "t", "A_x", "A_y", "A_z"]);
            for &p in &probes {
                let a = vector_potential(&*b_field, p, t, &spec).map_err(num_err)?.value;
                table.push_row(vec![p.x, p.y, p.z, t, a.x, a.y, a.z])?;
            }
            Ok(table.to_csv())
        }
        Quantity::ScalarPotential => {
            let (e_field, singular): (Box<dyn Fn(Vec3, f64) -> Vec3>, Vec<Vec3>) = match &source {
                Source::Charge(c) => {
                    let c = *c;
                    (
                        Box::new(move |p, _| c.e_field(p).unwrap_or(Vec3::ZERO)),
                        vec![c.position],
                    )
                }
                Source::TimeVarying(s) => {
                    let s = *s;
                    (Box::new(move |p, tt| s.induced_e(p, tt)), Vec::new())
                }
                _ => {
                    return Err(CliError::Config(String::from(
                        "quantity `scalar_potential` needs an electric source \
                         (`point_charge` or `time_varying_solenoid`)",
                    )))
                }
            };
            let mut table = FieldTable::new(&["x", "y", "z", "t", "V"]);
            for &p in &probes {
                let v = scalar_potential(&*e_field, &singular, p, t, &spec)
                    .map_err(num_err)?
                    .value;
                table.push_row(vec![p.x, p.y, p.z, t, v])?;
            }
            Ok(table.to_csv())
        }
    }
}

#[derive(Debug, Serialize)]
struct AbPhaseResult {
    circulation: f64,
    enclosed_flux: Option<f64>,
    winding: i32,
    phase: f64,
    q: f64,
    units_note: &'static str,
}

/// `abphase`: circulation, winding, enclosed flux and phase for a loop
/// around a solenoid, with either the analytic A or the reconstructed one.
pub fn cmd_abphase(cfg: &RunConfig) -> Result<String, CliError> {
    let source = cfg.require_source()?.build()?;
    let s = match source {
        Source::Solenoid(s) => s,
        _ => {
            return Err(CliError::Config(String::from(
                "abphase needs a `solenoid` source",
            )))
        }
    };
    let loop_cfg = cfg
        .loop_spec
        .as_ref()
        .ok_or_else(|| CliError::Config(String::from("missing key `loop`")))?;
    let q = cfg
        .charge
        .ok_or_else(|| CliError::Config(String::from("missing key `charge`")))?;
    let path = wound_circle_loop(
        Vec3::from(loop_cfg.center),
        loop_cfg.radius,
        Vec3::from(loop_cfg.axis),
        loop_cfg.segments_per_turn,
        loop_cfg.winding,
    )
    .map_err(|e| CliError::Config(format!("loop: {e}")))?;

    let kind = cfg.potential.unwrap_or(PotentialKind::Analytic);
    let circ = match kind {
        PotentialKind::Analytic => {
            let field = FieldFn(move |r: Vec3, _| s.a_analytic(r));
            circulation(&field, &path, cfg.time)
        }
        PotentialKind::Numeric => {
            let spec = cfg.require_quadrature()?.to_spec()?;
            let field = NumericA { s, spec };
            circulation(&field, &path, cfg.time)
        }
    }
    .map_err(|e| CliError::Numerical(e.to_string()))?;

    let winding = winding_number(&path, &AxisLine::Z)
        .map_err(|e| CliError::Config(format!("loop: {e}")))?;
    let enclosed = gaugefield_core::abphase::enclosed_flux(&s, &path).ok();

    let result = AbPhaseResult {
        circulation: circ,
        enclosed_flux: enclosed,
        winding,
        phase: q * circ,
        q,
        units_note: "Heaviside-Lorentz, c=hbar=1; phase = q * circulation",
    };
    serde_json::to_string_pretty(&result)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Numerical(e.to_string()))
}

/// Eq.-(2) reconstruction as a line field, for numeric-A circulation.
struct NumericA {
    s: SolenoidParams,
    spec: QuadratureSpec,
}

impl LineField for NumericA {
    fn at(&self, r: Vec3, t: f64) -> Vec3 {
        vector_potential(|p, _| self.s.b_field(p), r, t, &self.spec)
            .map(|out| out.value)
            .unwrap_or(Vec3::new(f64::NAN, f64::NAN, f64::NAN))
    }
}

/// `solenoid`: analytic reference table `rho, A_theta` over a rho sweep.
pub fn cmd_solenoid(cfg: &RunConfig) -> Result<String, CliError> {
    let source = cfg.require_source()?.build()?;
    let s = match source {
        Source::Solenoid(s) => s,
        _ => {
            return Err(CliError::Config(String::from(
                "solenoid table needs a `solenoid` source",
            )))
        }
    };
    let probes = cfg.require_probes()?;
    let points = probes.resolve()?;
    if !matches!(probes, crate::config::ProbeSet::RhoSweep { .. }) {
        return Err(CliError::Config(String::from(
            "solenoid table needs `probes` of kind `rho_sweep`",
        )));
    }
    let mut table = FieldTable::new(&["rho", "A_theta"]);
    for p in points {
        // probes lie on the +x axis, where theta_hat = +y
        table.push_row(vec![p.x, s.a_analytic(p).y])?;
    }
    Ok(table.to_csv())
}

#[derive(Debug, Serialize)]
struct ReportDocument<'a> {
    version: &'static str,
    checks: &'a [Check],
    traces: &'a [gaugefield_core::verify::NamedTrace],
    config_echo: &'a RunConfig,
}

/// `verify`: run the configured subset of the battery; the returned flag is
/// whether every check passed (exit 0) or not (exit 1).
pub fn cmd_verify(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    let checks = cfg.checks.clone().unwrap_or_else(|| CheckName::ALL.to_vec());
    let mut report = VerificationReport::default();
    for check in checks {
        let part = match check {
            CheckName::AngularKernel => battery_angular_kernel()?,
            CheckName::RadialAssembly => battery_radial_assembly()?,
            CheckName::CoulombResidual => battery_coulomb_residual()?,
            CheckName::Eq13 => battery_eq13()?,
            CheckName::Decay => battery_decay()?,
            CheckName::Minimality => battery_minimality()?,
        };
        report.merge(part);
    }
    let passed = report.passed();
    let doc = ReportDocument {
        version: env!("CARGO_PKG_VERSION"),
        checks: &report.checks,
        traces: &report.traces,
        config_echo: cfg,
    };
    let mut json = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    json.push('\n');
    Ok((json, passed))
}

fn battery_solenoid() -> SolenoidParams {
    SolenoidParams::new(1.0, 1.0).expect("valid battery source")
}

fn battery_angular_kernel() -> Result<VerificationReport, CliError> {
    let mut report = VerificationReport::default();
    for (rho, rho_p) in [(2.0, 1.0), (0.5, 1.0), (3.0, 2.5)] {
        let input = AngularKernelInput::new(rho, rho_p)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        let diff = angular_kernel(input, 4096)
            .map_err(|e| CliError::Numerical(e.to_string()))?
            - angular_kernel_closed(input);
        report.push(Check::within(
            format!("angular_kernel_rho_{rho}_rhop_{rho_p}"),
            diff,
            1e-6,
        ));
    }
    Ok(report)
}

fn battery_radial_assembly() -> Result<VerificationReport, CliError> {
    let s = battery_solenoid();
    let mut worst = 0.0f64;
    for i in 0..10 {
        let rho = 0.1 * 100.0f64.powf(i as f64 / 9.0);
        let a = radial_assembly(&s, rho, 20_000, KernelMode::Closed)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        let expected = if rho <= 1.0 { rho / (2.0 * PI) } else { 1.0 / (2.0 * PI * rho) };
        worst = worst.max((a - expected).abs() / expected);
    }
    let below = radial_assembly(&s, 1.0 - 1e-3, 20_000, KernelMode::Closed)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let above = radial_assembly(&s, 1.0 + 1e-3, 20_000, KernelMode::Closed)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut report = VerificationReport::default();
    report.push(Check::within("radial_assembly_worst_branch_rel", worst, 1e-3));
    report.push(Check::within(
        "radial_assembly_wall_continuity",
        (below - above).abs() / (1.0 / (2.0 * PI)),
        5e-3,
    ));
    Ok(report)
}

fn battery_coulomb_residual() -> Result<VerificationReport, CliError> {
    let s = battery_solenoid();
    let spec = QuadratureSpec::cylinder(1.0, 30.0, [24, 48, 192]);
    let probes =
        [Vec3::new(2.0, 0.0, 0.0), Vec3::new(0.0, 2.5, 0.7), Vec3::new(-2.2, 0.0, -1.0)];
    let residual = coulomb_residual(
        |p| {
            vector_potential(|q, _| s.b_field(q), p, 0.0, &spec)
                .map(|out| out.value)
                .unwrap_or(Vec3::new(f64::NAN, f64::NAN, f64::NAN))
        },
        &probes,
        1e-3,
    );
    if !residual.is_finite() {
        return Err(CliError::Numerical(String::from(
            "coulomb residual evaluation failed",
        )));
    }
    let mut report = VerificationReport::default();
    report.push(Check::within("coulomb_residual_numeric_a", residual, 1e-2));
    Ok(report)
}

fn battery_eq13() -> Result<VerificationReport, CliError> {
    let s = TimeVaryingSolenoid::new(1.0, FluxLaw::Linear { phi0: 1.0, rate: 1.0 })
        .expect("valid battery source");
    let spec = QuadratureSpec::cylinder(1.0, 50.0, [32, 64, 256]);
    let fd = FDScheme::new(1e-3, 2).expect("valid scheme");
    verify_eq13(
        &s,
        &[Vec3::new(2.0, 0.0, 0.0), Vec3::new(3.0, 0.0, 0.0)],
        0.5,
        &spec,
        &fd,
        1e-3,
        1e-2,
    )
    .map_err(|e| CliError::Numerical(e.to_string()))
}

fn battery_decay() -> Result<VerificationReport, CliError> {
    let field_point = Vec3::new(1.0, 0.3, -0.2);
    let radii = vec![4.0, 8.0, 16.0, 32.0, 64.0];
    let mut report = VerificationReport::default();
    for kind in [
        DecayKind::Compact { support_radius: 2.0, amplitude: 1.0 },
        DecayKind::DipoleLike,
        DecayKind::CoulombLike,
        DecayKind::RadiationLike { k: 1.0 },
    ] {
        let probe = DecayProbe::new(kind, radii.clone(), field_point)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        report.merge(surface_decay_report(&probe));
    }
    Ok(report)
}

fn battery_minimality() -> Result<VerificationReport, CliError> {
    let s = battery_solenoid();
    let region = GridSpec::new(
        Vec3::new(-4.0, -4.0, -4.0),
        [8.0 / 64.0, 8.0 / 64.0, 8.0 / 64.0],
        [64, 64, 64],
    )
    .expect("valid region");
    let f_a = a_squared_functional(|p| s.a_analytic(p), &region);
    let dv = region.cell_volume();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4741_5547);
    let mut worst_drop = 0.0f64;
    let mut worst_cross = 0.0f64;
    for _ in 0..20 {
        let center = Vec3::new(
            rng.gen_range(-2.2..2.2),
            rng.gen_range(-2.2..2.2),
            rng.gen_range(-2.2..2.2),
        );
        let width = rng.gen_range(0.2..0.3);
        let amplitude = rng.gen_range(0.5..2.0);
        let chi = GaugeFunction::gaussian_bump(center, width, amplitude)
            .expect("valid bump");
        let f_shifted = a_squared_functional(|p| s.a_analytic(p) + chi.grad(p, 0.0), &region);
        worst_drop = worst_drop.min((f_shifted - f_a) / f_a);
        let mut cross = 0.0;
        let mut grad_sq = 0.0;
        for c in region.cell_centers() {
            let g = chi.grad(c, 0.0);
            cross += s.a_analytic(c).dot(g) * dv;
            grad_sq += g.norm_sq() * dv;
        }
        worst_cross = worst_cross.max((2.0 * cross).abs() / grad_sq);
    }
    let mut report = VerificationReport::default();
    report.push(Check::within("minimality_worst_relative_drop", worst_drop.min(0.0), 1e-6));
    report.push(Check::within("minimality_worst_cross_ratio", worst_cross, 1e-3));
    Ok(report)
}
