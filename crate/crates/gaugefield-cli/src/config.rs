//! Strict JSON run configuration. Unknown keys are rejected everywhere, and
//! every physical parameter is validated against the source invariants
//! before any numerics run.

use serde::{Deserialize, Serialize};

use gaugefield_core::geometry::{GridSpec, Vec3};
use gaugefield_core::quadrature::{DomainKind, QuadratureSpec, Rule, SingularPolicy};
use gaugefield_core::sources::{
    CompactTestField, FluxLaw, PointCharge, SolenoidParams, TimeVaryingSolenoid,
};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub source: Option<SourceConfig>,
    #[serde(default)]
    pub time: f64,
    pub quantity: Option<Quantity>,
    pub quadrature: Option<QuadratureConfig>,
    pub probes: Option<ProbeSet>,
    #[serde(rename = "loop")]
    pub loop_spec: Option<LoopConfig>,
    pub charge: Option<f64>,
    pub potential: Option<PotentialKind>,
    pub checks: Option<Vec<CheckName>>,
    pub output: Option<OutputConfig>,
    /// Seedless determinism is always on; the flag exists so configs can
    /// state it, but turning it off is a config error.
    #[serde(default = "default_true")]
    pub deterministic: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceConfig {
    Solenoid { flux: f64, radius: f64 },
    TimeVaryingSolenoid { radius: f64, law: FluxLawConfig },
    PointCharge { charge: f64, position: [f64; 3] },
    CompactBump { support_radius: f64, amplitude: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FluxLawConfig {
    Linear { phi0: f64, rate: f64 },
    Sinusoidal { amplitude: f64, omega: f64 },
}

impl From<FluxLawConfig> for FluxLaw {
    fn from(c: FluxLawConfig) -> Self {
        match c {
            FluxLawConfig::Linear { phi0, rate } => FluxLaw::Linear { phi0, rate },
            FluxLawConfig::Sinusoidal { amplitude, omega } => {
                FluxLaw::Sinusoidal { amplitude, omega }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    VectorPotential,
    ScalarPotential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub domain: DomainConfig,
    pub cells: [usize; 3],
    #[serde(default = "default_rule")]
    pub rule: Rule,
    #[serde(default = "default_policy")]
    pub singular_policy: SingularPolicy,
}

fn default_rule() -> Rule {
    Rule::Midpoint
}

fn default_policy() -> SingularPolicy {
    SingularPolicy::SkipCell
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainConfig {
    Cylinder { rho_max: f64, z_half: f64 },
    Box { bounds: [[f64; 2]; 3] },
}

impl QuadratureConfig {
    pub fn to_spec(&self) -> Result<QuadratureSpec, CliError> {
        let mut spec = match self.domain {
            DomainConfig::Cylinder { rho_max, z_half } => {
                QuadratureSpec::cylinder(rho_max, z_half, self.cells)
            }
            DomainConfig::Box { bounds } => QuadratureSpec::cartesian(bounds, self.cells),
        };
        spec.rule = self.rule;
        spec.singular_policy = self.singular_policy;
        spec.validate().map_err(|e| CliError::Config(format!("quadrature: {e}")))?;
        debug_assert!(matches!(
            spec.kind,
            DomainKind::Cartesian | DomainKind::Cylindrical
        ));
        Ok(spec)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProbeSet {
    Points { points: Vec<[f64; 3]> },
    Grid { origin: [f64; 3], spacing: [f64; 3], dims: [usize; 3] },
    RhoSweep { start: f64, stop: f64, count: usize },
}

impl ProbeSet {
    pub fn resolve(&self) -> Result<Vec<Vec3>, CliError> {
        let points: Vec<Vec3> = match self {
            ProbeSet::Points { points } => points.iter().map(|&p| Vec3::from(p)).collect(),
            ProbeSet::Grid { origin, spacing, dims } => {
                let grid = GridSpec::new(Vec3::from(*origin), *spacing, *dims)
                    .map_err(|e| CliError::Config(format!("probes.grid: {e}")))?;
                grid.points().collect()
            }
            ProbeSet::RhoSweep { start, stop, count } => {
                if !(*start > 0.0 && stop > start) {
                    return Err(CliError::Config(String::from(
                        "probes.rho_sweep: need 0 < start < stop",
                    )));
                }
                if *count < 2 {
                    return Err(CliError::Config(String::from(
                        "probes.rho_sweep: need count >= 2",
                    )));
                }
                (0..*count)
                    .map(|i| {
                        let rho =
                            start + (stop - start) * i as f64 / (*count as f64 - 1.0);
                        Vec3::new(rho, 0.0, 0.0)
                    })
                    .collect()
            }
        };
        if points.is_empty() {
            return Err(CliError::Config(String::from("probes: no probes")));
        }
        if let Some(bad) = points.iter().find(|p| !p.is_finite()) {
            return Err(CliError::Config(format!("probes: non-finite probe {bad:?}")));
        }
        Ok(points)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopConfig {
    pub center: [f64; 3],
    pub radius: f64,
    #[serde(default = "default_axis")]
    pub axis: [f64; 3],
    pub segments_per_turn: usize,
    #[serde(default = "default_winding")]
    pub winding: i32,
}

fn default_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

fn default_winding() -> i32 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    AngularKernel,
    RadialAssembly,
    CoulombResidual,
    Eq13,
    Decay,
    Minimality,
}

impl CheckName {
    pub const ALL: [CheckName; 6] = [
        CheckName::AngularKernel,
        CheckName::RadialAssembly,
        CheckName::CoulombResidual,
        CheckName::Eq13,
        CheckName::Decay,
        CheckName::Minimality,
    ];
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Validated sources, ready for numerics.
pub enum Source {
    Solenoid(SolenoidParams),
    TimeVarying(TimeVaryingSolenoid),
    Charge(PointCharge),
    Bump(CompactTestField),
}

impl SourceConfig {
    pub fn build(&self) -> Result<Source, CliError> {
        match self {
            SourceConfig::Solenoid { flux, radius } => SolenoidParams::new(*flux, *radius)
                .map(Source::Solenoid)
                .map_err(|e| CliError::Config(format!("source: {e}"))),
            SourceConfig::TimeVaryingSolenoid { radius, law } => {
                TimeVaryingSolenoid::new(*radius, law.clone().into())
                    .map(Source::TimeVarying)
                    .map_err(|e| CliError::Config(format!("source: {e}")))
            }
            SourceConfig::PointCharge { charge, position } => Ok(Source::Charge(PointCharge {
                charge: *charge,
                position: Vec3::from(*position),
            })),
            SourceConfig::CompactBump { support_radius, amplitude } => {
                CompactTestField::new(*support_radius, *amplitude)
                    .map(Source::Bump)
                    .map_err(|e| CliError::Config(format!("source: {e}")))
            }
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("config parse error: {e}")))?;
        if !cfg.deterministic {
            return Err(CliError::Config(String::from(
                "determinism cannot be disabled (`deterministic` must be true)",
            )));
        }
        Ok(cfg)
    }

    pub fn require_source(&self) -> Result<&SourceConfig, CliError> {
        self.source
            .as_ref()
            .ok_or_else(|| CliError::Config(String::from("missing key `source`")))
    }

    pub fn require_quadrature(&self) -> Result<&QuadratureConfig, CliError> {
        self.quadrature
            .as_ref()
            .ok_or_else(|| CliError::Config(String::from("missing key `quadrature`")))
    }

    pub fn require_probes(&self) -> Result<&ProbeSet, CliError> {
        self.probes
            .as_ref()
            .ok_or_else(|| CliError::Config(String::from("missing key `probes`")))
    }
}
