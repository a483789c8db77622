//! Reconstruction of electromagnetic gauge potentials from gauge-invariant
//! fields, and the numerical verification battery around it.
//!
//! The Coulomb-gauge vector potential is recovered from B by a nonlocal
//! Biot-Savart-type volume integral, the scalar potential from E by its
//! divergence-kernel analogue. Around those two operators sit analytic flux
//! cylinder sources with closed-form potentials, deterministic singular-kernel
//! quadrature, finite-difference vector calculus, circulation / winding /
//! Aharonov-Bohm phase evaluation, and residual checks for the identities the
//! closed forms must satisfy.
//!
//! Units: Heaviside-Lorentz with c = hbar = 1, so the AB phase of a charge q
//! around flux Phi is exactly q Phi.

pub mod abphase;
pub mod diffops;
pub mod geometry;
pub mod potentials;
pub mod quadrature;
pub mod sources;
pub mod verify;

pub use geometry::{CylPoint, GridSpec, PolylinePath, Vec3};
pub use quadrature::{QuadratureSpec, Rule, SingularPolicy};
pub use sources::{PointCharge, SolenoidParams, TimeVaryingSolenoid};
pub use verify::{Check, VerificationReport};
