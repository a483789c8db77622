//! Browser demo bindings: three interactive views over the core library,
//! exported through wasm-bindgen. Every export takes plain numbers and
//! returns a JSON string, so the page stays framework-free and the same
//! functions are testable as ordinary Rust on the host target.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use gaugefield_core::abphase::{circulation, winding_number, AxisLine, FieldFn};
use gaugefield_core::geometry::{wound_circle_loop, Vec3};
use gaugefield_core::sources::SolenoidParams;
use gaugefield_core::verify::{radial_assembly, KernelMode};

fn err_json(message: &str) -> String {
    format!("{{\"error\":{}}}", serde_json::to_string(message).unwrap())
}

fn ok_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).unwrap_or_else(|e| err_json(&e.to_string()))
}

#[derive(Serialize)]
struct RadialProfile {
    rho: Vec<f64>,
    closed_form: Vec<f64>,
    assembled: Vec<f64>,
    wall_radius: f64,
}

/// Closed-form azimuthal potential profile A_theta(rho) next to the same
/// profile assembled from the angular kernel with `n_rho` midpoint nodes.
/// Coarse `n_rho` makes the assembly error visible near the wall.
#[wasm_bindgen]
pub fn solenoid_radial_profile(
    flux: f64,
    radius: f64,
    rho_max: f64,
    samples: usize,
    n_rho: usize,
) -> String {
    let s = match SolenoidParams::new(flux, radius) {
        Ok(s) => s,
        Err(e) => return err_json(&e.to_string()),
    };
    if samples < 2 || rho_max <= 0.0 {
        return err_json("need samples >= 2 and rho_max > 0");
    }
    if n_rho == 0 || n_rho > 200_000 {
        return err_json("n_rho must be in 1..=200000");
    }
    let mut profile = RadialProfile {
        rho: Vec::with_capacity(samples),
        closed_form: Vec::with_capacity(samples),
        assembled: Vec::with_capacity(samples),
        wall_radius: radius,
    };
    for i in 0..samples {
        let rho = rho_max * (i as f64 + 0.5) / samples as f64;
        profile.rho.push(rho);
        profile.closed_form.push(s.a_analytic(Vec3::new(rho, 0.0, 0.0)).y);
        match radial_assembly(&s, rho, n_rho, KernelMode::Closed) {
            Ok(a) => profile.assembled.push(a),
            Err(e) => return err_json(&e.to_string()),
        }
    }
    ok_json(&profile)
}

#[derive(Serialize)]
struct FieldSlice {
    n: usize,
    extent: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    ax: Vec<f64>,
    ay: Vec<f64>,
    mag: Vec<f64>,
    wall_radius: f64,
}

/// The vector potential on an n x n grid over the z = 0 slice
/// [-extent, extent]^2, for the quiver/heat view.
#[wasm_bindgen]
pub fn potential_field_slice(flux: f64, radius: f64, extent: f64, n: usize) -> String {
    let s = match SolenoidParams::new(flux, radius) {
        Ok(s) => s,
        Err(e) => return err_json(&e.to_string()),
    };
    if n < 2 || n > 256 || extent <= 0.0 {
        return err_json("need 2 <= n <= 256 and extent > 0");
    }
    let mut slice = FieldSlice {
        n,
        extent,
        x: Vec::with_capacity(n * n),
        y: Vec::with_capacity(n * n),
        ax: Vec::with_capacity(n * n),
        ay: Vec::with_capacity(n * n),
        mag: Vec::with_capacity(n * n),
        wall_radius: radius,
    };
    for j in 0..n {
        for i in 0..n {
            let x = -extent + 2.0 * extent * (i as f64 + 0.5) / n as f64;
            let y = -extent + 2.0 * extent * (j as f64 + 0.5) / n as f64;
            let a = s.a_analytic(Vec3::new(x, y, 0.0));
            slice.x.push(x);
            slice.y.push(y);
            slice.ax.push(a.x);
            slice.ay.push(a.y);
            slice.mag.push(a.norm());
        }
    }
    ok_json(&slice)
}

#[derive(Serialize)]
struct PhaseResult {
    circulation: f64,
    winding: i32,
    enclosed_flux: Option<f64>,
    phase: f64,
    loop_xy: Vec<[f64; 2]>,
}

/// Circulation / winding / AB phase of a circular loop of given center and
/// winding around the flux cylinder, with the loop polyline echoed back for
/// drawing. Phase convention: q * circulation, hbar = c = 1.
#[wasm_bindgen]
pub fn ab_phase_demo(
    flux: f64,
    radius: f64,
    q: f64,
    loop_radius: f64,
    center_x: f64,
    center_y: f64,
    winding: i32,
    segments_per_turn: usize,
) -> String {
    let s = match SolenoidParams::new(flux, radius) {
        Ok(s) => s,
        Err(e) => return err_json(&e.to_string()),
    };
    if segments_per_turn > 4096 {
        return err_json("segments_per_turn must be <= 4096");
    }
    let path = match wound_circle_loop(
        Vec3::new(center_x, center_y, 0.0),
        loop_radius,
        Vec3::new(0.0, 0.0, 1.0),
        segments_per_turn,
        winding,
    ) {
        Ok(p) => p,
        Err(e) => return err_json(&e.to_string()),
    };
    let field = FieldFn(move |r: Vec3, _| s.a_analytic(r));
    let circ = match circulation(&field, &path, 0.0) {
        Ok(c) => c,
        Err(e) => return err_json(&e.to_string()),
    };
    let w = match winding_number(&path, &AxisLine::Z) {
        Ok(w) => w,
        Err(e) => return err_json(&e.to_string()),
    };
    let enclosed = gaugefield_core::abphase::enclosed_flux(&s, &path).ok();
    let result = PhaseResult {
        circulation: circ,
        winding: w,
        enclosed_flux: enclosed,
        phase: q * circ,
        loop_xy: path.vertices().iter().map(|v| [v.x, v.y]).collect(),
    };
    ok_json(&result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_profile_matches_closed_form_at_high_resolution() {
        let json = solenoid_radial_profile(1.0, 1.0, 3.0, 30, 20_000);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v.get("error").is_none(), "{json}");
        let closed = v["closed_form"].as_array().unwrap();
        let assembled = v["assembled"].as_array().unwrap();
        for (c, a) in closed.iter().zip(assembled) {
            let (c, a) = (c.as_f64().unwrap(), a.as_f64().unwrap());
            assert!((c - a).abs() <= 5e-3 * c.abs().max(1e-3), "{c} vs {a}");
        }
    }

    #[test]
    fn radial_profile_rejects_bad_params() {
        let v: serde_json::Value =
            serde_json::from_str(&solenoid_radial_profile(1.0, -1.0, 3.0, 10, 100)).unwrap();
        assert!(v.get("error").is_some());
    }

    #[test]
    fn field_slice_is_azimuthal() {
        let json = potential_field_slice(1.0, 1.0, 2.0, 16);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v.get("error").is_none());
        let (x, y) = (v["x"].as_array().unwrap(), v["y"].as_array().unwrap());
        let (ax, ay) = (v["ax"].as_array().unwrap(), v["ay"].as_array().unwrap());
        assert_eq!(x.len(), 256);
        for i in 0..x.len() {
            let dot = x[i].as_f64().unwrap() * ax[i].as_f64().unwrap()
                + y[i].as_f64().unwrap() * ay[i].as_f64().unwrap();
            assert!(dot.abs() < 1e-12, "radial component at node {i}");
        }
    }

    #[test]
    fn phase_demo_topology() {
        // enclosing loop: phase = q * Phi * winding
        let v: serde_json::Value =
            serde_json::from_str(&ab_phase_demo(2.0, 1.0, 1.5, 2.5, 0.0, 0.0, 3, 360)).unwrap();
        assert_eq!(v["winding"].as_i64().unwrap(), 3);
        let phase = v["phase"].as_f64().unwrap();
        assert!((phase - 1.5 * 2.0 * 3.0).abs() / 9.0 < 1e-2, "{phase}");
        // loop displaced fully outside the flux: phase ~ 0
        let v: serde_json::Value =
            serde_json::from_str(&ab_phase_demo(2.0, 1.0, 1.5, 0.5, 3.0, 0.0, 1, 360)).unwrap();
        assert_eq!(v["winding"].as_i64().unwrap(), 0);
        assert!(v["phase"].as_f64().unwrap().abs() < 1e-2);
        assert_eq!(v["loop_xy"].as_array().unwrap().len(), 360);
    }
}
