//! Property tests for the structural invariants: coordinate round-trips,
//! quadrature linearity and translation consistency, winding orientation,
//! Stokes consistency of the analytic solenoid potential, and gauge
//! invariance of circulation over the closed-form chi family.

use proptest::prelude::*;

use gaugefield_core::abphase::{circulation, winding_number, AxisLine, FieldFn};
use gaugefield_core::diffops::{curl_fd, FDScheme};
use gaugefield_core::geometry::{cart_to_cyl, circle_loop, cyl_to_cart, CylPoint, Vec3};
use gaugefield_core::potentials::{gauge_transform, GaugeFunction};
use gaugefield_core::quadrature::{integrate_vec, QuadratureSpec};
use gaugefield_core::sources::SolenoidParams;

fn finite_in(range: std::ops::Range<f64>) -> impl Strategy<Value = f64> {
    range.prop_filter("finite", |x| x.is_finite())
}

proptest! {
    #[test]
    fn cyl_cart_round_trip(
        rho in finite_in(1e-6..1e4),
        theta in finite_in(-10.0..10.0),
        z in finite_in(-1e3..1e3),
    ) {
        let p = CylPoint::new(rho, theta, z);
        let back = cart_to_cyl(cyl_to_cart(p));
        prop_assert!((back.rho - p.rho).abs() <= 1e-12 * p.rho);
        prop_assert!((back.z - p.z).abs() <= 1e-12 * z.abs().max(1.0));
        // angles agree modulo the wrap already applied by CylPoint
        let dtheta = (back.theta - p.theta).abs();
        prop_assert!(dtheta <= 1e-9 || (dtheta - std::f64::consts::TAU).abs() <= 1e-9);
    }

    #[test]
    fn circle_loop_winds_once_about_its_axis(
        cx in finite_in(-5.0..5.0),
        cy in finite_in(-5.0..5.0),
        cz in finite_in(-5.0..5.0),
        ax in finite_in(-1.0..1.0),
        ay in finite_in(-1.0..1.0),
        az in finite_in(0.1..1.0),
        radius in finite_in(0.1..10.0),
    ) {
        let center = Vec3::new(cx, cy, cz);
        let axis = Vec3::new(ax, ay, az);
        let path = circle_loop(center, radius, axis, 64).unwrap();
        let w = winding_number(&path, &AxisLine { point: center, direction: axis }).unwrap();
        prop_assert_eq!(w, 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn quadrature_linearity(
        alpha in finite_in(-3.0..3.0),
        beta in finite_in(-3.0..3.0),
    ) {
        let spec = QuadratureSpec::cartesian([[-1.0, 2.0], [0.0, 1.0], [-0.5, 0.5]], [6, 6, 6]);
        let f = |p: Vec3| Vec3::new(p.x * p.x, (3.0 * p.y).sin(), p.z.exp());
        let g = |p: Vec3| Vec3::new(p.y * p.z, p.x, 1.0);
        let lhs = integrate_vec(&spec, &[], |p| f(p) * alpha + g(p) * beta).unwrap();
        let rhs = integrate_vec(&spec, &[], f).unwrap() * alpha
            + integrate_vec(&spec, &[], g).unwrap() * beta;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn quadrature_translation_consistency(
        sx in finite_in(-4.0..4.0),
        sy in finite_in(-4.0..4.0),
        sz in finite_in(-4.0..4.0),
    ) {
        let shift = Vec3::new(sx, sy, sz);
        let f = |p: Vec3| Vec3::new((2.0 * p.x).cos(), p.y * p.z, p.norm_sq());
        let base = QuadratureSpec::cartesian([[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]], [6, 6, 6]);
        let moved = QuadratureSpec::cartesian(
            [
                [-1.0 + shift.x, 1.0 + shift.x],
                [-1.0 + shift.y, 1.0 + shift.y],
                [-1.0 + shift.z, 1.0 + shift.z],
            ],
            [6, 6, 6],
        );
        let v0 = integrate_vec(&base, &[], f).unwrap();
        let v1 = integrate_vec(&moved, &[], |p| f(p - shift)).unwrap();
        prop_assert!((v0 - v1).norm() <= 1e-12 * v0.norm().max(1.0));
    }

    #[test]
    fn stokes_consistency_curl_of_analytic_a(
        rho in finite_in(0.1..0.9),
        theta in finite_in(-3.1..3.1),
        z in finite_in(-2.0..2.0),
        flux in finite_in(0.2..4.0),
    ) {
        // interior probes at least 3 h away from the wall (h = 1e-4)
        let s = SolenoidParams::new(flux, 1.0).unwrap();
        let p = cyl_to_cart(CylPoint::new(rho, theta, z));
        let fd = FDScheme::new(1e-4, 2).unwrap();
        let curl = curl_fd(|q| s.a_analytic(q), p, &fd);
        let b = s.b_field(p);
        prop_assert!((curl - b).norm() <= 1e-5 * b.norm());
    }

    #[test]
    fn circulation_gauge_invariant_for_random_cubic_chi(
        c0 in finite_in(-2.0..2.0),
        c1 in finite_in(-2.0..2.0),
        c2 in finite_in(-2.0..2.0),
        c3 in finite_in(-2.0..2.0),
        radius in finite_in(1.5..4.0),
    ) {
        let s = SolenoidParams::new(1.0, 1.0).unwrap();
        let base = FieldFn(move |r: Vec3, _| s.a_analytic(r));
        let path = circle_loop(Vec3::new(0.1, -0.2, 0.3), radius, Vec3::new(0.0, 0.0, 1.0), 360)
            .unwrap();
        let c_base = circulation(&base, &path, 0.0).unwrap();
        let chi = GaugeFunction::polynomial(vec![
            (c0, [3, 0, 0]),
            (c1, [1, 1, 1]),
            (c2, [0, 2, 0]),
            (c3, [0, 0, 1]),
        ])
        .unwrap();
        let (a_prime, _) = gauge_transform(&base, |_, _| 0.0, chi);
        let c_prime = circulation(&a_prime, &path, 0.0).unwrap();
        prop_assert!((c_prime - c_base).abs() <= 1e-10, "{} vs {}", c_prime, c_base);
    }
}
