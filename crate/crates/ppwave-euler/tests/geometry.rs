mod common;

use common::*;
use ppwave_euler::geometry::*;
use ppwave_euler::modes::*;
use ppwave_euler::Error;
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

fn fd_sigma_derivative(c: &FieldConfig<f64>, field: usize, t: f64, s: f64) -> f64 {
    let h = 1e-3;
    let x = |k: f64| eval_field(c, field, t, s + k * h).unwrap();
    (x(-2.0) - 8.0 * x(-1.0) + 8.0 * x(1.0) - x(2.0)) / (12.0 * h)
}

#[test]
fn case_a_conformal_factor_closed_form_and_numeric() {
    let c = case_a(1.0, 1.0);
    let cf = conformal_factor(&c);
    let mut r = rng(11);
    let mut checked = 0;
    while checked < 100 {
        let (t, s) = random_point(&mut r, &c);
        let f = cf.value(t, s);
        let expect = (2.0 * t + s).sin().powi(2) + (2.0 * t - s).sin().powi(2);
        assert!((f - expect).abs() < 1e-13);
        if f < 1e-2 {
            continue;
        }
        let numeric = fd_sigma_derivative(&c, 1, t, s).powi(2) + fd_sigma_derivative(&c, 2, t, s).powi(2);
        assert!(rel_err(numeric, f) < 1e-8, "{numeric} vs {f}");
        checked += 1;
    }
}

#[test]
fn conformal_factor_is_nonnegative_and_periodic() {
    let mut r = rng(12);
    for _ in 0..200 {
        let c = random_config(&mut r);
        let cf = conformal_factor(&c);
        let (t, s) = random_point(&mut r, &c);
        let f = cf.value(t, s);
        assert!(f >= 0.0);
        assert!((f - cf.value(t, s + c.params.sigma_period())).abs() < 1e-10 * (1.0 + f));
    }
}

#[test]
fn centre_of_mass_only_is_degenerate() {
    let mut c = FieldConfig::empty(fig1_params());
    c.com.x0[3] = 1.0;
    c.com.p0[5] = 0.4;
    let cf = conformal_factor(&c);
    assert!(cf.is_degenerate());
    assert_eq!(cf.value(0.3, 1.2), 0.0);
    assert!(matches!(
        euler_density(&c, 0.3, 1.2, EulerSource::GeneralFiniteDifference),
        Err(Error::SingularPoint { .. })
    ));
    assert!(cf.connection(0.3, 1.2).is_err());
}

#[test]
fn chiral_factor_is_constant_along_characteristics() {
    let p = ModelParams::new(0.8, 1.4, 1.3, 1.0).unwrap();
    let c = FieldConfig::new(p, vec![Mode::right(3, 2, 1.2, 0.4)], CenterOfMass::zero()).unwrap();
    let cf = conformal_factor(&c);
    let (w, n) = (omega(2, &p), 2.0);
    let mut r = rng(13);
    for _ in 0..20 {
        let (t0, s0) = random_point(&mut r, &c);
        let values: Vec<f64> = (0..32)
            .map(|i| {
                let dt = 0.1 * i as f64;
                cf.value(t0 + dt, s0 - w * dt / n)
            })
            .collect();
        let mean = values.iter().sum::<f64>() / 32.0;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 32.0;
        assert!(var < 1e-12, "variance {var}");
    }
}

/// Massless chiral fields depend on `tau + sigma` only, so `d_tau f = d_sigma f`
/// exactly and the bracket cancels. The finite-difference path is limited by
/// rounding in the `h = 1e-4 a` stencil (about `5e-8 |log f|`).
#[test]
fn massless_chiral_configs_are_flat() {
    let p = ModelParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
    let c = FieldConfig::new(p, vec![Mode::right(1, 1, 1.0, 0.0), Mode::right(2, 3, 0.5, 0.7)], CenterOfMass::zero())
        .unwrap();
    let cf = conformal_factor(&c);
    let mut r = rng(14);
    let mut checked = 0;
    while checked < 100 {
        let (t, s) = random_point(&mut r, &c);
        let (ft, fs) = cf.gradient(t, s);
        assert!((ft - fs).abs() < 1e-12 * (1.0 + fs.abs()));
        if cf.value(t, s) < 0.1 {
            continue;
        }
        let e = euler_density(&c, t, s, EulerSource::GeneralFiniteDifference).unwrap();
        assert!(e.abs() < 1e-6, "{e}");
        checked += 1;
    }
}

/// With mass, `log f = L(psi)` still depends on one characteristic variable
/// but `(d_sigma^2 - d_tau^2) L = (n^2 - w^2) L'' / a^2 = -mu^2 L''`, which
/// for `f = C sin^2 psi` gives `e = mu^2 / (2 pi sin^2 psi)`.
#[test]
fn massive_chiral_density_matches_chain_rule() {
    let p = ModelParams::new(0.9, 1.2, 1.1, 1.0).unwrap();
    let c = FieldConfig::new(p, vec![Mode::left(4, 2, 0.8, 0.3)], CenterOfMass::zero()).unwrap();
    let (w, a) = (omega(2, &p), p.scale());
    let mut r = rng(15);
    let mut checked = 0;
    while checked < 100 {
        let (t, s) = random_point(&mut r, &c);
        let psi = (w * t - 2.0 * s) / a + 0.3;
        if psi.sin().powi(2) < 0.05 {
            continue;
        }
        let e = euler_density(&c, t, s, EulerSource::GeneralFiniteDifference).unwrap();
        let expect = p.mu * p.mu / (2.0 * PI * psi.sin().powi(2));
        assert!(rel_err(e, expect) < 1e-6, "{e} vs {expect}");
        checked += 1;
    }
}

#[test]
fn dual_path_at_reference_point() {
    let c = case_a(1.0, 1.0);
    // (0.1, 0.2) lies on the line theta2 = 0 where the density vanishes for r = rt
    let closed = euler_density(&c, 0.1, 0.2, EulerSource::ClosedFormCaseA).unwrap();
    let fd = euler_density(&c, 0.1, 0.2, EulerSource::GeneralFiniteDifference).unwrap();
    assert!(closed.abs() < 1e-12);
    assert!(fd.abs() < 1e-5, "{fd}");
    for (t, s) in [(0.1, 0.3), (0.7, 0.2), (-0.4, 2.5)] {
        let closed = euler_density(&c, t, s, EulerSource::ClosedFormCaseA).unwrap();
        let fd = euler_density(&c, t, s, EulerSource::GeneralFiniteDifference).unwrap();
        let xy = euler_density(&c, t, s, EulerSource::TransformedXY).unwrap();
        assert!(rel_err(fd, closed) < 1e-5, "{fd} vs {closed}");
        assert!(rel_err(xy, closed) < 1e-10, "{xy} vs {closed}");
    }
}

#[test]
fn dual_path_on_random_two_mode_configs() {
    let mut r = rng(16);
    let mut checked = 0;
    while checked < 100 {
        let params = random_params(&mut r, 3.0);
        let c = FieldConfig::case_b(
            params,
            r.gen_range(1..=3),
            r.gen_range(0.3..2.0),
            r.gen_range(-3.0..3.0),
            r.gen_range(1..=3),
            r.gen_range(0.3..2.0),
            r.gen_range(-3.0..3.0),
        )
        .unwrap();
        let (t, s) = random_point(&mut r, &c);
        let Ok(fd) = euler_density(&c, t, s, EulerSource::GeneralFiniteDifference) else { continue };
        let closed = euler_density(&c, t, s, EulerSource::ClosedFormCaseA).unwrap();
        let xy = euler_density(&c, t, s, EulerSource::TransformedXY).unwrap();
        let scale = closed.abs().max(1e-3);
        assert!((fd - closed).abs() < 1e-4 * scale, "{fd} vs {closed}");
        assert!((xy - closed).abs() < 1e-9 * scale, "{xy} vs {closed}");
        checked += 1;
    }
}

#[test]
fn density_is_scale_invariant() {
    let mut r = rng(17);
    for _ in 0..100 {
        let c = random_case_a(&mut r);
        let (t, s) = random_point(&mut r, &c);
        let lambda = r.gen_range(0.1..10.0);
        let mut scaled = c.clone();
        for m in &mut scaled.modes {
            m.amplitude *= lambda;
        }
        let (Ok(e), Ok(e2)) = (
            euler_density(&c, t, s, EulerSource::ClosedFormCaseA),
            euler_density(&scaled, t, s, EulerSource::ClosedFormCaseA),
        ) else {
            continue;
        };
        assert!((e - e2).abs() < 1e-9 * e.abs().max(1.0));
    }
}

#[test]
fn density_refuses_singular_points() {
    let c = case_a(1.0, 1.0);
    for src in [EulerSource::GeneralFiniteDifference, EulerSource::ClosedFormCaseA, EulerSource::TransformedXY] {
        assert!(matches!(euler_density(&c, 0.0, 0.0, src), Err(Error::SingularPoint { .. })));
    }
}

#[test]
fn induced_metric_is_conformally_flat_on_shell() {
    let mut r = rng(18);
    for _ in 0..100 {
        let c = random_case_a(&mut r);
        let (t, s) = random_point(&mut r, &c);
        let f = conformal_factor(&c).value(t, s);
        let h = induced_metric(&c, t, s);
        let expect = [[-f, 0.0], [0.0, f]];
        let mut diff = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                diff += (h[i][j] - expect[i][j]).powi(2);
            }
        }
        assert!(diff.sqrt() < 1e-6 * (2.0f64).sqrt() * f.max(1e-12), "h = {h:?}, f = {f}");
    }
}

#[test]
fn induced_metric_general_configs() {
    let mut r = rng(19);
    for _ in 0..100 {
        let c = random_config(&mut r);
        let (t, s) = random_point(&mut r, &c);
        let f = conformal_factor(&c).value(t, s);
        let h = induced_metric(&c, t, s);
        let scale = 1.0 + f;
        assert!((h[0][0] + f).abs() < 1e-10 * scale);
        assert!(h[0][1].abs() < 1e-10 * scale);
        assert!((h[1][1] - f).abs() < 1e-10 * scale);
    }
}

#[test]
fn induced_metric_off_shell_negative_control() {
    let c = case_a(1.0, 1.0);
    let (t, s) = (0.3, 0.9);
    let f = conformal_factor(&c).value(t, s);
    let (dt, ds) = xminus_gradient(&c, t, s);
    let h = induced_metric_with(&c, t, s, (dt + 0.1, ds));
    assert!((h[0][0] + f).abs() > 0.1);
    let h = induced_metric_with(&c, t, s, (dt, ds - 0.1));
    assert!(h[0][1].abs() > 0.05);
}

#[test]
fn zero_config_induced_metric_vanishes() {
    let c = FieldConfig::empty(fig1_params());
    assert_eq!(induced_metric(&c, 0.4, 1.0), [[0.0, 0.0], [0.0, 0.0]]);
}

#[test]
fn to_xy_examples() {
    let c = case_a(1.0, 1.0);
    assert_eq!(to_xy(&c, 0.0, 0.0).unwrap(), (0.0, 0.0));
    let shifted = FieldConfig::case_a(fig1_params(), 1.0, FRAC_PI_2, 1.0, FRAC_PI_2).unwrap();
    let (x, y) = to_xy(&shifted, 0.0, 0.0).unwrap();
    assert!((x - 1.0).abs() < 1e-15 && (y - 1.0).abs() < 1e-15);
    let (x, y) = to_xy(&c, FRAC_PI_8, 0.0).unwrap();
    assert!((x - FRAC_PI_4.sin()).abs() < 1e-15 && (y - FRAC_PI_4.sin()).abs() < 1e-15);
    let single = FieldConfig::new(fig1_params(), vec![Mode::right(1, 1, 1.0, 0.0)], CenterOfMass::zero()).unwrap();
    assert!(matches!(to_xy(&single, 0.0, 0.0), Err(Error::ShapeMismatch(_))));
}

#[test]
fn xy_density_domain_errors() {
    let c = case_a(1.0, 1.0);
    assert!(matches!(euler_density_xy(&c, 1.0, 0.2), Err(Error::Endpoint { .. })));
    assert!(matches!(euler_density_xy(&c, 0.2, -1.0), Err(Error::Endpoint { .. })));
    assert!(matches!(euler_density_xy(&c, 0.0, 0.0), Err(Error::SingularPoint { .. })));
}

#[test]
fn xy_density_chain_rule_oracle() {
    let c = case_a(1.0, 1.0);
    let shape = TwoModeShape::from_config(&c).unwrap();
    let th = (0.5f64).asin();
    let (t, s) = shape.tau_sigma_offset(th, th);
    let (x, y) = to_xy(&c, t, s).unwrap();
    assert!((x - 0.5).abs() < 1e-14 && (y - 0.5).abs() < 1e-14);
    // e_{tau sigma} = e_{xy} * d(x, y)/d(tau, sigma)
    let h = 1e-6;
    let (xp, yp) = to_xy(&c, t + h, s).unwrap();
    let (xm, ym) = to_xy(&c, t - h, s).unwrap();
    let (xs, ys) = to_xy(&c, t, s + h).unwrap();
    let (xn, yn) = to_xy(&c, t, s - h).unwrap();
    let jac = ((xp - xm) * (ys - yn) - (yp - ym) * (xs - xn)) / (4.0 * h * h);
    let from_tau_sigma = euler_density(&c, t, s, EulerSource::GeneralFiniteDifference).unwrap() / jac;
    let closed = euler_density(&c, t, s, EulerSource::ClosedFormCaseA).unwrap() / jac;
    let exy = euler_density_xy(&c, 0.5, 0.5).unwrap();
    assert!(rel_err(exy, closed) < 1e-8, "{exy} vs {closed}");
    assert!(rel_err(exy, from_tau_sigma) < 1e-5, "{exy} vs {from_tau_sigma}");
}

#[test]
fn xy_density_swap_symmetry() {
    let mut r = rng(20);
    for _ in 0..100 {
        let params = ModelParams::new(1.0, r.gen_range(0.5..2.0), r.gen_range(0.0..3.0), 1.0).unwrap();
        let (a, b) = (r.gen_range(0.2..3.0), r.gen_range(0.2..3.0));
        let c1 = FieldConfig::case_a(params, a, 0.0, b, 0.0).unwrap();
        let c2 = FieldConfig::case_a(params, b, 0.0, a, 0.0).unwrap();
        let (x, y): (f64, f64) = (r.gen_range(-0.99..0.99), r.gen_range(-0.99..0.99));
        let e1 = euler_density_xy(&c1, x, y).unwrap();
        let e2 = euler_density_xy(&c2, y, x).unwrap();
        assert!((e1 - e2).abs() < 1e-12 * e1.abs().max(1.0), "{e1} vs {e2}");
    }
}

#[test]
fn massless_xy_density_keeps_only_the_cross_term() {
    let params = ModelParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
    let c = FieldConfig::case_a(params, 1.0, 0.0, 1.0, 0.0).unwrap();
    let mut r = rng(21);
    for _ in 0..100 {
        let (x, y): (f64, f64) = (r.gen_range(-0.99..0.99), r.gen_range(-0.99..0.99));
        let e = euler_density_xy(&c, x, y).unwrap();
        // the cross term is odd in each variable separately
        assert!((e + euler_density_xy(&c, -x, y).unwrap()).abs() < 1e-12 * e.abs().max(1.0));
        // and equals -4 K xy / (2 pi J (x^2 + y^2)^2) with K = 2, J = 2 for r = rt
        let expect = -4.0 * 2.0 * x * y / (2.0 * PI * 2.0 * (x * x + y * y).powi(2));
        assert!((e - expect).abs() < 1e-12 * expect.abs().max(1.0), "{e} vs {expect}");
    }
}

#[test]
fn singular_lattice_example() {
    let c = case_a(1.0, 1.0);
    let set = singular_points(&c, &Rect::new((0.0, FRAC_PI_2), (0.0, PI))).unwrap();
    let has = |t: f64, s: f64| set.points.iter().any(|&(a, b)| (a - t).abs() < 1e-12 && (b - s).abs() < 1e-12);
    assert!(has(0.0, 0.0));
    assert!(has(0.0, PI));
    let cf = conformal_factor(&c);
    for &(t, s) in &set.points {
        assert!(cf.value(t, s) < 1e-12);
        let (x, y): (f64, f64) = to_xy(&c, t, s).unwrap();
        assert!(x.abs() < 1e-8 && y.abs() < 1e-8);
    }
}

#[test]
fn phase_shift_moves_the_zero() {
    let c = FieldConfig::case_a(fig1_params(), 1.0, FRAC_PI_2, 1.0, 0.0).unwrap();
    let set = singular_points(&c, &Rect::new((-0.1, 0.1), (-0.1, 0.1))).unwrap();
    assert!(set.is_empty());
    assert!(conformal_factor(&c).value(0.0, 0.0) > 0.5);
}

#[test]
fn random_singular_sets_are_zeros_of_f() {
    let mut r = rng(22);
    for _ in 0..50 {
        let c = random_case_a(&mut r);
        let period = c.params.sigma_period();
        let set = singular_points(&c, &Rect::new((0.0, period), (0.0, period))).unwrap();
        assert!(!set.is_empty());
        let cf = conformal_factor(&c);
        let norm = c.modes.iter().map(|m| m.amplitude * m.amplitude).sum::<f64>();
        for &(t, s) in &set.points {
            assert!(cf.value(t, s) < 1e-12 * norm.max(1.0) * 1e3, "f = {}", cf.value(t, s));
        }
    }
}
