mod common;

use common::*;
use ppwave_euler::geometry::Rect;
use ppwave_euler::modes::{CenterOfMass, FieldConfig, Mode, ModelParams};
use ppwave_euler::quadrature::*;
use ppwave_euler::spectra::{chi_case_a, chi_case_b};
use ppwave_euler::Error;
use std::f64::consts::PI;

fn sweep(config: &FieldConfig<f64>) -> QuadratureReport<f64> {
    epsilon_sweep(config, &QuadratureSpec::default()).unwrap()
}

#[test]
fn sweep_reproduces_case_a_closed_form() {
    for (ratio, expect) in [(1.0, 0.75), (2.0, 0.9375), (0.5, 0.9375)] {
        let report = sweep(&case_a(ratio, 1.0));
        assert!(report.reliable);
        assert!((report.extrapolated.abs() - expect).abs() < 1e-3, "{}", report.extrapolated);
        assert_eq!(report.cells_per_period, Some(4));
    }
}

#[test]
fn sweep_on_case_b_shapes_matches_closed_form() {
    let params = fig3_params();
    let c = FieldConfig::case_b(params, 3, 1.3, 0.2, 1, 0.7, -0.4).unwrap();
    let report = sweep(&c);
    let expect = chi_case_b(1.3, 0.7, 3, 1, &params).unwrap();
    assert!((report.extrapolated.abs() - expect).abs() < 1e-3, "{} vs {expect}", report.extrapolated);
}

#[test]
fn single_radius_is_close_to_the_limit() {
    let c = case_a(1.0, 1.0);
    let report = sweep(&c);
    let at = integrate_excised(&c, &QuadratureSpec::default(), 1e-3).unwrap();
    assert!((at.total - report.extrapolated).abs() < 1e-2);
    assert_eq!(at.total, at.bulk + at.boundary);
}

#[test]
fn differences_decrease_and_derivative_trace_is_emitted() {
    let report = sweep(&case_a(1.0, 1.0));
    let totals: Vec<f64> = report.per_epsilon.iter().map(|r| r.total).collect();
    let diffs: Vec<f64> = totals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(diffs.windows(2).all(|w| w[1] < w[0]), "{diffs:?}");
    assert_eq!(report.derivative_estimate.len(), report.per_epsilon.len());
    let mags: Vec<f64> = report.derivative_estimate.iter().map(|d| d.1.abs()).collect();
    assert!(mags[1..].windows(2).all(|w| w[1] < w[0]), "{mags:?}");
    let fit = report.fit.unwrap();
    assert!(fit.exponent > 1.5 && fit.exponent < 2.5);
}

#[test]
fn excision_start_angle_is_irrelevant() {
    let cell = CellIntegrator::new(&case_a(2.0, 1.0), &QuadratureSpec::default()).unwrap();
    let base = cell.integrate_excised_from(1e-3, 0.0).unwrap();
    for start in [0.3, 1.0, 2.5, -PI / 3.0] {
        let other = cell.integrate_excised_from(1e-3, start).unwrap();
        assert!((other.total - base.total).abs() < 1e-8);
    }
}

#[test]
fn grid_refinement_is_stable() {
    let c = case_a(1.0, 1.0);
    let coarse = sweep(&c).extrapolated;
    let spec = QuadratureSpec { grid_n: 4096, ..QuadratureSpec::default() };
    let fine = epsilon_sweep(&c, &spec).unwrap().extrapolated;
    assert!((coarse - fine).abs() < 1e-3);
    let spec = QuadratureSpec { grid_n: 1024, ..QuadratureSpec::default() };
    let rough = epsilon_sweep(&c, &spec).unwrap().extrapolated;
    assert!((coarse - rough).abs() < 1e-3);
}

#[test]
fn boundary_term_is_necessary() {
    let report = sweep(&case_a(1.0, 1.0));
    let last = report.per_epsilon.last().unwrap();
    assert!(last.boundary.abs() > 1e-3);
    assert!((last.bulk - report.extrapolated).abs() > 1e-3);
    // the boundary term converges to a nonzero limit rather than vanishing
    let b: Vec<f64> = report.per_epsilon.iter().map(|r| r.boundary).collect();
    assert!((b[4] - b[3]).abs() < (b[1] - b[0]).abs());
}

#[test]
fn gradient_chart_excision_needs_no_boundary() {
    let c = case_a(2.0, 1.0);
    let spec = QuadratureSpec { excision: ExcisionShape::GradientChart, ..QuadratureSpec::default() };
    let report = epsilon_sweep(&c, &spec).unwrap();
    assert!(report.per_epsilon.iter().all(|r| r.boundary == 0.0));
    assert!((report.extrapolated.abs() - 0.9375).abs() < 1e-3);
}

#[test]
fn gauss_bonnet_bookkeeping_closes() {
    let mut r = rng(31);
    for _ in 0..5 {
        let c = random_case_a(&mut r);
        let cell = CellIntegrator::new(&c, &QuadratureSpec::default()).unwrap();
        for eps in [1e-2, 1e-4] {
            let gb = cell.gauss_bonnet(eps).unwrap();
            assert!(gb.residual.abs() < 1e-5, "{gb:?}");
            assert!(gb.cell_circulation.abs() < 1e-10);
        }
    }
}

#[test]
fn bad_specs_are_rejected() {
    let c = case_a(1.0, 1.0);
    let coarse = QuadratureSpec { grid_n: 256, ..QuadratureSpec::default() };
    assert!(matches!(CellIntegrator::new(&c, &coarse), Err(Error::GridTooCoarse { .. })));
    let cell = CellIntegrator::new(&c, &QuadratureSpec::default()).unwrap();
    assert!(matches!(cell.integrate_excised(1.0), Err(Error::EpsilonTooLarge { .. })));
    let unordered = QuadratureSpec { epsilon_list: vec![1e-3, 1e-2], ..QuadratureSpec::default() };
    assert!(matches!(epsilon_sweep(&c, &unordered), Err(Error::InvalidConfig(_))));
    let single = FieldConfig::new(fig1_params(), vec![Mode::right(1, 1, 1.0, 0.0)], CenterOfMass::zero()).unwrap();
    assert!(matches!(CellIntegrator::new(&single, &QuadratureSpec::default()), Err(Error::ShapeMismatch(_))));
    let same_field = FieldConfig::new(
        fig1_params(),
        vec![Mode::right(1, 1, 1.0, 0.0), Mode::left(1, 1, 1.0, 0.0)],
        CenterOfMass::zero(),
    )
    .unwrap();
    assert!(CellIntegrator::new(&same_field, &QuadratureSpec::default()).is_err());
}

#[test]
fn no_extrapolation_reports_smallest_radius() {
    let c = case_a(1.0, 1.0);
    let spec = QuadratureSpec { extrapolation: Extrapolation::None, ..QuadratureSpec::default() };
    let report = epsilon_sweep(&c, &spec).unwrap();
    assert_eq!(report.extrapolated, report.per_epsilon.last().unwrap().total);
    assert!(report.fit.is_none());
}

#[test]
fn results_are_bit_reproducible() {
    let c = case_a(1.7, 0.6);
    let a = sweep(&c);
    let b = sweep(&c);
    assert_eq!(a, b);
}

#[test]
fn stokes_on_regular_rectangles() {
    let c = case_a(1.0, 1.0);
    let tiny = stokes_check(&c, &Rect::new((0.30, 0.31), (0.40, 0.41))).unwrap();
    assert!(tiny < 1e-8, "{tiny}");
    let mut r = rng(32);
    use rand::Rng;
    let mut checked = 0;
    while checked < 20 {
        let c = random_case_a(&mut r);
        let period = c.params.sigma_period();
        let t0 = r.gen_range(-period..period);
        let s0 = r.gen_range(0.0..period);
        let region = Rect::new((t0, t0 + r.gen_range(0.01..0.3) * period), (s0, s0 + r.gen_range(0.01..0.3) * period));
        match stokes_report(&c, &region) {
            Ok(rep) => {
                assert!(rep.discrepancy < 1e-6, "{rep:?}");
                checked += 1;
            }
            Err(Error::RegionNotRegular { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn stokes_rejects_singular_regions() {
    let c = case_a(1.0, 1.0);
    let err = stokes_check(&c, &Rect::new((-0.1, 0.1), (-0.1, 0.1)));
    assert!(matches!(err, Err(Error::RegionNotRegular { count: 1 })));
}

/// Negative control: fixed quadrature loses accuracy as the rectangle
/// corner approaches the zero of `f` at the origin.
#[test]
fn stokes_degrades_near_a_singular_point() {
    let c = case_a(1.0, 1.0);
    let far = stokes_check(&c, &Rect::new((0.1, 0.4), (0.1, 0.4))).unwrap();
    let near = stokes_check(&c, &Rect::new((1e-4, 0.3), (1e-4, 0.3))).unwrap();
    assert!(near > far, "{near} vs {far}");
}

#[test]
fn iterated_orders_reproduce_printed_values() {
    let c = case_a(1.0, 1.0);
    let xy = integrate_iterated_xy(&c, Order::XY).unwrap();
    let yx = integrate_iterated_xy(&c, Order::YX).unwrap();
    assert!((xy + 0.75).abs() < 1e-4 && (yx + 0.75).abs() < 1e-4);
    let c = case_a(2.0, 1.0);
    assert!((integrate_iterated_xy(&c, Order::XY).unwrap() + 1.5).abs() < 1e-4);
    assert!((integrate_iterated_xy(&c, Order::YX).unwrap() + 0.375).abs() < 1e-4);
}

#[test]
fn iterated_ratio_is_amplitude_ratio_squared() {
    for ratio in [0.5, 1.0, 2.0, 5.0, 0.3, 3.7] {
        let c = case_a(ratio, 1.0);
        let xy = integrate_iterated_xy(&c, Order::XY).unwrap();
        let yx = integrate_iterated_xy(&c, Order::YX).unwrap();
        assert!(((xy / yx) / (ratio * ratio) - 1.0).abs() < 1e-4, "{ratio}: {xy} {yx}");
    }
}

#[test]
fn massless_iterated_integrals_vanish() {
    let c: FieldConfig<f64> =
        FieldConfig::case_a(ModelParams::new(1.0, 1.0, 0.0, 1.0).unwrap(), 1.3, 0.0, 0.8, 0.0).unwrap();
    assert!(integrate_iterated_xy(&c, Order::XY).unwrap().abs() < 1e-10);
    assert!(integrate_iterated_xy(&c, Order::YX).unwrap().abs() < 1e-10);
}

#[test]
fn delta_halving_converges() {
    let c = case_a(2.0, 1.0);
    let res = iterated_with_delta(&c, Order::XY, 1e-8).unwrap();
    assert!(res.delta_change < 1e-7);
}

#[test]
fn symmetrized_mean_matches_closed_form() {
    for ratio in [0.5, 1.0, 2.0] {
        let c = case_a(ratio, 1.0);
        let s = symmetrized_invariant(&c).unwrap();
        let expect = chi_case_a(ratio, 1.0, &fig1_params()).unwrap();
        assert!((s.mean.abs() - expect).abs() < 1e-4);
        assert!((s.chi - expect).abs() < 1e-4);
        assert_eq!(s.closed_form, expect);
    }
    let s = symmetrized_invariant(&case_a(1.0, 1.0)).unwrap();
    assert!((s.xy - s.yx).abs() < 1e-12);
    assert!((s.mean - s.xy).abs() < 1e-12);
}

#[test]
fn symmetrized_mean_is_scale_invariant() {
    let base = symmetrized_invariant(&case_a(2.0, 1.0)).unwrap().mean;
    for lambda in [0.5, 2.0, 10.0] {
        let s = symmetrized_invariant(&case_a(2.0 * lambda, lambda)).unwrap().mean;
        assert!((s - base).abs() < 1e-8);
    }
}

#[test]
fn symmetrized_case_b() {
    let params = fig3_params();
    let c = FieldConfig::case_b(params, 3, 0.9, 0.0, 1, 1.4, 0.0).unwrap();
    let s = symmetrized_invariant(&c).unwrap();
    assert!((s.chi - s.closed_form).abs() < 1e-4, "{s:?}");
}
