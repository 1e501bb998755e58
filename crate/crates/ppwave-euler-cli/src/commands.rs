//! Subcommand implementations; each returns one table.

use crate::table::{list, Cell, Table};
use crate::{cells, Case, Chart, DensityArgs, EnergyArgs, Excision, FigureArgs, IntegrateArgs, Method, QuadArgs};
use crate::{Source, SpectrumArgs, SweepArgs, TargetArgs};
use ppwave_euler::config::{parse_config, parse_params, to_config_string};
use ppwave_euler::energy::energy_lattice;
use ppwave_euler::geometry::{conformal_factor, euler_density, euler_density_xy, EulerSource};
use ppwave_euler::modes::omega;
use ppwave_euler::quadrature::{
    epsilon_sweep, integrate_excised, iterated_with_delta, ExcisionShape, Extrapolation, Order, QuadratureSpec,
};
use ppwave_euler::spectra::{chi_case_a, chi_case_c, solve_case_b, solve_case_c_pplus, solve_case_c_rstar, Branch};
use ppwave_euler::target_space::{dirac_mu, euler_pfaffian_check, SpacetimePoint};
use ppwave_euler::{Config, Error, Params};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;

pub struct Failure {
    pub kind: &'static str,
    pub message: String,
    pub code: u8,
}

impl Failure {
    pub fn usage(kind: &'static str, message: String) -> Self {
        Self { kind, message, code: 2 }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self { kind: e.kind(), message: e.to_string(), code: if e.is_input() { 2 } else { 3 } }
    }
}

type Outcome = Result<Table, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))
}

/// Level-1 right and left modes, unit amplitudes, `alpha' = p+ = 1`, `w1 = 2`.
fn reference_config(r: f64, rtilde: f64) -> Config {
    Config::case_a(Params::unit(3f64.sqrt()), r, 0.0, rtilde, 0.0).expect("valid reference configuration")
}

fn load_config(path: Option<&Path>) -> Result<Config, Failure> {
    match path {
        Some(p) => Ok(parse_config(&read(p)?)?),
        None => Ok(reference_config(1.0, 1.0)),
    }
}

fn load_params(path: Option<&Path>, default_mu: f64) -> Result<Params, Failure> {
    match path {
        Some(p) => Ok(parse_params(&read(p)?)?),
        None => Ok(Params::unit(default_mu)),
    }
}

fn record_params(t: &mut Table, p: &Params) {
    t.meta("alpha_prime", p.alpha_prime).meta("p_plus", p.p_plus).meta("mu", p.mu).meta("phi", p.phi);
}

fn quad_spec(q: &QuadArgs) -> QuadratureSpec<f64> {
    let excision = match q.excision {
        Excision::Coordinate => ExcisionShape::CoordinateDisk,
        Excision::Gradient => ExcisionShape::GradientChart,
    };
    QuadratureSpec { grid_n: q.grid_n, excision, ..QuadratureSpec::default() }
}

fn record_spec(t: &mut Table, spec: &QuadratureSpec<f64>) {
    let excision = match spec.excision {
        ExcisionShape::CoordinateDisk => "coordinate disk with level-set boundary correction",
        ExcisionShape::GradientChart => "level set of the conformal factor",
    };
    t.meta("grid_n", spec.grid_n).meta("boundary_samples", spec.boundary_samples).meta("excision", excision);
}

/// NaN where the density is undefined (a zero of `f` within the stencil).
fn density_or_nan(value: ppwave_euler::Result<f64>) -> Result<f64, Failure> {
    match value {
        Ok(v) => Ok(v),
        Err(Error::SingularPoint { .. } | Error::Endpoint { .. }) => Ok(f64::NAN),
        Err(e) => Err(e.into()),
    }
}

pub fn density(a: &DensityArgs) -> Outcome {
    let c = load_config(a.config.config.as_deref())?;
    if a.grid < 2 {
        return Err(Failure::usage("usage", "--grid must be at least 2".into()));
    }
    let mut t = match a.chart {
        Chart::TauSigma => {
            let period = c.params.sigma_period();
            let (tau_max, sigma_max) = (a.tau_max.unwrap_or(period), a.sigma_max.unwrap_or(period));
            let source = match a.source {
                Source::Fd => EulerSource::GeneralFiniteDifference,
                Source::Closed => EulerSource::ClosedFormCaseA,
            };
            let mut t = Table::new(
                "conformal factor and Euler density on a uniform (tau, sigma) grid; NaN marks zeros of f",
                &["tau", "sigma", "f", "e_density"],
            );
            t.meta("tau_range", format!("[0, {tau_max})"))
                .meta("sigma_range", format!("[0, {sigma_max})"))
                .meta("grid", a.grid)
                .meta(
                    "source",
                    if matches!(a.source, Source::Fd) { "finite differences of log f" } else { "closed form" },
                );
            let f = conformal_factor(&c);
            for i in 0..a.grid {
                let tau = tau_max * i as f64 / a.grid as f64;
                for j in 0..a.grid {
                    let sigma = sigma_max * j as f64 / a.grid as f64;
                    let e = density_or_nan(euler_density(&c, tau, sigma, source))?;
                    t.row(cells![tau, sigma, f.value(tau, sigma), e]);
                }
            }
            t
        }
        Chart::Xy => {
            let mut t = Table::new(
                "Euler density coefficient of dx^dy on cell-centred points of the open square (-1, 1)^2",
                &["x", "y", "e_density"],
            );
            t.meta("grid", a.grid);
            for i in 0..a.grid {
                let x = -1.0 + (2 * i + 1) as f64 / a.grid as f64;
                for j in 0..a.grid {
                    let y = -1.0 + (2 * j + 1) as f64 / a.grid as f64;
                    t.row(cells![x, y, density_or_nan(euler_density_xy(&c, x, y))?]);
                }
            }
            t
        }
    };
    record_params(&mut t, &c.params);
    t.block("config", &to_config_string(&c));
    Ok(t)
}

pub fn integrate(a: &IntegrateArgs) -> Outcome {
    let c = load_config(a.config.config.as_deref())?;
    let mut t = match a.method {
        Method::Excised => {
            let spec = quad_spec(&a.quad);
            let e = integrate_excised(&c, &spec, a.epsilon)?;
            let mut t = Table::new(
                "excised Euler integral over one period cell of the conformal factor",
                &["epsilon", "bulk", "boundary", "total"],
            );
            record_spec(&mut t, &spec);
            t.row(cells![e.epsilon, e.bulk, e.boundary, e.total]);
            t
        }
        Method::Iterated => {
            let delta = 1e-8;
            let mut t = Table::new(
                "iterated (x, y) integrals; XY has x outer, YX has y outer",
                &["order", "value", "delta_change"],
            );
            let xy = iterated_with_delta(&c, Order::XY, delta)?;
            let yx = iterated_with_delta(&c, Order::YX, delta)?;
            t.meta("principal_value_gap", delta).meta("mean", (xy.value + yx.value) / 2.0);
            t.row(cells!["XY", xy.value, xy.delta_change]);
            t.row(cells!["YX", yx.value, yx.delta_change]);
            t
        }
    };
    record_params(&mut t, &c.params);
    t.block("config", &to_config_string(&c));
    Ok(t)
}

fn sweep_table(c: &Config, spec: &QuadratureSpec<f64>, content: &str) -> Outcome {
    let report = epsilon_sweep(c, spec)?;
    let mut t = Table::new(content, &["epsilon", "bulk", "boundary", "total", "d_total_d_epsilon"]);
    record_spec(&mut t, spec);
    t.meta("extrapolated", report.extrapolated).meta("reliable", report.reliable);
    if let Some(fit) = report.fit {
        t.meta(
            "fit",
            format!("total = {} + {} * epsilon^{}", fit.limit.cell(), fit.coefficient.cell(), fit.exponent.cell()),
        );
    }
    if let Some(cells) = report.cells_per_period {
        t.meta("cells_per_worldsheet_period", cells);
    }
    for (e, d) in report.per_epsilon.iter().zip(&report.derivative_estimate) {
        t.row(cells![e.epsilon, e.bulk, e.boundary, e.total, d.1]);
    }
    record_params(&mut t, &c.params);
    t.block("config", &to_config_string(c));
    Ok(t)
}

pub fn sweep(a: &SweepArgs) -> Outcome {
    let c = load_config(a.config.config.as_deref())?;
    let mut spec = quad_spec(&a.quad);
    spec.epsilon_list = a.epsilons.clone();
    if a.no_extrapolation {
        spec.extrapolation = Extrapolation::None;
    }
    sweep_table(&c, &spec, "excised Euler integral versus excision radius")
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
    }
}

pub fn spectrum(a: &SpectrumArgs) -> Outcome {
    let p = load_params(a.params.as_deref(), 3f64.sqrt())?;
    let (m, n) = a.levels;
    let rt = a.fixed_amplitude;
    let (k0, k1) = a.k_range;
    if a.case == Case::A && (m, n) != (1, 1) {
        return Err(Failure::usage("usage", "case A has levels 1,1; use case B for other levels".into()));
    }
    let mut t = if a.case == Case::C {
        let mut t = Table::new(
            "case C: p+ solving Re chi = k at the root r* < 1 of Im chi = 0 (p_plus from --params is ignored)",
            &["k", "p_plus", "r_star", "residual"],
        );
        for k in k0..=k1 {
            let pp = solve_case_c_pplus(k, m, n, p.mu, p.alpha_prime)?;
            let solved = Params::new(p.alpha_prime, pp, p.mu, p.phi)?;
            let (_, rs) = solve_case_c_rstar(m, n, &solved)?;
            let (wm, wn) = (omega(m, &solved), omega(n, &solved));
            let r_m = rs * rt * n as f64 * wm.sqrt() / (m as f64 * wn.sqrt());
            let chi = chi_case_c(r_m, rt, m, n, &solved)?;
            t.row(cells![k, pp, rs, (chi - k as f64).norm()]);
        }
        t
    } else {
        let content = if a.case == Case::A {
            "case A: both amplitude branches r solving chi = k at fixed r~"
        } else {
            "case B: both amplitude branches r_m solving chi = k at fixed r~_n"
        };
        let mut t = Table::new(content, &["k", "branch", "r_m", "residual"]);
        let mut skipped = Vec::new();
        for k in k0..=k1 {
            match solve_case_b(k, rt, m, n, &p) {
                Ok(s) if s.branches.is_empty() => skipped.push(k),
                Ok(s) => {
                    for b in &s.branches {
                        t.row(cells![k, branch_name(b.branch), b.value, b.residual]);
                    }
                }
                Err(Error::NoSpectrum { .. }) => skipped.push(k),
                Err(e) => return Err(e.into()),
            }
        }
        if !skipped.is_empty() {
            t.meta("k_without_solutions", list(&skipped));
        }
        if a.case == Case::A {
            t.meta("chi_at_unit_ratio", chi_case_a(rt, rt, &p)?);
        }
        t
    };
    t.meta("levels_m_n", format!("{m},{n}")).meta("fixed_amplitude", rt).meta("k_range", format!("{k0}..{k1}"));
    record_params(&mut t, &p);
    Ok(t)
}

pub fn energy(a: &EnergyArgs) -> Outcome {
    let p = load_params(a.params.as_deref(), 2.0)?;
    let (m, n) = a.levels;
    let (k0, k1) = a.k_range;
    let lattice = energy_lattice(k0..=k1, a.fixed_amplitude, m, n, &p)?;
    let mut t = Table::new("energy lattice H = [w_n + w_m f_mn(k)^2] r~_n^2 on the plus branch", &["k", "f_mn", "H"]);
    for ((k, f), h) in lattice.k_values.iter().zip(&lattice.f_values).zip(&lattice.h_values) {
        t.row(cells![k, f, h]);
    }
    t.meta("levels_m_n", format!("{m},{n}"))
        .meta("fixed_amplitude", a.fixed_amplitude)
        .meta("k_range", format!("{k0}..{k1}"));
    record_params(&mut t, &p);
    Ok(t)
}

pub fn target_check(a: &TargetArgs, seed: u64) -> Outcome {
    let p = load_params(a.params.as_deref(), 1.0)?;
    if a.half_width.is_nan() || a.half_width <= 0.0 {
        return Err(Failure::usage("usage", "--half-width must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = a.half_width;
    let mut worst = 0.0f64;
    for _ in 0..a.points {
        let x_plus = rng.gen_range(-h..h);
        let x_minus = rng.gen_range(-h..h);
        let xs: [f64; 8] = std::array::from_fn(|_| rng.gen_range(-h..h));
        worst = worst.max(euler_pfaffian_check(&SpacetimePoint::new(x_plus, x_minus, xs), &p));
    }
    let mut t = Table::new(
        "Dirac mass table mu(n) = phi sqrt(pi n / 2); header holds the largest sampled Pfaffian magnitude",
        &["n", "mu"],
    );
    t.meta("max_pfaffian", worst).meta("points", a.points).meta("half_width", h).meta("seed", seed);
    for n in 0..=a.dirac_max {
        t.row(cells![n, dirac_mu(n, p.phi)]);
    }
    record_params(&mut t, &p);
    Ok(t)
}

/// Four radii per decade from `1e-2` down to `1e-6`.
fn figure_epsilons() -> Vec<f64> {
    (0..=16).map(|i| 10f64.powf(-2.0 - i as f64 / 4.0)).collect()
}

pub fn figure(a: &FigureArgs) -> Outcome {
    let reference = reference_config(1.0, 1.0);
    let spec = QuadratureSpec { epsilon_list: figure_epsilons(), ..QuadratureSpec::default() };
    let mut t = match a.which {
        1 => {
            let report = epsilon_sweep(&reference, &spec)?;
            let mut t =
                Table::new("excised Euler integral versus excision radius, r = r~ = 1, w1 = 2", &["epsilon", "total"]);
            t.meta("extrapolated", report.extrapolated);
            for e in &report.per_epsilon {
                t.row(cells![e.epsilon, e.total]);
            }
            record_spec(&mut t, &spec);
            record_params(&mut t, &reference.params);
            t.block("config", &to_config_string(&reference));
            t
        }
        2 => {
            let report = epsilon_sweep(&reference, &spec)?;
            let mut t = Table::new(
                "derivative of the excised Euler integral with respect to the excision radius, r = r~ = 1, w1 = 2",
                &["epsilon", "d_total_d_epsilon"],
            );
            for (eps, d) in &report.derivative_estimate {
                t.row(cells![eps, d]);
            }
            record_spec(&mut t, &spec);
            record_params(&mut t, &reference.params);
            t.block("config", &to_config_string(&reference));
            t
        }
        3 => {
            let epsilon = 1e-3;
            let spec = QuadratureSpec::default();
            let mut t = Table::new(
                "Euler invariant over (r, r~): closed form and excised integral at fixed epsilon, w1 = 2",
                &["r", "rtilde", "chi_closed_form", "chi_numeric"],
            );
            let grid: Vec<f64> = (1..=10).map(|i| 0.25 * i as f64).collect();
            for &r in &grid {
                for &rt in &grid {
                    let c = reference_config(r, rt);
                    let closed = chi_case_a(r, rt, &c.params)?;
                    let numeric = integrate_excised(&c, &spec, epsilon)?.total;
                    t.row(cells![r, rt, closed, numeric]);
                }
            }
            t.meta("epsilon", epsilon);
            record_spec(&mut t, &spec);
            record_params(&mut t, &reference.params);
            t
        }
        4 => {
            let p = Params::unit(2.0);
            let mut t = Table::new(
                "allowed amplitudes r_m for integer r~_n, both branches, levels m = 3, n = 1",
                &["rtilde_n", "k", "branch", "r_m"],
            );
            for rt in 1..=5i64 {
                for k in 1..=5 {
                    for b in &solve_case_b(k, rt as f64, 3, 1, &p)?.branches {
                        t.row(cells![rt, k, branch_name(b.branch), b.value]);
                    }
                }
            }
            t.meta("levels_m_n", "3,1");
            record_params(&mut t, &p);
            t
        }
        _ => {
            let p = Params::unit(2.0);
            let lattice = energy_lattice(1..=4, 2.0, 3, 1, &p)?;
            let mut t =
                Table::new("allowed energies at r~_n = 2 on the plus branch, levels m = 3, n = 1", &["k", "f_mn", "H"]);
            for ((k, f), h) in lattice.k_values.iter().zip(&lattice.f_values).zip(&lattice.h_values) {
                t.row(cells![k, f, h]);
            }
            t.meta("levels_m_n", "3,1").meta("fixed_amplitude", 2.0);
            record_params(&mut t, &p);
            t
        }
    };
    t.meta("figure", a.which);
    Ok(t)
}
