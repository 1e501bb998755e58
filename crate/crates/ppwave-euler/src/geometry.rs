//! Induced worldsheet geometry: conformal factor, Euler density, the
//! `(x, y) = (sin theta1, sin theta2)` chart and the singular lattice.
//!
//! For two-mode configurations everything is expressed through the phases
//! `theta1 = (w_m tau + m sigma)/a + gamma`, `theta2 = (w_n tau - n sigma)/a + gamma~`,
//! in which `f = (2 alpha'/a^2) F` with `F = R1^2 sin^2 theta1 + R2^2 sin^2 theta2`.

use crate::error::{Error, Result};
use crate::modes::{eval_jets, omega, Chirality, FieldConfig, Mode, ModelParams};
use crate::scalar::Scalar;
use crate::target_space::{Metric, PpWave, DIM, MINUS, PLUS};

/// Axis-aligned rectangle in `(tau, sigma)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect<T> {
    pub tau: (T, T),
    pub sigma: (T, T),
}

impl<T: Scalar> Rect<T> {
    pub fn new(tau: (T, T), sigma: (T, T)) -> Self {
        Self { tau, sigma }
    }

    pub fn contains(&self, tau: T, sigma: T) -> bool {
        tau >= self.tau.0 && tau <= self.tau.1 && sigma >= self.sigma.0 && sigma <= self.sigma.1
    }
}

/// `f = sum_I (d_sigma X^I)^2` for one configuration.
#[derive(Clone, Copy, Debug)]
pub struct ConformalFactor<'a, T> {
    pub config: &'a FieldConfig<T>,
}

pub fn conformal_factor<T: Scalar>(config: &FieldConfig<T>) -> ConformalFactor<'_, T> {
    ConformalFactor { config }
}

impl<T: Scalar> ConformalFactor<'_, T> {
    pub fn value(&self, tau: T, sigma: T) -> T {
        eval_jets(self.config, tau, sigma).iter().fold(T::zero(), |s, j| s + j.d_sigma * j.d_sigma)
    }

    /// `(d_tau f, d_sigma f)`.
    pub fn gradient(&self, tau: T, sigma: T) -> (T, T) {
        let two = T::lit(2.0);
        eval_jets(self.config, tau, sigma).iter().fold((T::zero(), T::zero()), |(a, b), j| {
            (a + two * j.d_sigma * j.d_tau_sigma, b + two * j.d_sigma * j.d_sigma_sigma)
        })
    }

    /// True when no oscillator is excited, so `f` vanishes identically.
    pub fn is_degenerate(&self) -> bool {
        self.config.modes.iter().all(|m| m.amplitude == T::zero())
    }

    /// Connection one-form `omega = 1/2 (d_sigma log f d_tau + d_tau log f d_sigma)`,
    /// returned as its `(d_tau, d_sigma)` components. `e = -d omega / 2 pi`.
    pub fn connection(&self, tau: T, sigma: T) -> Result<(T, T)> {
        let f = self.value(tau, sigma);
        if f <= T::zero() {
            return Err(singular(tau, sigma));
        }
        let (ft, fs) = self.gradient(tau, sigma);
        let half = T::lit(0.5);
        Ok((half * fs / f, half * ft / f))
    }
}

fn singular<T: Scalar>(tau: T, sigma: T) -> Error {
    Error::SingularPoint { tau: tau.as_f64(), sigma: sigma.as_f64() }
}

/// Pullback of the target metric in gauge `X+ = tau`, with a caller-supplied
/// longitudinal gradient `(d_tau X-, d_sigma X-)`.
pub fn induced_metric_with<T: Scalar>(config: &FieldConfig<T>, tau: T, sigma: T, xminus: (T, T)) -> [[T; 2]; 2] {
    let jets = eval_jets(config, tau, sigma);
    let mut coords = [T::zero(); DIM];
    coords[PLUS] = tau;
    let mut dt = [T::zero(); DIM];
    let mut ds = [T::zero(); DIM];
    dt[PLUS] = T::one();
    dt[MINUS] = xminus.0;
    ds[MINUS] = xminus.1;
    for (i, j) in jets.iter().enumerate() {
        coords[2 + i] = j.value;
        dt[2 + i] = j.d_tau;
        ds[2 + i] = j.d_sigma;
    }
    let g = PpWave::new(&config.params).metric(&coords);
    let pull = |u: &[T; DIM], v: &[T; DIM]| {
        let mut s = T::zero();
        for a in 0..DIM {
            for b in 0..DIM {
                if g[a][b] != T::zero() {
                    s = s + u[a] * g[a][b] * v[b];
                }
            }
        }
        s
    };
    let tt = pull(&dt, &dt);
    let ts = pull(&dt, &ds);
    let ss = pull(&ds, &ds);
    [[tt, ts], [ts, ss]]
}

/// On-shell induced metric; equals `f diag(-1, 1)`.
pub fn induced_metric<T: Scalar>(config: &FieldConfig<T>, tau: T, sigma: T) -> [[T; 2]; 2] {
    let xm = crate::modes::xminus_gradient(config, tau, sigma);
    induced_metric_with(config, tau, sigma, xm)
}

/// Evaluation path for the Euler density.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EulerSource {
    /// Fourth-order central differences of `log f`, valid for any configuration.
    GeneralFiniteDifference,
    /// Closed form in the phases; two-mode (case A or B) configurations.
    ClosedFormCaseA,
    /// Closed form in `(x, y)` pulled back with the chart Jacobian.
    TransformedXY,
}

/// Coefficient of `d tau ^ d sigma` in `e = (1/4 pi)(d_sigma^2 - d_tau^2) log f`.
pub fn euler_density<T: Scalar>(config: &FieldConfig<T>, tau: T, sigma: T, source: EulerSource) -> Result<T> {
    match source {
        EulerSource::GeneralFiniteDifference => euler_density_fd(config, tau, sigma),
        EulerSource::ClosedFormCaseA => TwoModeShape::from_config(config)?.density_tau_sigma(tau, sigma),
        EulerSource::TransformedXY => TwoModeShape::from_config(config)?.density_tau_sigma_via_xy(tau, sigma),
    }
}

fn euler_density_fd<T: Scalar>(config: &FieldConfig<T>, tau: T, sigma: T) -> Result<T> {
    let cf = conformal_factor(config);
    let h = T::lit(1e-4) * config.params.scale();
    let offsets = [-2, -1, 1, 2];
    let weights = [-T::one(), T::lit(16.0), T::lit(16.0), -T::one()];
    let f0 = cf.value(tau, sigma);
    let ft: Vec<T> = offsets.iter().map(|&k| cf.value(tau + T::from_int(k) * h, sigma)).collect();
    let fs: Vec<T> = offsets.iter().map(|&k| cf.value(tau, sigma + T::from_int(k) * h)).collect();
    let fmax = ft.iter().chain(fs.iter()).fold(f0, |m, &v| m.max(v));
    let fmin = ft.iter().chain(fs.iter()).fold(f0, |m, &v| m.min(v));
    if !(fmax > T::zero()) || fmin < T::lit(1e-6) * fmax {
        return Err(singular(tau, sigma));
    }
    let l0 = f0.ln();
    let second = |vals: &[T]| {
        let mut s = T::lit(-30.0) * l0;
        for (v, w) in vals.iter().zip(weights) {
            s = s + w * v.ln();
        }
        s / (T::lit(12.0) * h * h)
    };
    Ok((second(&fs) - second(&ft)) / (T::lit(4.0) * T::PI()))
}

/// One right mover and one left mover on distinct fields, the only
/// oscillators present (centre-of-mass data is allowed and ignored by `f`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoModeShape<T> {
    pub params: ModelParams<T>,
    pub right: Mode<T>,
    pub left: Mode<T>,
    /// `a = alpha' p+`.
    pub a: T,
    pub omega_m: T,
    pub omega_n: T,
    /// `m r_m / sqrt(w_m)`.
    pub r1: T,
    /// `n r~_n / sqrt(w_n)`.
    pub r2: T,
    /// `(mu a)^2`.
    pub coef_a: T,
    /// `m n + w_m w_n`.
    pub coef_k: T,
    /// `n w_m + m w_n`.
    pub coef_j: T,
}

impl<T: Scalar> TwoModeShape<T> {
    pub fn from_config(config: &FieldConfig<T>) -> Result<Self> {
        let excited: Vec<&Mode<T>> = config.modes.iter().filter(|m| m.amplitude > T::zero()).collect();
        let right: Vec<_> = excited.iter().filter(|m| m.chirality == Chirality::Right).collect();
        let left: Vec<_> = excited.iter().filter(|m| m.chirality == Chirality::Left).collect();
        if excited.len() != 2 || right.len() != 1 || left.len() != 1 {
            return Err(Error::ShapeMismatch(format!(
                "need exactly one excited right mover and one excited left mover, found {} right and {} left",
                right.len(),
                left.len()
            )));
        }
        let (r, l) = (**right[0], **left[0]);
        if r.field == l.field {
            return Err(Error::ShapeMismatch(
                "both modes on one field (case C): the conformal factor vanishes on curves".into(),
            ));
        }
        Ok(Self::new(config.params, r, l))
    }

    fn new(params: ModelParams<T>, right: Mode<T>, left: Mode<T>) -> Self {
        let m = T::from_u32(right.level).expect("level fits");
        let n = T::from_u32(left.level).expect("level fits");
        let omega_m = omega(right.level, &params);
        let omega_n = omega(left.level, &params);
        Self {
            params,
            right,
            left,
            a: params.scale(),
            omega_m,
            omega_n,
            r1: m * right.amplitude / omega_m.sqrt(),
            r2: n * left.amplitude / omega_n.sqrt(),
            coef_a: params.mass_gap(),
            coef_k: m * n + omega_m * omega_n,
            coef_j: n * omega_m + m * omega_n,
        }
    }

    pub fn m(&self) -> T {
        T::from_u32(self.right.level).expect("level fits")
    }

    pub fn n(&self) -> T {
        T::from_u32(self.left.level).expect("level fits")
    }

    pub fn is_case_a(&self) -> bool {
        self.right.level == 1 && self.left.level == 1
    }

    /// `U = R1 / R2`, the ratio variable of the case-B formulas.
    pub fn ratio(&self) -> T {
        self.r1 / self.r2
    }

    pub fn theta(&self, tau: T, sigma: T) -> (T, T) {
        let t1 = (self.omega_m * tau + self.m() * sigma) / self.a + self.right.phase;
        let t2 = (self.omega_n * tau - self.n() * sigma) / self.a + self.left.phase;
        (t1, t2)
    }

    /// Inverse of the linear part of [`Self::theta`]: `(d tau, d sigma)` for a phase offset.
    pub fn tau_sigma_offset(&self, d1: T, d2: T) -> (T, T) {
        let s = self.a / self.coef_j;
        (s * (self.n() * d1 + self.m() * d2), s * (self.omega_n * d1 - self.omega_m * d2))
    }

    /// `F(theta)`; `f = 2 alpha' F / a^2`.
    pub fn big_f(&self, t1: T, t2: T) -> T {
        let (s1, s2) = (t1.sin(), t2.sin());
        self.r1 * self.r1 * s1 * s1 + self.r2 * self.r2 * s2 * s2
    }

    /// First derivatives of `log F` in the phases.
    pub fn log_f_gradient(&self, t1: T, t2: T) -> (T, T) {
        let f = self.big_f(t1, t2);
        let (a2, b2) = (self.r1 * self.r1, self.r2 * self.r2);
        let two = T::lit(2.0);
        (a2 * (two * t1).sin() / f, b2 * (two * t2).sin() / f)
    }

    /// `(l11, l22, l12)`, second derivatives of `log F`, written so that no
    /// large terms cancel near the zeros of `F`.
    pub fn log_f_hessian(&self, t1: T, t2: T) -> (T, T, T) {
        let (s1, s2) = (t1.sin(), t2.sin());
        let (a2, b2) = (self.r1 * self.r1, self.r2 * self.r2);
        let f = a2 * s1 * s1 + b2 * s2 * s2;
        let f2 = f * f;
        let two = T::lit(2.0);
        let l11 = two * (a2 * b2 * s2 * s2 * (two * t1).cos() - a2 * a2 * s1 * s1) / f2;
        let l22 = two * (a2 * b2 * s1 * s1 * (two * t2).cos() - b2 * b2 * s2 * s2) / f2;
        let l12 = -a2 * b2 * (two * t1).sin() * (two * t2).sin() / f2;
        (l11, l22, l12)
    }

    /// Density `g` with `integral of e over a region = integral of g d theta1 d theta2`.
    pub fn density_theta(&self, t1: T, t2: T) -> T {
        let (l11, l22, l12) = self.log_f_hessian(t1, t2);
        let two = T::lit(2.0);
        (-self.coef_a * (l11 + l22) - two * self.coef_k * l12) / (T::lit(4.0) * T::PI() * self.coef_j)
    }

    /// Connection one-form in the phases, `P d theta1 + Q d theta2`, with
    /// `d omega = 2 pi g d theta1 ^ d theta2`.
    pub fn connection_theta(&self, t1: T, t2: T) -> (T, T) {
        let (l1, l2) = self.log_f_gradient(t1, t2);
        let two_j = T::lit(2.0) * self.coef_j;
        ((self.coef_k * l1 + self.coef_a * l2) / two_j, -(self.coef_a * l1 + self.coef_k * l2) / two_j)
    }

    fn guard(&self, t1: T, t2: T, tau: T, sigma: T) -> Result<()> {
        let scale = self.r1 * self.r1 + self.r2 * self.r2;
        if self.big_f(t1, t2) <= T::lit(1e-28) * scale {
            return Err(singular(tau, sigma));
        }
        Ok(())
    }

    pub fn density_tau_sigma(&self, tau: T, sigma: T) -> Result<T> {
        let (t1, t2) = self.theta(tau, sigma);
        self.guard(t1, t2, tau, sigma)?;
        Ok(self.density_theta(t1, t2) * self.coef_j / (self.a * self.a))
    }

    fn density_tau_sigma_via_xy(&self, tau: T, sigma: T) -> Result<T> {
        let (t1, t2) = self.theta(tau, sigma);
        self.guard(t1, t2, tau, sigma)?;
        // f has period pi in each phase; fold into the principal chart
        let (u1, u2) = (principal(t1), principal(t2));
        let (c1, c2) = (u1.cos(), u2.cos());
        let exy = self.density_xy(u1.sin(), u2.sin())?;
        Ok(-exy * c1 * c2 * self.coef_j / (self.a * self.a))
    }

    /// `e_xy * sqrt(1-x^2) sqrt(1-y^2)`: the integrand after `x = sin v, y = sin u`.
    pub fn weighted_density_xy(&self, x: T, y: T, cx: T, cy: T) -> T {
        let (a2, b2) = (self.r1 * self.r1, self.r2 * self.r2);
        let (x2, y2) = (x * x, y * y);
        let f = a2 * x2 + b2 * y2;
        let num = -self.coef_a * (a2 * a2 * x2 + b2 * b2 * y2)
            + self.coef_a * a2 * b2 * (x2 + y2 - T::lit(4.0) * x2 * y2)
            - T::lit(4.0) * self.coef_k * a2 * b2 * x * y * cx * cy;
        num / (T::lit(2.0) * T::PI() * self.coef_j * f * f)
    }

    /// Coefficient of `dx ^ dy`.
    pub fn density_xy(&self, x: T, y: T) -> Result<T> {
        if x.abs() >= T::one() || y.abs() >= T::one() {
            return Err(Error::Endpoint { x: x.as_f64(), y: y.as_f64() });
        }
        if x == T::zero() && y == T::zero() {
            return Err(Error::SingularPoint { tau: f64::NAN, sigma: f64::NAN });
        }
        let cx = (T::one() - x * x).sqrt();
        let cy = (T::one() - y * y).sqrt();
        Ok(self.weighted_density_xy(x, y, cx, cy) / (cx * cy))
    }

    /// Lattice points where both phases are multiples of pi.
    pub fn singular_points(&self, domain: &Rect<T>) -> Result<SingularSet<T>> {
        if !(self.coef_j > T::zero()) {
            return Err(Error::DegenerateLattice);
        }
        let corners = [
            (domain.tau.0, domain.sigma.0),
            (domain.tau.0, domain.sigma.1),
            (domain.tau.1, domain.sigma.0),
            (domain.tau.1, domain.sigma.1),
        ];
        let mut lo = (T::infinity(), T::infinity());
        let mut hi = (T::neg_infinity(), T::neg_infinity());
        for (t, s) in corners {
            let (a, b) = self.theta(t, s);
            lo = (lo.0.min(a), lo.1.min(b));
            hi = (hi.0.max(a), hi.1.max(b));
        }
        let pi = T::PI();
        let range = |l: T, h: T| ((l / pi).ceil().as_f64() as i64 - 1)..=((h / pi).floor().as_f64() as i64 + 1);
        let tol = T::lit(1e-12) * (T::one() + domain.tau.1.abs() + domain.sigma.1.abs());
        let mut points = Vec::new();
        for j in range(lo.0, hi.0) {
            for l in range(lo.1, hi.1) {
                let d1 = T::from_int(j) * pi - self.right.phase;
                let d2 = T::from_int(l) * pi - self.left.phase;
                let (t, s) = self.tau_sigma_offset(d1, d2);
                let inside = t >= domain.tau.0 - tol
                    && t <= domain.tau.1 + tol
                    && s >= domain.sigma.0 - tol
                    && s <= domain.sigma.1 + tol;
                if inside {
                    points.push((t, s));
                }
            }
        }
        points.sort_by(|p, q| p.partial_cmp(q).unwrap());
        Ok(SingularSet { points })
    }

    /// Smallest distance between two distinct singular points in `(tau, sigma)`.
    pub fn min_singular_spacing(&self) -> T {
        let pi = T::PI();
        let mut best = T::infinity();
        for j in -3i64..=3 {
            for l in -3i64..=3 {
                if j == 0 && l == 0 {
                    continue;
                }
                let (t, s) = self.tau_sigma_offset(T::from_int(j) * pi, T::from_int(l) * pi);
                best = best.min((t * t + s * s).sqrt());
            }
        }
        best
    }
}

/// Reduces a phase into `(-pi/2, pi/2]`.
fn principal<T: Scalar>(t: T) -> T {
    let pi = T::PI();
    let k = (t / pi).round();
    let r = t - k * pi;
    if r <= -T::FRAC_PI_2() {
        r + pi
    } else {
        r
    }
}

/// Zeros of `f` inside a domain.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSet<T> {
    pub points: Vec<(T, T)>,
}

impl<T> SingularSet<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn to_xy<T: Scalar>(config: &FieldConfig<T>, tau: T, sigma: T) -> Result<(T, T)> {
    let s = TwoModeShape::from_config(config)?;
    let (t1, t2) = s.theta(tau, sigma);
    Ok((t1.sin(), t2.sin()))
}

pub fn euler_density_xy<T: Scalar>(config: &FieldConfig<T>, x: T, y: T) -> Result<T> {
    TwoModeShape::from_config(config)?.density_xy(x, y)
}

pub fn singular_points<T: Scalar>(config: &FieldConfig<T>, domain: &Rect<T>) -> Result<SingularSet<T>> {
    TwoModeShape::from_config(config)?.singular_points(domain)
}
