use super::gauss::{pairwise_sum, GaussLegendre};
use super::{ExcisionShape, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::TwoModeShape;
use crate::modes::FieldConfig;
use crate::scalar::Scalar;
use rayon::prelude::*;
use std::sync::OnceLock;

const ORDER: usize = 16;
const MIN_GRID: usize = 512;

/// Excised integral at one radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExcisedIntegral<T> {
    pub epsilon: T,
    /// Integral of the density over the cell minus the excised neighbourhood.
    pub bulk: T,
    /// Boundary correction; zero for [`ExcisionShape::GradientChart`].
    pub boundary: T,
    pub total: T,
}

/// Global Gauss-Bonnet bookkeeping for one excision radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussBonnetCheck<T> {
    pub epsilon: T,
    pub bulk: T,
    /// `(1/2 pi)` times the circulation along the excision boundary.
    pub excision_circulation: T,
    /// `(1/2 pi)` times the circulation along the cell boundary, zero by periodicity.
    pub cell_circulation: T,
    /// `bulk + excision_circulation - cell_circulation`.
    pub residual: T,
}

/// Integrator for one period cell of a two-mode configuration.
///
/// Phases are measured from the singular point at the cell centre, so the
/// cell is `[-pi/2, pi/2]^2`. The inner square `[-pi/4, pi/4]^2` is mapped to
/// the gradient chart `xi = p sin theta1, eta = sin theta2 / p` with
/// `p = sqrt(R1/R2)`, in which `F = R1 R2 (xi^2 + eta^2)`.
pub struct CellIntegrator<T: Scalar> {
    shape: TwoModeShape<T>,
    grid_n: usize,
    boundary_samples: usize,
    excision: ExcisionShape,
    rule: GaussLegendre<T>,
    outer: OnceLock<T>,
}

struct Trig<T> {
    weight: T,
    s2: T,
    cos2: T,
    sin2: T,
    inner: bool,
}

impl<T: Scalar> CellIntegrator<T> {
    pub fn new(config: &FieldConfig<T>, spec: &QuadratureSpec<T>) -> Result<Self> {
        Self::from_shape(TwoModeShape::from_config(config)?, spec)
    }

    pub fn from_shape(shape: TwoModeShape<T>, spec: &QuadratureSpec<T>) -> Result<Self> {
        if spec.grid_n < MIN_GRID {
            return Err(Error::GridTooCoarse { grid_n: spec.grid_n, minimum: MIN_GRID });
        }
        if spec.boundary_samples < 16 {
            return Err(Error::GridTooCoarse { grid_n: spec.boundary_samples, minimum: 16 });
        }
        Ok(Self {
            shape,
            grid_n: spec.grid_n,
            boundary_samples: spec.boundary_samples,
            excision: spec.excision,
            rule: GaussLegendre::new(ORDER),
            outer: OnceLock::new(),
        })
    }

    pub fn shape(&self) -> &TwoModeShape<T> {
        &self.shape
    }

    fn half_width() -> T {
        T::FRAC_PI_4()
    }

    fn chart_scale(&self) -> T {
        (self.shape.r1 / self.shape.r2).sqrt()
    }

    /// Half-extents `(X, Y)` of the inner square in the gradient chart.
    fn chart_extent(&self) -> (T, T) {
        let p = self.chart_scale();
        let s = Self::half_width().sin();
        (p * s, s / p)
    }

    /// Density from precomputed trigonometric data.
    #[inline]
    fn kernel(&self, a: &Trig<T>, b: &Trig<T>) -> T {
        let sh = &self.shape;
        let (a2, b2) = (sh.r1 * sh.r1, sh.r2 * sh.r2);
        let f = a2 * a.s2 + b2 * b.s2;
        let f2 = f * f;
        let two = T::lit(2.0);
        let l11 = two * (a2 * b2 * b.s2 * a.cos2 - a2 * a2 * a.s2);
        let l22 = two * (a2 * b2 * a.s2 * b.cos2 - b2 * b2 * b.s2);
        let l12 = -a2 * b2 * a.sin2 * b.sin2;
        (-sh.coef_a * (l11 + l22) - two * sh.coef_k * l12) / (f2 * T::lit(4.0) * T::PI() * sh.coef_j)
    }

    fn axis_nodes(&self) -> Vec<Trig<T>> {
        let panels = (self.grid_n / ORDER).max(4);
        let side = panels.div_ceil(4);
        let mid = panels.div_ceil(2);
        let h = Self::half_width();
        let pi2 = T::FRAC_PI_2();
        let mut out = Vec::new();
        let segments = [(-pi2, -h, side, false), (-h, h, mid, true), (h, pi2, side, false)];
        for (lo, hi, count, inner) in segments {
            for (t, w) in self.rule.uniform(lo, hi, count) {
                let s = t.sin();
                let two_t = t + t;
                out.push(Trig { weight: w, s2: s * s, cos2: two_t.cos(), sin2: two_t.sin(), inner });
            }
        }
        out
    }

    /// Integral over the cell minus the inner square; independent of epsilon.
    pub fn outer_integral(&self) -> T {
        *self.outer.get_or_init(|| {
            let nodes = self.axis_nodes();
            let rows: Vec<T> = nodes
                .par_iter()
                .map(|a| {
                    let terms: Vec<T> =
                        nodes.iter().filter(|b| !(a.inner && b.inner)).map(|b| b.weight * self.kernel(a, b)).collect();
                    a.weight * pairwise_sum(&terms)
                })
                .collect();
            pairwise_sum(&rows)
        })
    }

    /// Phases at gradient-chart polar coordinates, with `cos theta` factors.
    #[inline]
    fn phases(&self, rho: T, cphi: T, sphi: T) -> Option<(T, T, T, T)> {
        let p = self.chart_scale();
        let u = rho * cphi / p;
        let v = rho * sphi * p;
        if u.abs() >= T::one() || v.abs() >= T::one() {
            return None;
        }
        Some((u.asin(), v.asin(), (T::one() - u * u).sqrt(), (T::one() - v * v).sqrt()))
    }

    fn coordinate_distance(&self, rho: T, cphi: T, sphi: T) -> T {
        match self.phases(rho, cphi, sphi) {
            Some((t1, t2, _, _)) => {
                let (dt, ds) = self.shape.tau_sigma_offset(t1, t2);
                (dt * dt + ds * ds).sqrt()
            }
            None => T::infinity(),
        }
    }

    /// Radius along a chart ray at which the `(tau, sigma)` distance equals `eps`.
    fn coordinate_radius(&self, epsilon: T, cphi: T, sphi: T) -> Result<T> {
        let probe = T::lit(1e-9);
        let slope = self.coordinate_distance(probe, cphi, sphi) / probe;
        let mut rho = epsilon / slope;
        for _ in 0..200 {
            let d = self.coordinate_distance(rho, cphi, sphi);
            if !d.is_finite() {
                return Err(self.too_large(epsilon));
            }
            let next = rho * epsilon / d;
            if (next - rho).abs() <= T::epsilon() * T::lit(4.0) * rho {
                return Ok(next);
            }
            rho = next;
        }
        Err(Error::NotConverged(format!("coordinate-disk radius at eps = {epsilon}")))
    }

    fn too_large(&self, epsilon: T) -> Error {
        Error::EpsilonTooLarge { epsilon: epsilon.as_f64(), limit: self.epsilon_limit().as_f64() }
    }

    /// Upper bound on admissible radii for the configured shape.
    pub fn epsilon_limit(&self) -> T {
        let (x, y) = self.chart_extent();
        match self.excision {
            ExcisionShape::GradientChart => x.min(y),
            ExcisionShape::CoordinateDisk => T::lit(0.5) * self.shape.min_singular_spacing(),
        }
    }

    fn inner_radius(&self, epsilon: T, cphi: T, sphi: T) -> Result<T> {
        match self.excision {
            ExcisionShape::GradientChart => Ok(epsilon),
            ExcisionShape::CoordinateDisk => self.coordinate_radius(epsilon, cphi, sphi),
        }
    }

    /// Integral over the inner square minus the excised neighbourhood.
    pub fn inner_integral(&self, epsilon: T) -> Result<T> {
        if !(epsilon > T::zero()) || epsilon >= self.epsilon_limit() {
            return Err(self.too_large(epsilon));
        }
        let (ex, ey) = self.chart_extent();
        let pc = ey.atan2(ex);
        let pi = T::PI();
        // sectors bounded by the corners of the chart rectangle
        let sectors = [(-pc, pc, 0usize), (pc, pi - pc, 1), (pi - pc, pi + pc, 2), (pi + pc, pi + pi - pc, 3)];
        let per_sector = (self.grid_n / 256).max(2);
        let per_decade = (self.grid_n / 1024).max(1);
        let decade = T::lit(10f64.ln()) / T::from_usize(per_decade).unwrap();
        let mut rays = Vec::new();
        for (lo, hi, side) in sectors {
            for (phi, w) in self.rule.uniform(lo, hi, per_sector) {
                rays.push((phi, w, side));
            }
        }
        let parts: Vec<Result<T>> = rays
            .par_iter()
            .map(|&(phi, wphi, side)| {
                let (sphi, cphi) = phi.sin_cos();
                let rho_out = match side {
                    0 => ex / cphi,
                    1 => ey / sphi,
                    2 => -ex / cphi,
                    _ => -ey / sphi,
                };
                let rho_in = self.inner_radius(epsilon, cphi, sphi)?;
                if rho_in >= rho_out {
                    return Err(self.too_large(epsilon));
                }
                let (s0, s1) = (rho_in.ln(), rho_out.ln());
                let count = ((s1 - s0) / decade).ceil().as_f64().max(1.0) as usize;
                let terms: Vec<T> = self
                    .rule
                    .uniform(s0, s1, count)
                    .into_iter()
                    .map(|(s, w)| {
                        let rho = s.exp();
                        let (t1, t2, c1, c2) = self.phases(rho, cphi, sphi).expect("inside the chart square");
                        w * rho * rho * self.shape.density_theta(t1, t2) / (c1 * c2)
                    })
                    .collect();
                Ok(wphi * pairwise_sum(&terms))
            })
            .collect();
        let mut vals = Vec::with_capacity(parts.len());
        for p in parts {
            vals.push(p?);
        }
        Ok(pairwise_sum(&vals))
    }

    fn trapezoid<F: Fn(T) -> T + Sync>(&self, start: T, f: F) -> T {
        let n = self.boundary_samples;
        let h = T::TAU() / T::from_usize(n).unwrap();
        let terms: Vec<T> = (0..n).into_par_iter().map(|k| f(start + h * T::from_usize(k).unwrap())).collect();
        h * pairwise_sum(&terms)
    }

    /// Circulation of the connection along the level-set circle of chart
    /// radius `eps`, counter-clockwise in the phases.
    pub fn gradient_disk_circulation(&self, epsilon: T, start: T) -> Result<T> {
        let (ex, ey) = self.chart_extent();
        if epsilon >= ex.min(ey) {
            return Err(self.too_large(epsilon));
        }
        let p = self.chart_scale();
        Ok(self.trapezoid(start, |phi| {
            let (sphi, cphi) = phi.sin_cos();
            let (t1, t2, c1, c2) = self.phases(epsilon, cphi, sphi).expect("inside the chart square");
            let d1 = -epsilon * sphi / (p * c1);
            let d2 = epsilon * cphi * p / c2;
            let (pp, qq) = self.shape.connection_theta(t1, t2);
            pp * d1 + qq * d2
        }))
    }

    /// Circulation along the `(tau, sigma)` circle of radius `eps`,
    /// counter-clockwise in the phases (clockwise in `(tau, sigma)`).
    pub fn coordinate_disk_circulation(&self, epsilon: T, start: T) -> Result<T> {
        if epsilon >= T::lit(0.5) * self.shape.min_singular_spacing() {
            return Err(self.too_large(epsilon));
        }
        let sh = &self.shape;
        let (m, n, a) = (sh.m(), sh.n(), sh.a);
        let tau_ccw = self.trapezoid(start, |phi| {
            let (sphi, cphi) = phi.sin_cos();
            let (dt, ds) = (epsilon * cphi, epsilon * sphi);
            let t1 = (sh.omega_m * dt + m * ds) / a;
            let t2 = (sh.omega_n * dt - n * ds) / a;
            let d1 = epsilon * (-sh.omega_m * sphi + m * cphi) / a;
            let d2 = epsilon * (-sh.omega_n * sphi - n * cphi) / a;
            let (pp, qq) = sh.connection_theta(t1, t2);
            pp * d1 + qq * d2
        });
        Ok(-tau_ccw)
    }

    /// Circulation around the cell boundary, counter-clockwise in the phases.
    pub fn cell_circulation(&self) -> T {
        let pi2 = T::FRAC_PI_2();
        let panels = (self.grid_n / ORDER).max(4);
        let nodes = self.rule.uniform(-pi2, pi2, panels);
        let sh = &self.shape;
        let terms: Vec<T> = nodes
            .iter()
            .map(|&(t, w)| {
                let bottom = sh.connection_theta(t, -pi2).0;
                let right = sh.connection_theta(pi2, t).1;
                let top = sh.connection_theta(t, pi2).0;
                let left = sh.connection_theta(-pi2, t).1;
                w * ((bottom - top) + (right - left))
            })
            .collect();
        pairwise_sum(&terms)
    }

    fn boundary_term(&self, epsilon: T) -> Result<T> {
        match self.excision {
            ExcisionShape::GradientChart => Ok(T::zero()),
            ExcisionShape::CoordinateDisk => {
                let outer = self.coordinate_disk_circulation(epsilon, T::zero())?;
                let level = self.gradient_disk_circulation(epsilon, T::zero())?;
                Ok((outer - level) / T::TAU())
            }
        }
    }

    pub fn integrate_excised(&self, epsilon: T) -> Result<ExcisedIntegral<T>> {
        let bulk = self.inner_integral(epsilon)? + self.outer_integral();
        let boundary = self.boundary_term(epsilon)?;
        Ok(ExcisedIntegral { epsilon, bulk, boundary, total: bulk + boundary })
    }

    /// Same as [`Self::integrate_excised`] with boundary circles starting at angle `start`.
    pub fn integrate_excised_from(&self, epsilon: T, start: T) -> Result<ExcisedIntegral<T>> {
        let bulk = self.inner_integral(epsilon)? + self.outer_integral();
        let boundary = match self.excision {
            ExcisionShape::GradientChart => T::zero(),
            ExcisionShape::CoordinateDisk => {
                (self.coordinate_disk_circulation(epsilon, start)? - self.gradient_disk_circulation(epsilon, start)?)
                    / T::TAU()
            }
        };
        Ok(ExcisedIntegral { epsilon, bulk, boundary, total: bulk + boundary })
    }

    /// Stokes bookkeeping over the whole cell: the excised bulk plus the
    /// excision circulation must equal the (vanishing) cell circulation.
    pub fn gauss_bonnet(&self, epsilon: T) -> Result<GaussBonnetCheck<T>> {
        let bulk = self.inner_integral(epsilon)? + self.outer_integral();
        let circ = match self.excision {
            ExcisionShape::GradientChart => self.gradient_disk_circulation(epsilon, T::zero())?,
            ExcisionShape::CoordinateDisk => self.coordinate_disk_circulation(epsilon, T::zero())?,
        } / T::TAU();
        let cell = self.cell_circulation() / T::TAU();
        Ok(GaussBonnetCheck {
            epsilon,
            bulk,
            excision_circulation: circ,
            cell_circulation: cell,
            residual: bulk + circ - cell,
        })
    }

    /// Number of period cells of `f` in the worldsheet period
    /// `tau in [0, pi a / w1), sigma in [0, 2 pi a)` (case A only).
    pub fn cells_per_period(&self) -> Option<usize> {
        if !self.shape.is_case_a() {
            return None;
        }
        let sh = &self.shape;
        let period_area = T::PI() * sh.a / sh.omega_m * T::TAU() * sh.a;
        let cell_area = T::PI() * T::PI() * sh.a * sh.a / sh.coef_j;
        Some((period_area / cell_area).round().as_f64() as usize)
    }
}
