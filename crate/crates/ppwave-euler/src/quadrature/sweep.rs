use super::cell::CellIntegrator;
use super::{Extrapolation, QuadratureReport, QuadratureSpec};
use crate::error::{Error, Result};
use crate::modes::FieldConfig;
use crate::scalar::Scalar;

/// `total(eps) = limit + coefficient * eps^exponent` through three points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit<T> {
    pub limit: T,
    pub coefficient: T,
    pub exponent: T,
}

const MAX_EXPONENT: f64 = 12.0;
const MIN_EXPONENT: f64 = 1e-3;

/// Exact three-point fit; `None` when the differences change sign or the
/// exponent falls outside `(1e-3, 12)`.
pub fn fit_power_law<T: Scalar>(points: &[(T, T); 3]) -> Option<PowerLawFit<T>> {
    let [(e1, t1), (e2, t2), (e3, t3)] = *points;
    if !(e1 > e2 && e2 > e3 && e3 > T::zero()) {
        return None;
    }
    let (d1, d2) = (t1 - t2, t2 - t3);
    if d2 == T::zero() {
        return if d1 == T::zero() {
            Some(PowerLawFit { limit: t3, coefficient: T::zero(), exponent: T::zero() })
        } else {
            None
        };
    }
    let target = d1 / d2;
    if !(target > T::zero()) {
        return None;
    }
    let (ra, rb) = (e1 / e2, e3 / e2);
    // (ra^p - 1)/(1 - rb^p) increases from ln ra / -ln rb at p -> 0
    let ratio = |p: T| (ra.powf(p) - T::one()) / (T::one() - rb.powf(p));
    let (mut lo, mut hi) = (T::lit(MIN_EXPONENT), T::lit(MAX_EXPONENT));
    if target < ratio(lo) || target > ratio(hi) {
        return None;
    }
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = (lo + hi) / T::lit(2.0);
    let c = d2 / (e2.powf(p) - e3.powf(p));
    Some(PowerLawFit { limit: t3 - c * e3.powf(p), coefficient: c, exponent: p })
}

fn derivative_trace<T: Scalar>(eps: &[T], total: &[T]) -> Vec<(T, T)> {
    let n = eps.len();
    if n < 2 {
        return Vec::new();
    }
    (0..n)
        .map(|i| {
            let (a, b) = if i == 0 {
                (0, 1)
            } else if i == n - 1 {
                (n - 2, n - 1)
            } else {
                (i - 1, i + 1)
            };
            let dlog = eps[b].ln() - eps[a].ln();
            (eps[i], (total[b] - total[a]) / dlog / eps[i])
        })
        .collect()
}

/// Excised invariant over the spec's radii, with extrapolation to `eps -> 0`.
pub fn epsilon_sweep<T: Scalar>(config: &FieldConfig<T>, spec: &QuadratureSpec<T>) -> Result<QuadratureReport<T>> {
    let eps = &spec.epsilon_list;
    if eps.is_empty() {
        return Err(Error::InvalidConfig("empty epsilon list".into()));
    }
    if eps.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::InvalidConfig("epsilon list must be strictly decreasing".into()));
    }
    let cell = CellIntegrator::new(config, spec)?;
    let mut per_epsilon = Vec::with_capacity(eps.len());
    for &e in eps {
        per_epsilon.push(cell.integrate_excised(e)?);
    }
    let totals: Vec<T> = per_epsilon.iter().map(|r| r.total).collect();
    let diffs: Vec<T> = totals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let mut reliable = diffs.windows(2).all(|w| w[1] < w[0]);
    let last = *totals.last().expect("non-empty");
    let (fit, extrapolated) = match spec.extrapolation {
        Extrapolation::None => (None, last),
        Extrapolation::PowerLawFit if totals.len() >= 3 => {
            let k = totals.len();
            let pts = [(eps[k - 3], totals[k - 3]), (eps[k - 2], totals[k - 2]), (eps[k - 1], totals[k - 1])];
            match fit_power_law(&pts) {
                Some(f) => (Some(f), f.limit),
                None => {
                    reliable = false;
                    (None, last)
                }
            }
        }
        Extrapolation::PowerLawFit => {
            reliable = false;
            (None, last)
        }
    };
    Ok(QuadratureReport {
        derivative_estimate: derivative_trace(eps, &totals),
        per_epsilon,
        extrapolated,
        reliable,
        fit,
        cells_per_period: cell.cells_per_period(),
    })
}
