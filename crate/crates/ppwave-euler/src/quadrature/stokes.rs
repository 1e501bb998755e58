use super::gauss::{pairwise_sum, GaussLegendre};
use crate::error::{Error, Result};
use crate::geometry::{conformal_factor, Rect, TwoModeShape};
use crate::modes::FieldConfig;
use crate::scalar::Scalar;
use rayon::prelude::*;

const ORDER: usize = 20;
const MIN_PANELS: usize = 8;
const MAX_PANELS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StokesReport<T> {
    /// Area integral of the closed-form density.
    pub area: T,
    /// `-(1/2 pi)` times the counter-clockwise circulation of the connection
    /// one-form, computed from the mode expansion.
    pub boundary: T,
    pub discrepancy: T,
}

fn area_and_boundary<T: Scalar>(
    shape: &TwoModeShape<T>,
    config: &FieldConfig<T>,
    region: &Rect<T>,
    panels: usize,
) -> Result<(T, T)> {
    let rule = GaussLegendre::new(ORDER);
    let taus = rule.uniform(region.tau.0, region.tau.1, panels);
    let sigmas = rule.uniform(region.sigma.0, region.sigma.1, panels);
    let rows: Vec<Result<T>> = taus
        .par_iter()
        .map(|&(t, wt)| {
            let mut terms = Vec::with_capacity(sigmas.len());
            for &(s, ws) in &sigmas {
                terms.push(ws * shape.density_tau_sigma(t, s)?);
            }
            Ok(wt * pairwise_sum(&terms))
        })
        .collect();
    let mut vals = Vec::with_capacity(rows.len());
    for r in rows {
        vals.push(r?);
    }
    let area = pairwise_sum(&vals);

    let cf = conformal_factor(config);
    let (t0, t1) = region.tau;
    let (s0, s1) = region.sigma;
    let mut terms = Vec::new();
    // counter-clockwise in (tau, sigma): bottom, right, top, left
    for &(t, w) in &taus {
        terms.push(w * (cf.connection(t, s0)?.0 - cf.connection(t, s1)?.0));
    }
    for &(s, w) in &sigmas {
        terms.push(w * (cf.connection(t1, s)?.1 - cf.connection(t0, s)?.1));
    }
    Ok((area, -pairwise_sum(&terms) / T::TAU()))
}

/// Area integral against boundary circulation on a rectangle free of singular points.
///
/// Panels per side double from 8 to 64 until both quantities settle; a
/// rectangle hugging a zero of `f` can exhaust the cap and report a large
/// discrepancy.
pub fn stokes_report<T: Scalar>(config: &FieldConfig<T>, region: &Rect<T>) -> Result<StokesReport<T>> {
    let shape = TwoModeShape::from_config(config)?;
    let singular = shape.singular_points(region)?;
    if !singular.is_empty() {
        return Err(Error::RegionNotRegular { count: singular.len() });
    }
    let tol = T::lit(1e-12);
    let mut panels = MIN_PANELS;
    let (mut area, mut boundary) = area_and_boundary(&shape, config, region, panels)?;
    while panels < MAX_PANELS {
        panels *= 2;
        let (a, b) = area_and_boundary(&shape, config, region, panels)?;
        let settled =
            (a - area).abs() <= tol * T::one().max(a.abs()) && (b - boundary).abs() <= tol * T::one().max(b.abs());
        area = a;
        boundary = b;
        if settled {
            break;
        }
    }
    Ok(StokesReport { area, boundary, discrepancy: (area - boundary).abs() })
}

/// `|area integral - boundary circulation|`.
pub fn stokes_check<T: Scalar>(config: &FieldConfig<T>, region: &Rect<T>) -> Result<T> {
    Ok(stokes_report(config, region)?.discrepancy)
}
