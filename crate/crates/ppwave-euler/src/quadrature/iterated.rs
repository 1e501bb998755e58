use super::gauss::{pairwise_sum, GaussLegendre};
use crate::error::{Error, Result};
use crate::geometry::TwoModeShape;
use crate::modes::FieldConfig;
use crate::scalar::Scalar;
use crate::spectra;
use rayon::prelude::*;

const ORDER: usize = 20;
const DELTA: f64 = 1e-8;
const DELTA_TOLERANCE: f64 = 1e-7;

/// Which variable is integrated last.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// `x` outer, `y` inner; yields `(1 - w^2)/(2w) r/r~` for case A.
    XY,
    /// `y` outer, `x` inner; yields `(1 - w^2)/(2w) r~/r` for case A.
    YX,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IteratedResult<T> {
    pub value: T,
    /// Change when the principal-value gap is halved.
    pub delta_change: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Symmetrized<T> {
    pub xy: T,
    pub yx: T,
    /// `(xy + yx) / 2`.
    pub mean: T,
    /// Reported invariant, `-mean`, positive for `w > 1`.
    pub chi: T,
    /// Closed form `A/(2J) (U + 1/U)`.
    pub closed_form: T,
}

/// Geometric breakpoints `scale * 2^k` inside `(0, limit)`, mirrored about zero.
fn graded_breaks<T: Scalar>(scale: T, limit: T) -> Vec<T> {
    let mut pos = Vec::new();
    let mut b = scale / T::lit(64.0);
    while b < limit {
        pos.push(b);
        b = b + b;
    }
    let mut breaks: Vec<T> = pos.iter().rev().map(|&v| -v).collect();
    breaks.insert(0, -limit);
    breaks.push(T::zero());
    breaks.extend(pos);
    breaks.push(limit);
    breaks
}

fn inner<T: Scalar>(shape: &TwoModeShape<T>, rule: &GaussLegendre<T>, order: Order, outer: T, c_outer: T) -> T {
    let pi2 = T::FRAC_PI_2();
    // the inner integrand peaks where R1 |x| ~ R2 |y|
    let scale = match order {
        Order::XY => outer.abs() * shape.r1 / shape.r2,
        Order::YX => outer.abs() * shape.r2 / shape.r1,
    };
    let nodes = rule.composite(&graded_breaks(scale.min(pi2), pi2));
    let terms: Vec<T> = nodes
        .iter()
        .map(|&(u, w)| {
            let (s, c) = u.sin_cos();
            let v = match order {
                Order::XY => shape.weighted_density_xy(outer, s, c_outer, c),
                Order::YX => shape.weighted_density_xy(s, outer, c, c_outer),
            };
            w * v
        })
        .collect();
    pairwise_sum(&terms)
}

fn iterate<T: Scalar>(shape: &TwoModeShape<T>, order: Order, delta: T) -> T {
    let rule = GaussLegendre::new(ORDER);
    let pi2 = T::FRAC_PI_2();
    let mut breaks = Vec::new();
    let mut b = delta;
    while b < pi2 {
        breaks.push(b);
        b = b * T::lit(4.0);
    }
    breaks.push(pi2);
    let half = rule.composite(&breaks);
    let nodes: Vec<(T, T)> = half.iter().map(|&(v, w)| (-v, w)).rev().chain(half.iter().copied()).collect();
    let terms: Vec<T> = nodes
        .par_iter()
        .map(|&(v, w)| {
            let (s, c) = v.sin_cos();
            w * inner(shape, &rule, order, s, c)
        })
        .collect();
    pairwise_sum(&terms)
}

/// Iterated integral of the `(x, y)` density over the square with the
/// substitutions `x = sin v`, `y = sin u` and a principal-value gap `delta`
/// around the singular line of the outer variable.
pub fn iterated_with_delta<T: Scalar>(config: &FieldConfig<T>, order: Order, delta: T) -> Result<IteratedResult<T>> {
    let shape = TwoModeShape::from_config(config)?;
    let value = iterate(&shape, order, delta);
    let halved = iterate(&shape, order, delta / T::lit(2.0));
    if !(value.is_finite() && halved.is_finite()) {
        return Err(Error::NotConverged(format!("iterated integral ({order:?}) is not finite")));
    }
    let delta_change = (value - halved).abs();
    let floor = T::lit(100.0) * T::epsilon() * T::one().max(halved.abs());
    if delta_change > T::lit(DELTA_TOLERANCE).max(floor) {
        return Err(Error::NotConverged(format!(
            "iterated integral ({order:?}) moved by {delta_change} when delta was halved"
        )));
    }
    Ok(IteratedResult { value: halved, delta_change })
}

pub fn integrate_iterated_xy<T: Scalar>(config: &FieldConfig<T>, order: Order) -> Result<T> {
    Ok(iterated_with_delta(config, order, T::lit(DELTA))?.value)
}

/// Both iterated orders, their mean and the closed form.
pub fn symmetrized_invariant<T: Scalar>(config: &FieldConfig<T>) -> Result<Symmetrized<T>> {
    let shape = TwoModeShape::from_config(config)?;
    let xy = integrate_iterated_xy(config, Order::XY)?;
    let yx = integrate_iterated_xy(config, Order::YX)?;
    let mean = (xy + yx) / T::lit(2.0);
    let closed_form = spectra::chi_case_b(
        shape.right.amplitude,
        shape.left.amplitude,
        shape.right.level,
        shape.left.level,
        &config.params,
    )?;
    Ok(Symmetrized { xy, yx, mean, chi: -mean, closed_form })
}
