//! Singular quadrature of the Euler density.
//!
//! The excised integral runs over one period cell of the conformal factor,
//! i.e. the square `|theta1|, |theta2| <= pi/2` around a singular point in
//! phase coordinates. Away from the excision the cell is covered by tensor
//! Gauss-Legendre panels; around it a log-radial polar rule in the gradient
//! chart resolves the `1/rho^2` growth of the density.

mod cell;
mod gauss;
mod iterated;
mod stokes;
mod sweep;

pub use cell::{CellIntegrator, ExcisedIntegral, GaussBonnetCheck};
pub use gauss::{pairwise_sum, GaussLegendre};
pub use iterated::{
    integrate_iterated_xy, iterated_with_delta, symmetrized_invariant, IteratedResult, Order, Symmetrized,
};
pub use stokes::{stokes_check, stokes_report, StokesReport};
pub use sweep::{epsilon_sweep, fit_power_law, PowerLawFit};

use crate::error::Result;
use crate::modes::FieldConfig;
use crate::scalar::Scalar;

/// Shape of the neighbourhood removed around each singular point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExcisionShape {
    /// Euclidean disk of radius `eps` in `(tau, sigma)`; the boundary term
    /// carries the circulation difference to the level-set disk.
    CoordinateDisk,
    /// Level set `f = const` (a round disk in the gradient chart); no boundary term.
    GradientChart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extrapolation {
    None,
    PowerLawFit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec<T> {
    /// Gauss-Legendre nodes per axis across the cell.
    pub grid_n: usize,
    /// Strictly decreasing excision radii.
    pub epsilon_list: Vec<T>,
    /// Trapezoid samples on each excision boundary.
    pub boundary_samples: usize,
    pub extrapolation: Extrapolation,
    pub excision: ExcisionShape,
}

impl<T: Scalar> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            grid_n: 2048,
            epsilon_list: [1e-2, 1e-3, 1e-4, 1e-5, 1e-6].iter().map(|&e| T::lit(e)).collect(),
            boundary_samples: 4096,
            extrapolation: Extrapolation::PowerLawFit,
            excision: ExcisionShape::CoordinateDisk,
        }
    }
}

/// Result of an epsilon sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureReport<T> {
    pub per_epsilon: Vec<ExcisedIntegral<T>>,
    pub extrapolated: T,
    /// False when successive differences fail to decrease or the fit degenerates.
    pub reliable: bool,
    pub fit: Option<PowerLawFit<T>>,
    /// `(eps, d total / d eps)` from centred differences in `log eps`.
    pub derivative_estimate: Vec<(T, T)>,
    /// Period cells of `f` in one worldsheet period (case A only).
    pub cells_per_period: Option<usize>,
}

/// Bulk and boundary parts of the excised invariant at one radius.
pub fn integrate_excised<T: Scalar>(
    config: &FieldConfig<T>,
    spec: &QuadratureSpec<T>,
    epsilon: T,
) -> Result<ExcisedIntegral<T>> {
    CellIntegrator::new(config, spec)?.integrate_excised(epsilon)
}
