//! Euler-class invariants of classical string worldsheets in a pp-wave
//! background.
//!
//! A finite-mode solution of the light-cone equations of motion induces the
//! conformally flat metric `h = f diag(-1, 1)` with `f = sum_I (d_sigma X^I)^2`.
//! Its Euler density `e = (1/4 pi)(d_sigma^2 - d_tau^2) log f` is singular on
//! the zero lattice of `f`; the crate integrates it with excision and
//! boundary corrections, evaluates the order-dependent iterated integrals in
//! the `(x, y)` chart, solves the quantization conditions `chi = k` and
//! builds the induced energy lattice. The target-space module checks that the
//! pp-wave's own Euler form vanishes.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix `f64`, which is what the tolerances assume.
//!
//! ```
//! use ppwave_euler::{spectra, Params};
//!
//! let params = Params::unit(3f64.sqrt()); // omega_1 = 2
//! let chi = spectra::chi_case_a(1.0, 1.0, &params).unwrap();
//! assert!((chi - 0.75).abs() < 1e-15);
//! ```

// Negated comparisons are deliberate: they also reject NaN. Tensor code
// indexes several arrays with one loop variable.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod modes;
pub mod quadrature;
pub mod scalar;
pub mod spectra;
pub mod target_space;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Params = modes::ModelParams<f64>;
pub type Config = modes::FieldConfig<f64>;
pub type ModeF64 = modes::Mode<f64>;
pub type Spec = quadrature::QuadratureSpec<f64>;
pub type Report = quadrature::QuadratureReport<f64>;
pub type Shape = geometry::TwoModeShape<f64>;
pub type Spectrum = spectra::SpectrumResult<f64>;
pub type Lattice = energy::EnergyLattice<f64>;
pub type Point = target_space::SpacetimePoint<f64>;
