//! Worldsheet Hamiltonian and the energy lattice induced by the spectrum.

use crate::error::{Error, Result};
use crate::modes::{eval_jets, omega, FieldConfig, ModelParams};
use crate::quadrature::pairwise_sum;
use crate::scalar::Scalar;
use crate::spectra::{self, Branch};

/// `(1/(4 pi alpha')) sum_I [(d_tau X)^2 + (d_sigma X)^2 + mu^2 X^2]`.
pub fn hamiltonian_density<T: Scalar>(config: &FieldConfig<T>, tau: T, sigma: T) -> T {
    let mu2 = config.params.mu * config.params.mu;
    let s = eval_jets(config, tau, sigma)
        .iter()
        .fold(T::zero(), |s, j| s + j.d_tau * j.d_tau + j.d_sigma * j.d_sigma + mu2 * j.value * j.value);
    s / (T::lit(4.0) * T::PI() * config.params.alpha_prime)
}

/// `alpha' p+` times the sigma-integral of the density over one period.
///
/// The trapezoid rule is exact here because the density is a trigonometric
/// polynomial in sigma of degree at most twice the highest level.
pub fn hamiltonian_at<T: Scalar>(config: &FieldConfig<T>, tau: T) -> T {
    let top = config.modes.iter().map(|m| m.level as usize).max().unwrap_or(0);
    let samples = 64 + 8 * top;
    let period = config.params.sigma_period();
    let h = period / T::from_usize(samples).unwrap();
    let terms: Vec<T> = (0..samples).map(|i| hamiltonian_density(config, tau, h * T::from_usize(i).unwrap())).collect();
    config.params.scale() * h * pairwise_sum(&terms)
}

pub fn hamiltonian<T: Scalar>(config: &FieldConfig<T>) -> T {
    hamiltonian_at(config, T::zero())
}

/// `sum over modes of w_n r_n^2`, valid when no two modes share a field.
pub fn hamiltonian_oscillators<T: Scalar>(config: &FieldConfig<T>) -> T {
    config.modes.iter().fold(T::zero(), |s, m| s + omega(m.level, &config.params) * m.amplitude * m.amplitude)
}

/// Plus-branch ratio `r_m / r~_n` solving the case-B condition.
pub fn f_mn<T: Scalar>(k: i64, m: u32, n: u32, params: &ModelParams<T>) -> Result<T> {
    if k <= 0 {
        return Err(Error::NoSpectrum { k, min_k: spectra::min_admissible_k(m, n, params)? });
    }
    let s = spectra::solve_case_b(k, T::one(), m, n, params)?;
    Ok(s.branches.iter().find(|b| b.branch == Branch::Plus).expect("two branches").value)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyLattice<T> {
    pub k_values: Vec<i64>,
    pub f_values: Vec<T>,
    pub h_values: Vec<T>,
    pub rtilde_n: T,
    pub m: u32,
    pub n: u32,
    pub params: ModelParams<T>,
}

/// `H(k) = [w_n + w_m f_mn(k)^2] r~_n^2`.
pub fn energy_lattice<T: Scalar>(
    k_range: std::ops::RangeInclusive<i64>,
    rtilde_n: T,
    m: u32,
    n: u32,
    params: &ModelParams<T>,
) -> Result<EnergyLattice<T>> {
    let (wm, wn) = (omega(m, params), omega(n, params));
    let mut lattice = EnergyLattice {
        k_values: Vec::new(),
        f_values: Vec::new(),
        h_values: Vec::new(),
        rtilde_n,
        m,
        n,
        params: *params,
    };
    for k in k_range {
        let f = f_mn(k, m, n, params)?;
        lattice.k_values.push(k);
        lattice.f_values.push(f);
        lattice.h_values.push((wn + wm * f * f) * rtilde_n * rtilde_n);
    }
    Ok(lattice)
}
