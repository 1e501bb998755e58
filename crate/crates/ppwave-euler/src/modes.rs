//! Finite-mode worldsheet configurations and their closed-form derivatives.
//!
//! Coordinates are the rescaled ones: sigma has period `2 pi a` with
//! `a = alpha' p+`, every mode phase is `(omega_n tau +- n sigma)/a + gamma`,
//! and the light-cone gauge reads `X+ = tau`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of transverse directions.
pub const TRANSVERSE: usize = 8;

/// Below this mass the centre-of-mass `sin(mu tau)/mu` term is replaced by `tau`.
pub const MASSLESS_CUTOFF: f64 = 1e-12;

/// Physical constants shared by every computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams<T> {
    pub alpha_prime: T,
    pub p_plus: T,
    pub mu: T,
    pub phi: T,
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(alpha_prime: T, p_plus: T, mu: T, phi: T) -> Result<Self> {
        let p = Self { alpha_prime, p_plus, mu, phi };
        p.validate()?;
        Ok(p)
    }

    /// `alpha' = p+ = phi = 1` with the given mass.
    pub fn unit(mu: T) -> Self {
        Self { alpha_prime: T::one(), p_plus: T::one(), mu, phi: T::one() }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: T| x.is_finite();
        if !(ok(self.alpha_prime) && self.alpha_prime > T::zero()) {
            return Err(Error::InvalidParams(format!("alpha_prime must be > 0, got {}", self.alpha_prime)));
        }
        if !(ok(self.p_plus) && self.p_plus > T::zero()) {
            return Err(Error::InvalidParams(format!("p_plus must be > 0, got {}", self.p_plus)));
        }
        if !(ok(self.mu) && self.mu >= T::zero()) {
            return Err(Error::InvalidParams(format!("mu must be >= 0, got {}", self.mu)));
        }
        if !(ok(self.phi) && self.phi > T::zero()) {
            return Err(Error::InvalidParams(format!("phi must be > 0, got {}", self.phi)));
        }
        Ok(())
    }

    /// `a = alpha' p+`, the rescaling length of the worldsheet coordinates.
    #[inline]
    pub fn scale(&self) -> T {
        self.alpha_prime * self.p_plus
    }

    /// `A = (mu alpha' p+)^2`.
    #[inline]
    pub fn mass_gap(&self) -> T {
        let m = self.mu * self.scale();
        m * m
    }

    /// Sigma period `2 pi alpha' p+`.
    #[inline]
    pub fn sigma_period(&self) -> T {
        T::TAU() * self.scale()
    }
}

/// Dispersion relation `omega_n = sqrt(n^2 + (mu alpha' p+)^2)`.
#[inline]
pub fn omega<T: Scalar>(level: u32, params: &ModelParams<T>) -> T {
    let n = T::from_u32(level).expect("level fits");
    (n * n + params.mass_gap()).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chirality {
    /// Depends on `omega tau + n sigma`.
    Right,
    /// Depends on `omega tau - n sigma`.
    Left,
}

impl Chirality {
    #[inline]
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Chirality::Right => T::one(),
            Chirality::Left => -T::one(),
        }
    }
}

/// One excited oscillator in polar form `r e^{-i gamma}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mode<T> {
    /// Transverse direction, 1..=8.
    pub field: usize,
    pub level: u32,
    pub chirality: Chirality,
    pub amplitude: T,
    pub phase: T,
}

impl<T: Scalar> Mode<T> {
    pub fn new(field: usize, level: u32, chirality: Chirality, amplitude: T, phase: T) -> Self {
        Self { field, level, chirality, amplitude, phase }
    }

    pub fn right(field: usize, level: u32, amplitude: T, phase: T) -> Self {
        Self::new(field, level, Chirality::Right, amplitude, phase)
    }

    pub fn left(field: usize, level: u32, amplitude: T, phase: T) -> Self {
        Self::new(field, level, Chirality::Left, amplitude, phase)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CenterOfMass<T> {
    pub x0: [T; TRANSVERSE],
    pub p0: [T; TRANSVERSE],
}

impl<T: Scalar> CenterOfMass<T> {
    pub fn zero() -> Self {
        Self { x0: [T::zero(); TRANSVERSE], p0: [T::zero(); TRANSVERSE] }
    }
}

/// A finitely supported solution of the transverse equations of motion.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldConfig<T> {
    pub params: ModelParams<T>,
    pub modes: Vec<Mode<T>>,
    pub com: CenterOfMass<T>,
}

impl<T: Scalar> FieldConfig<T> {
    pub fn new(params: ModelParams<T>, modes: Vec<Mode<T>>, com: CenterOfMass<T>) -> Result<Self> {
        let c = Self { params, modes, com };
        c.validate()?;
        Ok(c)
    }

    pub fn empty(params: ModelParams<T>) -> Self {
        Self { params, modes: Vec::new(), com: CenterOfMass::zero() }
    }

    /// Right mover on field 1 and left mover on field 2, both at level 1.
    pub fn case_a(params: ModelParams<T>, r: T, gamma: T, rtilde: T, gamma_tilde: T) -> Result<Self> {
        Self::case_b(params, 1, r, gamma, 1, rtilde, gamma_tilde)
    }

    /// Right mover of level `m` on field 1 and left mover of level `n` on field 2.
    pub fn case_b(
        params: ModelParams<T>,
        m: u32,
        r_m: T,
        gamma: T,
        n: u32,
        rtilde_n: T,
        gamma_tilde: T,
    ) -> Result<Self> {
        Self::new(
            params,
            vec![Mode::right(1, m, r_m, gamma), Mode::left(2, n, rtilde_n, gamma_tilde)],
            CenterOfMass::zero(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        for (i, m) in self.modes.iter().enumerate() {
            if !(1..=TRANSVERSE).contains(&m.field) {
                return Err(Error::InvalidConfig(format!("mode {i}: field index {} outside 1..=8", m.field)));
            }
            if m.level == 0 {
                return Err(Error::InvalidConfig(format!("mode {i}: level must be >= 1")));
            }
            if !(m.amplitude.is_finite() && m.amplitude >= T::zero()) {
                return Err(Error::InvalidConfig(format!("mode {i}: amplitude must be finite and >= 0")));
            }
            if !m.phase.is_finite() {
                return Err(Error::InvalidConfig(format!("mode {i}: phase must be finite")));
            }
            for (j, o) in self.modes[..i].iter().enumerate() {
                if o.field == m.field && o.level == m.level && o.chirality == m.chirality {
                    return Err(Error::InvalidConfig(format!(
                        "modes {j} and {i} share (field, level, chirality) = ({}, {}, {:?})",
                        m.field, m.level, m.chirality
                    )));
                }
            }
        }
        if self.com.x0.iter().chain(self.com.p0.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("centre-of-mass data must be finite".into()));
        }
        Ok(())
    }
}

/// Value and derivatives up to second order of one transverse field.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct FieldJet<T> {
    pub value: T,
    pub d_tau: T,
    pub d_sigma: T,
    pub d_tau_tau: T,
    pub d_tau_sigma: T,
    pub d_sigma_sigma: T,
}

fn check_field(field: usize) -> Result<()> {
    if (1..=TRANSVERSE).contains(&field) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("field index {field} outside 1..=8")))
    }
}

fn com_jet<T: Scalar>(params: &ModelParams<T>, x0: T, p0: T, tau: T) -> FieldJet<T> {
    let mu = params.mu;
    let (s, c) = (mu * tau).sin_cos();
    let v = p0 / params.p_plus;
    let (value, d_tau, d_tau_tau) = if mu.as_f64() < MASSLESS_CUTOFF {
        (x0 * c + v * tau, -mu * x0 * s + v, -mu * mu * x0 * c)
    } else {
        (x0 * c + v / mu * s, -mu * x0 * s + v * c, -mu * mu * x0 * c - mu * v * s)
    };
    FieldJet { value, d_tau, d_tau_tau, ..Default::default() }
}

fn add_mode<T: Scalar>(jet: &mut FieldJet<T>, params: &ModelParams<T>, mode: &Mode<T>, tau: T, sigma: T) {
    let a = params.scale();
    let w = omega(mode.level, params);
    let n = T::from_u32(mode.level).expect("level fits") * mode.chirality.sign::<T>();
    let amp = (T::lit(2.0) * params.alpha_prime / w).sqrt() * mode.amplitude;
    let psi = (w * tau + n * sigma) / a + mode.phase;
    let (s, c) = psi.sin_cos();
    let (kt, ks) = (w / a, n / a);
    jet.value = jet.value + amp * c;
    jet.d_tau = jet.d_tau - amp * kt * s;
    jet.d_sigma = jet.d_sigma - amp * ks * s;
    jet.d_tau_tau = jet.d_tau_tau - amp * kt * kt * c;
    jet.d_tau_sigma = jet.d_tau_sigma - amp * kt * ks * c;
    jet.d_sigma_sigma = jet.d_sigma_sigma - amp * ks * ks * c;
}

/// Jets of all eight transverse fields at one worldsheet point.
pub fn eval_jets<T: Scalar>(config: &FieldConfig<T>, tau: T, sigma: T) -> [FieldJet<T>; TRANSVERSE] {
    let p = &config.params;
    let mut jets = [FieldJet::default(); TRANSVERSE];
    for (i, jet) in jets.iter_mut().enumerate() {
        *jet = com_jet(p, config.com.x0[i], config.com.p0[i], tau);
    }
    for mode in &config.modes {
        add_mode(&mut jets[mode.field - 1], p, mode, tau, sigma);
    }
    jets
}

/// Jet of the single field `X^field`.
pub fn eval_jet<T: Scalar>(config: &FieldConfig<T>, field: usize, tau: T, sigma: T) -> Result<FieldJet<T>> {
    check_field(field)?;
    let p = &config.params;
    let mut jet = com_jet(p, config.com.x0[field - 1], config.com.p0[field - 1], tau);
    for mode in config.modes.iter().filter(|m| m.field == field) {
        add_mode(&mut jet, p, mode, tau, sigma);
    }
    Ok(jet)
}

pub fn eval_field<T: Scalar>(config: &FieldConfig<T>, field: usize, tau: T, sigma: T) -> Result<T> {
    Ok(eval_jet(config, field, tau, sigma)?.value)
}

/// `(d_tau X, d_sigma X)` from closed-form differentiation.
pub fn eval_gradient<T: Scalar>(config: &FieldConfig<T>, field: usize, tau: T, sigma: T) -> Result<(T, T)> {
    let j = eval_jet(config, field, tau, sigma)?;
    Ok((j.d_tau, j.d_sigma))
}

/// `(d_tau^2 - d_sigma^2 + mu^2) X`, identically zero on-shell.
pub fn eom_residual<T: Scalar>(config: &FieldConfig<T>, field: usize, tau: T, sigma: T) -> Result<T> {
    let j = eval_jet(config, field, tau, sigma)?;
    let mu = config.params.mu;
    Ok(j.d_tau_tau - j.d_sigma_sigma + mu * mu * j.value)
}

/// `(d_tau X-, d_sigma X-)` from the Virasoro constraints in gauge `X+ = tau`.
pub fn xminus_gradient<T: Scalar>(config: &FieldConfig<T>, tau: T, sigma: T) -> (T, T) {
    let mu2 = config.params.mu * config.params.mu;
    let mut dt = T::zero();
    let mut ds = T::zero();
    for j in eval_jets(config, tau, sigma) {
        dt = dt + j.d_tau * j.d_tau + j.d_sigma * j.d_sigma - mu2 * j.value * j.value;
        ds = ds + j.d_sigma * j.d_tau;
    }
    (dt / T::lit(2.0), ds)
}
