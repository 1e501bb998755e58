//! Closed-form invariants and their quantization conditions `chi = k`.
//!
//! Two-mode invariants depend on the amplitudes only through
//! `u = m sqrt(w_n) r_m / (n sqrt(w_m) r~_n)`; with `A = (mu alpha' p+)^2`,
//! `J = n w_m + m w_n` and `K = n m + w_m w_n`.

use crate::error::{Error, Result};
use crate::modes::{omega, ModelParams};
use crate::scalar::Scalar;
use num_complex::Complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchValue<T> {
    pub branch: Branch,
    /// Solved amplitude `r_m`.
    pub value: T,
    /// Normalised ratio `u`; the two branches multiply to 1.
    pub ratio: T,
    /// `|chi(value) - k|`.
    pub residual: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult<T> {
    pub k: i64,
    /// Empty for `k <= 0`, where no positive amplitude solves `chi = k`.
    pub branches: Vec<BranchValue<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Levels<T> {
    m: T,
    n: T,
    omega_m: T,
    omega_n: T,
    a: T,
    j: T,
    k: T,
}

fn levels<T: Scalar>(m: u32, n: u32, params: &ModelParams<T>) -> Result<Levels<T>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParams("levels must be >= 1".into()));
    }
    params.validate()?;
    let (mt, nt) = (T::from_u32(m).unwrap(), T::from_u32(n).unwrap());
    let (wm, wn) = (omega(m, params), omega(n, params));
    Ok(Levels {
        m: mt,
        n: nt,
        omega_m: wm,
        omega_n: wn,
        a: params.mass_gap(),
        j: nt * wm + mt * wn,
        k: mt * nt + wm * wn,
    })
}

fn positive<T: Scalar>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive, got {v}")))
    }
}

/// `u = (r_m / r~_n) (m / n) sqrt(w_n / w_m)`.
pub fn ratio_u<T: Scalar>(r_m: T, rtilde_n: T, m: u32, n: u32, params: &ModelParams<T>) -> Result<T> {
    let l = levels(m, n, params)?;
    positive("r_m", r_m)?;
    positive("rtilde_n", rtilde_n)?;
    Ok((r_m / rtilde_n) * (l.m / l.n) * (l.omega_n / l.omega_m).sqrt())
}

/// Factor converting `u` into `r_m / r~_n`.
fn amplitude_factor<T: Scalar>(l: &Levels<T>) -> T {
    (l.n / l.m) * (l.omega_m / l.omega_n).sqrt()
}

/// `chi = A/(2J) (u + 1/u)`.
pub fn chi_case_b<T: Scalar>(r_m: T, rtilde_n: T, m: u32, n: u32, params: &ModelParams<T>) -> Result<T> {
    let l = levels(m, n, params)?;
    let u = ratio_u(r_m, rtilde_n, m, n, params)?;
    Ok(l.a / (l.j + l.j) * (u + T::one() / u))
}

/// `chi = (mu alpha' p+)^2 / (4 w1) (r/r~ + r~/r)`; zero when `mu = 0`.
pub fn chi_case_a<T: Scalar>(r: T, rtilde: T, params: &ModelParams<T>) -> Result<T> {
    chi_case_b(r, rtilde, 1, 1, params)
}

/// Smallest positive `k` with real branches, `ceil(A / J)`.
pub fn min_admissible_k<T: Scalar>(m: u32, n: u32, params: &ModelParams<T>) -> Result<i64> {
    let l = levels(m, n, params)?;
    Ok((l.a / l.j).ceil().as_f64().max(1.0) as i64)
}

/// Both roots of `u + 1/u = c`, larger first; the smaller is computed as
/// `1/larger` so that the pair multiplies to one to rounding.
fn reciprocal_pair<T: Scalar>(c_half: T, a: T) -> (T, T) {
    let disc = (c_half * c_half - a * a).max(T::zero()).sqrt();
    let plus = (c_half + disc) / a;
    (plus, a / (c_half + disc))
}

/// Both amplitude branches of `chi_case_b = k` at fixed `r~_n`.
pub fn solve_case_b<T: Scalar>(
    k: i64,
    rtilde_n: T,
    m: u32,
    n: u32,
    params: &ModelParams<T>,
) -> Result<SpectrumResult<T>> {
    let l = levels(m, n, params)?;
    positive("rtilde_n", rtilde_n)?;
    if k <= 0 {
        return Ok(SpectrumResult { k, branches: Vec::new() });
    }
    if !(l.a > T::zero()) {
        return Err(Error::InvalidParams("mu = 0: the invariant vanishes identically".into()));
    }
    let jk = l.j * T::from_int(k);
    if jk < l.a {
        return Err(Error::NoSpectrum { k, min_k: min_admissible_k(m, n, params)? });
    }
    let (up, um) = reciprocal_pair(jk, l.a);
    let factor = amplitude_factor(&l) * rtilde_n;
    let mut branches = Vec::with_capacity(2);
    for (branch, u) in [(Branch::Plus, up), (Branch::Minus, um)] {
        let value = u * factor;
        let residual = (chi_case_b(value, rtilde_n, m, n, params)? - T::from_int(k)).abs();
        branches.push(BranchValue { branch, value, ratio: u, residual });
    }
    Ok(SpectrumResult { k, branches })
}

pub fn solve_case_a<T: Scalar>(k: i64, rtilde: T, params: &ModelParams<T>) -> Result<SpectrumResult<T>> {
    solve_case_b(k, rtilde, 1, 1, params)
}

/// Both modes on one field. Real part `(8K/(pi J)) artanh(min(u, 1/u))`,
/// imaginary part `(A (u + 1/u) - 2K) / J` after folding the
/// `artanh(1/x) = artanh(x) - i pi/2` branch into the bracket.
pub fn chi_case_c<T: Scalar>(r_m: T, rtilde_n: T, m: u32, n: u32, params: &ModelParams<T>) -> Result<Complex<T>> {
    let l = levels(m, n, params)?;
    let u = ratio_u(r_m, rtilde_n, m, n, params)?;
    if u == T::one() {
        return Err(Error::ArcTanhDivergence);
    }
    let v = u.min(T::one() / u);
    let re = T::lit(8.0) * l.k / (T::PI() * l.j) * v.atanh();
    let im = (l.a * (u + T::one() / u) - (l.k + l.k)) / l.j;
    Ok(Complex::new(re, im))
}

/// Roots `r* = [K +- sqrt(K^2 - A^2)] / A` of the vanishing imaginary part, `(plus, minus)`.
pub fn solve_case_c_rstar<T: Scalar>(m: u32, n: u32, params: &ModelParams<T>) -> Result<(T, T)> {
    let l = levels(m, n, params)?;
    if !(l.a > T::zero()) {
        return Err(Error::InvalidParams("mu = 0: r* is undefined".into()));
    }
    Ok(reciprocal_pair(l.k, l.a))
}

/// Left side of the real-part condition minus `k`, as a function of `p+`.
fn pplus_condition<T: Scalar>(k: i64, m: u32, n: u32, mu: T, alpha_prime: T, p_plus: T) -> Result<T> {
    let params = ModelParams::new(alpha_prime, p_plus, mu, T::one())?;
    let l = levels(m, n, &params)?;
    let (_, rs) = solve_case_c_rstar(m, n, &params)?;
    Ok(T::lit(8.0) * l.k / (T::PI() * l.j) * rs.atanh() - T::from_int(k))
}

pub const PPLUS_SCAN: (f64, f64) = (1e-6, 1e6);

/// `p+` at which the minus root `r* < 1` satisfies `(8K/(pi J)) artanh(r*) = k`.
pub fn solve_case_c_pplus<T: Scalar>(k: i64, m: u32, n: u32, mu: T, alpha_prime: T) -> Result<T> {
    positive("mu", mu)?;
    positive("alpha_prime", alpha_prime)?;
    if k < 1 {
        return Err(Error::NoSpectrum { k, min_k: 1 });
    }
    let (lo, hi) = (T::lit(PPLUS_SCAN.0), T::lit(PPLUS_SCAN.1));
    let steps = 240usize;
    let ratio = (hi / lo).powf(T::one() / T::from_usize(steps).unwrap());
    let mut p_prev = lo;
    let mut g_prev = pplus_condition(k, m, n, mu, alpha_prime, lo)?;
    let (mut gmin, mut gmax) = (g_prev, g_prev);
    let mut bracket = None;
    for _ in 0..steps {
        let p = p_prev * ratio;
        let g = pplus_condition(k, m, n, mu, alpha_prime, p)?;
        if g.is_finite() {
            gmin = gmin.min(g);
            gmax = gmax.max(g);
        }
        if g_prev < T::zero() && !(g < T::zero()) {
            bracket = Some((p_prev, p));
            break;
        }
        p_prev = p;
        g_prev = g;
    }
    let (mut a, mut b) = bracket.ok_or(Error::NoBracket {
        lo: PPLUS_SCAN.0,
        hi: PPLUS_SCAN.1,
        min: (gmin + T::from_int(k)).as_f64(),
        max: (gmax + T::from_int(k)).as_f64(),
    })?;
    for _ in 0..400 {
        let mid = (a + b) / T::lit(2.0);
        if mid <= a || mid >= b {
            break;
        }
        let g = pplus_condition(k, m, n, mu, alpha_prime, mid)?;
        if g < T::zero() {
            a = mid;
        } else {
            b = mid;
        }
    }
    // the side with the smaller residual
    let ga = pplus_condition(k, m, n, mu, alpha_prime, a)?.abs();
    let gb = pplus_condition(k, m, n, mu, alpha_prime, b)?.abs();
    Ok(if ga <= gb { a } else { b })
}

/// Solves the implicit relation `r* = r*(k)` at fixed parameters for the
/// root in `(0, 1)`. Eliminating `K` between the two case-C conditions gives
/// `A (r + 1/r) artanh(r) = pi J k / 4`, monotone in `r`; this is redundant
/// with [`solve_case_c_pplus`] and serves as a cross-check.
pub fn solve_case_c_implicit<T: Scalar>(k: i64, m: u32, n: u32, params: &ModelParams<T>) -> Result<T> {
    let l = levels(m, n, params)?;
    if !(l.a > T::zero()) {
        return Err(Error::InvalidParams("mu = 0: r* is undefined".into()));
    }
    let target = T::PI() * l.j * T::from_int(k) / T::lit(4.0);
    if k < 1 || target <= l.a {
        return Err(Error::NoSpectrum { k, min_k: (l.a * T::lit(4.0) / (T::PI() * l.j)).floor().as_f64() as i64 + 1 });
    }
    let phi = |r: T| l.a * (r + T::one() / r) * r.atanh() - target;
    let (mut lo, mut hi) = (T::zero(), T::one());
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::lit(2.0))
}
