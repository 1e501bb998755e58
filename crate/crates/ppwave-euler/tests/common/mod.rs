//! Shared fixtures for the integration tests.

#![allow(dead_code)]

use ppwave_euler::modes::{CenterOfMass, Chirality, FieldConfig, Mode, ModelParams};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `alpha' = p+ = 1`, `mu^2 = 3`, so `w_1 = 2`.
pub fn fig1_params() -> ModelParams<f64> {
    ModelParams::unit(3f64.sqrt())
}

/// `alpha' = p+ = 1`, `mu = 2`.
pub fn fig3_params() -> ModelParams<f64> {
    ModelParams::unit(2.0)
}

pub fn case_a(r: f64, rtilde: f64) -> FieldConfig<f64> {
    FieldConfig::case_a(fig1_params(), r, 0.0, rtilde, 0.0).unwrap()
}

pub fn random_params<R: Rng>(rng: &mut R, mu_max: f64) -> ModelParams<f64> {
    ModelParams::new(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(0.0..mu_max), 1.0).unwrap()
}

/// Up to five oscillators on random fields plus random centre-of-mass data.
pub fn random_config<R: Rng>(rng: &mut R) -> FieldConfig<f64> {
    let params = random_params(rng, 3.0);
    let mut modes: Vec<Mode<f64>> = Vec::new();
    while modes.len() < rng.gen_range(1..=5) {
        let chirality = if rng.gen_bool(0.5) { Chirality::Right } else { Chirality::Left };
        let m = Mode::new(
            rng.gen_range(1..=8),
            rng.gen_range(1..=4),
            chirality,
            rng.gen_range(0.1..2.0),
            rng.gen_range(-3.2..3.2),
        );
        if !modes.iter().any(|o| o.field == m.field && o.level == m.level && o.chirality == m.chirality) {
            modes.push(m);
        }
    }
    let mut com = CenterOfMass::zero();
    for i in 0..8 {
        com.x0[i] = rng.gen_range(-1.0..1.0);
        com.p0[i] = rng.gen_range(-1.0..1.0);
    }
    FieldConfig::new(params, modes, com).unwrap()
}

/// Random case-A configuration with `mu > 0.3`.
pub fn random_case_a<R: Rng>(rng: &mut R) -> FieldConfig<f64> {
    let params =
        ModelParams::new(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(0.3..3.0), 1.0).unwrap();
    FieldConfig::case_a(
        params,
        rng.gen_range(0.2..3.0),
        rng.gen_range(-3.2..3.2),
        rng.gen_range(0.2..3.0),
        rng.gen_range(-3.2..3.2),
    )
    .unwrap()
}

/// A worldsheet point inside one sigma period and a few tau periods.
pub fn random_point<R: Rng>(rng: &mut R, config: &FieldConfig<f64>) -> (f64, f64) {
    let period = config.params.sigma_period();
    (rng.gen_range(-period..period), rng.gen_range(0.0..period))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
