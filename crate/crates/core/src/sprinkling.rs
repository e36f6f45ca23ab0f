//! Poisson sprinkling into a causal diamond of `d`-dimensional Minkowski space.
//!
//! The diamond is the Alexandrov interval between `(-T, 0⃗)` and `(T, 0⃗)`. A
//! sprinkling draws a Poisson number of points with mean `ρV`, places them
//! uniformly by rejection from the bounding box, orders them by time, and appends the
//! top tip `(T, 0⃗)` as a fixed evaluation element. Two events are related when the
//! later one lies in the causal future of the earlier one, lightlike separations
//! included.
//!
//! Every draw comes from ChaCha8 seeded with `seed` on stream `trial`, so trial `k`
//! of a configuration is reproducible on its own.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::causet::{BoxOperator, CausalSet, ScalarField};
use crate::error::domain;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DiamondConfig {
    pub dimension: u32,
    /// Points per unit volume, `ρ = ℓ^(-d)`.
    pub density: f64,
    pub half_height: f64,
    pub seed: u64,
}

impl DiamondConfig {
    pub fn new(dimension: u32, density: f64, half_height: f64, seed: u64) -> Result<Self> {
        let config = DiamondConfig {
            dimension,
            density,
            half_height,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension < 2 {
            return Err(domain!(
                "dimension must be at least 2, got {}",
                self.dimension
            ));
        }
        if !self.density.is_finite() || self.density <= 0.0 {
            return Err(domain!("density must be positive, got {}", self.density));
        }
        if !self.half_height.is_finite() || self.half_height <= 0.0 {
            return Err(domain!(
                "half height must be positive, got {}",
                self.half_height
            ));
        }
        Ok(())
    }

    /// Discreteness scale `ℓ = ρ^(-1/d)`.
    pub fn ell(&self) -> f64 {
        libm::pow(self.density, -1.0 / self.dimension as f64)
    }

    pub fn expected_points(&self) -> f64 {
        self.density * diamond_volume(self.dimension, self.half_height)
    }
}

/// Density matching a discreteness scale, `ρ = ℓ^(-d)`.
pub fn density_from_ell(d: u32, ell: f64) -> f64 {
    libm::pow(ell, -(d as f64))
}

/// Volume of the unit ball in `k` dimensions.
fn unit_ball_volume(k: u32) -> f64 {
    let half = k as f64 / 2.0;
    libm::pow(core::f64::consts::PI, half) / libm::tgamma(half + 1.0)
}

/// Volume of the diamond of half-height `T`: two cones of height `T` over a
/// `(d-1)`-ball of radius `T`, i.e. `2 V_{d-1} T^d / d`.
pub fn diamond_volume(d: u32, half_height: f64) -> f64 {
    2.0 * unit_ball_volume(d - 1) * libm::pow(half_height, d as f64) / d as f64
}

/// Whether `b` lies in the causal future of `a` (strictly later, lightlike allowed).
pub fn causally_precedes(a: &[f64], b: &[f64]) -> bool {
    let dt = b[0] - a[0];
    if dt <= 0.0 {
        return false;
    }
    let dx2: f64 = a[1..]
        .iter()
        .zip(&b[1..])
        .map(|(p, q)| (q - p) * (q - p))
        .sum();
    dt * dt >= dx2
}

/// Causal set of the given events under Minkowski causality.
pub fn causal_set_from_events(events: Vec<Vec<f64>>) -> CausalSet {
    let set = CausalSet::from_order_predicate(events.len(), |a, b| {
        causally_precedes(&events[a], &events[b])
    });
    set.with_coords(events)
        .expect("one coordinate vector per event")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SprinkleResult {
    pub causal_set: CausalSet,
    /// Index of the top tip, always the last element.
    pub eval_index: usize,
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Sprinkles with the configuration's own stream (trial 0).
pub fn sprinkle(config: &DiamondConfig) -> Result<SprinkleResult> {
    sprinkle_trial(config, 0)
}

/// Sprinkles using stream `trial` of the configuration's seed.
pub fn sprinkle_trial(config: &DiamondConfig, trial: u64) -> Result<SprinkleResult> {
    config.validate()?;
    let mut rng = trial_rng(config.seed, trial);
    let d = config.dimension as usize;
    let t_max = config.half_height;

    let mean = config.expected_points();
    let count = if mean > 0.0 {
        let poisson = Poisson::new(mean).map_err(|e| domain!("bad Poisson mean {mean}: {e}"))?;
        poisson.sample(&mut rng) as usize
    } else {
        0
    };

    let mut events = Vec::with_capacity(count + 1);
    while events.len() < count {
        let point: Vec<f64> = (0..d).map(|_| rng.random_range(-t_max..t_max)).collect();
        let r2: f64 = point[1..].iter().map(|x| x * x).sum();
        let reach = t_max - point[0].abs();
        if reach >= 0.0 && r2 <= reach * reach {
            events.push(point);
        }
    }
    events.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let mut tip = vec![0.0; d];
    tip[0] = t_max;
    events.push(tip);

    let eval_index = events.len() - 1;
    Ok(SprinkleResult {
        causal_set: causal_set_from_events(events),
        eval_index,
    })
}

/// A scalar field given in closed form or as a table.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Constant(f64),
    /// `coefficient · Π_k x_k^powers[k]` with `x_0 = t`.
    Monomial {
        coefficient: f64,
        powers: Vec<u32>,
    },
    /// One value per element index.
    Table(Vec<f64>),
}

fn variable_index(name: &str) -> Option<usize> {
    match name {
        "t" => Some(0),
        "x" => Some(1),
        "y" => Some(2),
        "z" => Some(3),
        _ => None,
    }
}

/// Parses `table:v0,v1,…`, a number, or a product such as `t^2`, `x*t`, `0.5*t^2*x`
/// over the variables `t, x, y, z`.
impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("table:") {
            let values = rest
                .split(',')
                .filter(|v| !v.trim().is_empty())
                .map(|v| v.trim().parse::<f64>())
                .collect::<core::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Field(format!("malformed table `{rest}`")))?;
            return Ok(FieldSpec::Table(values));
        }
        if let Ok(c) = s.parse::<f64>() {
            return Ok(FieldSpec::Constant(c));
        }
        let mut coefficient = 1.0;
        let mut powers: Vec<u32> = Vec::new();
        for factor in s.split('*').map(str::trim) {
            if let Ok(c) = factor.parse::<f64>() {
                coefficient *= c;
                continue;
            }
            let (name, power) = match factor.split_once('^') {
                Some((n, p)) => (
                    n.trim(),
                    p.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Field(format!("bad exponent in `{factor}`")))?,
                ),
                None => (factor, 1),
            };
            let idx = variable_index(name)
                .ok_or_else(|| Error::Field(format!("unknown factor `{factor}` in `{s}`")))?;
            if powers.len() <= idx {
                powers.resize(idx + 1, 0);
            }
            powers[idx] += power;
        }
        Ok(FieldSpec::Monomial {
            coefficient,
            powers,
        })
    }
}

/// Value of the field at element `index` with coordinates `coords`.
pub fn field_eval(spec: &FieldSpec, index: usize, coords: &[f64]) -> Result<f64> {
    match spec {
        FieldSpec::Constant(c) => Ok(*c),
        FieldSpec::Monomial {
            coefficient,
            powers,
        } => {
            let mut value = *coefficient;
            for (k, &p) in powers.iter().enumerate().filter(|(_, &p)| p > 0) {
                let x = coords.get(k).ok_or_else(|| {
                    Error::Field(format!(
                        "coordinate {k} missing from a {}-vector",
                        coords.len()
                    ))
                })?;
                value *= libm::pow(*x, p as f64);
            }
            Ok(value)
        }
        FieldSpec::Table(values) => values
            .get(index)
            .copied()
            .ok_or_else(|| Error::Field(format!("no table entry for element {index}"))),
    }
}

/// The field sampled on every element of a causal set with coordinates.
pub fn field_on(spec: &FieldSpec, set: &CausalSet) -> Result<ScalarField> {
    let values = match (spec, set.coords()) {
        (FieldSpec::Monomial { .. }, None) => {
            return Err(Error::Field("monomial field needs coordinates".into()));
        }
        (_, Some(coords)) => coords
            .iter()
            .enumerate()
            .map(|(i, c)| field_eval(spec, i, c))
            .collect::<Result<Vec<_>>>()?,
        (_, None) => (0..set.len())
            .map(|i| field_eval(spec, i, &[]))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(ScalarField::new(values))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub density: f64,
    pub ell: f64,
    /// `B^(d)φ` at the tip for each trial, in trial order.
    pub samples: Vec<f64>,
}

/// Sample mean and standard error of `B^(d)φ` at the top tip over `trials`
/// independent sprinklings, with `ℓ = ρ^(-1/d)`.
pub fn estimate_box(config: &DiamondConfig, field: &FieldSpec, trials: u64) -> Result<BoxEstimate> {
    if trials == 0 {
        return Err(domain!("at least one trial is required"));
    }
    config.validate()?;
    let ell = config.ell();
    let operator = BoxOperator::new(config.dimension, ell)?;
    let mut samples = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let result = sprinkle_trial(config, trial)?;
        let phi = field_on(field, &result.causal_set)?;
        samples.push(operator.apply(&result.causal_set, &phi, result.eval_index)?);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let std_error = if samples.len() > 1 {
        let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
        libm::sqrt(var / n)
    } else {
        0.0
    };
    Ok(BoxEstimate {
        mean,
        std_error,
        trials,
        density: config.density,
        ell,
        samples,
    })
}
