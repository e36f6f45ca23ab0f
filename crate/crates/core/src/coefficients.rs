//! Layer coefficients of the causal-set d'Alembertian.
//!
//! For dimension `d` the operator weighs the `i`th layer by
//!
//! ```text
//! C_i^(d) = Σ_{k=0}^{i-1} binom(i-1, k) (-1)^k Γ(a_k) / (Γ(b) Γ(1 + dk/2))
//! ```
//!
//! with `a_k = d(k+1)/2 + 2`, `b = d/2 + 2` for even `d` and
//! `a_k = d(k+1)/2 + 3/2`, `b = (d+3)/2` for odd `d`. Every gamma argument is a
//! positive half-integer, so each ratio is evaluated exactly: integer arguments
//! become factorials and half-integer arguments become double factorials times
//! `√π`. In each ratio the `√π` factors cancel, leaving a rational.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::domain;
use crate::Result;

/// `⌊d/2⌋`.
pub fn half_floor(d: u32) -> u32 {
    d / 2
}

/// Number of layers weighed by the operator, `⌊d/2⌋ + 2`.
pub fn layer_count(d: u32) -> u32 {
    d / 2 + 2
}

/// Exponent `2⌊d/2⌋ + 2` of the power of two that makes every coefficient integral.
pub fn scale_exponent(d: u32) -> u32 {
    2 * (d / 2) + 2
}

/// Chord and point counts `(⌊d/2⌋ + 1, 2⌊d/2⌋ + 2 + dk)` of the diagram class whose
/// size is the `k`th scaled gamma ratio.
pub fn gamma_part_shape(d: u32, k: u32) -> (usize, usize) {
    let h = (d / 2) as usize;
    (h + 1, 2 * h + 2 + (d as usize) * (k as usize))
}

fn check_dimension(d: u32) -> Result<()> {
    if d < 2 {
        return Err(domain!("dimension must be at least 2, got {d}"));
    }
    Ok(())
}

fn check_index(d: u32, i: u32) -> Result<()> {
    check_dimension(d)?;
    if i == 0 || i > layer_count(d) {
        return Err(domain!(
            "layer index {i} out of range 1..={} for d = {d}",
            layer_count(d)
        ));
    }
    Ok(())
}

pub(crate) fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Γ(m/2) for a positive integer `m`, written as `rational · (√π)^sqrt_pi`.
#[derive(Debug, Clone)]
struct HalfGamma {
    rational: BigRational,
    sqrt_pi: i32,
}

fn half_gamma(twice_arg: u64) -> HalfGamma {
    debug_assert!(twice_arg > 0);
    if twice_arg.is_multiple_of(2) {
        let n = twice_arg / 2;
        HalfGamma {
            rational: BigRational::from_integer(factorial(n - 1)),
            sqrt_pi: 0,
        }
    } else {
        // Γ(n + 1/2) = (2n-1)!! / 2^n · √π
        let n = (twice_arg - 1) / 2;
        HalfGamma {
            rational: BigRational::new(double_factorial(2 * n as i64 - 1), BigInt::one() << n),
            sqrt_pi: 1,
        }
    }
}

/// `Γ(num/2) / (Γ(den_a/2) Γ(den_b/2))`, which must be free of `√π`.
fn gamma_ratio(num: u64, den_a: u64, den_b: u64) -> Result<BigRational> {
    let top = half_gamma(num);
    let a = half_gamma(den_a);
    let b = half_gamma(den_b);
    if top.sqrt_pi - a.sqrt_pi - b.sqrt_pi != 0 {
        return Err(crate::Error::Inconsistent(alloc::format!(
            "gamma ratio Γ({num}/2)/(Γ({den_a}/2)Γ({den_b}/2)) is not rational"
        )));
    }
    Ok(top.rational / (a.rational * b.rational))
}

/// Exact `k`th gamma ratio of `C_i^(d)`, before scaling.
fn gamma_term(d: u32, k: u32) -> Result<BigRational> {
    let (d, k) = (d as u64, k as u64);
    if d % 2 == 0 {
        // Γ(d(k+1)/2 + 2) / (Γ(d/2 + 2) Γ(1 + dk/2))
        gamma_ratio(d * (k + 1) + 4, d + 4, 2 + d * k)
    } else {
        // Γ(d(k+1)/2 + 3/2) / (Γ((d+3)/2) Γ(1 + dk/2))
        gamma_ratio(d * (k + 1) + 3, d + 3, 2 + d * k)
    }
}

/// Exact `C_i^(d)` for `d ≥ 2` and `1 ≤ i ≤ ⌊d/2⌋ + 2`.
pub fn compute_c(d: u32, i: u32) -> Result<BigRational> {
    check_index(d, i)?;
    let mut sum = BigRational::zero();
    for k in 0..i {
        let term =
            BigRational::from_integer(binomial((i - 1) as u64, k as u64)) * gamma_term(d, k)?;
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

/// `2^(2⌊d/2⌋+2) · C_i^(d)`, which is always an integer.
pub fn compute_scaled_c(d: u32, i: u32) -> Result<BigInt> {
    let scaled = compute_c(d, i)? * BigRational::from_integer(BigInt::one() << scale_exponent(d));
    if !scaled.is_integer() {
        return Err(crate::Error::Inconsistent(alloc::format!(
            "2^{} C_{i}^({d}) = {scaled} is not an integer",
            scale_exponent(d)
        )));
    }
    Ok(scaled.to_integer())
}

/// The `k`th gamma ratio scaled by `2^(2⌊d/2⌋+2)`, evaluated as the product
/// `(2dk + 4h + 4)(2dk + 4h)⋯(2dk + 4) / (h + 1)!` with `h = ⌊d/2⌋`.
pub fn gamma_ratio_scaled(d: u32, k: u32) -> Result<BigInt> {
    check_dimension(d)?;
    let h = (d / 2) as u64;
    let base = 2 * (d as u64) * (k as u64) + 4;
    let numerator = (0..=h).fold(BigInt::one(), |acc, j| acc * (base + 4 * j));
    let (quotient, remainder) = numerator.div_rem(&factorial(h + 1));
    if !remainder.is_zero() {
        return Err(crate::Error::Inconsistent(alloc::format!(
            "scaled gamma ratio for d = {d}, k = {k} is not an integer"
        )));
    }
    Ok(quotient)
}

/// `n`th Catalan number `binom(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigInt {
    binomial(2 * n, n) / (n + 1)
}

/// Exact `α_d / β_d`: `-Cat_{d/2} / 2` for even `d`, `-2^(d-1) / (d+1)` for odd `d`.
pub fn alpha_over_beta(d: u32) -> Result<BigRational> {
    check_dimension(d)?;
    let ratio = if d.is_multiple_of(2) {
        BigRational::new(catalan((d / 2) as u64), BigInt::from(2))
    } else {
        BigRational::new(BigInt::one() << (d - 1), BigInt::from(d + 1))
    };
    Ok(-ratio)
}

/// All coefficients for one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    pub dimension: u32,
    /// `C_1^(d)`, …, `C_{⌊d/2⌋+2}^(d)`.
    pub entries: Vec<BigRational>,
    /// The same values scaled by `2^(2⌊d/2⌋+2)`.
    pub scaled_entries: Vec<BigInt>,
}

impl CoeffTable {
    pub fn new(d: u32) -> Result<Self> {
        check_dimension(d)?;
        let mut entries = Vec::new();
        let mut scaled_entries = Vec::new();
        for i in 1..=layer_count(d) {
            entries.push(compute_c(d, i)?);
            scaled_entries.push(compute_scaled_c(d, i)?);
        }
        Ok(CoeffTable {
            dimension: d,
            entries,
            scaled_entries,
        })
    }

    /// Coefficients rounded to `f64`, for the numeric operator.
    pub fn as_f64(&self) -> Vec<f64> {
        self.entries.iter().map(rational_to_f64).collect()
    }

    /// Checks the length, scaling and sign-alternation invariants.
    pub fn check(&self) -> bool {
        let d = self.dimension;
        let scale = BigRational::from_integer(BigInt::one() << scale_exponent(d));
        self.entries.len() == layer_count(d) as usize
            && self.scaled_entries.len() == self.entries.len()
            && self
                .entries
                .iter()
                .zip(&self.scaled_entries)
                .enumerate()
                .all(|(idx, (c, s))| {
                    let sign_ok = if idx % 2 == 0 {
                        c.is_positive()
                    } else {
                        c.is_negative()
                    };
                    sign_ok && (c * &scale) == BigRational::from_integer(s.clone())
                })
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Floating constants of `B^(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorConstants {
    pub dimension: u32,
    pub alpha: f64,
    pub beta: f64,
    pub c_d: f64,
    pub alpha_over_beta_exact: BigRational,
}

/// Volume of the unit `n`-sphere, `2 π^((n+1)/2) / Γ((n+1)/2)`; `S_0 = 2`.
pub fn unit_sphere_volume(n: u32) -> f64 {
    let half = (n as f64 + 1.0) / 2.0;
    2.0 * libm::pow(core::f64::consts::PI, half) / libm::tgamma(half)
}

/// `c_d = S_{d-2} / (d (d-1) 2^(d/2 - 1))`.
pub fn c_d(d: u32) -> f64 {
    let df = d as f64;
    unit_sphere_volume(d - 2) / (df * (df - 1.0) * libm::exp2(df / 2.0 - 1.0))
}

pub fn operator_constants(d: u32) -> Result<OperatorConstants> {
    check_dimension(d)?;
    let df = d as f64;
    let c = c_d(d);
    let c_pow = libm::pow(c, 2.0 / df);
    let gamma = libm::tgamma;
    let (alpha, beta) = if d.is_multiple_of(2) {
        let beta = 2.0 * gamma(df / 2.0 + 2.0) * gamma(df / 2.0 + 1.0)
            / (gamma(2.0 / df) * gamma(df))
            * c_pow;
        let alpha = -2.0 * c_pow / gamma((df + 2.0) / df);
        (alpha, beta)
    } else {
        let beta = (df + 1.0) / (libm::exp2(df - 1.0) * gamma(2.0 / df + 1.0)) * c_pow;
        let alpha = -c_pow / gamma((df + 2.0) / df);
        (alpha, beta)
    };
    let exact = alpha_over_beta(d)?;
    let constants = OperatorConstants {
        dimension: d,
        alpha,
        beta,
        c_d: c,
        alpha_over_beta_exact: exact,
    };
    if !constants.is_consistent() {
        return Err(crate::Error::Inconsistent(alloc::format!(
            "floating α/β disagrees with the exact ratio for d = {d}"
        )));
    }
    Ok(constants)
}

impl OperatorConstants {
    /// `|α/β − exact| < 1e-10`, `α < 0`, `β > 0`.
    pub fn is_consistent(&self) -> bool {
        let exact = rational_to_f64(&self.alpha_over_beta_exact);
        (self.alpha / self.beta - exact).abs() < 1e-10 && self.alpha < 0.0 && self.beta > 0.0
    }
}
