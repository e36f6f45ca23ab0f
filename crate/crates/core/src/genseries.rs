//! Truncated bivariate power series with exact integer coefficients.
//!
//! The only closed form expanded here is the generating function of the
//! coloured noncrossing partial chord diagrams,
//!
//! ```text
//! B(x, y) = (y / sqrt(1 - 4xy²) + y²(1 + 4x)) / (1 - y²(1 + 4x))
//! ```
//!
//! where `x` marks chords and `y` marks points. The square root is expanded through
//! central binomial coefficients and the denominator through its geometric series,
//! so every step stays in the integers.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coefficients::{binomial, factorial};
use crate::error::domain;
use crate::Result;

/// Dense table of coefficients of `x^n y^m` for `n ≤ max_x`, `m ≤ max_y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    max_x: usize,
    max_y: usize,
    coeffs: Vec<BigInt>,
}

impl BivariateSeries {
    pub fn zero(max_x: usize, max_y: usize) -> Self {
        BivariateSeries {
            max_x,
            max_y,
            coeffs: vec![BigInt::zero(); (max_x + 1) * (max_y + 1)],
        }
    }

    pub fn one(max_x: usize, max_y: usize) -> Self {
        Self::monomial(max_x, max_y, 0, 0, BigInt::one())
    }

    /// `coefficient · x^n y^m`, or zero if the monomial lies past the truncation.
    pub fn monomial(max_x: usize, max_y: usize, n: usize, m: usize, coefficient: BigInt) -> Self {
        let mut series = Self::zero(max_x, max_y);
        if n <= max_x && m <= max_y {
            *series.at_mut(n, m) = coefficient;
        }
        series
    }

    pub fn max_x(&self) -> usize {
        self.max_x
    }

    pub fn max_y(&self) -> usize {
        self.max_y
    }

    fn index(&self, n: usize, m: usize) -> usize {
        n * (self.max_y + 1) + m
    }

    fn at(&self, n: usize, m: usize) -> &BigInt {
        &self.coeffs[self.index(n, m)]
    }

    fn at_mut(&mut self, n: usize, m: usize) -> &mut BigInt {
        let idx = self.index(n, m);
        &mut self.coeffs[idx]
    }

    /// `[x^n y^m]` of the series.
    pub fn coeff(&self, n: usize, m: usize) -> Result<BigInt> {
        if n > self.max_x || m > self.max_y {
            return Err(domain!(
                "coefficient [x^{n} y^{m}] lies outside the truncation ({}, {})",
                self.max_x,
                self.max_y
            ));
        }
        Ok(self.at(n, m).clone())
    }

    /// Iterates over `(n, m, coefficient)` for all non-zero coefficients.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        (0..=self.max_x)
            .flat_map(move |n| (0..=self.max_y).map(move |m| (n, m)))
            .map(move |(n, m)| (n, m, self.at(n, m)))
            .filter(|(_, _, c)| !c.is_zero())
    }

    fn assert_same_window(&self, other: &Self) {
        assert!(
            self.max_x == other.max_x && self.max_y == other.max_y,
            "series truncated at different orders"
        );
    }
}

impl Add for &BivariateSeries {
    type Output = BivariateSeries;

    fn add(self, rhs: &BivariateSeries) -> BivariateSeries {
        self.assert_same_window(rhs);
        BivariateSeries {
            max_x: self.max_x,
            max_y: self.max_y,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Mul for &BivariateSeries {
    type Output = BivariateSeries;

    fn mul(self, rhs: &BivariateSeries) -> BivariateSeries {
        self.assert_same_window(rhs);
        let mut out = BivariateSeries::zero(self.max_x, self.max_y);
        for (n1, m1, a) in self.nonzero_terms() {
            for (n2, m2, b) in rhs.nonzero_terms() {
                let (n, m) = (n1 + n2, m1 + m2);
                if n <= self.max_x && m <= self.max_y {
                    *out.at_mut(n, m) += a * b;
                }
            }
        }
        out
    }
}

/// Expands `B(x, y)` up to `x^max_x y^max_y`.
pub fn expand_b(max_x: usize, max_y: usize) -> BivariateSeries {
    let window = |n, m, c: BigInt| BivariateSeries::monomial(max_x, max_y, n, m, c);

    // y / sqrt(1 - 4t) with t = xy², via (1 - 4t)^(-1/2) = Σ binom(2n, n) tⁿ
    let mut root_part = BivariateSeries::zero(max_x, max_y);
    for n in 0..=max_x {
        let m = 2 * n + 1;
        if m > max_y {
            break;
        }
        *root_part.at_mut(n, m) = binomial(2 * n as u64, n as u64);
    }

    // g = y²(1 + 4x)
    let g = &window(0, 2, BigInt::one()) + &window(1, 2, BigInt::from(4));
    let numerator = &root_part + &g;

    // 1 / (1 - g) = Σ g^k; g^k starts at y^(2k)
    let mut geometric = BivariateSeries::one(max_x, max_y);
    let mut power = BivariateSeries::one(max_x, max_y);
    for _ in 1..=max_y / 2 {
        power = &power * &g;
        geometric = &geometric + &power;
    }

    &numerator * &geometric
}

/// `[x^n y^m] B(x, y)` read off a truncated expansion.
pub fn coeff(series: &BivariateSeries, n: usize, m: usize) -> Result<BigInt> {
    series.coeff(n, m)
}

/// `[x^n y^(2i)] B = 4ⁿ binom(i, n)` for `i > 0`.
pub fn closed_coeff_even(n: u64, i: u64) -> Result<BigInt> {
    if i == 0 {
        return Err(domain!("even closed form needs i > 0"));
    }
    Ok((BigInt::one() << (2 * n)) * binomial(i, n))
}

/// `[x^n y^(2i+1)] B = (4j + 6)(4j + 10)⋯(4j + 4n + 2) / n!` with `j = i - n`.
pub fn closed_coeff_odd(n: u64, i: u64) -> Result<BigInt> {
    if i < n {
        return Err(domain!("odd closed form needs i ≥ n, got n = {n}, i = {i}"));
    }
    let j = i - n;
    let product = (1..=n).fold(BigInt::one(), |acc, t| acc * (4 * j + 4 * t + 2));
    Ok(product / factorial(n))
}
