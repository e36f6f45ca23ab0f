//! Finite causal sets and the operators built on their intervals.
//!
//! Intervals are closed: `[a, b] = {c : a ≤ c ≤ b}`, so a link has interval size 2.
//! The layer `L_i(x)` holds the `y < x` with `|[y, x]| = i + 1`, and `N_i` counts the
//! related pairs whose interval has `i + 1` elements. Open-interval conventions shift
//! every index by two.

use alloc::vec;
use alloc::vec::Vec;

use crate::coefficients::{
    alpha_over_beta, layer_count, operator_constants, rational_to_f64, CoeffTable,
};
use crate::error::domain;
use crate::{Error, Result};

/// Finite strict partial order stored as transitively closed bitset rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalSet {
    len: usize,
    words: usize,
    /// `future[a]` has bit `b` set iff `a < b`.
    future: Vec<u64>,
    /// `past[b]` has bit `a` set iff `a < b`.
    past: Vec<u64>,
    coords: Option<Vec<Vec<f64>>>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

fn test_bit(row: &[u64], idx: usize) -> bool {
    row[idx / 64] >> (idx % 64) & 1 == 1
}

fn set_bit(row: &mut [u64], idx: usize) {
    row[idx / 64] |= 1 << (idx % 64);
}

fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let tz = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(w * 64 + tz)
        })
    })
}

impl CausalSet {
    /// The antichain on `len` elements.
    pub fn antichain(len: usize) -> Self {
        let words = word_count(len);
        CausalSet {
            len,
            words,
            future: vec![0; len * words],
            past: vec![0; len * words],
            coords: None,
        }
    }

    /// Builds the order generated by `pairs` (each `(a, b)` meaning `a < b`), applying
    /// the transitive closure.
    pub fn from_relations(len: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut set = Self::antichain(len);
        for &(a, b) in pairs {
            if a >= len || b >= len {
                return Err(domain!(
                    "relation ({a}, {b}) out of range for {len} elements"
                ));
            }
            set_bit(set.future_row_mut(a), b);
        }
        // Warshall over bitset rows
        let words = set.words;
        for k in 0..len {
            let row_k: Vec<u64> = set.future_row(k).to_vec();
            for a in 0..len {
                if test_bit(set.future_row(a), k) {
                    let row_a = &mut set.future[a * words..(a + 1) * words];
                    for (dst, src) in row_a.iter_mut().zip(&row_k) {
                        *dst |= src;
                    }
                }
            }
        }
        for a in 0..len {
            if test_bit(set.future_row(a), a) {
                let b = ones(set.future_row(a))
                    .find(|&b| b != a && test_bit(set.future_row(b), a))
                    .unwrap_or(a);
                return Err(Error::NotAPoset { a, b });
            }
        }
        set.rebuild_past();
        Ok(set)
    }

    /// Builds an order from a relation predicate that is already a strict order
    /// (irreflexive and transitive), such as causal precedence between events.
    pub fn from_order_predicate(len: usize, precedes: impl Fn(usize, usize) -> bool) -> Self {
        let mut set = Self::antichain(len);
        for a in 0..len {
            for b in 0..len {
                if a != b && precedes(a, b) {
                    set_bit(set.future_row_mut(a), b);
                }
            }
        }
        set.rebuild_past();
        set
    }

    /// Attaches embedding coordinates (time first), one vector per element.
    pub fn with_coords(mut self, coords: Vec<Vec<f64>>) -> Result<Self> {
        if coords.len() != self.len {
            return Err(domain!(
                "{} coordinate vectors for {} elements",
                coords.len(),
                self.len
            ));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    fn rebuild_past(&mut self) {
        self.past = vec![0; self.len * self.words];
        for a in 0..self.len {
            let targets: Vec<usize> = ones(self.future_row(a)).collect();
            for b in targets {
                let words = self.words;
                set_bit(&mut self.past[b * words..(b + 1) * words], a);
            }
        }
    }

    fn future_row(&self, a: usize) -> &[u64] {
        &self.future[a * self.words..(a + 1) * self.words]
    }

    fn future_row_mut(&mut self, a: usize) -> &mut [u64] {
        let words = self.words;
        &mut self.future[a * words..(a + 1) * words]
    }

    fn past_row(&self, b: usize) -> &[u64] {
        &self.past[b * self.words..(b + 1) * self.words]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    /// `a < b`.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        test_bit(self.future_row(a), b)
    }

    /// All related pairs `(a, b)` with `a < b`.
    pub fn relations(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len).flat_map(move |a| ones(self.future_row(a)).map(move |b| (a, b)))
    }

    /// Strict predecessors of `x`.
    pub fn past_of(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.past_row(x))
    }

    /// Checks irreflexivity, antisymmetry and transitivity.
    pub fn is_strict_order(&self) -> bool {
        for a in 0..self.len {
            if self.precedes(a, a) {
                return false;
            }
            for b in ones(self.future_row(a)) {
                if self.precedes(b, a) {
                    return false;
                }
                let closed = self
                    .future_row(b)
                    .iter()
                    .zip(self.future_row(a))
                    .all(|(fb, fa)| fb & !fa == 0);
                if !closed {
                    return false;
                }
            }
        }
        true
    }

    /// `|[a, b]|`, or 0 when `a ≤ b` fails.
    pub fn interval_size(&self, a: usize, b: usize) -> usize {
        if a == b {
            return 1;
        }
        if !self.precedes(a, b) {
            return 0;
        }
        let between: u32 = self
            .future_row(a)
            .iter()
            .zip(self.past_row(b))
            .map(|(f, p)| (f & p).count_ones())
            .sum();
        between as usize + 2
    }

    /// `L_i(x)`, in increasing element order.
    pub fn layer(&self, x: usize, i: usize) -> Vec<usize> {
        self.past_of(x)
            .filter(|&y| self.interval_size(y, x) == i + 1)
            .collect()
    }

    /// `N_1, …, N_max_i`.
    pub fn interval_abundances(&self, max_i: usize) -> Vec<u64> {
        let mut counts = vec![0u64; max_i];
        for (a, b) in self.relations() {
            let i = self.interval_size(a, b) - 1;
            if i <= max_i {
                counts[i - 1] += 1;
            }
        }
        counts
    }
}

/// A real scalar field, one value per element.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new(values: Vec<f64>) -> Self {
        ScalarField { values }
    }

    pub fn constant(len: usize, value: f64) -> Self {
        ScalarField {
            values: vec![value; len],
        }
    }
}

/// `B^(d)` at a fixed dimension and discreteness scale.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxOperator {
    dimension: u32,
    ell: f64,
    alpha: f64,
    beta: f64,
    coefficients: Vec<f64>,
}

impl BoxOperator {
    pub fn new(d: u32, ell: f64) -> Result<Self> {
        if !ell.is_finite() || ell <= 0.0 {
            return Err(domain!("discreteness scale must be positive, got {ell}"));
        }
        let constants = operator_constants(d)?;
        Ok(BoxOperator {
            dimension: d,
            ell,
            alpha: constants.alpha,
            beta: constants.beta,
            coefficients: CoeffTable::new(d)?.as_f64(),
        })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// `(1/ℓ²)(α φ(x) + β Σ_i C_i Σ_{y ∈ L_i(x)} φ(y))`.
    pub fn apply(&self, set: &CausalSet, phi: &ScalarField, x: usize) -> Result<f64> {
        if phi.values.len() != set.len() {
            return Err(domain!(
                "field has {} values for {} elements",
                phi.values.len(),
                set.len()
            ));
        }
        if x >= set.len() {
            return Err(domain!("element {x} out of range"));
        }
        let layers = self.coefficients.len();
        let mut layer_sums = vec![0.0; layers];
        for y in set.past_of(x) {
            let i = set.interval_size(y, x) - 1;
            if i <= layers {
                layer_sums[i - 1] += phi.values[y];
            }
        }
        let weighted: f64 = self
            .coefficients
            .iter()
            .zip(&layer_sums)
            .map(|(c, s)| c * s)
            .sum();
        Ok((self.alpha * phi.values[x] + self.beta * weighted) / (self.ell * self.ell))
    }
}

/// `B^(d) φ(x)` on `set` with discreteness scale `ell`.
pub fn box_operator(set: &CausalSet, d: u32, ell: f64, phi: &ScalarField, x: usize) -> Result<f64> {
    BoxOperator::new(d, ell)?.apply(set, phi, x)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ActionReport {
    pub dimension: u32,
    pub length_scale: f64,
    #[cfg_attr(feature = "serde", serde(rename = "n"))]
    pub size: usize,
    /// `N_1, …, N_{⌊d/2⌋+2}`.
    pub abundances: Vec<u64>,
    pub action: f64,
}

/// BDG action `-α ℓ^(d-2) (N + (β/α) Σ_i C_i N_i)`, with the overall Planck-length
/// factor set to one.
pub fn bdg_action(set: &CausalSet, d: u32, ell: f64) -> Result<ActionReport> {
    if !ell.is_finite() || ell <= 0.0 {
        return Err(domain!("discreteness scale must be positive, got {ell}"));
    }
    let constants = operator_constants(d)?;
    let beta_over_alpha = rational_to_f64(&alpha_over_beta(d)?.recip());
    let coefficients = CoeffTable::new(d)?.as_f64();
    let abundances = set.interval_abundances(layer_count(d) as usize);
    let weighted: f64 = coefficients
        .iter()
        .zip(&abundances)
        .map(|(c, &n)| c * n as f64)
        .sum();
    let action = -constants.alpha
        * libm::pow(ell, d as f64 - 2.0)
        * (set.len() as f64 + beta_over_alpha * weighted);
    Ok(ActionReport {
        dimension: d,
        length_scale: ell,
        size: set.len(),
        abundances,
        action,
    })
}
