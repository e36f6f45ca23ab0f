//! Even dimensions: binary strings and lattice paths.
//!
//! For even `m = 2j` the map `s` reads the odd points `1, 3, …, 2j-1` of a diagram
//! and writes `0` for a bare point and `1` otherwise. Every fibre of `s` over
//! `B_{n,2j}` has size `4ⁿ`, which absorbs the power of two in the scaled
//! coefficients: for even `d`, `(-1)^(i-1) C_i^(d)` counts strings with `d/2 + 1`
//! ones and `d(i-1)/2` zeros having fewer than `d/2` zeros right before each of the
//! first `i - 1` ones. Reading `1` as a right step and `0` as an up step turns these
//! into lattice walks to `(d/2 + 1, d(i-1)/2)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coefficients::layer_count;
use crate::diagrams::{check_feasible, enumerate_b, BElement};
use crate::error::domain;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryString {
    bits: Vec<bool>,
}

impl BinaryString {
    pub fn new(bits: Vec<bool>) -> Self {
        BinaryString { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Zeros immediately before each `1`, left to right.
    pub fn zero_runs_before_ones(&self) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut run = 0;
        for &bit in &self.bits {
            if bit {
                runs.push(run);
                run = 0;
            } else {
                run += 1;
            }
        }
        runs
    }
}

impl fmt::Display for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &bit in &self.bits {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Right,
    Up,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePath {
    steps: Vec<Step>,
}

impl LatticePath {
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn endpoint(&self) -> (usize, usize) {
        let right = self.steps.iter().filter(|&&s| s == Step::Right).count();
        (right, self.steps.len() - right)
    }

    /// Number of up steps taken at each `x`-coordinate.
    pub fn ups_per_column(&self) -> Vec<usize> {
        let mut columns = vec![0];
        for step in &self.steps {
            match step {
                Step::Right => columns.push(0),
                Step::Up => *columns.last_mut().unwrap() += 1,
            }
        }
        columns
    }
}

impl From<&BinaryString> for LatticePath {
    fn from(s: &BinaryString) -> Self {
        LatticePath {
            steps: s
                .bits
                .iter()
                .map(|&b| if b { Step::Right } else { Step::Up })
                .collect(),
        }
    }
}

impl From<&LatticePath> for BinaryString {
    fn from(p: &LatticePath) -> Self {
        BinaryString {
            bits: p.steps.iter().map(|&s| s == Step::Right).collect(),
        }
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            f.write_str(match step {
                Step::Right => "R",
                Step::Up => "U",
            })?;
        }
        Ok(())
    }
}

/// Odd points `1, 3, …, 2j-1` of `b`, as `0` for bare and `1` otherwise.
pub fn s_map(b: &BElement) -> Result<BinaryString> {
    if !b.points().is_multiple_of(2) {
        return Err(domain!(
            "s-map needs an even number of points, got {}",
            b.points()
        ));
    }
    let bits = (1..=b.points() / 2)
        .map(|l| !b.is_bare(2 * l - 1))
        .collect();
    Ok(BinaryString { bits })
}

/// Sizes of the fibres of [`s_map`] over `B_{n,2j}`.
pub fn fiber_sizes(n: usize, j: usize) -> Result<BTreeMap<BinaryString, u64>> {
    check_feasible(n, 2 * j)?;
    let mut fibres = BTreeMap::new();
    for b in enumerate_b(n, 2 * j) {
        *fibres.entry(s_map(&b)?).or_default() += 1;
    }
    Ok(fibres)
}

/// `(half, ones, zeros, constrained)` for even `d` and layer `i`.
fn string_shape(d: u32, i: u32) -> Result<(usize, usize, usize, usize)> {
    if d < 2 || !d.is_multiple_of(2) {
        return Err(domain!("string interpretation needs even d ≥ 2, got {d}"));
    }
    if i == 0 || i > layer_count(d) {
        return Err(domain!(
            "layer index {i} out of range 1..={}",
            layer_count(d)
        ));
    }
    let half = (d / 2) as usize;
    let constrained = (i - 1) as usize;
    Ok((half, half + 1, half * constrained, constrained))
}

/// Counts the constrained strings by distributing the zeros into the gaps in front
/// of each `1` plus a free trailing gap.
pub fn count_constrained_strings(d: u32, i: u32) -> Result<BigInt> {
    let (half, ones, zeros, constrained) = string_shape(d, i)?;
    // ways[z]: placements of the ones seen so far using z zeros
    let mut ways = vec![BigInt::zero(); zeros + 1];
    ways[0] = BigInt::one();
    for one in 0..ones {
        let limit = if one < constrained { half - 1 } else { zeros };
        let mut next = vec![BigInt::zero(); zeros + 1];
        for (used, count) in ways.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for run in 0..=limit.min(zeros - used) {
                next[used + run] += count;
            }
        }
        ways = next;
    }
    // the trailing gap absorbs whatever is left
    Ok(ways.into_iter().fold(BigInt::zero(), |acc, c| acc + c))
}

/// The constrained strings themselves, in lexicographic order.
pub fn constrained_strings(d: u32, i: u32) -> Result<Vec<BinaryString>> {
    let (half, ones, zeros, constrained) = string_shape(d, i)?;
    let mut out = Vec::new();
    let mut bits = Vec::with_capacity(ones + zeros);
    #[allow(clippy::too_many_arguments)]
    fn extend(
        bits: &mut Vec<bool>,
        ones_left: usize,
        zeros_left: usize,
        run: usize,
        ones_done: usize,
        half: usize,
        constrained: usize,
        out: &mut Vec<BinaryString>,
    ) {
        if ones_left == 0 && zeros_left == 0 {
            out.push(BinaryString { bits: bits.clone() });
            return;
        }
        if zeros_left > 0 && (ones_done >= constrained || run + 1 < half) {
            bits.push(false);
            extend(
                bits,
                ones_left,
                zeros_left - 1,
                run + 1,
                ones_done,
                half,
                constrained,
                out,
            );
            bits.pop();
        }
        if ones_left > 0 {
            bits.push(true);
            extend(
                bits,
                ones_left - 1,
                zeros_left,
                0,
                ones_done + 1,
                half,
                constrained,
                out,
            );
            bits.pop();
        }
    }
    extend(&mut bits, ones, zeros, 0, 0, half, constrained, &mut out);
    Ok(out)
}

/// Counts monotone walks from `(0, 0)` to `(d/2 + 1, d(i-1)/2)` with fewer than
/// `d/2` up steps in each column `x ≤ i - 2`.
pub fn count_constrained_paths(d: u32, i: u32) -> Result<BigInt> {
    let (half, width, height, constrained) = string_shape(d, i)?;
    let cap = |x: usize| if x < constrained { half - 1 } else { height };
    // column[y]: walks that have just arrived in column x at height y
    let mut column = vec![BigInt::zero(); height + 1];
    column[0] = BigInt::one();
    for x in 0..=width {
        // climb within column x
        let mut climbed = vec![BigInt::zero(); height + 1];
        for (y, count) in column.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for ups in 0..=cap(x).min(height - y) {
                climbed[y + ups] += count;
            }
        }
        if x == width {
            return Ok(climbed[height].clone());
        }
        column = climbed;
    }
    unreachable!()
}

/// The constrained walks, in the same order as [`constrained_strings`].
pub fn constrained_paths(d: u32, i: u32) -> Result<Vec<LatticePath>> {
    Ok(constrained_strings(d, i)?
        .iter()
        .map(LatticePath::from)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn strings(d: u32, i: u32) -> Vec<alloc::string::String> {
        constrained_strings(d, i)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    #[test]
    fn s_map_examples() {
        let single: BElement = "2; chord 1-2 red 1".parse().unwrap();
        assert_eq!(s_map(&single).unwrap().to_string(), "1");
        let bare: BElement = "4".parse().unwrap();
        assert_eq!(s_map(&bare).unwrap().to_string(), "00");
        let two: BElement = "6; chord 2-3 red 2; chord 5-6 blue 5".parse().unwrap();
        assert_eq!(s_map(&two).unwrap().to_string(), "011");
        let odd: BElement = "3; chord 1-2 red 1".parse().unwrap();
        assert!(s_map(&odd).is_err());
    }

    #[test]
    fn fibres() {
        let f = fiber_sizes(1, 1).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.values().copied().collect::<Vec<_>>(), vec![4]);
        let f = fiber_sizes(0, 3).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.keys().next().unwrap().to_string(), "000");
        let f = fiber_sizes(1, 2).unwrap();
        let keys: Vec<_> = f.keys().map(ToString::to_string).collect();
        assert_eq!(keys, vec!["01", "10"]);
        assert!(f.values().all(|&v| v == 4));
        assert!(fiber_sizes(5, 5).is_err());
    }

    #[test]
    fn string_counts() {
        assert_eq!(strings(2, 2), vec!["101", "110"]);
        assert_eq!(count_constrained_strings(2, 2).unwrap(), BigInt::from(2));
        assert_eq!(count_constrained_strings(6, 1).unwrap(), BigInt::one());
        assert_eq!(strings(6, 1), vec!["1111"]);
        assert_eq!(count_constrained_strings(4, 3).unwrap(), BigInt::from(16));
        assert_eq!(count_constrained_strings(2, 3).unwrap(), BigInt::one());
        assert_eq!(strings(2, 3), vec!["1100"]);
    }

    #[test]
    fn path_counts() {
        assert_eq!(count_constrained_paths(2, 2).unwrap(), BigInt::from(2));
        assert_eq!(count_constrained_paths(8, 1).unwrap(), BigInt::one());
        assert_eq!(count_constrained_paths(4, 2).unwrap(), BigInt::from(9));
    }

    #[test]
    fn odd_dimension_rejected() {
        assert!(count_constrained_strings(3, 1).is_err());
        assert!(count_constrained_paths(5, 2).is_err());
        assert!(constrained_strings(2, 4).is_err());
        assert!(count_constrained_strings(4, 0).is_err());
    }

    #[test]
    fn paths_follow_strings() {
        for path in constrained_paths(4, 3).unwrap() {
            assert_eq!(path.endpoint(), (3, 4));
            let cols = path.ups_per_column();
            assert!(cols[0] < 2 && cols[1] < 2);
            assert_eq!(LatticePath::from(&BinaryString::from(&path)), path);
        }
    }
}
