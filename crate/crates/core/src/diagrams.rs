//! Coloured noncrossing partial rooted chord diagrams.
//!
//! Points are labelled `1..=m` around a circle with point 1 as the root. A chord is
//! black, red or blue; red and blue chords carry a designated *first end*, and the
//! *inside* of such a chord is the cyclic run of points strictly after its first end
//! and strictly before its other end. An element of `B_{n,m}` is a noncrossing
//! diagram with `n` chords on `m` points in which
//!
//! * every point inside a red or blue chord lies on a black chord, and
//! * every black chord lies inside some red or blue chord.
//!
//! The *width* of a red or blue chord is one more than the number of black chords it
//! contains; it owns that many insertion places in front of its first end.
//! `B_{n,m,c,p}` keeps the elements with fewer than `c` consecutive bare points right
//! before every first end whose preceding chords have total width below `p`.
//!
//! Bare runs are counted linearly: the run in front of a first end stops at the root
//! and never wraps from point 1 round to point `m`. Inserting `q` bare points in front
//! of first end `e` places them at positions `e..e+q`, pushing `e` and everything
//! after it along (for `e = 1` the new points become the first `q` points).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;

use crate::coefficients::{compute_scaled_c, gamma_part_shape, layer_count};
use crate::error::domain;
use crate::{Error, Result};

/// Largest chord count accepted by the exhaustive checks.
pub const MAX_FEASIBLE_CHORDS: usize = 4;
/// Largest point count accepted by the exhaustive checks.
pub const MAX_FEASIBLE_POINTS: usize = 18;

pub fn check_feasible(chords: usize, points: usize) -> Result<()> {
    if chords > MAX_FEASIBLE_CHORDS || points > MAX_FEASIBLE_POINTS {
        return Err(Error::TooLarge { chords, points });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Black,
    Red,
    Blue,
}

impl Color {
    pub fn is_coloured(self) -> bool {
        !matches!(self, Color::Black)
    }

    fn swapped(self) -> Color {
        match self {
            Color::Black => Color::Black,
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Black => "black",
            Color::Red => "red",
            Color::Blue => "blue",
        }
    }
}

impl FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "black" => Ok(Color::Black),
            "red" => Ok(Color::Red),
            "blue" => Ok(Color::Blue),
            other => Err(Error::Parse(format!("unknown chord colour `{other}`"))),
        }
    }
}

fn check_pairs(points: usize, pairs: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
    let mut used = vec![false; points + 1];
    let mut out = Vec::with_capacity(pairs.len());
    for &(a, b) in pairs {
        if a == b || a == 0 || b == 0 || a > points || b > points {
            return Err(domain!("malformed chord {a}-{b} on {points} points"));
        }
        for p in [a, b] {
            if used[p] {
                return Err(domain!("point {p} lies on two chords"));
            }
            used[p] = true;
        }
        out.push((a.min(b), a.max(b)));
    }
    out.sort_unstable();
    Ok(out)
}

fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

/// Uncoloured partial rooted chord diagram.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialChordDiagram {
    points: usize,
    chords: Vec<(usize, usize)>,
}

impl PartialChordDiagram {
    pub fn new(points: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Ok(PartialChordDiagram {
            points,
            chords: check_pairs(points, pairs)?,
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Chords as `(low, high)` pairs sorted by their lower end.
    pub fn chords(&self) -> &[(usize, usize)] {
        &self.chords
    }

    pub fn is_bare(&self, point: usize) -> bool {
        !self.chords.iter().any(|&(a, b)| a == point || b == point)
    }

    pub fn is_noncrossing(&self) -> bool {
        self.chords
            .iter()
            .enumerate()
            .all(|(idx, &a)| self.chords[idx + 1..].iter().all(|&b| !crosses(a, b)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredChord {
    pub low: usize,
    pub high: usize,
    pub color: Color,
    /// `Some(low)` or `Some(high)` for red and blue chords, `None` for black ones.
    pub first_end: Option<usize>,
}

impl ColoredChord {
    pub fn black(a: usize, b: usize) -> Self {
        ColoredChord {
            low: a.min(b),
            high: a.max(b),
            color: Color::Black,
            first_end: None,
        }
    }

    pub fn coloured(a: usize, b: usize, color: Color, first_end: usize) -> Self {
        ColoredChord {
            low: a.min(b),
            high: a.max(b),
            color,
            first_end: Some(first_end),
        }
    }

    /// Whether `point` lies on the inside of this chord. Black chords have no inside.
    pub fn inside_contains(&self, point: usize) -> bool {
        match self.first_end {
            Some(fe) if fe == self.low => self.low < point && point < self.high,
            Some(_) => point > self.high || point < self.low,
            None => false,
        }
    }

    fn span(&self) -> (usize, usize) {
        (self.low, self.high)
    }
}

/// An element of `B_{n,m}`, or a candidate for one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BElement {
    points: usize,
    chords: Vec<ColoredChord>,
}

impl BElement {
    /// Builds a candidate, rejecting malformed chords: endpoints out of range or
    /// shared, black chords with a first end, or red/blue chords without a valid one.
    /// The diagram conditions themselves are checked by [`is_valid_b`].
    pub fn new(points: usize, mut chords: Vec<ColoredChord>) -> Result<Self> {
        let spans: Vec<_> = chords.iter().map(|c| (c.low, c.high)).collect();
        check_pairs(points, &spans)?;
        for chord in &mut chords {
            let (low, high) = (chord.low.min(chord.high), chord.low.max(chord.high));
            chord.low = low;
            chord.high = high;
            match (chord.color, chord.first_end) {
                (Color::Black, None) => {}
                (Color::Black, Some(_)) => {
                    return Err(domain!("black chord {low}-{high} has a first end"))
                }
                (_, Some(fe)) if fe == low || fe == high => {}
                (_, _) => {
                    return Err(domain!(
                        "coloured chord {low}-{high} needs one of its ends as first end"
                    ))
                }
            }
        }
        chords.sort_unstable();
        Ok(BElement { points, chords })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn chords(&self) -> &[ColoredChord] {
        &self.chords
    }

    pub fn chord_count(&self) -> usize {
        self.chords.len()
    }

    pub fn diagram(&self) -> PartialChordDiagram {
        PartialChordDiagram {
            points: self.points,
            chords: self.chords.iter().map(ColoredChord::span).collect(),
        }
    }

    pub fn is_bare(&self, point: usize) -> bool {
        !self
            .chords
            .iter()
            .any(|c| c.low == point || c.high == point)
    }

    fn bare_mask(&self) -> Vec<bool> {
        let mut bare = vec![true; self.points + 1];
        for c in &self.chords {
            bare[c.low] = false;
            bare[c.high] = false;
        }
        bare
    }

    /// The same element with red and blue exchanged.
    pub fn swap_colors(&self) -> BElement {
        BElement {
            points: self.points,
            chords: self
                .chords
                .iter()
                .map(|c| ColoredChord {
                    color: c.color.swapped(),
                    ..*c
                })
                .collect(),
        }
    }

    /// First ends in increasing order together with the widths of their chords.
    pub fn first_end_profile(&self) -> FirstEndProfile {
        let mut entries: Vec<(usize, usize)> = self
            .chords
            .iter()
            .filter_map(|c| {
                let fe = c.first_end?;
                let inner_black = self
                    .chords
                    .iter()
                    .filter(|b| {
                        b.color == Color::Black
                            && c.inside_contains(b.low)
                            && c.inside_contains(b.high)
                    })
                    .count();
                Some((fe, inner_black + 1))
            })
            .collect();
        entries.sort_unstable();
        FirstEndProfile {
            ordered_first_ends: entries.iter().map(|e| e.0).collect(),
            widths: entries.iter().map(|e| e.1).collect(),
        }
    }

    /// Insertion places in order: each first end repeated once per unit of width.
    pub fn insertion_places(&self) -> Vec<usize> {
        let profile = self.first_end_profile();
        profile
            .ordered_first_ends
            .iter()
            .zip(&profile.widths)
            .flat_map(|(&e, &w)| core::iter::repeat_n(e, w))
            .collect()
    }

    /// Inserts `count` bare points immediately before `point`.
    pub fn with_bare_inserted(&self, point: usize, count: usize) -> BElement {
        let shift = |p: usize| if p >= point { p + count } else { p };
        BElement {
            points: self.points + count,
            chords: self
                .chords
                .iter()
                .map(|c| ColoredChord {
                    low: shift(c.low),
                    high: shift(c.high),
                    color: c.color,
                    first_end: c.first_end.map(shift),
                })
                .collect(),
        }
    }
}

/// Line format `m; chord a-b color [first_end]; ...`.
impl fmt::Display for BElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.points)?;
        for c in &self.chords {
            write!(f, "; chord {}-{} {}", c.low, c.high, c.color.name())?;
            if let Some(fe) = c.first_end {
                write!(f, " {fe}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for BElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(';').map(str::trim);
        let points = parts
            .next()
            .and_then(|p| p.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("missing point count in `{s}`")))?;
        let mut chords = Vec::new();
        for part in parts.filter(|p| !p.is_empty()) {
            let bad = || Error::Parse(format!("malformed chord `{part}`"));
            let mut words = part.split_whitespace();
            if words.next() != Some("chord") {
                return Err(bad());
            }
            let (a, b) = words
                .next()
                .and_then(|w| w.split_once('-'))
                .ok_or_else(bad)?;
            let a: usize = a.parse().map_err(|_| bad())?;
            let b: usize = b.parse().map_err(|_| bad())?;
            let color: Color = words.next().ok_or_else(bad)?.parse()?;
            let first_end = words
                .next()
                .map(|w| w.parse::<usize>().map_err(|_| bad()))
                .transpose()?;
            if words.next().is_some() {
                return Err(bad());
            }
            chords.push(ColoredChord {
                low: a,
                high: b,
                color,
                first_end,
            });
        }
        BElement::new(points, chords)
    }
}

/// First ends `e_1 < e_2 < …` and the widths `w(e_j)` of their chords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstEndProfile {
    pub ordered_first_ends: Vec<usize>,
    pub widths: Vec<usize>,
}

/// Whether `candidate` satisfies the conditions defining `B_{n,m}`.
pub fn is_valid_b(candidate: &BElement) -> bool {
    let chords = &candidate.chords;
    let spans: Vec<_> = chords.iter().map(ColoredChord::span).collect();
    let noncrossing = spans
        .iter()
        .enumerate()
        .all(|(idx, &a)| spans[idx + 1..].iter().all(|&b| !crosses(a, b)));
    if !noncrossing {
        return false;
    }

    let mut on_black = vec![false; candidate.points + 1];
    for c in chords.iter().filter(|c| c.color == Color::Black) {
        on_black[c.low] = true;
        on_black[c.high] = true;
    }
    let coloured: Vec<&ColoredChord> = chords.iter().filter(|c| c.color.is_coloured()).collect();

    // insides hold black points only; this also keeps coloured chords out of each other
    let insides_black = coloured
        .iter()
        .all(|c| (1..=candidate.points).all(|p| !c.inside_contains(p) || on_black[p]));
    let none_nested = coloured.iter().all(|outer| {
        coloured
            .iter()
            .all(|inner| !(outer.inside_contains(inner.low) && outer.inside_contains(inner.high)))
    });
    let blacks_covered = chords.iter().filter(|c| c.color == Color::Black).all(|b| {
        coloured
            .iter()
            .any(|c| c.inside_contains(b.low) && c.inside_contains(b.high))
    });
    insides_black && none_nested && blacks_covered
}

/// Calls `visit` once for every noncrossing partial matching of `1..=points` with
/// exactly `chords` chords.
///
/// Points are scanned left to right keeping a stack of open chords; a point is bare,
/// opens a chord, or closes the innermost open chord.
pub fn for_each_noncrossing_matching(
    points: usize,
    chords: usize,
    mut visit: impl FnMut(&[(usize, usize)]),
) {
    #[allow(clippy::type_complexity)]
    fn step(
        p: usize,
        points: usize,
        left_to_open: usize,
        open: &mut Vec<usize>,
        done: &mut Vec<(usize, usize)>,
        visit: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        if p > points {
            if left_to_open == 0 && open.is_empty() {
                visit(done);
            }
            return;
        }
        let remaining = points - p + 1;
        let needed = 2 * left_to_open + open.len();
        if needed > remaining {
            return;
        }
        if needed < remaining {
            step(p + 1, points, left_to_open, open, done, visit);
        }
        if left_to_open > 0 {
            open.push(p);
            step(p + 1, points, left_to_open - 1, open, done, visit);
            open.pop();
        }
        if let Some(start) = open.pop() {
            done.push((start, p));
            step(p + 1, points, left_to_open, open, done, visit);
            done.pop();
            open.push(start);
        }
    }
    let mut open = Vec::with_capacity(chords);
    let mut done = Vec::with_capacity(chords);
    step(1, points, chords, &mut open, &mut done, &mut visit);
}

/// Calls `visit` for each element of `B_{n,m}` with every coloured chord drawn red.
/// Each such skeleton stands for `2^(coloured chords)` elements.
fn for_each_skeleton(n: usize, m: usize, mut visit: impl FnMut(&BElement)) {
    if m == 0 {
        return;
    }
    for_each_noncrossing_matching(m, n, |matching| {
        let mut chords: Vec<ColoredChord> = matching
            .iter()
            .map(|&(a, b)| ColoredChord::black(a, b))
            .collect();
        chords.sort_unstable();
        let spans: Vec<_> = chords.iter().map(ColoredChord::span).collect();
        // kind 0: black, 1: coloured with first end low, 2: coloured with first end high
        let total = 3usize.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            for (chord, &(a, b)) in chords.iter_mut().zip(&spans) {
                *chord = match c % 3 {
                    0 => ColoredChord::black(a, b),
                    1 => ColoredChord::coloured(a, b, Color::Red, a),
                    _ => ColoredChord::coloured(a, b, Color::Red, b),
                };
                c /= 3;
            }
            let candidate = BElement {
                points: m,
                chords: chords.clone(),
            };
            if is_valid_b(&candidate) {
                visit(&candidate);
            }
        }
    });
}

/// All elements of `B_{n,m}` in increasing order. Empty for `m = 0`.
pub fn enumerate_b(n: usize, m: usize) -> Vec<BElement> {
    let mut out = Vec::new();
    for_each_skeleton(n, m, |skeleton| {
        let coloured: Vec<usize> = skeleton
            .chords
            .iter()
            .enumerate()
            .filter(|(_, c)| c.color.is_coloured())
            .map(|(idx, _)| idx)
            .collect();
        for mask in 0..1usize << coloured.len() {
            let mut element = skeleton.clone();
            for (bit, &idx) in coloured.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    element.chords[idx].color = Color::Blue;
                }
            }
            out.push(element);
        }
    });
    out.sort_unstable();
    out
}

/// `|B_{n,m}|` without materialising the colourings.
pub fn count_b(n: usize, m: usize) -> u64 {
    let mut total = 0u64;
    for_each_skeleton(n, m, |skeleton| {
        let coloured = skeleton
            .chords
            .iter()
            .filter(|c| c.color.is_coloured())
            .count();
        total += 1 << coloured;
    });
    total
}

/// Length of the run of bare points immediately before `point`, scanning down
/// towards the root and stopping at the first non-bare point or at point 1.
///
/// # Panics
///
/// If `point` is not in `1..=b.points()`.
pub fn consecutive_bare_before(b: &BElement, point: usize) -> usize {
    assert!(
        (1..=b.points).contains(&point),
        "point {point} out of range 1..={}",
        b.points
    );
    let bare = b.bare_mask();
    (1..point).rev().take_while(|&p| bare[p]).count()
}

/// Membership of `b` in `B_{n,m,gap_bound,place_bound}`.
pub fn is_in_restricted_class(b: &BElement, gap_bound: usize, place_bound: usize) -> bool {
    let profile = b.first_end_profile();
    let bare = b.bare_mask();
    let mut prior_width = 0;
    for (&e, &w) in profile.ordered_first_ends.iter().zip(&profile.widths) {
        if prior_width >= place_bound {
            break;
        }
        let run = (1..e).rev().take_while(|&p| bare[p]).count();
        if run >= gap_bound {
            return false;
        }
        prior_width += w;
    }
    true
}

/// `|B_{n,m,gap_bound,place_bound}|`.
pub fn count_restricted(n: usize, m: usize, gap_bound: usize, place_bound: usize) -> u64 {
    let mut total = 0u64;
    for_each_skeleton(n, m, |skeleton| {
        if is_in_restricted_class(skeleton, gap_bound, place_bound) {
            let coloured = skeleton
                .chords
                .iter()
                .filter(|c| c.color.is_coloured())
                .count();
            total += 1 << coloured;
        }
    });
    total
}

/// Number of red/blue swap classes in `B_{n,m,gap_bound,place_bound}`.
pub fn count_tilde(n: usize, m: usize, gap_bound: usize, place_bound: usize) -> u64 {
    let classes: BTreeSet<BElement> = enumerate_b(n, m)
        .into_iter()
        .filter(|b| is_in_restricted_class(b, gap_bound, place_bound))
        .map(|b| {
            let swapped = b.swap_colors();
            if swapped < b {
                swapped
            } else {
                b
            }
        })
        .collect();
    classes.len() as u64
}

fn theorem_shape(d: u32, i: u32) -> Result<(usize, usize)> {
    if d < 2 || i == 0 || i > layer_count(d) {
        return Err(domain!("(d, i) = ({d}, {i}) out of range"));
    }
    let shape = gamma_part_shape(d, i - 1);
    check_feasible(shape.0, shape.1)?;
    Ok(shape)
}

/// Both sides of `2^(2⌊d/2⌋+2) C_i^(d) = (-1)^(i-1) |B_{⌊d/2⌋+1, 2⌊d/2⌋+2+d(i-1), d, i-1}|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCheck {
    pub dimension: u32,
    pub index: u32,
    pub chords: usize,
    pub points: usize,
    pub scaled_coefficient: BigInt,
    pub restricted_count: u64,
}

impl TheoremCheck {
    /// `(-1)^(i-1)` times the restricted count.
    pub fn signed_count(&self) -> BigInt {
        let count = BigInt::from(self.restricted_count);
        if self.index % 2 == 1 {
            count
        } else {
            -count
        }
    }

    pub fn holds(&self) -> bool {
        self.signed_count() == self.scaled_coefficient
    }
}

pub fn theorem_check(d: u32, i: u32) -> Result<TheoremCheck> {
    let (n, m) = theorem_shape(d, i)?;
    Ok(TheoremCheck {
        dimension: d,
        index: i,
        chords: n,
        points: m,
        scaled_coefficient: compute_scaled_c(d, i)?,
        restricted_count: count_restricted(n, m, d as usize, (i - 1) as usize),
    })
}

/// Checks the theorem for one `(d, i)` by exhaustive enumeration.
pub fn verify_theorem(d: u32, i: u32) -> Result<bool> {
    Ok(theorem_check(d, i)?.holds())
}

/// Outcome of rebuilding the signed insertion multisets for one `(d, i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationReport {
    pub dimension: u32,
    pub index: u32,
    pub chords: usize,
    pub points: usize,
    /// Total number of insertion acts over all `M_k`.
    pub insertions: u64,
    /// `|B_{n,m}|` of the target class.
    pub elements: usize,
    /// Elements of the restricted class.
    pub restricted: usize,
    /// Net signed multiplicity → number of target elements with that net.
    pub net_histogram: BTreeMap<i64, usize>,
    /// Target elements whose net differs from their restricted-class indicator.
    pub mismatches: usize,
    /// Multiset members that are not elements of the target class.
    pub strays: usize,
    /// Sum of all net multiplicities.
    pub signed_total: i64,
}

impl CancellationReport {
    pub fn collapses(&self) -> bool {
        self.mismatches == 0 && self.strays == 0
    }
}

/// Rebuilds `Σ_k (-1)^(i-1-k) M_k`, where `M_k` inserts `d` bare points into each of
/// `i-1-k` chosen places among the first `i-1` insertion places of every element of
/// `B_{⌊d/2⌋+1, 2⌊d/2⌋+2+dk}`, and compares the net multiplicities with membership in
/// the restricted class.
pub fn cancellation_report(d: u32, i: u32) -> Result<CancellationReport> {
    let (n, target_points) = theorem_shape(d, i)?;
    let constrained = (i - 1) as usize;
    let mut tally: BTreeMap<BElement, i64> = BTreeMap::new();
    let mut insertions = 0u64;

    for k in 0..i {
        let (_, source_points) = gamma_part_shape(d, k);
        let chosen = constrained - k as usize;
        let sign = if chosen.is_multiple_of(2) { 1 } else { -1 };
        for b in enumerate_b(n, source_points) {
            let places = b.insertion_places();
            if places.len() < constrained {
                return Err(Error::Inconsistent(format!(
                    "element {b} has {} insertion places, fewer than {constrained}",
                    places.len()
                )));
            }
            for mask in 0u32..1 << constrained {
                if mask.count_ones() as usize != chosen {
                    continue;
                }
                let mut per_point: BTreeMap<usize, usize> = BTreeMap::new();
                for (slot, &e) in places[..constrained].iter().enumerate() {
                    if mask >> slot & 1 == 1 {
                        *per_point.entry(e).or_default() += 1;
                    }
                }
                let mut c = b.clone();
                for (&e, &times) in per_point.iter().rev() {
                    c = c.with_bare_inserted(e, d as usize * times);
                }
                *tally.entry(c).or_default() += sign;
                insertions += 1;
            }
        }
    }

    let signed_total = tally.values().sum();
    let mut net_histogram = BTreeMap::new();
    let mut mismatches = 0;
    let mut restricted = 0;
    let targets = enumerate_b(n, target_points);
    for c in &targets {
        let net = tally.remove(c).unwrap_or(0);
        let expected = is_in_restricted_class(c, d as usize, constrained);
        restricted += expected as usize;
        *net_histogram.entry(net).or_default() += 1;
        if net != expected as i64 {
            mismatches += 1;
        }
    }
    let strays = tally.values().filter(|&&v| v != 0).count();

    Ok(CancellationReport {
        dimension: d,
        index: i,
        chords: n,
        points: target_points,
        insertions,
        elements: targets.len(),
        restricted,
        net_histogram,
        mismatches,
        strays,
        signed_total,
    })
}

/// Whether the signed insertion multiset collapses to the restricted class with
/// multiplicity one each.
pub fn verify_cancellation(d: u32, i: u32) -> Result<bool> {
    Ok(cancellation_report(d, i)?.collapses())
}

impl fmt::Display for CancellationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hist: Vec<String> = self
            .net_histogram
            .iter()
            .map(|(net, count)| format!("{net}:{count}"))
            .collect();
        write!(
            f,
            "d={} i={} B_{{{},{}}}: {} elements, {} restricted, net multiplicities [{}], {} mismatches, {} strays, signed total {}",
            self.dimension,
            self.index,
            self.chords,
            self.points,
            self.elements,
            self.restricted,
            hist.join(" "),
            self.mismatches,
            self.strays,
            self.signed_total
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn parse(s: &str) -> BElement {
        s.parse().unwrap()
    }

    #[test]
    fn validity_examples() {
        assert!(is_valid_b(&parse("2; chord 1-2 red 1")));
        assert!(!is_valid_b(&parse("2; chord 1-2 black")));
        assert!(is_valid_b(&parse("4; chord 1-4 red 1; chord 2-3 black")));
        // first end 4 puts nothing inside, so the black chord is uncovered
        assert!(!is_valid_b(&parse("4; chord 1-4 red 4; chord 2-3 black")));
        // a bare point inside a coloured chord
        assert!(!is_valid_b(&parse("3; chord 1-3 blue 1")));
        assert!(is_valid_b(&parse("3; chord 1-3 blue 3")));
        // crossing chords
        assert!(!is_valid_b(&parse("4; chord 1-3 red 3; chord 2-4 red 4")));
        // coloured chord inside another
        assert!(!is_valid_b(&parse("4; chord 1-4 red 1; chord 2-3 red 2")));
    }

    #[test]
    fn malformed_candidates() {
        assert!(BElement::new(2, vec![ColoredChord::black(1, 3)]).is_err());
        assert!(BElement::new(
            3,
            vec![ColoredChord::black(1, 2), ColoredChord::black(2, 3)]
        )
        .is_err());
        assert!(BElement::new(2, vec![ColoredChord::coloured(1, 2, Color::Red, 3)]).is_err());
        let black_with_end = ColoredChord {
            first_end: Some(1),
            ..ColoredChord::black(1, 2)
        };
        assert!(BElement::new(2, vec![black_with_end]).is_err());
        assert!("2; chord 1-2 green 1".parse::<BElement>().is_err());
        assert!("x; chord 1-2 red 1".parse::<BElement>().is_err());
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_b(1, 2).len(), 4);
        assert_eq!(enumerate_b(1, 3).len(), 6);
        assert_eq!(enumerate_b(2, 4).len(), 16);
        for m in 1..6 {
            let all = enumerate_b(0, m);
            assert_eq!(all.len(), 1);
            assert_eq!(all[0].chord_count(), 0);
        }
        assert!(enumerate_b(0, 0).is_empty());
        assert!(enumerate_b(2, 3).is_empty());
    }

    #[test]
    fn count_matches_materialised_enumeration() {
        for n in 0..=3 {
            for m in 1..=9 {
                assert_eq!(
                    count_b(n, m),
                    enumerate_b(n, m).len() as u64,
                    "n = {n}, m = {m}"
                );
            }
        }
    }

    #[test]
    fn enumeration_is_sorted_and_valid() {
        let all = enumerate_b(2, 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(is_valid_b));
    }

    #[test]
    fn matchings_are_catalan_times_placements() {
        // binom(m, 2n) Cat_n noncrossing partial matchings
        let mut count = 0;
        for_each_noncrossing_matching(8, 3, |_| count += 1);
        assert_eq!(count, 28 * 5);
        let mut seen = BTreeSet::new();
        for_each_noncrossing_matching(6, 2, |m| {
            let d = PartialChordDiagram::new(6, m).unwrap();
            assert!(d.is_noncrossing());
            seen.insert(d);
        });
        assert_eq!(seen.len(), 15 * 2);
    }

    #[test]
    fn bare_runs() {
        let b = parse("5; chord 4-5 red 4");
        assert_eq!(consecutive_bare_before(&b, 4), 3);
        let single = parse("2; chord 1-2 red 1");
        assert_eq!(consecutive_bare_before(&single, 1), 0);
        let b = parse("6; chord 3-4 red 3; chord 5-6 blue 5");
        assert_eq!(consecutive_bare_before(&b, 3), 2);
        assert_eq!(consecutive_bare_before(&b, 5), 0);
        assert_eq!(consecutive_bare_before(&b, 1), 0);
    }

    #[test]
    fn bare_runs_agree_with_a_scan() {
        for b in enumerate_b(2, 7) {
            for p in 1..=b.points() {
                let mut expected = 0;
                let mut q = p;
                while q > 1 && b.diagram().is_bare(q - 1) {
                    expected += 1;
                    q -= 1;
                }
                assert_eq!(consecutive_bare_before(&b, p), expected);
            }
        }
    }

    #[test]
    fn profiles() {
        let b = parse("8; chord 1-4 red 1; chord 2-3 black; chord 6-7 blue 6");
        let profile = b.first_end_profile();
        assert_eq!(profile.ordered_first_ends, vec![1, 6]);
        assert_eq!(profile.widths, vec![2, 1]);
        assert_eq!(b.insertion_places(), vec![1, 1, 6]);
        for b in enumerate_b(3, 9) {
            assert_eq!(b.first_end_profile().widths.iter().sum::<usize>(), 3);
        }
    }

    #[test]
    fn restricted_class_edge_cases() {
        let all = enumerate_b(2, 7);
        assert!(all.iter().all(|b| is_in_restricted_class(b, 0, 0)));
        let b = parse("3; chord 2-3 red 2");
        assert!(!is_in_restricted_class(&b, 1, 1));
        assert!(is_in_restricted_class(&b, 2, 1));
        let filtered = enumerate_b(2, 6)
            .iter()
            .filter(|b| is_in_restricted_class(b, 2, 1))
            .count();
        assert_eq!(filtered, 32);
    }

    #[test]
    fn restricted_counts() {
        assert_eq!(count_restricted(2, 4, 2, 0), 16);
        assert_eq!(count_restricted(2, 6, 2, 1), 32);
        assert_eq!(count_restricted(2, 7, 3, 1), 54);
        // the theorem would need 16 here; four elements net -1 in the multiset
        assert_eq!(count_restricted(2, 8, 2, 2), 20);
    }

    #[test]
    fn swap_classes() {
        assert_eq!(count_tilde(2, 4, 2, 0), 8);
        assert_eq!(count_tilde(1, 2, 1, 0), 2);
        assert_eq!(count_tilde(2, 6, 2, 1), 16);
    }

    #[test]
    fn swap_has_no_fixed_points() {
        for n in 1..=3 {
            for m in 2 * n..=8 {
                for b in enumerate_b(n, m) {
                    assert_ne!(b.swap_colors(), b);
                }
            }
        }
    }

    #[test]
    fn theorem_small_cases() {
        assert!(verify_theorem(2, 1).unwrap());
        assert!(verify_theorem(2, 2).unwrap());
        assert!(verify_theorem(3, 2).unwrap());
        assert!(matches!(verify_theorem(2, 0), Err(Error::Domain(_))));
        assert!(matches!(verify_theorem(8, 1), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn insertion_shifts_later_points() {
        let b = parse("4; chord 1-2 red 1; chord 3-4 blue 3");
        assert_eq!(
            b.with_bare_inserted(3, 2).to_string(),
            "6; chord 1-2 red 1; chord 5-6 blue 5"
        );
        assert_eq!(
            b.with_bare_inserted(1, 1).to_string(),
            "5; chord 2-3 red 2; chord 4-5 blue 4"
        );
    }

    #[test]
    fn cancellation_without_insertions() {
        let report = cancellation_report(2, 1).unwrap();
        assert!(report.collapses());
        assert_eq!(report.elements, 16);
        assert_eq!(report.restricted, 16);
    }

    #[test]
    fn cancellation_at_second_layer() {
        let report = cancellation_report(2, 2).unwrap();
        assert!(report.collapses(), "{report}");
        assert_eq!(report.net_histogram.get(&0), Some(&16));
        assert_eq!(report.net_histogram.get(&1), Some(&32));
    }

    #[test]
    fn display_round_trip() {
        for b in enumerate_b(2, 5) {
            let text = b.to_string();
            assert_eq!(text.parse::<BElement>().unwrap(), b);
        }
        assert_eq!(parse("3").chord_count(), 0);
    }
}
