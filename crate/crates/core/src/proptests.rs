//! Cross-module properties and independent oracles.

use std::collections::BTreeMap;
use std::string::ToString;
use std::vec;
use std::vec::Vec;

use crate::causet::{box_operator, CausalSet, ScalarField};
use crate::coefficients::{
    compute_c, compute_scaled_c, gamma_ratio_scaled, half_floor, layer_count, operator_constants,
    CoeffTable,
};
use crate::diagrams::{
    consecutive_bare_before, count_b, count_restricted, count_tilde, enumerate_b,
    is_in_restricted_class, is_valid_b, BElement, Color, ColoredChord,
};
use crate::evenstrings::{constrained_strings, count_constrained_strings, s_map};
use crate::genseries::{closed_coeff_even, closed_coeff_odd, expand_b};
use crate::sprinkling::{
    causal_set_from_events, diamond_volume, estimate_box, field_on, sprinkle, sprinkle_trial,
    DiamondConfig, FieldSpec,
};
use crate::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// `C_i^(d)` straight from the gamma-ratio sum in floating point.
fn c_by_float_gamma(d: u32, i: u32) -> (f64, f64) {
    let half = d as f64 / 2.0;
    let (shift, base) = if d.is_multiple_of(2) {
        (2.0, libm::tgamma(half + 2.0))
    } else {
        (1.5, libm::tgamma((d as f64 + 3.0) / 2.0))
    };
    let mut sum = 0.0;
    let mut largest = 0.0f64;
    for k in 0..i {
        let kf = k as f64;
        let ratio =
            libm::tgamma(half * (kf + 1.0) + shift) / (base * libm::tgamma(1.0 + half * kf));
        let term = binomial((i - 1) as u64, k as u64).to_f64().unwrap() * ratio;
        largest = largest.max(term.abs());
        sum += if k % 2 == 0 { term } else { -term };
    }
    (sum, largest)
}

#[test]
fn coefficients_match_floating_gamma() {
    for d in 2..=12 {
        for i in 1..=layer_count(d) {
            let exact = compute_c(d, i).unwrap().to_f64().unwrap();
            let (float, largest) = c_by_float_gamma(d, i);
            assert!(
                (exact - float).abs() <= 1e-12 * largest.max(1.0),
                "d={d} i={i}: exact {exact}, gamma {float}"
            );
        }
    }
}

#[test]
fn alternating_sum_identity() {
    for d in 2..=12 {
        for i in 1..=layer_count(d) {
            let mut sum = BigInt::zero();
            for k in 0..i {
                let term = binomial((i - 1) as u64, k as u64) * gamma_ratio_scaled(d, k).unwrap();
                sum += if k % 2 == 0 { term } else { -term };
            }
            assert_eq!(compute_scaled_c(d, i).unwrap(), sum, "d={d} i={i}");
        }
    }
}

#[test]
fn signs_alternate() {
    for d in 2..=12 {
        let table = CoeffTable::new(d).unwrap();
        assert!(table.check());
        for (idx, c) in table.entries.iter().enumerate() {
            assert_eq!(c.is_positive(), idx % 2 == 0, "d={d} i={}", idx + 1);
            assert!(!c.is_zero());
        }
    }
}

#[test]
fn gamma_ratio_is_the_product_formula() {
    // (2dk + 4h + 4)(2dk + 4h)⋯(2dk + 4) / (h + 1)!
    for d in 2..=12u32 {
        let h = half_floor(d) as u64;
        for k in 0..=4u64 {
            let top = 2 * d as u64 * k;
            let numerator = (0..=h).fold(BigInt::one(), |acc, j| acc * (top + 4 + 4 * j));
            let factorial = (1..=h + 1).fold(BigInt::one(), |acc, j| acc * j);
            assert_eq!(
                gamma_ratio_scaled(d, k as u32).unwrap(),
                numerator / factorial
            );
        }
    }
}

#[test]
fn operator_constants_are_consistent() {
    for d in 2..=12 {
        let k = operator_constants(d).unwrap();
        assert!(k.is_consistent(), "d={d}");
        assert!(k.alpha < 0.0 && k.beta > 0.0);
    }
    let k4 = operator_constants(4).unwrap();
    let root6 = 6f64.sqrt();
    assert!((k4.alpha + 4.0 / root6).abs() < 1e-12);
    assert!((k4.beta - 4.0 / root6).abs() < 1e-12);
}

#[test]
fn series_closed_forms() {
    let series = expand_b(6, 21);
    for n in 0..=6u64 {
        for i in 1..=10u64 {
            assert_eq!(
                series.coeff(n as usize, 2 * i as usize).unwrap(),
                closed_coeff_even(n, i).unwrap()
            );
            if i >= n {
                assert_eq!(
                    series.coeff(n as usize, 2 * i as usize + 1).unwrap(),
                    closed_coeff_odd(n, i).unwrap(),
                    "n={n} i={i}"
                );
            }
        }
    }
}

#[test]
fn string_count_bridge() {
    // unconstrained strings with d/2 + 1 ones, times 4^(d/2 + 1)
    for d in (2..=10u32).step_by(2) {
        let h = (d / 2) as u64;
        for k in 0..=3u64 {
            let strings = binomial(h + 1 + d as u64 * k / 2, h + 1);
            assert_eq!(
                strings << (2 * (h + 1)),
                gamma_ratio_scaled(d, k as u32).unwrap()
            );
        }
    }
}

#[test]
fn constrained_strings_obey_their_rule() {
    for d in (2..=8).step_by(2) {
        for i in 1..=layer_count(d) {
            let all = constrained_strings(d, i).unwrap();
            assert_eq!(
                BigInt::from(all.len()),
                count_constrained_strings(d, i).unwrap()
            );
            let half = (d / 2) as usize;
            for s in &all {
                assert_eq!(s.ones(), half + 1);
                assert_eq!(s.len() - s.ones(), half * (i as usize - 1));
                let runs = s.zero_runs_before_ones();
                assert!(runs.iter().take(i as usize - 1).all(|&r| r < half), "{s}");
            }
            let mut sorted = all.clone();
            sorted.dedup();
            assert_eq!(sorted.len(), all.len());
        }
    }
}

fn coloured(b: &BElement) -> impl Iterator<Item = &ColoredChord> {
    b.chords().iter().filter(|c| c.color.is_coloured())
}

#[test]
fn enumerated_elements_are_well_formed() {
    for n in 0..=3 {
        for m in 1..=10 {
            let all = enumerate_b(n, m);
            assert_eq!(all.len() as u64, count_b(n, m));
            for b in &all {
                assert!(is_valid_b(b));
                assert_eq!(b.chord_count(), n);
                // no coloured chord inside another
                for outer in coloured(b) {
                    for inner in coloured(b) {
                        assert!(!outer.inside_contains(inner.low), "{b}");
                    }
                }
                if n > 0 {
                    let swapped = b.swap_colors();
                    assert_ne!(&swapped, b);
                    assert_eq!(swapped.swap_colors(), *b);
                }
            }
            let mut sorted = all.clone();
            sorted.dedup();
            assert_eq!(sorted.len(), all.len(), "duplicates in B_{{{n},{m}}}");
        }
    }
}

#[test]
fn first_end_is_redundant_except_for_one_chord_on_two_points() {
    for n in 1..=3 {
        for m in 2..=10 {
            let mut assignments: BTreeMap<Vec<(usize, usize, Color)>, usize> = BTreeMap::new();
            for b in enumerate_b(n, m) {
                let key = b
                    .chords()
                    .iter()
                    .map(|c| (c.low, c.high, c.color))
                    .collect();
                *assignments.entry(key).or_default() += 1;
            }
            let expected = if (n, m) == (1, 2) { 2 } else { 1 };
            for (diagram, count) in assignments {
                assert_eq!(count, expected, "n={n} m={m} {diagram:?}");
            }
        }
    }
}

#[test]
fn swapping_first_end_of_a_chord_breaks_validity() {
    // the other end is never also valid, apart from B_{1,2}
    for b in enumerate_b(2, 8) {
        for (idx, c) in b
            .chords()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.color.is_coloured())
        {
            let mut chords = b.chords().to_vec();
            let other = if c.first_end == Some(c.low) {
                c.high
            } else {
                c.low
            };
            chords[idx] = ColoredChord::coloured(c.low, c.high, c.color, other);
            assert!(
                !is_valid_b(&BElement::new(b.points(), chords).unwrap()),
                "{b}"
            );
        }
    }
}

#[test]
fn restricted_class_shrinks_with_the_bounds() {
    for (n, m) in [(2, 6), (2, 8), (3, 10)] {
        let all = count_b(n, m);
        assert_eq!(count_restricted(n, m, 100, 5), all);
        assert_eq!(count_restricted(n, m, 3, 0), all);
        let mut previous = all;
        for gap in (1..=4).rev() {
            let now = count_restricted(n, m, gap, 2);
            assert!(now <= previous);
            previous = now;
        }
        assert!(count_tilde(n, m, 2, 1) * 2 == count_restricted(n, m, 2, 1));
    }
}

#[test]
fn restricted_membership_uses_linear_runs() {
    for b in enumerate_b(2, 8) {
        let profile = b.first_end_profile();
        let mut prior = 0;
        let mut expected = true;
        for (&e, &w) in profile.ordered_first_ends.iter().zip(&profile.widths) {
            if prior < 2 && consecutive_bare_before(&b, e) >= 2 {
                expected = false;
            }
            prior += w;
        }
        assert_eq!(is_in_restricted_class(&b, 2, 2), expected, "{b}");
    }
}

#[test]
fn fibres_and_s_map_on_the_series() {
    for n in 0..=3 {
        for j in n.max(1)..=5 {
            let mut total = 0u64;
            for b in enumerate_b(n, 2 * j) {
                assert_eq!(s_map(&b).unwrap().ones(), n);
                total += 1;
            }
            assert_eq!(BigInt::from(total), binomial(j as u64, n as u64) << (2 * n));
        }
    }
}

proptest! {
    #[test]
    fn diagram_text_round_trips(n in 0usize..=3, m in 1usize..=9, pick in any::<prop::sample::Index>()) {
        let all = enumerate_b(n, m);
        prop_assume!(!all.is_empty());
        let b = pick.get(&all);
        let back: BElement = b.to_string().parse().unwrap();
        prop_assert_eq!(&back, b);
    }
}

fn random_order(seed: u64, len: usize, p: f64) -> CausalSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for a in 0..len {
        for b in a + 1..len {
            if rng.random_bool(p) {
                pairs.push((a, b));
            }
        }
    }
    CausalSet::from_relations(len, &pairs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn layers_partition_the_past(seed in any::<u64>(), len in 1usize..80, p in 0.01f64..0.5) {
        let set = random_order(seed, len, p);
        prop_assert!(set.is_strict_order());
        for x in 0..len {
            let past: Vec<usize> = set.past_of(x).collect();
            let mut from_layers: Vec<usize> = (1..=len).flat_map(|i| set.layer(x, i)).collect();
            from_layers.sort_unstable();
            prop_assert_eq!(&from_layers, &past);
            for &y in &past {
                prop_assert!(set.interval_size(y, x) >= 2);
            }
        }
    }

    #[test]
    fn closure_is_transitive(seed in any::<u64>(), len in 1usize..70, p in 0.01f64..0.3) {
        let set = random_order(seed, len, p);
        for (a, b) in set.relations() {
            for c in 0..len {
                if set.precedes(b, c) {
                    prop_assert!(set.precedes(a, c));
                }
            }
        }
    }

    #[test]
    fn operator_is_linear(
        seed in any::<u64>(),
        len in 2usize..40,
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        d in prop::sample::select(vec![2u32, 3, 4, 5, 6]),
    ) {
        let set = random_order(seed, len, 0.2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let phi: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        let psi: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mix: Vec<f64> = phi.iter().zip(&psi).map(|(p, q)| a * p + b * q).collect();
        let (phi, psi, mix) = (ScalarField::new(phi), ScalarField::new(psi), ScalarField::new(mix));
        for x in 0..len {
            let lhs = box_operator(&set, d, 0.7, &mix, x).unwrap();
            let rhs = a * box_operator(&set, d, 0.7, &phi, x).unwrap() + b * box_operator(&set, d, 0.7, &psi, x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs().max(rhs.abs())), "{} vs {}", lhs, rhs);
        }
    }

    #[test]
    fn sprinklings_are_orders_and_reproducible(seed in any::<u64>(), d in 2u32..=4, rho in 1.0f64..60.0) {
        let config = DiamondConfig::new(d, rho, 1.0, seed).unwrap();
        let first = sprinkle(&config).unwrap();
        prop_assert_eq!(&first, &sprinkle(&config).unwrap());
        let set = &first.causal_set;
        prop_assert!(set.is_strict_order());
        prop_assert_eq!(first.eval_index, set.len() - 1);
        for y in 0..first.eval_index {
            prop_assert!(set.precedes(y, first.eval_index));
        }
    }

    #[test]
    fn boosts_preserve_the_order(seed in any::<u64>(), d in 2u32..=4, rapidity in -1.0f64..1.0) {
        let config = DiamondConfig::new(d, 30.0, 1.0, seed).unwrap();
        let result = sprinkle_trial(&config, 3).unwrap();
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let boosted: Vec<Vec<f64>> = result
            .causal_set
            .coords()
            .unwrap()
            .iter()
            .map(|e| {
                let mut f = e.clone();
                f[0] = e[0] * ch - e[1] * sh;
                f[1] = e[1] * ch - e[0] * sh;
                f
            })
            .collect();
        let other = causal_set_from_events(boosted);
        let n = result.causal_set.len();
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(result.causal_set.precedes(a, b), other.precedes(a, b));
            }
        }
    }
}

#[test]
fn diamond_volume_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for d in 2..=4u32 {
        for t in [0.5, 1.0, 2.0] {
            let samples = 400_000;
            let mut hits = 0;
            for _ in 0..samples {
                let time: f64 = rng.random_range(-t..t);
                let r2: f64 = (1..d)
                    .map(|_| rng.random_range(-t..t))
                    .map(|x: f64| x * x)
                    .sum();
                if r2 <= (t - time.abs()).powi(2) {
                    hits += 1;
                }
            }
            let p = hits as f64 / samples as f64;
            let box_volume = (2.0 * t).powi(d as i32);
            let se = (p * (1.0 - p) / samples as f64).sqrt() * box_volume;
            let volume = diamond_volume(d, t);
            assert!(
                (p * box_volume - volume).abs() <= 5.0 * se,
                "d={d} T={t}: {volume} vs {}",
                p * box_volume
            );
        }
    }
}

#[test]
fn poisson_counts_in_three_dimensions() {
    let config = DiamondConfig::new(3, 20.0, 1.0, 5).unwrap();
    let expected = config.expected_points();
    let counts: Vec<f64> = (0..1000)
        .map(|t| (sprinkle_trial(&config, t).unwrap().causal_set.len() - 1) as f64)
        .collect();
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / n;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(
        (mean - expected).abs() <= 4.0 * (var / n).sqrt(),
        "{mean} vs {expected}"
    );
    assert!(
        (var - expected).abs() <= 0.15 * expected,
        "{var} vs {expected}"
    );
}

#[test]
fn table_fields_follow_element_order() {
    let config = DiamondConfig::new(2, 5.0, 1.0, 8).unwrap();
    let result = sprinkle(&config).unwrap();
    let len = result.causal_set.len();
    let table = FieldSpec::Table((0..len).map(|k| k as f64).collect());
    assert_eq!(
        field_on(&table, &result.causal_set).unwrap().values[len - 1],
        (len - 1) as f64
    );
    let short = FieldSpec::Table(vec![1.0; len - 1]);
    assert!(field_on(&short, &result.causal_set).is_err());
    assert!(estimate_box(&config, &short, 1).is_err());
}

#[test]
fn estimates_are_deterministic() {
    let config = DiamondConfig::new(2, 20.0, 1.0, 123).unwrap();
    let field: FieldSpec = "t^2".parse().unwrap();
    let a = estimate_box(&config, &field, 50).unwrap();
    let b = estimate_box(&config, &field, 50).unwrap();
    assert_eq!(a, b);
    assert!(a.std_error > 0.0);
}
