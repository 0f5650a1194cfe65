//! Shared fixtures for the integration suites: the seeded random framework
//! corpus and an allocator-equivalence check up to variable renaming.

#![allow(dead_code)]

use argalloc::framework::{Allocator, ArgumentationFramework, Network};
use argalloc::tri::{equivalent, parse_expression, Expression, TriValue, Valuation};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub const VAR_POOL: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Seeded random expression over the six-variable pool.
pub fn rand_expr(rng: &mut ChaCha8Rng, depth: usize) -> Expression {
    let choice = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..5) };
    match choice {
        0 => Expression::Constant(
            [TriValue::True, TriValue::Undec, TriValue::False][rng.gen_range(0..3)],
        ),
        1 => Expression::var(VAR_POOL[rng.gen_range(0..VAR_POOL.len())]),
        2 => Expression::neg(rand_expr(rng, depth - 1)),
        3 => Expression::conj((0..rng.gen_range(2..4)).map(|_| rand_expr(rng, depth - 1))),
        _ => Expression::disj((0..rng.gen_range(2..4)).map(|_| rand_expr(rng, depth - 1))),
    }
}

/// A random total valuation of the pool variables.
pub fn pool_valuation(rng: &mut ChaCha8Rng) -> Valuation {
    Valuation::from_pairs(VAR_POOL.map(|name| {
        (name, [TriValue::True, TriValue::Undec, TriValue::False][rng.gen_range(0..3)])
    }))
}

pub const CORPUS_SEED: u64 = 0xA110C;
pub const CORPUS_SIZE: usize = 200;

/// 200 random frameworks with 3–7 arguments and edge probability 0.3,
/// reproducible across runs and suites.
pub fn corpus() -> Vec<ArgumentationFramework> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|_| {
            let n = rng.gen_range(3..=7);
            let args: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
            let mut attacks = Vec::new();
            for src in &args {
                for dst in &args {
                    if rng.gen_bool(0.3) {
                        attacks.push((src.clone(), dst.clone()));
                    }
                }
            }
            ArgumentationFramework::new(args, attacks).unwrap()
        })
        .collect()
}

pub fn corpus_networks() -> Vec<Network> {
    corpus().iter().map(Network::from_af).collect()
}

pub fn shuffled_order(args: &[String], rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut order = args.to_vec();
    order.shuffle(rng);
    order
}

pub fn table1_af() -> ArgumentationFramework {
    let args = ["1", "2", "3", "4"].map(String::from).to_vec();
    let attacks = [("1", "2"), ("2", "1"), ("1", "3"), ("2", "3"), ("3", "4")]
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .to_vec();
    ArgumentationFramework::new(args, attacks).unwrap()
}

pub fn fig3_af() -> ArgumentationFramework {
    let args = ["1", "2", "3", "4", "5"].map(String::from).to_vec();
    let attacks = [("1", "2"), ("2", "1"), ("3", "4"), ("4", "3"), ("2", "5"), ("4", "5")]
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .to_vec();
    ArgumentationFramework::new(args, attacks).unwrap()
}

/// True when some bijection from the variables of `expected` onto the
/// allocation variables of `actual` — allowing a polarity flip per variable,
/// and fixing every name in `fixed` to itself — makes each expected
/// expression equivalent to the allocated one.
pub fn allocator_matches(actual: &Allocator, expected: &[(&str, &str)], fixed: &[&str]) -> bool {
    let parsed: Vec<(&str, Expression)> = expected
        .iter()
        .map(|(arg, text)| (*arg, parse_expression(text).unwrap()))
        .collect();
    let mut expected_vars: BTreeSet<String> = BTreeSet::new();
    for (_, e) in &parsed {
        expected_vars.extend(e.vars());
    }
    for name in fixed {
        expected_vars.remove(*name);
    }
    let mut actual_vars = actual.allocation_vars();
    for name in fixed {
        actual_vars.remove(*name);
    }
    let expected_vars: Vec<String> = expected_vars.into_iter().collect();
    let actual_vars: Vec<String> = actual_vars.into_iter().collect();
    if expected_vars.len() != actual_vars.len() {
        return false;
    }
    let k = expected_vars.len();
    for perm in actual_vars.iter().permutations(k) {
        'mask: for mask in 0..(1u32 << k) {
            for (arg, template) in &parsed {
                let mut candidate = template.clone();
                for (i, from) in expected_vars.iter().enumerate() {
                    let target = Expression::var(perm[i].clone());
                    let image = if mask & (1 << i) != 0 {
                        Expression::neg(target)
                    } else {
                        target
                    };
                    candidate = candidate.substitute(from, &image);
                }
                let allocated = match actual.get(arg) {
                    Some(e) => e,
                    None => return false,
                };
                if !equivalent(&candidate, allocated).unwrap() {
                    continue 'mask;
                }
            }
            return true;
        }
    }
    false
}
