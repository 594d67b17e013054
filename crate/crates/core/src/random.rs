//! Seeded random models.
//!
//! All weights are dyadic rationals, so a model means the same thing in exact
//! and float mode. Every joint level set `{a = y, b = x}` gets at least one
//! point of positive weight, which makes `a` and `b` incompatible.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kolmogorov::Event;
use crate::model::{Metadata, ModelFile, PointSpec, SpaceSpec, Weight};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `parts` positive integers summing to `total`, drawn uniformly among compositions.
fn composition(rng: &mut impl Rng, total: u64, parts: usize) -> Vec<u64> {
    let mut cuts: Vec<u64> = index::sample(rng, total as usize - 1, parts - 1)
        .into_iter()
        .map(|c| c as u64 + 1)
        .collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut last = 0;
    for c in cuts.into_iter().chain([total]) {
        out.push(c - last);
        last = c;
    }
    out
}

fn dyadic(units: u64, bits: u32) -> BigRational {
    BigRational::new(BigInt::from(units), BigInt::from(1u64) << bits)
}

fn assemble(
    weights: Vec<BigRational>,
    a: Vec<f64>,
    b: Vec<f64>,
    contexts: BTreeMap<String, Vec<String>>,
    title: &str,
    seed: u64,
) -> ModelFile {
    let ids: Vec<String> = (1..=weights.len()).map(|i| format!("w{i}")).collect();
    let points = ids
        .iter()
        .zip(&weights)
        .map(|(id, w)| PointSpec { id: id.clone(), weight: Weight::Text(w.to_string()) })
        .collect();
    let var = |values: &[f64]| ids.iter().cloned().zip(values.iter().copied()).collect();
    let mut variables = BTreeMap::new();
    variables.insert("a".to_string(), var(&a));
    variables.insert("b".to_string(), var(&b));
    ModelFile {
        space: SpaceSpec { points },
        variables,
        contexts,
        metadata: Some(Metadata { title: Some(title.to_string()), seed: Some(seed) }),
    }
}

/// A nonempty event on `n` points.
pub fn random_event(rng: &mut impl Rng, n: usize) -> Event {
    loop {
        let mask: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        if mask.iter().any(|&m| m) {
            return Event::from_mask(mask);
        }
    }
}

fn named_contexts(rng: &mut impl Rng, n: usize, count: usize) -> BTreeMap<String, Vec<String>> {
    (1..=count)
        .map(|k| {
            let e = random_event(rng, n);
            (format!("C{k}"), e.indices().map(|i| format!("w{}", i + 1)).collect())
        })
        .collect()
}

/// A model on `points` points with `a` taking the values `1..=values_a` and
/// `b` taking `1..=values_b`, plus three random named contexts.
pub fn random_model(points: usize, values_a: usize, values_b: usize, seed: u64) -> Result<ModelFile> {
    let cells = values_a * values_b;
    if values_a < 2 || values_b < 2 || points < cells {
        return Err(Error::InfeasibleShape { points, cells });
    }
    let mut rng = rng(seed);
    let bits = (points as u64).next_power_of_two().trailing_zeros() + 4;
    let weights = composition(&mut rng, 1 << bits, points).into_iter().map(|u| dyadic(u, bits)).collect();

    let mut joint: Vec<(usize, usize)> = (0..cells).map(|k| (k / values_b, k % values_b)).collect();
    joint.extend((cells..points).map(|_| (rng.random_range(0..values_a), rng.random_range(0..values_b))));
    joint.shuffle(&mut rng);
    let a = joint.iter().map(|&(y, _)| (y + 1) as f64).collect();
    let b = joint.iter().map(|&(_, x)| (x + 1) as f64).collect();
    let contexts = named_contexts(&mut rng, points, 3);
    Ok(assemble(weights, a, b, contexts, "random model", seed))
}

/// A dichotomous model with the given joint masses `joint[y][x] = P(a = a_y, b = b_x)`,
/// each cell spread over one to three points.
pub fn model_from_joint(joint: [[BigRational; 2]; 2], seed: u64, title: &str) -> ModelFile {
    let mut rng = rng(seed);
    let mut weights = Vec::new();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (y, row) in joint.iter().enumerate() {
        for (x, mass) in row.iter().enumerate() {
            let parts = rng.random_range(1..=3usize);
            let units = composition(&mut rng, 8, parts);
            for u in units {
                weights.push(mass * dyadic(u, 3));
                a.push(if y == 0 { -1.0 } else { 1.0 });
                b.push(if x == 0 { -1.0 } else { 1.0 });
            }
        }
    }
    let contexts = named_contexts(&mut rng, weights.len(), 3);
    assemble(weights, a, b, contexts, title, seed)
}

/// A dyadic probability strictly between 0 and 1, with `bits` binary digits.
fn open_unit(rng: &mut impl Rng, bits: u32) -> BigRational {
    dyadic(rng.random_range(1..(1u64 << bits)), bits)
}

/// `P(a_1) = r`, `p(b_1|a_1) = p(b_2|a_2) = p`: `P^{b|a}` is double stochastic,
/// `P^{a|b}` only when `r = 1/2`.
pub fn double_stochastic_model(seed: u64) -> ModelFile {
    let mut g = rng(seed ^ 0x005e_edd5);
    let r = open_unit(&mut g, 4);
    let p = open_unit(&mut g, 4);
    let one = BigRational::one();
    let joint = [
        [&r * &p, &r * (&one - &p)],
        [(&one - &r) * (&one - &p), (&one - &r) * &p],
    ];
    model_from_joint(joint, seed, "double stochastic model")
}

/// Joint masses `[[x, y], [y, x]]` with `x + y = 1/2`: both marginals uniform.
pub fn uniform_symmetric_model(seed: u64) -> ModelFile {
    let mut g = rng(seed ^ 0x5a_5a);
    let half = BigRational::new(1.into(), 2.into());
    let x = open_unit(&mut g, 4) * &half;
    let y = &half - &x;
    model_from_joint([[x.clone(), y.clone()], [y, x]], seed, "uniform symmetric model")
}

/// Generic positive joint masses; `P^{b|a}` is double stochastic only by accident.
pub fn generic_model(seed: u64) -> ModelFile {
    let mut g = rng(seed ^ 0x9e_9e);
    let units = composition(&mut g, 64, 4);
    let m: Vec<BigRational> = units.into_iter().map(|u| dyadic(u, 6)).collect();
    model_from_joint([[m[0].clone(), m[1].clone()], [m[2].clone(), m[3].clone()]], seed, "generic model")
}

/// `count` nonempty random events on `n` points.
pub fn random_events(n: usize, count: usize, seed: u64) -> Vec<Event> {
    let mut g = rng(seed);
    (0..count).map(|_| random_event(&mut g, n)).collect()
}

/// The denominator of `q` in lowest terms is a power of two.
pub fn is_dyadic(q: &BigRational) -> bool {
    let d = q.denom();
    !d.is_zero() && (d & (d - BigInt::one())).is_zero()
}
