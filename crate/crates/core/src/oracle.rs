//! Brute-force recomputation of context quantities.
//!
//! Works on raw slices (weights, values of `a` and `b` per point, context
//! membership) by summing over points, without going through events,
//! partitions or the coefficient machinery of the other modules. Used to
//! cross-check them.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::scalar::Scalar;

/// Everything the oracle computes for one context.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRecord<S> {
    /// Distinct values of `a` and `b`, ascending.
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
    pub context_mass: S,
    pub pa: Vec<S>,
    pub pb: Vec<S>,
    /// `p(x|y)`, indexed `[y][x]`.
    pub transition: Vec<Vec<S>>,
    pub delta: Vec<S>,
    /// `λ(x)²`, `None` where the denominator vanishes.
    pub lambda_square: Vec<Option<S>>,
    pub lambda: Vec<f64>,
    /// `μ(B_x | {A_1, A_2 ∪ … ∪ A_n}, C)`, `None` where undefined.
    pub mu: Vec<Option<f64>>,
    /// Born residual of the `e^{i arccos λ}` amplitude, for dichotomous pairs
    /// whose coefficients all lie in `[-1, 1]`.
    pub born_residual: Option<f64>,
}

fn distinct(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn mass<S: Scalar>(weights: &[S], keep: impl Fn(usize) -> bool) -> S {
    let mut total = S::zero();
    for (i, w) in weights.iter().enumerate() {
        if keep(i) {
            total = total + w.clone();
        }
    }
    total
}

fn root<S: Scalar>(s: &S) -> f64 {
    s.to_f64().max(0.0).sqrt()
}

/// Recomputes the profile of `context` for the pair `(a, b)`.
///
/// Returns `None` when the context or some level set of `a` has zero mass.
pub fn oracle<S: Scalar>(weights: &[S], a: &[f64], b: &[f64], context: &[bool]) -> Option<OracleRecord<S>> {
    let a_values = distinct(a);
    let b_values = distinct(b);
    let c_mass = mass(weights, |i| context[i]);
    if c_mass.is_zero() {
        return None;
    }
    let in_a = |i: usize, y: usize| a[i] == a_values[y];
    let in_b = |i: usize, x: usize| b[i] == b_values[x];

    let mut pa = Vec::new();
    let mut transition = Vec::new();
    for y in 0..a_values.len() {
        let cell = mass(weights, |i| in_a(i, y));
        if cell.is_zero() {
            return None;
        }
        pa.push(mass(weights, |i| context[i] && in_a(i, y)) / c_mass.clone());
        transition.push(
            (0..b_values.len())
                .map(|x| mass(weights, |i| in_a(i, y) && in_b(i, x)) / cell.clone())
                .collect::<Vec<S>>(),
        );
    }
    let pb: Vec<S> = (0..b_values.len())
        .map(|x| mass(weights, |i| context[i] && in_b(i, x)) / c_mass.clone())
        .collect();

    let mut delta = Vec::new();
    let mut lambda_square = Vec::new();
    let mut lambda = Vec::new();
    let mut mu = Vec::new();
    for x in 0..b_values.len() {
        let terms: Vec<S> = (0..a_values.len()).map(|y| pa[y].clone() * transition[y][x].clone()).collect();
        let mut classical = S::zero();
        for t in &terms {
            classical = classical + t.clone();
        }
        let d = pb[x].clone() - classical;
        if a_values.len() == 2 {
            let denom = S::from_ratio(4, 1) * terms[0].clone() * terms[1].clone();
            if denom.is_zero() {
                lambda_square.push(None);
                lambda.push(if d.is_zero() { 0.0 } else { f64::INFINITY.copysign(d.to_f64()) });
            } else {
                let sq = d.clone() * d.clone() / denom;
                lambda.push(root(&sq).copysign(d.to_f64()));
                lambda_square.push(Some(sq));
            }
        }
        // μ with D1 = A_1 and D2 = the remaining cells.
        let head = terms[0].clone();
        let tail = mass(weights, |i| context[i] && in_b(i, x) && !in_a(i, 0)) / c_mass.clone();
        let numer = pb[x].clone() - head.clone() - tail.clone();
        let den = head * tail;
        mu.push(if den.to_f64() > 0.0 { Some(numer.to_f64() / (2.0 * den.to_f64().sqrt())) } else { None });
        delta.push(d);
    }

    let born_residual = if a_values.len() == 2 && b_values.len() == 2 && lambda.iter().all(|l| l.abs() <= 1.0) {
        let mut worst = 0.0f64;
        for x in 0..2 {
            let s1 = root(&(pa[0].clone() * transition[0][x].clone()));
            let s2 = root(&(pa[1].clone() * transition[1][x].clone()));
            let phi = Complex64::new(s1, 0.0) + Complex64::from_polar(s2, lambda[x].acos());
            worst = worst.max((phi.norm_sqr() - pb[x].to_f64()).abs());
        }
        Some(worst)
    } else {
        None
    };

    Some(OracleRecord {
        a_values,
        b_values,
        context_mass: c_mass,
        pa,
        pb,
        transition,
        delta,
        lambda_square,
        lambda,
        mu,
        born_residual,
    })
}

impl<S: Scalar> OracleRecord<S> {
    pub fn to_json(&self) -> Value {
        let list = |v: &[S]| Value::Array(v.iter().map(Scalar::to_json).collect());
        json!({
            "a_values": self.a_values,
            "b_values": self.b_values,
            "context_mass": self.context_mass.to_json(),
            "pa": list(&self.pa),
            "pb": list(&self.pb),
            "transition": self.transition.iter().map(|r| list(r)).collect::<Vec<_>>(),
            "delta": list(&self.delta),
            "lambda_square": self.lambda_square.iter().map(|s| s.as_ref().map(Scalar::to_json)).collect::<Vec<_>>(),
            "lambda": self.lambda.iter().map(|l| crate::report::json_f64(*l)).collect::<Vec<_>>(),
            "mu": self.mu.iter().map(|m| m.map(crate::report::json_f64)).collect::<Vec<_>>(),
            "born_residual": self.born_residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::ratio;

    fn run(f: &fixtures::Fixture, c: &[&str]) -> OracleRecord<num_rational::BigRational> {
        let e = f.event(c);
        oracle(f.space.weights(), f.a.values(), f.b.values(), e.mask()).unwrap()
    }

    #[test]
    fn u4() {
        let u = fixtures::u4();
        let r = run(&u, &["w1", "w3", "w4"]);
        assert_eq!(r.lambda_square, vec![Some(ratio(1, 8)), Some(ratio(1, 8))]);
        assert!((r.lambda[0] - 2f64.sqrt() / 4.0).abs() < 1e-15);
        assert!(r.lambda[1] < 0.0);
        assert!(r.born_residual.unwrap() < 1e-12);
        let whole = run(&u, &["w1", "w2", "w3", "w4"]);
        assert!(whole.delta.iter().all(|d| d == &ratio(0, 1)));
    }

    #[test]
    fn h6() {
        let h = fixtures::h6();
        let r = run(&h, &["w1", "w5"]);
        assert_eq!(r.lambda_square[0], Some(ratio(25, 9)));
        assert_eq!(r.born_residual, None);
    }

    #[test]
    fn degenerate_inputs() {
        let u = fixtures::u4();
        assert!(oracle(u.space.weights(), u.a.values(), u.b.values(), &[false; 4]).is_none());
        assert!(oracle(u.space.weights(), u.a.values(), u.b.values(), &[true, false, false, false]).is_some());
    }
}
