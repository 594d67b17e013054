//! Split-complex amplitudes for hyperbolic contexts.
//!
//! When `|λ(x)| ≥ 1` the coefficient is `±cosh θ(x)` and
//!
//! ```text
//! z(x) = √A + s (cosh θ + j sinh θ) √B,   j² = +1
//! ```
//!
//! satisfies `z conj(z) = A + B + 2 s √(AB) cosh θ = p_C^b(x)` with
//! `A = p_C^a(a_1) p(x|a_1)`, `B = p_C^a(a_2) p(x|a_2)`.
//!
//! Only amplitudes and this identity are provided. No basis for `a` or
//! operator representation is built on the hyperbolic side.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::calculus::{interference_lambda, ContextClass, ContextProfile};
use crate::error::{Error, Result};
use crate::kolmogorov::{Event, FiniteSpace, RandomVariable};
use crate::scalar::Scalar;

/// `re + j hy` with `j² = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SplitComplex {
    pub re: f64,
    pub hy: f64,
}

impl SplitComplex {
    pub const ONE: SplitComplex = SplitComplex { re: 1.0, hy: 0.0 };
    pub const J: SplitComplex = SplitComplex { re: 0.0, hy: 1.0 };

    pub fn new(re: f64, hy: f64) -> Self {
        Self { re, hy }
    }

    pub fn conj(self) -> Self {
        Self { re: self.re, hy: -self.hy }
    }

    /// `z conj(z) = re² - hy²`. Can be negative.
    pub fn split_modulus(self) -> f64 {
        self.re * self.re - self.hy * self.hy
    }

    pub fn scale(self, k: f64) -> Self {
        Self { re: self.re * k, hy: self.hy * k }
    }
}

pub fn split_modulus(z: SplitComplex) -> f64 {
    z.split_modulus()
}

impl Add for SplitComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, hy: self.hy + o.hy }
    }
}

impl Sub for SplitComplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, hy: self.hy - o.hy }
    }
}

impl Mul for SplitComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { re: self.re * o.re + self.hy * o.hy, hy: self.re * o.hy + self.hy * o.re }
    }
}

impl Neg for SplitComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, hy: -self.hy }
    }
}

impl std::fmt::Display for SplitComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = if self.hy.is_sign_negative() { '-' } else { '+' };
        write!(f, "{} {} {}j", self.re, sign, self.hy.abs())
    }
}

/// `λ = sign · cosh θ` with `θ ≥ 0`.
pub fn hyperbolic_phase(lambda: f64) -> Result<(f64, f64)> {
    if lambda.is_nan() || lambda.abs() < 1.0 {
        return Err(Error::HyperbolicDomain(lambda));
    }
    Ok((lambda.signum(), lambda.abs().acosh()))
}

/// `sign (cosh θ + j sinh θ)`.
pub fn hyperbolic_unit(sign: f64, theta: f64) -> SplitComplex {
    SplitComplex::new(theta.cosh(), theta.sinh()).scale(sign)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicState<S> {
    pub profile: ContextProfile<S>,
    pub amplitudes: [SplitComplex; 2],
    pub theta: [f64; 2],
    pub sign: [f64; 2],
}

impl<S: Scalar> HyperbolicState<S> {
    /// `max_x |z(x) conj(z(x)) - p_C^b(x)|`.
    pub fn born_residual(&self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&self.profile.pb)
            .map(|(z, p)| (z.split_modulus() - p.to_f64()).abs())
            .fold(0.0, f64::max)
    }

    pub fn total(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.split_modulus()).sum()
    }
}

/// Split-complex amplitudes of a hyperbolic context. The two outcomes carry
/// independent `(sign, θ)` pairs. Contexts with every `|λ| = 1` are accepted
/// too and get `θ = 0`.
pub fn represent_hyperbolic<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    c: &Event,
) -> Result<HyperbolicState<S>> {
    a.require_dichotomous()?;
    b.require_dichotomous()?;
    let profile = interference_lambda(space, a, b, c)?;
    let on_boundary = profile.lambda.iter().all(|l| l.magnitude() == Some(Ordering::Equal));
    if profile.class != ContextClass::Hyperbolic && !on_boundary {
        return Err(Error::Classification {
            class: profile.class.to_string(),
            expected: ContextClass::Hyperbolic.to_string(),
            coefficients: profile.lambda_values(),
        });
    }
    let mut amplitudes = [SplitComplex::default(); 2];
    let mut theta = [0.0; 2];
    let mut sign = [0.0; 2];
    for x in 0..2 {
        let lambda = &profile.lambda[x];
        let (s, t) = match lambda.magnitude() {
            Some(Ordering::Equal) => (lambda.as_f64().signum(), 0.0),
            _ => hyperbolic_phase(lambda.as_f64())?,
        };
        // cosh and sinh straight from the exact λ², not from θ.
        let unit = SplitComplex::new(lambda.as_f64().abs(), lambda.excess_root()).scale(s);
        amplitudes[x] = SplitComplex::new(profile.term(x, 0).sqrt_f64(), 0.0)
            + unit.scale(profile.term(x, 1).sqrt_f64());
        theta[x] = t;
        sign[x] = s;
    }
    Ok(HyperbolicState { profile, amplitudes, theta, sign })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn phases() {
        let (s, t) = hyperbolic_phase(5.0 / 3.0).unwrap();
        assert_eq!(s, 1.0);
        assert!((t - 3f64.ln()).abs() < 1e-15);
        assert!((t - 1.098612).abs() < 1e-6);
        let (s, t) = hyperbolic_phase(-5.0 / 3.0).unwrap();
        assert_eq!(s, -1.0);
        assert!((t - 3f64.ln()).abs() < 1e-15);
        assert_eq!(hyperbolic_phase(1.0).unwrap(), (1.0, 0.0));
        assert_eq!(hyperbolic_phase(0.5), Err(Error::HyperbolicDomain(0.5)));
        assert!(hyperbolic_phase(f64::NAN).is_err());
    }

    #[test]
    fn modulus() {
        assert_eq!(split_modulus(SplitComplex::ONE), 1.0);
        assert_eq!(split_modulus(SplitComplex::new(1.0, 1.0)), 0.0);
        assert_eq!(SplitComplex::J * SplitComplex::J, SplitComplex::ONE);
        for t in [-2.0, 0.3, 1.7] {
            assert!((hyperbolic_unit(1.0, t).split_modulus() - 1.0).abs() < 1e-12);
        }
        let z = SplitComplex::new(0.3, -2.0);
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn h6_hyperbolic_context() {
        let h = fixtures::h6();
        let state = represent_hyperbolic(&h.space, &h.a, &h.b, &h.context("C_hyp")).unwrap();
        assert_eq!(state.sign, [1.0, -1.0]);
        for t in state.theta {
            assert!((t - 3f64.ln()).abs() < 1e-12);
        }
        let z1 = state.amplitudes[0];
        let (ra, rb) = ((1.0f64 / 20.0).sqrt(), (9.0f64 / 20.0).sqrt());
        assert!((z1.re - (ra + 5.0 / 3.0 * rb)).abs() < 1e-15);
        assert!((z1.hy - 4.0 / 3.0 * rb).abs() < 1e-15);
        assert!((z1.split_modulus() - 1.0).abs() < 1e-12);
        assert!(state.amplitudes[1].split_modulus().abs() < 1e-12);
        assert!(state.born_residual() < 1e-12);
        assert!((state.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_context_has_zero_phase() {
        let u = fixtures::u4();
        let state = represent_hyperbolic(&u.space, &u.a, &u.b, &u.event(&["w1", "w3"])).unwrap();
        assert_eq!(state.theta, [0.0, 0.0]);
        assert_eq!(state.sign, [1.0, -1.0]);
        // (√A ± √B)² with A = B = 1/4
        assert!((state.amplitudes[0].split_modulus() - 1.0).abs() < 1e-15);
        assert!(state.amplitudes[1].split_modulus().abs() < 1e-15);
    }

    #[test]
    fn trigonometric_context_is_refused() {
        let u = fixtures::u4();
        let err = represent_hyperbolic(&u.space, &u.a, &u.b, &u.context("C1")).unwrap_err();
        assert!(matches!(err, Error::Classification { ref class, .. } if class == "trigonometric"), "{err:?}");
    }
}
