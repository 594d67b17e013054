//! Transition matrices, interference coefficients and context classification.
//!
//! For a context `C` and an outcome `x` of `b` the classical formula of total
//! probability `p_C^b(x) = Σ_y p_C^a(y) p(x|y)` picks up a perturbation
//! `δ(x)`, because conditioning on `C` is not the same as conditioning on the
//! level sets of `a`. Normalising `δ` by twice the geometric mean of the two
//! terms of the sum gives the interference coefficient `λ(x)`. Whether every
//! `|λ(x)|` stays within 1 decides if the context has a trigonometric
//! (complex amplitude) or hyperbolic (split-complex amplitude) representation.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kolmogorov::{Event, FiniteSpace, RandomVariable};
use crate::scalar::{is_one, sum, Scalar, BOUNDARY_TOL};

/// `P^{to|from}`: entry `(i, j)` is `p(to_j | from_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix<S> {
    pub rows: Vec<Vec<S>>,
    pub row_labels: Vec<f64>,
    pub col_labels: Vec<f64>,
}

impl<S: Scalar> TransitionMatrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let row_labels = (1..=rows.len()).map(|i| i as f64).collect();
        let col_labels = (1..=rows.first().map_or(0, Vec::len)).map(|j| j as f64).collect();
        Self { rows, row_labels, col_labels }
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.rows[i][j]
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn column_sums(&self) -> Vec<S> {
        (0..self.n_cols()).map(|j| sum(self.rows.iter().map(|r| &r[j]))).collect()
    }

    pub fn is_stochastic(&self) -> bool {
        self.rows.iter().all(|r| is_one(&sum(r)) && r.iter().all(|p| !p.is_negative()))
    }

    /// Rows and columns all sum to 1. Errors on a non-square matrix.
    pub fn is_double_stochastic(&self) -> Result<bool> {
        if self.n_rows() != self.n_cols() {
            return Err(Error::NotSquare { rows: self.n_rows(), cols: self.n_cols() });
        }
        Ok(self.is_stochastic() && self.column_sums().iter().all(is_one))
    }

    pub(crate) fn require_double_stochastic(&self) -> Result<()> {
        if self.is_double_stochastic()? {
            Ok(())
        } else {
            Err(Error::NotDoubleStochastic {
                column_sums: self.column_sums().iter().map(ToString::to_string).collect(),
            })
        }
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect()
    }
}

/// Distribution of `v`: `P(v = y)` for each spectrum value `y`.
pub fn marginal<S: Scalar>(space: &FiniteSpace<S>, v: &RandomVariable) -> Result<Vec<S>> {
    space.level_partition(v)?.cells.iter().map(|c| space.measure(c)).collect()
}

pub fn transition_matrix<S: Scalar>(
    space: &FiniteSpace<S>,
    from: &RandomVariable,
    to: &RandomVariable,
) -> Result<TransitionMatrix<S>> {
    let from_cells = space.level_partition(from)?;
    let to_cells = space.level_partition(to)?;
    let rows = from_cells
        .cells
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if !space.measure(a)?.is_positive_tol() {
                return Err(Error::DegenerateVariable { variable: from.name().to_string(), cell: i });
            }
            to_cells.cells.iter().map(|b| space.cond_prob(b, a)).collect()
        })
        .collect::<Result<_>>()?;
    Ok(TransitionMatrix {
        rows,
        row_labels: from.spectrum().to_vec(),
        col_labels: to.spectrum().to_vec(),
    })
}

/// Every joint level set `{a = y, b = x}` has positive probability.
pub fn is_incompatible<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
) -> Result<bool> {
    let pa = space.level_partition(a)?;
    let pb = space.level_partition(b)?;
    for ca in &pa.cells {
        for cb in &pb.cells {
            if !space.measure(&ca.intersection(cb))?.is_positive_tol() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A coefficient of the form `numerator / (2 √radicand)`.
///
/// The square `numerator² / (4 radicand)` is kept in the probability scalar, so
/// in exact mode comparisons against 1 are exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient<S> {
    Finite {
        numerator: S,
        radicand: S,
        square: S,
        value: f64,
        /// `|value|` compared with 1.
        magnitude: Ordering,
    },
    /// `0 / 0`: no interference term and no evidence; treated as 0.
    Indeterminate,
    /// Nonzero numerator over a vanishing radicand.
    Infinite { positive: bool },
    /// The context is degenerate and the coefficient is not defined.
    Undefined,
}

impl<S: Scalar> Coefficient<S> {
    pub fn new(numerator: S, radicand: S) -> Self {
        if radicand.is_zero() || (!S::EXACT && !radicand.is_positive_tol()) {
            return if numerator.approx_eq(&S::zero(), crate::scalar::FLOAT_TOL) {
                Coefficient::Indeterminate
            } else {
                Coefficient::Infinite { positive: numerator.is_positive() }
            };
        }
        let four = S::from_ratio(4, 1);
        let square = numerator.clone() * numerator.clone() / (four * radicand.clone());
        let one = S::one();
        let magnitude = if square.approx_eq(&one, 2.0 * BOUNDARY_TOL) {
            Ordering::Equal
        } else if square < one {
            Ordering::Less
        } else {
            Ordering::Greater
        };
        let root = square.sqrt_f64();
        let value = if numerator.is_negative() { -root } else { root };
        Coefficient::Finite { numerator, radicand, square, value, magnitude }
    }

    /// Numeric value; `Indeterminate` reads as 0, infinite and undefined as `None`.
    pub fn value(&self) -> Option<f64> {
        match self {
            Coefficient::Finite { value, .. } => Some(*value),
            Coefficient::Indeterminate => Some(0.0),
            _ => None,
        }
    }

    /// Like [`value`](Self::value) but with infinities spelled out.
    pub fn as_f64(&self) -> f64 {
        match self {
            Coefficient::Finite { value, .. } => *value,
            Coefficient::Indeterminate => 0.0,
            Coefficient::Infinite { positive: true } => f64::INFINITY,
            Coefficient::Infinite { positive: false } => f64::NEG_INFINITY,
            Coefficient::Undefined => f64::NAN,
        }
    }

    pub fn magnitude(&self) -> Option<Ordering> {
        match self {
            Coefficient::Finite { magnitude, .. } => Some(*magnitude),
            Coefficient::Indeterminate => Some(Ordering::Less),
            _ => None,
        }
    }

    /// The exact square, where defined.
    pub fn square(&self) -> Option<&S> {
        match self {
            Coefficient::Finite { square, .. } => Some(square),
            _ => None,
        }
    }

    /// `√(1 - c²)`, the sine of a phase whose cosine is this coefficient.
    pub(crate) fn complement_root(&self) -> f64 {
        match self {
            Coefficient::Finite { square, magnitude, .. } => match magnitude {
                Ordering::Equal => 0.0,
                _ => (S::one() - square.clone()).abs().sqrt_f64(),
            },
            _ => 1.0,
        }
    }

    /// `√(c² - 1)`, the hyperbolic sine of a phase whose cosh is `|c|`.
    pub(crate) fn excess_root(&self) -> f64 {
        match self {
            Coefficient::Finite { square, magnitude: Ordering::Greater, .. } => {
                (square.clone() - S::one()).sqrt_f64()
            }
            _ => 0.0,
        }
    }
}

impl<S: Scalar> fmt::Display for Coefficient<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Finite { value, .. } => write!(f, "{value:.12}"),
            Coefficient::Indeterminate => write!(f, "0 (0/0)"),
            Coefficient::Infinite { positive } => write!(f, "{}inf", if *positive { "+" } else { "-" }),
            Coefficient::Undefined => write!(f, "undefined"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ContextClass {
    Trigonometric,
    Hyperbolic,
    Mixed,
    Degenerate,
}

impl fmt::Display for ContextClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContextClass::Trigonometric => "trigonometric",
            ContextClass::Hyperbolic => "hyperbolic",
            ContextClass::Mixed => "mixed",
            ContextClass::Degenerate => "degenerate",
        })
    }
}

/// Why a context was classified degenerate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegenerateReason {
    /// The context itself has zero probability.
    NullContext,
    /// `P(A_j ∩ C) = 0` for the listed cells of `a`.
    NullCells(Vec<usize>),
    /// Every coefficient is infinite.
    InfiniteCoefficients,
    /// Some coefficients are infinite while others are finite.
    PartiallyUndefined,
}

impl fmt::Display for DegenerateReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegenerateReason::NullContext => write!(f, "null context"),
            DegenerateReason::NullCells(c) => write!(f, "null cells {c:?}"),
            DegenerateReason::InfiniteCoefficients => write!(f, "infinite coefficients"),
            DegenerateReason::PartiallyUndefined => write!(f, "partially undefined coefficients"),
        }
    }
}

/// Conditional distributions, perturbations and interference coefficients of one context.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextProfile<S> {
    pub context: Event,
    /// `p_C^a(y)`, one entry per value of `a`.
    pub pa: Vec<S>,
    /// `p_C^b(x)`, one entry per value of `b`.
    pub pb: Vec<S>,
    /// `δ(B_x | 𝒜, C)`.
    pub delta: Vec<S>,
    /// `λ(B_x | 𝒜, C)`.
    pub lambda: Vec<Coefficient<S>>,
    pub transition: TransitionMatrix<S>,
    pub class: ContextClass,
    /// Some `|λ|` equals 1, so the context is on both sides of the classification.
    pub boundary: bool,
    pub degenerate: Option<DegenerateReason>,
}

impl<S: Scalar> ContextProfile<S> {
    /// `Σ_y p_C^a(y) p(x|y)`: what the classical formula predicts for outcome `x`.
    pub fn classical_prediction(&self, x: usize) -> S {
        self.pa
            .iter()
            .enumerate()
            .fold(S::zero(), |acc, (y, p)| acc + p.clone() * self.transition.entry(y, x).clone())
    }

    /// `p_C^a(y) p(x|y)`, the squared modulus of the `y` term of the amplitude at `x`.
    pub fn term(&self, x: usize, y: usize) -> S {
        self.pa[y].clone() * self.transition.entry(y, x).clone()
    }

    pub fn lambda_values(&self) -> Vec<f64> {
        self.lambda.iter().map(Coefficient::as_f64).collect()
    }

    pub fn is_trigonometric(&self) -> bool {
        self.class == ContextClass::Trigonometric
    }
}

/// Profile of `C` with respect to the dichotomous `a` and any `b`.
///
/// A context that misses a level set of `a` yields a degenerate profile rather
/// than an error; a null context is an error.
pub fn interference_lambda<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    c: &Event,
) -> Result<ContextProfile<S>> {
    a.require_dichotomous()?;
    let transition = transition_matrix(space, a, b)?;
    let a_cells = space.level_partition(a)?;
    let b_cells = space.level_partition(b)?;
    let pa = a_cells.cells.iter().map(|cell| space.cond_prob(cell, c)).collect::<Result<Vec<_>>>()?;
    let pb = b_cells.cells.iter().map(|cell| space.cond_prob(cell, c)).collect::<Result<Vec<_>>>()?;

    let mut profile = ContextProfile {
        context: c.clone(),
        pa,
        pb,
        delta: Vec::new(),
        lambda: Vec::new(),
        transition,
        class: ContextClass::Degenerate,
        boundary: false,
        degenerate: None,
    };
    profile.delta = (0..b_cells.len())
        .map(|x| profile.pb[x].clone() - profile.classical_prediction(x))
        .collect();

    let null_cells: Vec<usize> = (0..a_cells.len())
        .filter(|&j| !profile.pa[j].is_positive_tol())
        .collect();
    if !null_cells.is_empty() {
        profile.lambda = vec![Coefficient::Undefined; b_cells.len()];
        profile.degenerate = Some(DegenerateReason::NullCells(null_cells));
        return Ok(profile);
    }

    profile.lambda = (0..b_cells.len())
        .map(|x| Coefficient::new(profile.delta[x].clone(), profile.term(x, 0) * profile.term(x, 1)))
        .collect();
    let (class, boundary, reason) = classify_coefficients(&profile.lambda);
    profile.class = class;
    profile.boundary = boundary;
    profile.degenerate = reason;
    Ok(profile)
}

/// Classification from a list of coefficients of one nondegenerate context.
pub fn classify_coefficients<S: Scalar>(
    coefficients: &[Coefficient<S>],
) -> (ContextClass, bool, Option<DegenerateReason>) {
    let infinite = coefficients.iter().filter(|c| c.value().is_none()).count();
    if infinite == coefficients.len() {
        return (ContextClass::Degenerate, false, Some(DegenerateReason::InfiniteCoefficients));
    }
    if infinite > 0 {
        return (ContextClass::Degenerate, false, Some(DegenerateReason::PartiallyUndefined));
    }
    let magnitudes: Vec<Ordering> = coefficients.iter().filter_map(Coefficient::magnitude).collect();
    let below = magnitudes.contains(&Ordering::Less);
    let above = magnitudes.contains(&Ordering::Greater);
    let boundary = magnitudes.contains(&Ordering::Equal);
    let class = match (below, above) {
        (true, true) => ContextClass::Mixed,
        (_, false) => ContextClass::Trigonometric,
        (false, true) => ContextClass::Hyperbolic,
    };
    (class, boundary, None)
}

/// Class of `C`; never fails on degenerate or null contexts.
pub fn classify<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    c: &Event,
) -> Result<ContextClass> {
    match interference_lambda(space, a, b, c) {
        Ok(p) => Ok(p.class),
        Err(Error::DegenerateContext) => Ok(ContextClass::Degenerate),
        Err(e) => Err(e),
    }
}

/// `μ(B | {D1, D2}, C)`: the coefficient of the splitting formula
/// `P(B(D1∪D2)|C) = P(B|D1)P(D1|C) + P(B D2|C) + 2μ √(P(B|D1)P(D1|C)P(B D2|C))`.
pub fn interference_mu<S: Scalar>(
    space: &FiniteSpace<S>,
    b: &Event,
    d1: &Event,
    d2: &Event,
    c: &Event,
) -> Result<Coefficient<S>> {
    if !d1.is_disjoint(d2) {
        return Err(Error::NotDisjoint);
    }
    if !space.measure(c)?.is_positive_tol() {
        return Err(Error::DegenerateContext);
    }
    let positive = |e: Event, quantity: &str| -> Result<()> {
        if space.measure(&e)?.is_positive_tol() {
            Ok(())
        } else {
            Err(Error::Positivity { quantity: quantity.to_string() })
        }
    };
    positive(b.intersection(d1), "P(B D1)")?;
    positive(c.intersection(d1), "P(C D1)")?;
    positive(b.intersection(d2).intersection(c), "P(B D2 C)")?;

    let head = space.cond_prob(b, d1)? * space.cond_prob(d1, c)?;
    let tail = space.cond_prob(&b.intersection(d2), c)?;
    let whole = space.cond_prob(&b.intersection(&d1.union(d2)), c)?;
    let numerator = whole - head.clone() - tail.clone();
    Ok(Coefficient::new(numerator, head * tail))
}

/// Interference coefficient of `B` relative to two disjoint events, together
/// with the perturbation computed two ways: as the defect of the total
/// probability sum and as `Σ_j P(D_j|C)(P(B|D_j C) - P(B|D_j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitInterference<S> {
    pub delta: S,
    pub delta_by_cells: S,
    pub lambda: Coefficient<S>,
}

pub fn split_interference<S: Scalar>(
    space: &FiniteSpace<S>,
    b: &Event,
    d1: &Event,
    d2: &Event,
    c: &Event,
) -> Result<SplitInterference<S>> {
    if !d1.is_disjoint(d2) {
        return Err(Error::NotDisjoint);
    }
    let mut radicand = S::one();
    let mut classical = S::zero();
    let mut delta_by_cells = S::zero();
    for (label, d) in [("1", d1), ("2", d2)] {
        if !space.measure(&d.intersection(c))?.is_positive_tol() {
            return Err(Error::Positivity { quantity: format!("P(D{label} C)") });
        }
        if !space.measure(&b.intersection(d))?.is_positive_tol() {
            return Err(Error::Positivity { quantity: format!("P(B D{label})") });
        }
        let given_d = space.cond_prob(b, d)?;
        let d_given_c = space.cond_prob(d, c)?;
        let term = given_d.clone() * d_given_c.clone();
        radicand = radicand * term.clone();
        classical = classical + term;
        delta_by_cells =
            delta_by_cells + d_given_c * (space.cond_prob(b, &d.intersection(c))? - given_d);
    }
    let delta = space.cond_prob(&b.intersection(&d1.union(d2)), c)? - classical;
    Ok(SplitInterference { lambda: Coefficient::new(delta.clone(), radicand), delta, delta_by_cells })
}

/// The three conditions that are equivalent for a dichotomous pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    /// Both `P^{b|a}` and `P^{a|b}` are double stochastic.
    pub double_stochastic: bool,
    /// `p(b_i | a_j) = p(a_j | b_i)` for all `i, j`.
    pub symmetric: bool,
    /// `P(a = a_i) = P(b = b_i) = 1/2`.
    pub uniform_marginals: bool,
}

impl SymmetryReport {
    /// All true or all false.
    pub fn equivalent(&self) -> bool {
        self.double_stochastic == self.symmetric && self.symmetric == self.uniform_marginals
    }
}

pub fn check_symmetry_lemma<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
) -> Result<SymmetryReport> {
    a.require_dichotomous()?;
    b.require_dichotomous()?;
    let b_given_a = transition_matrix(space, a, b)?;
    let a_given_b = transition_matrix(space, b, a)?;
    let double_stochastic = b_given_a.is_double_stochastic()? && a_given_b.is_double_stochastic()?;
    let symmetric = (0..2).all(|i| {
        (0..2).all(|j| b_given_a.entry(j, i).approx_eq(a_given_b.entry(i, j), crate::scalar::FLOAT_TOL))
    });
    let half = S::from_ratio(1, 2);
    let uniform_marginals = marginal(space, a)?
        .iter()
        .chain(marginal(space, b)?.iter())
        .all(|p| p.approx_eq(&half, crate::scalar::FLOAT_TOL));
    Ok(SymmetryReport { double_stochastic, symmetric, uniform_marginals })
}

/// `λ(B_i | 𝒜, B_i)` for the selection context `B_i = {b = b_i}` (0-based `i`).
///
/// Requires both transition matrices to be double stochastic; the value is then 1.
pub fn selection_context_lambda<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    i: usize,
) -> Result<f64> {
    a.require_dichotomous()?;
    b.require_dichotomous()?;
    transition_matrix(space, a, b)?.require_double_stochastic()?;
    transition_matrix(space, b, a)?.require_double_stochastic()?;
    let cells = space.level_partition(b)?;
    let selection = cells.cells.get(i).ok_or(Error::DimensionMismatch(i, cells.len()))?;
    let profile = interference_lambda(space, a, b, selection)?;
    if let Some(DegenerateReason::NullCells(cells)) = profile.degenerate {
        return Err(Error::DegenerateCells { cells });
    }
    profile.lambda[i].value().ok_or(Error::Positivity { quantity: "interference denominator".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::ratio;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn rows(r: &[&[(i64, i64)]]) -> TransitionMatrix<BigRational> {
        TransitionMatrix::from_rows(
            r.iter().map(|row| row.iter().map(|&(n, d)| ratio(n, d)).collect()).collect(),
        )
    }

    #[test]
    fn transition_matrices_of_fixtures() {
        let u = fixtures::u4();
        let m = transition_matrix(&u.space, &u.a, &u.b).unwrap();
        assert_eq!(m, TransitionMatrix { row_labels: vec![-1.0, 1.0], col_labels: vec![-1.0, 1.0], ..rows(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]) });
        let h = fixtures::h6();
        let m = transition_matrix(&h.space, &h.a, &h.b).unwrap();
        assert_eq!(m.rows, rows(&[&[(1, 10), (9, 10)], &[(9, 10), (1, 10)]]).rows);
        let id = transition_matrix(&h.space, &h.a, &h.a).unwrap();
        assert_eq!(id.rows, rows(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]).rows);
    }

    #[test]
    fn zero_mass_level_set_is_reported() {
        let space = FiniteSpace::new([("x", ratio(1, 2)), ("y", ratio(1, 2)), ("z", ratio(0, 1))]).unwrap();
        let a = RandomVariable::new("a", vec![0.0, 0.0, 1.0]).unwrap();
        let b = RandomVariable::new("b", vec![0.0, 1.0, 1.0]).unwrap();
        assert_eq!(
            transition_matrix(&space, &a, &b),
            Err(Error::DegenerateVariable { variable: "a".into(), cell: 1 })
        );
    }

    #[test]
    fn incompatibility() {
        let u = fixtures::u4();
        assert!(is_incompatible(&u.space, &u.a, &u.b).unwrap());
        assert!(!is_incompatible(&u.space, &u.a, &u.a).unwrap());
        let h = fixtures::h6();
        assert!(is_incompatible(&h.space, &h.a, &h.b).unwrap());
    }

    #[test]
    fn lambda_on_whole_space_of_u4() {
        let u = fixtures::u4();
        let p = interference_lambda(&u.space, &u.a, &u.b, &u.space.whole()).unwrap();
        assert!(p.delta[0].is_zero());
        assert_eq!(p.lambda[0].value(), Some(0.0));
        assert_eq!(p.class, ContextClass::Trigonometric);
    }

    #[test]
    fn lambda_on_u4_context() {
        let u = fixtures::u4();
        let p = interference_lambda(&u.space, &u.a, &u.b, &u.context("C1")).unwrap();
        assert_eq!(p.delta[0], ratio(1, 6));
        assert_eq!(p.lambda[0].square(), Some(&ratio(1, 8)));
        let l = p.lambda_values();
        assert!((l[0] - 2f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((l[1] + 2f64.sqrt() / 4.0).abs() < 1e-15);
        assert_eq!(p.class, ContextClass::Trigonometric);
        assert!(!p.boundary);
    }

    #[test]
    fn lambda_on_h6_hyperbolic_context() {
        let h = fixtures::h6();
        let p = interference_lambda(&h.space, &h.a, &h.b, &h.context("C_hyp")).unwrap();
        assert_eq!(p.delta, vec![ratio(1, 2), ratio(-1, 2)]);
        assert_eq!(p.lambda[0].square(), Some(&ratio(25, 9)));
        assert_eq!(p.lambda_values(), vec![5.0 / 3.0, -5.0 / 3.0]);
        assert_eq!(p.class, ContextClass::Hyperbolic);
    }

    #[test]
    fn classification_examples() {
        let u = fixtures::u4();
        let class = |ids: &[&str]| classify(&u.space, &u.a, &u.b, &u.event(ids)).unwrap();
        assert_eq!(class(&["w1", "w3", "w4"]), ContextClass::Trigonometric);
        assert_eq!(class(&["w1"]), ContextClass::Degenerate);
        assert_eq!(classify(&u.space, &u.a, &u.b, &u.space.empty_event()).unwrap(), ContextClass::Degenerate);
        let h = fixtures::h6();
        assert_eq!(classify(&h.space, &h.a, &h.b, &h.context("C_hyp")).unwrap(), ContextClass::Hyperbolic);

        let p = interference_lambda(&u.space, &u.a, &u.b, &u.event(&["w1"])).unwrap();
        assert_eq!(p.degenerate, Some(DegenerateReason::NullCells(vec![1])));
        assert!(p.lambda.iter().all(|l| *l == Coefficient::Undefined));
    }

    #[test]
    fn boundary_is_trigonometric() {
        let u = fixtures::u4();
        let p = interference_lambda(&u.space, &u.a, &u.b, &u.event(&["w1", "w3"])).unwrap();
        assert_eq!(p.lambda_values(), vec![1.0, -1.0]);
        assert_eq!(p.class, ContextClass::Trigonometric);
        assert!(p.boundary);
    }

    #[test]
    fn mixed_coefficients() {
        let l = [
            Coefficient::<BigRational>::new(ratio(1, 10), ratio(1, 1)),
            Coefficient::new(ratio(3, 1), ratio(1, 1)),
        ];
        assert_eq!(classify_coefficients(&l).0, ContextClass::Mixed);
        let l = [Coefficient::<BigRational>::new(ratio(1, 10), ratio(1, 1)), Coefficient::Infinite { positive: true }];
        assert_eq!(classify_coefficients(&l).2, Some(DegenerateReason::PartiallyUndefined));
        let l = [Coefficient::<BigRational>::new(ratio(1, 1), ratio(0, 1))];
        assert_eq!(classify_coefficients(&l).2, Some(DegenerateReason::InfiniteCoefficients));
        assert_eq!(Coefficient::<BigRational>::new(ratio(0, 1), ratio(0, 1)), Coefficient::Indeterminate);
    }

    #[test]
    fn double_stochasticity() {
        assert!(rows(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]).is_double_stochastic().unwrap());
        assert!(rows(&[&[(1, 10), (9, 10)], &[(9, 10), (1, 10)]]).is_double_stochastic().unwrap());
        assert!(!rows(&[&[(1, 3), (2, 3)], &[(1, 2), (1, 2)]]).is_double_stochastic().unwrap());
        let wide = rows(&[&[(1, 3), (1, 3), (1, 3)], &[(1, 3), (1, 3), (1, 3)]]);
        assert_eq!(wide.is_double_stochastic(), Err(Error::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn symmetry_lemma_on_fixtures() {
        let u = fixtures::u4();
        let r = check_symmetry_lemma(&u.space, &u.a, &u.b).unwrap();
        assert!(r.double_stochastic && r.symmetric && r.uniform_marginals);
        let h = fixtures::h6();
        let r = check_symmetry_lemma(&h.space, &h.a, &h.b).unwrap();
        assert!(r.double_stochastic && r.symmetric && r.uniform_marginals);

        // P(a_1) = 1/3
        let space = FiniteSpace::new([
            ("x", ratio(1, 6)),
            ("y", ratio(1, 6)),
            ("z", ratio(1, 3)),
            ("t", ratio(1, 3)),
        ])
        .unwrap();
        let a = RandomVariable::new("a", vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let b = RandomVariable::new("b", vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        let r = check_symmetry_lemma(&space, &a, &b).unwrap();
        assert!(!r.double_stochastic && !r.symmetric && !r.uniform_marginals);
        assert!(r.equivalent());
    }

    #[test]
    fn selection_contexts_have_unit_lambda() {
        for f in [fixtures::u4(), fixtures::h6()] {
            assert_eq!(selection_context_lambda(&f.space, &f.a, &f.b, 0).unwrap(), 1.0);
            assert_eq!(selection_context_lambda(&f.space, &f.a, &f.b, 1).unwrap(), 1.0);
        }
    }

    #[test]
    fn selection_context_requires_double_stochasticity() {
        let space = FiniteSpace::new([
            ("x", ratio(1, 6)),
            ("y", ratio(1, 6)),
            ("z", ratio(1, 3)),
            ("t", ratio(1, 3)),
        ])
        .unwrap();
        let a = RandomVariable::new("a", vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let b = RandomVariable::new("b", vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        // P^{b|a} is double stochastic here, P^{a|b} is not.
        assert!(matches!(
            selection_context_lambda(&space, &a, &b, 0),
            Err(Error::NotDoubleStochastic { .. })
        ));
    }

    #[test]
    fn mu_on_u9_whole_space_vanishes() {
        let f = fixtures::u9();
        let pa = f.space.level_partition(&f.a).unwrap();
        let pb = f.space.level_partition(&f.b).unwrap();
        let mu = interference_mu(&f.space, pb.cell(0), pa.cell(0), &pa.tail(1), &f.space.whole()).unwrap();
        assert_eq!(mu.value(), Some(0.0));
    }

    #[test]
    fn mu_guards() {
        let f = fixtures::u9();
        let pa = f.space.level_partition(&f.a).unwrap();
        let pb = f.space.level_partition(&f.b).unwrap();
        assert_eq!(
            interference_mu(&f.space, pb.cell(0), pa.cell(0), pa.cell(0), &f.space.whole()),
            Err(Error::NotDisjoint)
        );
        // B ∩ D2 ∩ C is null when C avoids D2.
        assert_eq!(
            interference_mu(&f.space, pb.cell(0), pa.cell(0), &pa.tail(1), pa.cell(0)),
            Err(Error::Positivity { quantity: "P(B D2 C)".into() })
        );
    }

    #[test]
    fn split_interference_matches_partition_lambda() {
        let u = fixtures::u4();
        let pa = u.space.level_partition(&u.a).unwrap();
        let pb = u.space.level_partition(&u.b).unwrap();
        let c = u.context("C1");
        let s = split_interference(&u.space, pb.cell(0), pa.cell(0), pa.cell(1), &c).unwrap();
        let p = interference_lambda(&u.space, &u.a, &u.b, &c).unwrap();
        assert_eq!(s.delta, p.delta[0]);
        assert_eq!(s.delta, s.delta_by_cells);
        assert_eq!(s.lambda, p.lambda[0]);
    }
}
