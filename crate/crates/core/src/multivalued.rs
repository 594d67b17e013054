//! Amplitudes for reference variables with more than two values.
//!
//! The level sets `A_1, …, A_n` of `a` (ascending values) are split off one at
//! a time. For an outcome `x` write `s_j² = P(B_x|A_j) P(A_j|C)` and
//! `T_j = P(B_x(A_j ∪ … ∪ A_n)|C)`, so `T_1 = p_C^b(x)`. Each step
//!
//! ```text
//! T_j = s_j² + T_{j+1} + 2 μ_j s_j √T_{j+1},   μ_j = cos γ_j
//! ```
//!
//! writes `T_j` as `|φ^{(j)}|²` with `φ^{(j)} = s_j + e^{iγ_j} √T_{j+1}`.
//! The last step uses the interference coefficient of `{A_{n-1}, A_n}` and
//! its phase `θ`. Chaining the steps through `α_j = arg φ^{(j)}` gives
//!
//! ```text
//! φ_C(x) = Σ_j e^{iβ_j} s_j,   β_1 = 0,
//! β_{j+1} = β_j + γ_j - α_{j+1},   β_n = β_{n-1} + θ.
//! ```
//!
//! Phase factors are carried as unit complex numbers built from the exact
//! cosines, and the angles are derived from them for reporting.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{interference_mu, is_incompatible, split_interference, transition_matrix, Coefficient, TransitionMatrix};
use crate::error::{Error, Result};
use crate::hilbert::Branch;
use crate::kolmogorov::{Event, FiniteSpace, Partition, RandomVariable};
use crate::scalar::{Scalar, BOUNDARY_TOL};

/// Bound on `| |φ_C(x)|² - p_C^b(x) |` for the multivalued construction.
pub const MULTI_BORN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// Splitting `A_j` from the union of the later cells.
    Mu,
    /// The closing step on `{A_{n-1}, A_n}`.
    Lambda,
}

/// One row of the step table.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitStep<S> {
    /// 1-based.
    pub j: usize,
    pub kind: StepKind,
    /// `T_j`.
    pub tail: S,
    /// `s_j² = P(B_x|A_j) P(A_j|C)`.
    pub head: S,
    /// `T_{j+1}` for μ steps, `s_n²` for the closing step.
    pub rest: S,
    /// `μ_j`, or `λ` for the closing step.
    pub coefficient: Coefficient<S>,
    /// `γ_j`, or `θ` for the closing step.
    pub gamma: f64,
    /// `α_j = arg φ^{(j)}`.
    pub alpha: f64,
    /// `β_j`.
    pub beta: f64,
}

impl<S: Scalar> SplitStep<S> {
    /// `|T_j - (s_j² + rest + 2 c s_j √rest)|` with the step's coefficient `c`.
    pub fn reconstruction_residual(&self) -> f64 {
        let c = self.coefficient.as_f64();
        let rebuilt = self.head.to_f64() + self.rest.to_f64() + 2.0 * c * self.head.sqrt_f64() * self.rest.sqrt_f64();
        (self.tail.to_f64() - rebuilt).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitTrace<S> {
    /// Index of the outcome in the spectrum of `b`.
    pub x: usize,
    /// The value `b_x`.
    pub outcome: f64,
    /// Values of `a` in splitting order.
    pub order: Vec<f64>,
    /// Steps `j = 1, …, n-1`.
    pub steps: Vec<SplitStep<S>>,
    pub final_theta: f64,
    /// `β_1, …, β_n`.
    pub betas: Vec<f64>,
    /// `e^{iβ_j}`.
    pub phase_factors: Vec<Complex64>,
    /// `s_j`.
    pub roots: Vec<f64>,
}

impl<S: Scalar> SplitTrace<S> {
    pub fn amplitude(&self) -> Complex64 {
        self.phase_factors.iter().zip(&self.roots).map(|(f, s)| f * s).sum()
    }

    pub fn probability(&self) -> &S {
        &self.steps[0].tail
    }
}

/// `p_C^a`, `p_C^b` and `P^{b|a}` for variables with any number of values.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiProfile<S> {
    pub context: Event,
    pub pa: Vec<S>,
    pub pb: Vec<S>,
    pub transition: TransitionMatrix<S>,
}

impl<S: Scalar> MultiProfile<S> {
    pub fn term(&self, x: usize, y: usize) -> S {
        self.pa[y].clone() * self.transition.entry(y, x).clone()
    }
}

pub fn multi_profile<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    c: &Event,
) -> Result<MultiProfile<S>> {
    let transition = transition_matrix(space, a, b)?;
    let cond = |v: &RandomVariable| -> Result<Vec<S>> {
        space.level_partition(v)?.cells.iter().map(|cell| space.cond_prob(cell, c)).collect()
    };
    Ok(MultiProfile { context: c.clone(), pa: cond(a)?, pb: cond(b)?, transition })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiAmplitude<S> {
    /// `φ_C(x)` per value of `b`.
    pub amplitudes: Vec<Complex64>,
    /// `betas[x][y] = β_C^{(y)}(x)`.
    pub betas: Vec<Vec<f64>>,
    pub traces: Vec<SplitTrace<S>>,
    pub profile: MultiProfile<S>,
    pub gamma_branch: Branch,
}

impl<S: Scalar> MultiAmplitude<S> {
    /// `max_x | |φ_C(x)|² - p_C^b(x) |`.
    pub fn born_residual(&self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&self.profile.pb)
            .map(|(z, p)| (z.norm_sqr() - p.to_f64()).abs())
            .fold(0.0, f64::max)
    }

    /// `max_x |φ_C(x) - Σ_y e^{iβ(x,y)} √(p_C^a(y) p(x|y))|`.
    pub fn recomputation_residual(&self) -> f64 {
        (0..self.amplitudes.len())
            .map(|x| {
                let sum: Complex64 = self.betas[x]
                    .iter()
                    .enumerate()
                    .map(|(y, &beta)| Complex64::from_polar(self.profile.term(x, y).sqrt_f64(), beta))
                    .sum();
                (sum - self.amplitudes[x]).norm()
            })
            .fold(0.0, f64::max)
    }
}

fn check_context<S: Scalar>(space: &FiniteSpace<S>, a: &RandomVariable, b: &RandomVariable, c: &Event) -> Result<Partition> {
    if !is_incompatible(space, a, b)? {
        return Err(Error::NotIncompatible { a: a.name().to_string(), b: b.name().to_string() });
    }
    if !space.measure(c)?.is_positive_tol() {
        return Err(Error::DegenerateContext);
    }
    let cells = space.level_partition(a)?;
    let null: Vec<usize> = (0..cells.len())
        .filter(|&j| !space.measure(&cells.cell(j).intersection(c)).map(|m| m.is_positive_tol()).unwrap_or(false))
        .collect();
    if !null.is_empty() {
        return Err(Error::DegenerateCells { cells: null });
    }
    Ok(cells)
}

/// The step table for outcome index `x`.
pub fn split_trace<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    c: &Event,
    x: usize,
    gamma_branch: Branch,
) -> Result<SplitTrace<S>> {
    let cells = check_context(space, a, b, c)?;
    trace_outcome(space, &cells, b, c, x, gamma_branch)
}

fn trace_outcome<S: Scalar>(
    space: &FiniteSpace<S>,
    cells: &Partition,
    b: &RandomVariable,
    c: &Event,
    x: usize,
    branch: Branch,
) -> Result<SplitTrace<S>> {
    let n = cells.len();
    let b_cells = space.level_partition(b)?;
    let bx = b_cells.cells.get(x).ok_or(Error::DimensionMismatch(x, b_cells.len()))?;
    let sign = branch.sign();

    let head = |j: usize| -> Result<S> { Ok(space.cond_prob(bx, cells.cell(j))? * space.cond_prob(cells.cell(j), c)?) };
    let tail = |j: usize| space.cond_prob(&bx.intersection(&cells.tail(j)), c);

    // Steps first, with e^{iγ_j}; α_j is filled in once every φ^{(j)} is known.
    let mut steps = Vec::with_capacity(n - 1);
    let mut step_factors = Vec::with_capacity(n - 1);
    let mut roots: Vec<f64> = Vec::with_capacity(n);
    for j in 0..n - 2 {
        let t_next = tail(j + 1)?;
        if !t_next.is_positive_tol() {
            return Err(Error::ZeroTail { step: j + 1 });
        }
        let mu = interference_mu(space, bx, cells.cell(j), &cells.tail(j + 1), c)?;
        let value = mu.value().ok_or(Error::NonRepresentable { step: j + 1, value: mu.as_f64() })?;
        if mu.magnitude() == Some(std::cmp::Ordering::Greater) {
            return Err(Error::NonRepresentable { step: j + 1, value });
        }
        let cos = value.clamp(-1.0, 1.0);
        let factor = Complex64::new(cos, sign * mu.complement_root());
        let h = head(j)?;
        roots.push(h.sqrt_f64());
        steps.push(SplitStep {
            j: j + 1,
            kind: StepKind::Mu,
            tail: tail(j)?,
            head: h,
            rest: t_next,
            gamma: sign * cos.acos(),
            coefficient: mu,
            alpha: 0.0,
            beta: 0.0,
        });
        step_factors.push(factor);
    }

    let (d1, d2) = (cells.cell(n - 2), cells.cell(n - 1));
    let split = split_interference(space, bx, d1, d2, c)?;
    let lambda = split.lambda;
    let value = lambda.value().ok_or(Error::NonRepresentable { step: n - 1, value: lambda.as_f64() })?;
    if lambda.magnitude() == Some(std::cmp::Ordering::Greater) {
        return Err(Error::NonRepresentable { step: n - 1, value });
    }
    let cos = value.clamp(-1.0, 1.0);
    let theta_factor = Complex64::new(cos, sign * lambda.complement_root());
    let theta = sign * cos.acos();
    let (h_last, h_final) = (head(n - 2)?, head(n - 1)?);
    roots.push(h_last.sqrt_f64());
    roots.push(h_final.sqrt_f64());
    steps.push(SplitStep {
        j: n - 1,
        kind: StepKind::Lambda,
        tail: tail(n - 2)?,
        head: h_last,
        rest: h_final,
        coefficient: lambda,
        gamma: theta,
        alpha: 0.0,
        beta: 0.0,
    });
    step_factors.push(theta_factor);

    // e^{iα_j} = φ^{(j)} / N_j with Re φ^{(j)} = M_j.
    let mut alpha_factors = Vec::with_capacity(n - 1);
    for (k, step) in steps.iter_mut().enumerate() {
        let rest = if k + 1 == n - 1 { roots[n - 1] } else { step.rest.sqrt_f64() };
        let m = roots[k] + step.coefficient.as_f64().clamp(-1.0, 1.0) * rest;
        let big_n = step.tail.sqrt_f64();
        let im = step_factors[k].im * rest;
        let factor = if big_n > 0.0 {
            let ratio = m / big_n;
            if ratio.abs() > 1.0 + BOUNDARY_TOL {
                return Err(Error::PhaseDomain(ratio));
            }
            Complex64::new(ratio.clamp(-1.0, 1.0), im / big_n)
        } else {
            Complex64::new(1.0, 0.0)
        };
        step.alpha = sign * factor.re.acos();
        alpha_factors.push(factor);
    }

    let mut phase_factors = vec![Complex64::new(1.0, 0.0)];
    let mut betas = vec![0.0];
    for k in 0..n - 2 {
        let next = phase_factors[k] * step_factors[k] * alpha_factors[k + 1].conj();
        let beta = betas[k] + steps[k].gamma - steps[k + 1].alpha;
        phase_factors.push(next);
        betas.push(beta);
    }
    phase_factors.push(phase_factors[n - 2] * theta_factor);
    betas.push(betas[n - 2] + theta);
    for (k, step) in steps.iter_mut().enumerate() {
        step.beta = betas[k];
    }

    Ok(SplitTrace {
        x,
        outcome: b.spectrum()[x],
        order: Vec::new(),
        steps,
        final_theta: theta,
        betas,
        phase_factors,
        roots,
    })
}

/// Amplitudes for every outcome of `b`. Failures are collected per outcome.
pub fn represent_multivalued<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    c: &Event,
    gamma_branch: Branch,
) -> Result<MultiAmplitude<S>> {
    let cells = check_context(space, a, b, c)?;
    let profile = multi_profile(space, a, b, c)?;
    let results: Vec<Result<SplitTrace<S>>> = (0..b.spectrum().len())
        .into_par_iter()
        .map(|x| {
            trace_outcome(space, &cells, b, c, x, gamma_branch).map(|mut t| {
                t.order = a.spectrum().to_vec();
                t
            })
        })
        .collect();
    let mut traces = Vec::new();
    let mut failures = Vec::new();
    for (x, r) in results.into_iter().enumerate() {
        match r {
            Ok(t) => traces.push(t),
            Err(e) => failures.push((b.spectrum()[x], e)),
        }
    }
    if !failures.is_empty() {
        return Err(Error::Outcomes(failures));
    }
    Ok(MultiAmplitude {
        amplitudes: traces.iter().map(SplitTrace::amplitude).collect(),
        betas: traces.iter().map(|t| t.betas.clone()).collect(),
        traces,
        profile,
        gamma_branch,
    })
}

/// `max_x |Σ_y s_y² + 2 Σ_{y1<y2} cos(β_{y2} - β_{y1}) s_{y1} s_{y2} - p_C^b(x)|`
/// with `s_y² = p_C^a(y) p(x|y)`, using `m.betas`.
pub fn interference_expansion<S: Scalar>(m: &MultiAmplitude<S>, profile: &MultiProfile<S>) -> f64 {
    let mut worst = 0.0f64;
    for (x, betas) in m.betas.iter().enumerate() {
        let s: Vec<f64> = (0..betas.len()).map(|y| profile.term(x, y).sqrt_f64()).collect();
        let mut total: f64 = s.iter().map(|v| v * v).sum();
        for y1 in 0..s.len() {
            for y2 in y1 + 1..s.len() {
                total += 2.0 * (betas[y2] - betas[y1]).cos() * s[y1] * s[y2];
            }
        }
        worst = worst.max((total - profile.pb[x].to_f64()).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hilbert::{represent, PhaseConvention};
    use crate::scalar::ratio;
    use num_rational::BigRational;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn u9_whole_space() {
        let u = fixtures::u9();
        let whole = u.space.whole();
        let trace = split_trace(&u.space, &u.a, &u.b, &whole, 0, Branch::Plus).unwrap();
        assert_eq!(trace.steps.len(), 2);
        for step in &trace.steps {
            assert_eq!(step.coefficient.value(), Some(0.0));
            assert!((step.gamma - FRAC_PI_2).abs() < 1e-15);
            assert!(step.reconstruction_residual() < 1e-15);
        }
        assert_eq!(trace.probability(), &ratio(1, 3));
        let m = represent_multivalued(&u.space, &u.a, &u.b, &whole, Branch::Plus).unwrap();
        for z in &m.amplitudes {
            assert!((z.norm_sqr() - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!(m.born_residual() < 1e-12);
        assert!(m.recomputation_residual() < 1e-12);
        assert!(interference_expansion(&m, &m.profile) < 1e-12);
    }

    #[test]
    fn u9_cross_terms_cancel() {
        let u = fixtures::u9();
        let m = represent_multivalued(&u.space, &u.a, &u.b, &u.space.whole(), Branch::Plus).unwrap();
        // each s_y = 1/3 and the three unit phasors sum to modulus 1/√3
        for betas in &m.betas {
            let cross: f64 = (0..3)
                .flat_map(|i| (i + 1..3).map(move |k| (i, k)))
                .map(|(i, k)| (betas[k] - betas[i]).cos())
                .sum();
            assert!(cross.abs() < 1e-12, "{cross}");
        }
    }

    #[test]
    fn u9_single_cell_is_degenerate() {
        let u = fixtures::u9();
        let err = represent_multivalued(&u.space, &u.a, &u.b, &u.context("A1"), Branch::Plus).unwrap_err();
        assert_eq!(err, Error::DegenerateCells { cells: vec![1, 2] });
    }

    #[test]
    fn two_valued_reduction_matches_dichotomous_map() {
        let u = fixtures::u4();
        let c = u.context("C1");
        for branch in Branch::both() {
            let m = represent_multivalued(&u.space, &u.a, &u.b, &c, branch).unwrap();
            let rep = represent(&u.space, &u.a, &u.b, &c, branch, PhaseConvention::PerOutcome).unwrap();
            assert_eq!(m.amplitudes, rep.state.amplitudes.iter().copied().collect::<Vec<_>>());
        }
    }

    #[test]
    fn corrupted_phase_is_detected() {
        let u = fixtures::u9();
        let c = u.space.event(["w1", "w4", "w5", "w9"]).unwrap();
        let mut m = represent_multivalued(&u.space, &u.a, &u.b, &c, Branch::Plus).unwrap();
        assert!(interference_expansion(&m, &m.profile) < 1e-10);
        m.betas[0][1] += 0.1;
        assert!(interference_expansion(&m, &m.profile) > 1e-6);
    }

    /// Three cells of `a`, two values of `b`, with `P(B_1 A_2 C) = P(B_1 A_3 C) = 0`.
    fn zero_tail_model() -> (FiniteSpace<BigRational>, RandomVariable, RandomVariable) {
        let space = FiniteSpace::new((1..=6).map(|i| (format!("w{i}"), ratio(1, 6)))).unwrap();
        let a = RandomVariable::new("a", vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0]).unwrap();
        let b = RandomVariable::new("b", vec![1.0, 2.0, 1.0, 2.0, 1.0, 2.0]).unwrap();
        (space, a, b)
    }

    #[test]
    fn zero_tail_is_an_error() {
        let (space, a, b) = zero_tail_model();
        let c = space.event(["w1", "w2", "w4", "w6"]).unwrap();
        let err = split_trace(&space, &a, &b, &c, 0, Branch::Plus).unwrap_err();
        assert_eq!(err, Error::ZeroTail { step: 1 });
        let err = represent_multivalued(&space, &a, &b, &c, Branch::Plus).unwrap_err();
        let Error::Outcomes(fails) = err else { panic!() };
        assert_eq!(fails, vec![(1.0, Error::ZeroTail { step: 1 })]);
    }

    #[test]
    fn minus_branch_conjugates() {
        let u = fixtures::u9();
        let c = u.space.event(["w1", "w4", "w5", "w9"]).unwrap();
        let plus = represent_multivalued(&u.space, &u.a, &u.b, &c, Branch::Plus).unwrap();
        let minus = represent_multivalued(&u.space, &u.a, &u.b, &c, Branch::Minus).unwrap();
        for (p, m) in plus.amplitudes.iter().zip(&minus.amplitudes) {
            assert!((p.conj() - m).norm() < 1e-15);
        }
    }
}
