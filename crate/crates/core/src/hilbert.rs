//! Complex amplitudes of trigonometric contexts.
//!
//! For a trigonometric context `C` every `λ(x)` is the cosine of a phase
//! `θ(x)`, and the perturbed formula of total probability becomes
//!
//! ```text
//! p_C^b(x) = |√(p_C^a(a_1) p(x|a_1)) + e^{iθ(x)} √(p_C^a(a_2) p(x|a_2))|²
//! ```
//!
//! The amplitude `φ_C` lives in the two-dimensional space of functions on the
//! spectrum of `b`, coordinates taken in the delta-function basis `e^b`. When
//! `P^{b|a}` is double stochastic and the phases obey `θ(b_2) = θ(b_1) + π`,
//! one fixed context `C0` yields an orthonormal basis `e^a` in which Born's
//! rule also holds for `a`, for every trigonometric context.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{interference_lambda, transition_matrix, ContextClass, ContextProfile, TransitionMatrix};
use crate::error::{Error, Result};
use crate::kolmogorov::{Event, FiniteSpace, RandomVariable};
use crate::scalar::{Scalar, BOUNDARY_TOL};

/// Residual bound for Born's rule in the `b` basis.
pub const BORN_TOL: f64 = 1e-12;
/// Residual bound for Born's rule in a fixed `a` basis.
pub const BORN_A_TOL: f64 = 1e-10;
/// Bound on `‖V V† - I‖_max`.
pub const UNITARY_TOL: f64 = 1e-12;

/// Sign choice in `θ = ±arccos λ`. `Plus` puts `θ(b_1)` in `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn both() -> [Branch; 2] {
        [Branch::Plus, Branch::Minus]
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(Error::Convention(format!("unknown branch `{s}`"))),
        }
    }
}

/// How the phase of `b_2` is tied to the phase of `b_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    /// `θ(b_2) = θ(b_1) + π (mod 2π)`. Needs a double stochastic `P^{b|a}`
    /// and is what makes the `a` basis orthonormal.
    Canonical,
    /// Each outcome gets `θ(x) = ±arccos λ(x)` with the same branch sign.
    PerOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseAssignment {
    /// `θ(b_1), θ(b_2)` in `[0, 2π)`.
    pub theta: [f64; 2],
    pub branch: Branch,
    pub convention: PhaseConvention,
}

/// Unit vector in the `b` representation.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vector2<Complex64>,
}

impl StateVector {
    pub fn new(first: Complex64, second: Complex64) -> Self {
        Self { amplitudes: Vector2::new(first, second) }
    }

    pub fn real(first: f64, second: f64) -> Self {
        Self::new(Complex64::new(first, 0.0), Complex64::new(second, 0.0))
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|φ(x)|²` for each outcome.
    pub fn probabilities(&self) -> [f64; 2] {
        [self.amplitudes[0].norm_sqr(), self.amplitudes[1].norm_sqr()]
    }

    pub fn conj(&self) -> Self {
        Self { amplitudes: self.amplitudes.map(|z| z.conj()) }
    }

    pub fn as_vector(&self) -> &Vector2<Complex64> {
        &self.amplitudes
    }
}

/// `(φ, ψ) = Σ_x φ(x) conj(ψ(x))`.
pub fn inner(phi: &Vector2<Complex64>, psi: &Vector2<Complex64>) -> Complex64 {
    phi.iter().zip(psi.iter()).map(|(p, q)| p * q.conj()).sum()
}

/// Image of one context under the amplitude map.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation<S> {
    pub profile: ContextProfile<S>,
    pub state: StateVector,
    pub phases: PhaseAssignment,
    /// `e^{iθ(b_1)}, e^{iθ(b_2)}`, computed from the exact cosine.
    pub phase_factors: [Complex64; 2],
}

impl<S: Scalar> Representation<S> {
    pub fn born_b_residual(&self) -> f64 {
        born_b_residual(&self.state, &self.profile)
    }
}

/// `e^{iθ}` for `cos θ = λ` on the requested branch, without a round trip
/// through `arccos`.
fn phase_factor<S: Scalar>(lambda: &crate::calculus::Coefficient<S>, branch: Branch) -> Result<(Complex64, f64)> {
    let value = lambda.value().ok_or(Error::PhaseDomain(lambda.as_f64()))?;
    if value.abs() > 1.0 + BOUNDARY_TOL {
        return Err(Error::PhaseDomain(value));
    }
    let cos = value.clamp(-1.0, 1.0);
    let sin = branch.sign() * lambda.complement_root();
    let theta = wrap(branch.sign() * cos.acos());
    Ok((Complex64::new(cos, sin), theta))
}

fn wrap(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t >= 2.0 * PI {
        0.0
    } else {
        t
    }
}

/// The amplitude `φ_C` of a trigonometric context.
pub fn represent<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    c: &Event,
    branch: Branch,
    convention: PhaseConvention,
) -> Result<Representation<S>> {
    a.require_dichotomous()?;
    b.require_dichotomous()?;
    let profile = interference_lambda(space, a, b, c)?;
    if profile.class != ContextClass::Trigonometric {
        return Err(Error::Classification {
            class: profile.class.to_string(),
            expected: ContextClass::Trigonometric.to_string(),
            coefficients: profile.lambda_values(),
        });
    }
    if convention == PhaseConvention::Canonical && !profile.transition.is_double_stochastic()? {
        return Err(Error::Convention(
            "θ(b_2) = θ(b_1) + π needs a double stochastic transition matrix".into(),
        ));
    }
    let (f1, t1) = phase_factor(&profile.lambda[0], branch)?;
    let (f2, t2) = match convention {
        PhaseConvention::Canonical => (-f1, wrap(t1 + PI)),
        PhaseConvention::PerOutcome => phase_factor(&profile.lambda[1], branch)?,
    };
    let factors = [f1, f2];
    let amp = |x: usize| {
        Complex64::new(profile.term(x, 0).sqrt_f64(), 0.0) + factors[x] * profile.term(x, 1).sqrt_f64()
    };
    let state = StateVector::new(amp(0), amp(1));
    Ok(Representation {
        state,
        phases: PhaseAssignment { theta: [t1, t2], branch, convention },
        phase_factors: factors,
        profile,
    })
}

/// `max_x | |(φ, e_x^b)|² - p_C^b(x) |`.
pub fn born_b_residual<S: Scalar>(state: &StateVector, profile: &ContextProfile<S>) -> f64 {
    state
        .probabilities()
        .iter()
        .zip(&profile.pb)
        .map(|(p, q)| (p - q.to_f64()).abs())
        .fold(0.0, f64::max)
}

/// Basis change between the `b` basis and the `a` basis built from one context.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisPair {
    /// Delta functions `e_x^b`.
    pub e_b: [Vector2<Complex64>; 2],
    /// `e_1^a = (u_11, u_12)`, `e_2^a = (e^{iθ_1} u_21, e^{iθ_2} u_22)`.
    pub e_a: [Vector2<Complex64>; 2],
    /// Columns are `e_1^a, e_2^a` in `e^b` coordinates.
    pub v: Matrix2<Complex64>,
    /// `q_1 = √p_11 = √p_22`, `q_2 = √p_12 = √p_21`.
    pub q: [f64; 2],
    pub theta: [f64; 2],
    pub branch: Branch,
    pub context: Event,
}

impl BasisPair {
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.v)
    }
}

/// `‖V V† - I‖_max`.
pub fn unitarity_defect(v: &Matrix2<Complex64>) -> f64 {
    (v * v.adjoint() - Matrix2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The basis change matrix for given transition probabilities and phase factors.
///
/// Defined for any stochastic `P^{b|a}`; unitary only when it is double
/// stochastic and `e^{iθ_1} = -e^{iθ_2}`.
pub fn basis_matrix<S: Scalar>(transition: &TransitionMatrix<S>, factors: [Complex64; 2]) -> Matrix2<Complex64> {
    let u = |i: usize, j: usize| Complex64::new(transition.entry(i, j).sqrt_f64(), 0.0);
    Matrix2::new(u(0, 0), factors[0] * u(1, 0), u(0, 1), factors[1] * u(1, 1))
}

pub fn build_a_basis<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    c0: &Event,
    branch: Branch,
) -> Result<BasisPair> {
    a.require_dichotomous()?;
    b.require_dichotomous()?;
    let transition = transition_matrix(space, a, b)?;
    transition.require_double_stochastic()?;
    let rep = represent(space, a, b, c0, branch, PhaseConvention::Canonical)?;
    let v = basis_matrix(&transition, rep.phase_factors);
    let deviation = unitarity_defect(&v);
    if deviation > UNITARY_TOL {
        return Err(Error::NonUnitary { deviation });
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Ok(BasisPair {
        e_b: [Vector2::new(one, zero), Vector2::new(zero, one)],
        e_a: [v.column(0).into_owned(), v.column(1).into_owned()],
        v,
        q: [transition.entry(0, 0).sqrt_f64(), transition.entry(0, 1).sqrt_f64()],
        theta: rep.phases.theta,
        branch,
        context: c0.clone(),
    })
}

/// `max_j | |(φ_C, e_j^a)|² - p_C^a(a_j) |` for a representation and a fixed basis.
pub fn born_a_residual_with<S: Scalar>(rep: &Representation<S>, basis: &BasisPair) -> Result<f64> {
    if rep.phases.branch != basis.branch {
        return Err(Error::Convention(format!(
            "state on branch {:?}, basis on branch {:?}",
            rep.phases.branch, basis.branch
        )));
    }
    if rep.phases.convention != PhaseConvention::Canonical {
        return Err(Error::Convention("the a basis needs canonical phases".into()));
    }
    Ok(basis
        .e_a
        .iter()
        .zip(&rep.profile.pa)
        .map(|(e, p)| (inner(rep.state.as_vector(), e).norm_sqr() - p.to_f64()).abs())
        .fold(0.0, f64::max))
}

/// Born's rule for `a` in the basis of `c0`, evaluated at `c`.
pub fn born_a_residual<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    c: &Event,
    c0: &Event,
    branch: Branch,
) -> Result<f64> {
    let basis = build_a_basis(space, a, b, c0, branch)?;
    let rep = represent(space, a, b, c, branch, PhaseConvention::Canonical)?;
    born_a_residual_with(&rep, &basis)
}

/// A self-adjoint operator in the `b` representation.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableOperator {
    pub matrix: Matrix2<Complex64>,
    /// The values of the variable it represents, ascending.
    pub spectrum: [f64; 2],
}

impl ObservableOperator {
    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        (self.matrix - self.matrix.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let m = &self.matrix;
        let (p, r) = (m[(0, 0)].re, m[(1, 1)].re);
        let off = m[(0, 1)].norm();
        let mid = (p + r) / 2.0;
        let rad = (((p - r) / 2.0).powi(2) + off * off).sqrt();
        [mid - rad, mid + rad]
    }

    pub fn apply(&self, state: &StateVector) -> Vector2<Complex64> {
        self.matrix * state.amplitudes
    }
}

/// `b̂ = diag(b_1, b_2)`, the multiplication operator.
pub fn operator_b(b: &RandomVariable) -> Result<ObservableOperator> {
    b.require_dichotomous()?;
    let s = [b.spectrum()[0], b.spectrum()[1]];
    Ok(ObservableOperator {
        matrix: Matrix2::from_diagonal(&Vector2::new(s[0].into(), s[1].into())),
        spectrum: s,
    })
}

/// `â = V diag(a_1, a_2) V†`.
pub fn operator_a(a: &RandomVariable, basis: &BasisPair) -> Result<ObservableOperator> {
    a.require_dichotomous()?;
    let deviation = basis.unitarity_defect();
    if deviation > UNITARY_TOL {
        return Err(Error::NonUnitary { deviation });
    }
    let s = [a.spectrum()[0], a.spectrum()[1]];
    let d = Matrix2::from_diagonal(&Vector2::new(s[0].into(), s[1].into()));
    Ok(ObservableOperator { matrix: basis.v * d * basis.v.adjoint(), spectrum: s })
}

/// `[x, y] = x y - y x`. The commutator of `b̂` with `â` is `commutator(&b_hat, &a_hat)`.
pub fn commutator(x: &ObservableOperator, y: &ObservableOperator) -> Matrix2<Complex64> {
    x.matrix * y.matrix - y.matrix * x.matrix
}

/// `[b̂, â]` in closed form: zero diagonal and
/// `m_12 = -m_21 = (a_1 - a_2)(b_1 - b_2) q_1 q_2`.
pub fn commutator_closed_form(a_spectrum: [f64; 2], b_spectrum: [f64; 2], q: [f64; 2]) -> Matrix2<Complex64> {
    let m12 = (a_spectrum[0] - a_spectrum[1]) * (b_spectrum[0] - b_spectrum[1]) * q[0] * q[1];
    Matrix2::new(0.0.into(), m12.into(), (-m12).into(), 0.0.into())
}

/// `â` in closed form: `a_11 = a_1 q_1² + a_2 q_2²`, `a_22 = a_1 q_2² + a_2 q_1²`,
/// `a_12 = a_21 = (a_1 - a_2) q_1 q_2`.
pub fn operator_a_closed_form(a_spectrum: [f64; 2], q: [f64; 2]) -> Matrix2<Complex64> {
    let [a1, a2] = a_spectrum;
    let [q1, q2] = q;
    let off = (a1 - a2) * q1 * q2;
    Matrix2::new(
        (a1 * q1 * q1 + a2 * q2 * q2).into(),
        off.into(),
        off.into(),
        (a1 * q2 * q2 + a2 * q1 * q1).into(),
    )
}

/// `(ô φ, φ)`. The state must have unit norm.
pub fn expectation(op: &ObservableOperator, state: &StateVector) -> Result<f64> {
    let norm = state.norm();
    if (norm * norm - 1.0).abs() > BORN_TOL {
        return Err(Error::Unnormalized(norm));
    }
    Ok(inner(&op.apply(state), state.as_vector()).re)
}

/// Classical `Σ_x x p(x)`.
pub fn classical_expectation<S: Scalar>(spectrum: &[f64], distribution: &[S]) -> f64 {
    spectrum.iter().zip(distribution).map(|(x, p)| x * p.to_f64()).sum()
}

/// One distinct state in the image of the amplitude map.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageState {
    pub state: StateVector,
    pub branches: Vec<Branch>,
    /// How many (context, branch) pairs map to this state.
    pub contexts: usize,
}

/// Result of mapping every small context through [`represent`].
#[derive(Debug, Clone, PartialEq)]
pub struct ImageScan {
    pub states: Vec<ImageState>,
    /// Contexts left out, by class.
    pub skipped: BTreeMap<ContextClass, usize>,
    pub enumerated: usize,
}

/// Largest sample space [`image_scan`] and the census will enumerate.
pub const MAX_SCAN_POINTS: usize = 24;

impl ImageScan {
    pub fn contains(&self, target: &StateVector, tol: f64) -> bool {
        self.states.iter().any(|s| (s.state.amplitudes - target.amplitudes).norm() <= tol)
    }

    /// A point of the unit sphere, taken up to global phase from a grid with
    /// `resolution²` nodes, that is farthest from the image, and its distance
    /// `1 - |(ψ, φ)|²` to the nearest image state.
    pub fn farthest_sphere_point(&self, resolution: usize) -> (StateVector, f64) {
        let mut best = (StateVector::real(1.0, 0.0), -1.0);
        for i in 0..=resolution {
            let t = PI / 2.0 * i as f64 / resolution as f64;
            for k in 0..resolution {
                let phi = 2.0 * PI * k as f64 / resolution as f64;
                let probe = StateVector::new(t.cos().into(), Complex64::from_polar(t.sin(), phi));
                let gap = self
                    .states
                    .iter()
                    .map(|s| 1.0 - inner(&probe.amplitudes, &s.state.amplitudes).norm_sqr())
                    .fold(f64::INFINITY, f64::min);
                if gap > best.1 {
                    best = (probe, gap);
                }
            }
        }
        best
    }
}

/// Maps every context with at most `max_size` points through the amplitude
/// map on each requested branch and de-duplicates the resulting states.
pub fn image_scan<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    max_size: usize,
    branches: &[Branch],
    convention: PhaseConvention,
) -> Result<ImageScan> {
    let n = space.len();
    if n > MAX_SCAN_POINTS {
        return Err(Error::SizeGuard { points: n, limit: MAX_SCAN_POINTS });
    }
    a.require_dichotomous()?;
    b.require_dichotomous()?;
    if convention == PhaseConvention::Canonical {
        transition_matrix(space, a, b)?.require_double_stochastic()?;
    }
    let results: Vec<(ContextClass, Vec<(Branch, StateVector)>)> = (1u64..1 << n)
        .into_par_iter()
        .filter(|bits| bits.count_ones() as usize <= max_size)
        .map(|bits| {
            let c = Event::from_bits(n, bits);
            let class = crate::calculus::classify(space, a, b, &c)?;
            let mut images = Vec::new();
            if class == ContextClass::Trigonometric {
                for &br in branches {
                    images.push((br, represent(space, a, b, &c, br, convention)?.state));
                }
            }
            Ok((class, images))
        })
        .collect::<Result<_>>()?;

    let mut skipped = BTreeMap::new();
    let mut index: BTreeMap<(i64, i64, i64, i64), usize> = BTreeMap::new();
    let mut states: Vec<ImageState> = Vec::new();
    for (class, images) in &results {
        if *class != ContextClass::Trigonometric {
            *skipped.entry(*class).or_insert(0) += 1;
        }
        for (br, state) in images {
            let q = |v: f64| (v * 1e9).round() as i64;
            let a = state.amplitudes;
            let key = (q(a[0].re), q(a[0].im), q(a[1].re), q(a[1].im));
            match index.get(&key) {
                Some(&k) => {
                    let entry = &mut states[k];
                    entry.contexts += 1;
                    if !entry.branches.contains(br) {
                        entry.branches.push(*br);
                    }
                }
                None => {
                    index.insert(key, states.len());
                    states.push(ImageState { state: state.clone(), branches: vec![*br], contexts: 1 });
                }
            }
        }
    }
    Ok(ImageScan { states, skipped, enumerated: results.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
        (x - y).norm() <= tol
    }

    #[test]
    fn u4_context_amplitude() {
        let u = fixtures::u4();
        let rep = represent(&u.space, &u.a, &u.b, &u.context("C1"), Branch::Plus, PhaseConvention::Canonical).unwrap();
        let theta = (2f64.sqrt() / 4.0).acos();
        assert!((rep.phases.theta[0] - theta).abs() < 1e-12);
        assert!((theta - 1.209429).abs() < 1e-6);
        let expected = Complex64::new((1.0f64 / 6.0).sqrt(), 0.0)
            + Complex64::from_polar(1.0, theta) * (1.0f64 / 3.0).sqrt();
        assert!(close(rep.state.amplitudes[0], expected, 1e-15));
        let [p1, p2] = rep.state.probabilities();
        assert!((p1 - 2.0 / 3.0).abs() < 1e-12);
        assert!((p2 - 1.0 / 3.0).abs() < 1e-12);
        assert!(rep.born_b_residual() < 1e-15);
        assert!((rep.phases.theta[1] - (theta + PI)).abs() < 1e-12);
    }

    #[test]
    fn whole_space_gives_quarter_turn() {
        let u = fixtures::u4();
        let rep = represent(&u.space, &u.a, &u.b, &u.space.whole(), Branch::Plus, PhaseConvention::Canonical).unwrap();
        assert!((rep.phases.theta[0] - PI / 2.0).abs() < 1e-15);
        assert!((rep.state.probabilities()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn selection_context_is_a_delta_function() {
        for f in [fixtures::u4(), fixtures::h6()] {
            let cells = f.space.level_partition(&f.b).unwrap();
            for (j, cell) in cells.cells.iter().enumerate() {
                for br in Branch::both() {
                    let rep = represent(&f.space, &f.a, &f.b, cell, br, PhaseConvention::Canonical).unwrap();
                    let mut delta = [Complex64::new(0.0, 0.0); 2];
                    delta[j] = Complex64::new(1.0, 0.0);
                    assert_eq!(rep.state.amplitudes, Vector2::new(delta[0], delta[1]), "cell {j} {br:?}");
                }
            }
        }
    }

    #[test]
    fn born_b_mismatch_detector() {
        let u = fixtures::u4();
        let profile = interference_lambda(&u.space, &u.a, &u.b, &u.event(&["w1", "w3"])).unwrap();
        let h = 0.5f64.sqrt();
        assert!((born_b_residual(&StateVector::real(h, h), &profile) - 0.5).abs() < 1e-15);
        assert_eq!(born_b_residual(&StateVector::real(1.0, 0.0), &profile), 0.0);
    }

    #[test]
    fn represent_rejects_hyperbolic_context() {
        let h = fixtures::h6();
        let err = represent(&h.space, &h.a, &h.b, &h.context("C_hyp"), Branch::Plus, PhaseConvention::Canonical)
            .unwrap_err();
        let Error::Classification { class, coefficients, .. } = err else { panic!("{err:?}") };
        assert_eq!(class, "hyperbolic");
        assert_eq!(coefficients, vec![5.0 / 3.0, -5.0 / 3.0]);
    }

    #[test]
    fn minus_branch_is_conjugate() {
        let u = fixtures::u4();
        let c = u.context("C1");
        for conv in [PhaseConvention::Canonical, PhaseConvention::PerOutcome] {
            let plus = represent(&u.space, &u.a, &u.b, &c, Branch::Plus, conv).unwrap();
            let minus = represent(&u.space, &u.a, &u.b, &c, Branch::Minus, conv).unwrap();
            assert_eq!(minus.state, plus.state.conj());
        }
    }

    #[test]
    fn u4_a_basis() {
        let u = fixtures::u4();
        let basis = build_a_basis(&u.space, &u.a, &u.b, &u.context("C1"), Branch::Plus).unwrap();
        let h = 0.5f64.sqrt();
        assert!(close(basis.e_a[0][0], h.into(), 1e-15) && close(basis.e_a[0][1], h.into(), 1e-15));
        let phase = Complex64::from_polar(1.0, basis.theta[1]);
        assert!(close(basis.e_a[1][0], phase * -h, 1e-15));
        assert!(close(basis.e_a[1][1], phase * h, 1e-15));
        assert!(basis.unitarity_defect() < 1e-12);
    }

    #[test]
    fn h6_a_basis() {
        let h = fixtures::h6();
        let basis = build_a_basis(&h.space, &h.a, &h.b, &h.context("Omega"), Branch::Plus).unwrap();
        assert!((basis.q[0] - 0.1f64.sqrt()).abs() < 1e-15);
        assert!((basis.q[1] - 0.9f64.sqrt()).abs() < 1e-15);
        assert!(basis.unitarity_defect() < 1e-12);
    }

    #[test]
    fn non_double_stochastic_basis_is_refused() {
        use crate::scalar::ratio;
        // P^{b|a} = [[1/3, 2/3], [1/2, 1/2]]
        let space = FiniteSpace::new([
            ("x", ratio(1, 6)),
            ("y", ratio(1, 3)),
            ("z", ratio(1, 4)),
            ("t", ratio(1, 4)),
        ])
        .unwrap();
        let a = RandomVariable::new("a", vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let b = RandomVariable::new("b", vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        let err = build_a_basis(&space, &a, &b, &space.whole(), Branch::Plus).unwrap_err();
        assert_eq!(err, Error::NotDoubleStochastic { column_sums: vec!["5/6".into(), "7/6".into()] });
    }

    #[test]
    fn born_a_on_u4() {
        let u = fixtures::u4();
        let c0 = u.context("C1");
        for c in [c0.clone(), u.space.whole(), u.event(&["w1", "w3"])] {
            let r = born_a_residual(&u.space, &u.a, &u.b, &c, &c0, Branch::Plus).unwrap();
            assert!(r <= 1e-12, "{c}: {r}");
        }
        let basis = build_a_basis(&u.space, &u.a, &u.b, &c0, Branch::Plus).unwrap();
        let rep = represent(&u.space, &u.a, &u.b, &c0, Branch::Plus, PhaseConvention::Canonical).unwrap();
        assert!((inner(rep.state.as_vector(), &basis.e_a[0]).norm_sqr() - 1.0 / 3.0).abs() < 1e-15);
        let other = represent(&u.space, &u.a, &u.b, &c0, Branch::Minus, PhaseConvention::Canonical).unwrap();
        assert!(matches!(born_a_residual_with(&other, &basis), Err(Error::Convention(_))));
    }

    #[test]
    fn operators_on_fixtures() {
        let u = fixtures::u4();
        let b_hat = operator_b(&u.b).unwrap();
        assert_eq!(b_hat.matrix, Matrix2::new((-1.0).into(), 0.0.into(), 0.0.into(), 1.0.into()));
        let basis = build_a_basis(&u.space, &u.a, &u.b, &u.context("C1"), Branch::Plus).unwrap();
        let a_hat = operator_a(&u.a, &basis).unwrap();
        // a = (-1, 1), q_1 = q_2 = √½
        let expected = Matrix2::new(0.0.into(), (-1.0).into(), (-1.0).into(), 0.0.into());
        assert!((a_hat.matrix - expected).norm() < 1e-15);
        assert!(a_hat.is_self_adjoint(1e-15));
        let [l1, l2] = a_hat.eigenvalues();
        assert!((l1 + 1.0).abs() < 1e-15 && (l2 - 1.0).abs() < 1e-15);

        let h = fixtures::h6();
        let basis = build_a_basis(&h.space, &h.a, &h.b, &h.context("Omega"), Branch::Plus).unwrap();
        let a_hat = operator_a(&h.a, &basis).unwrap();
        assert!((a_hat.matrix[(0, 0)].re - 0.8).abs() < 1e-15);
        assert!((a_hat.matrix[(0, 1)].re + 0.6).abs() < 1e-15);
        assert!((a_hat.matrix - operator_a_closed_form(a_hat.spectrum, basis.q)).norm() < 1e-15);
    }

    #[test]
    fn commutators() {
        let u = fixtures::u4();
        let basis = build_a_basis(&u.space, &u.a, &u.b, &u.context("C1"), Branch::Plus).unwrap();
        let a_hat = operator_a(&u.a, &basis).unwrap();
        let b_hat = operator_b(&u.b).unwrap();
        let m = commutator(&b_hat, &a_hat);
        let expected = Matrix2::new(0.0.into(), 2.0.into(), (-2.0).into(), 0.0.into());
        assert!((m - expected).norm() < 1e-15, "{m}");
        assert!((m - commutator_closed_form(a_hat.spectrum, b_hat.spectrum, basis.q)).norm() < 1e-15);
        assert_eq!(commutator(&b_hat, &b_hat), Matrix2::zeros());

        let h = fixtures::h6();
        let basis = build_a_basis(&h.space, &h.a, &h.b, &h.context("Omega"), Branch::Plus).unwrap();
        let m = commutator(&operator_b(&h.b).unwrap(), &operator_a(&h.a, &basis).unwrap());
        assert!((m[(0, 1)].re - 1.2).abs() < 1e-15);
    }

    #[test]
    fn expectations() {
        let u = fixtures::u4();
        let b_hat = operator_b(&u.b).unwrap();
        let rep = represent(&u.space, &u.a, &u.b, &u.context("C1"), Branch::Plus, PhaseConvention::Canonical).unwrap();
        assert!((expectation(&b_hat, &rep.state).unwrap() + 1.0 / 3.0).abs() < 1e-12);
        let basis = build_a_basis(&u.space, &u.a, &u.b, &u.context("C1"), Branch::Plus).unwrap();
        let a_hat = operator_a(&u.a, &basis).unwrap();
        let whole = represent(&u.space, &u.a, &u.b, &u.space.whole(), Branch::Plus, PhaseConvention::Canonical).unwrap();
        assert!(expectation(&a_hat, &whole.state).unwrap().abs() < 1e-12);
        let sel = represent(&u.space, &u.a, &u.b, &u.event(&["w1", "w3"]), Branch::Plus, PhaseConvention::Canonical).unwrap();
        assert_eq!(expectation(&b_hat, &sel.state).unwrap(), -1.0);
        let h = 0.5f64.sqrt();
        assert!(expectation(&b_hat, &StateVector::real(h, h)).unwrap().abs() < 1e-15);
        assert!(matches!(expectation(&b_hat, &StateVector::real(1.0, 1.0)), Err(Error::Unnormalized(_))));
    }

    #[test]
    fn image_of_u4() {
        let u = fixtures::u4();
        let scan = image_scan(&u.space, &u.a, &u.b, 4, &Branch::both(), PhaseConvention::Canonical).unwrap();
        assert_eq!(scan.enumerated, 15);
        assert!(scan.contains(&StateVector::real(1.0, 0.0), 1e-12));
        assert!(scan.contains(&StateVector::real(0.0, 1.0), 1e-12));
        let (_, gap) = scan.farthest_sphere_point(32);
        assert!(gap > 0.05, "{gap}");

        let one = image_scan(&u.space, &u.a, &u.b, 4, &[Branch::Plus], PhaseConvention::Canonical).unwrap();
        assert!(one.states.len() <= scan.states.len());
    }
}
