//! Reports behind the command line: analysis tables, context census, state
//! dumps and oracle comparisons, each renderable as text, JSON or CSV.
//!
//! Text output uses 12 significant digits. JSON carries exact rationals as
//! `"p/q"` strings when the model was loaded in exact mode.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::calculus::{
    check_symmetry_lemma, classify, interference_lambda, is_incompatible, transition_matrix, Coefficient,
    ContextClass, TransitionMatrix,
};
use crate::error::{Error, Result};
use crate::hilbert::{
    born_a_residual_with, build_a_basis, commutator, commutator_closed_form, expectation, image_scan,
    operator_a, operator_b, represent, BasisPair, Branch, PhaseConvention, BORN_A_TOL, BORN_TOL,
    MAX_SCAN_POINTS,
};
use crate::hyperbolic::represent_hyperbolic;
use crate::kolmogorov::{Event, FiniteSpace, RandomVariable};
use crate::model::Model;
use crate::multivalued::{represent_multivalued, split_trace, SplitTrace, MULTI_BORN_TOL};
use crate::oracle::{oracle, OracleRecord};
use crate::scalar::Scalar;

/// Tolerance of the split-complex Born identity.
pub const HYPERBOLIC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format `{s}`"))),
        }
    }
}

/// Anything the command line prints.
pub trait Render {
    fn text(&self) -> String;
    fn json(&self) -> Value;
    fn csv(&self) -> String;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json()).expect("report values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
        }
    }
}

/// `x` with 12 significant digits, trailing zeros dropped.
pub fn sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-6..=15).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// A JSON number, or a string for values JSON cannot hold.
pub fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(x.to_string()))
}

fn json_complex(z: Complex64) -> Value {
    json!({"re": json_f64(z.re), "im": json_f64(z.im)})
}

fn json_matrix(m: &Matrix2<Complex64>) -> Value {
    Value::Array((0..2).map(|i| Value::Array((0..2).map(|j| json_complex(m[(i, j)])).collect())).collect())
}

fn text_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{} {} {}i", sig(z.re), sign, sig(z.im.abs()))
}

fn text_split(z: crate::hyperbolic::SplitComplex) -> String {
    let sign = if z.hy.is_sign_negative() { '-' } else { '+' };
    format!("{} {} {}j", sig(z.re), sign, sig(z.hy.abs()))
}

fn text_matrix(m: &Matrix2<Complex64>) -> String {
    (0..2)
        .map(|i| format!("[{}, {}]", text_complex(m[(i, 0)]), text_complex(m[(i, 1)])))
        .collect::<Vec<_>>()
        .join(" ")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

/// Left-aligned columns separated by two spaces.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<String>| {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(headers.iter().map(|h| h.to_string()).collect());
    for row in rows {
        line(row.clone());
    }
    out
}

/// A probability-level number: its float value and, in exact mode, the rational.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub exact: Option<String>,
}

impl Quantity {
    pub fn of<S: Scalar>(s: &S) -> Self {
        Self { value: s.to_f64(), exact: S::EXACT.then(|| s.to_string()) }
    }

    pub fn json(&self) -> Value {
        match &self.exact {
            Some(e) => Value::String(e.clone()),
            None => json_f64(self.value),
        }
    }

    pub fn text(&self) -> String {
        sig(self.value)
    }
}

fn quantities<S: Scalar>(v: &[S]) -> Vec<Quantity> {
    v.iter().map(Quantity::of).collect()
}

fn list_text(v: &[Quantity]) -> String {
    v.iter().map(Quantity::text).collect::<Vec<_>>().join(" ")
}

fn list_json(v: &[Quantity]) -> Value {
    Value::Array(v.iter().map(Quantity::json).collect())
}

fn floats_text(v: &[f64]) -> String {
    v.iter().map(|x| sig(*x)).collect::<Vec<_>>().join(" ")
}

/// One interference coefficient as reported: its value and, where defined, the exact square.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaCell {
    pub value: f64,
    pub square: Option<Quantity>,
    pub kind: &'static str,
}

impl LambdaCell {
    fn of<S: Scalar>(c: &Coefficient<S>) -> Self {
        let kind = match c {
            Coefficient::Finite { .. } => "finite",
            Coefficient::Indeterminate => "indeterminate",
            Coefficient::Infinite { .. } => "infinite",
            Coefficient::Undefined => "undefined",
        };
        Self { value: c.as_f64(), square: c.square().map(Quantity::of), kind }
    }

    fn json(&self) -> Value {
        json!({
            "value": json_f64(self.value),
            "square": self.square.as_ref().map(Quantity::json),
            "kind": self.kind,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Nothing to verify (mixed or degenerate context).
    Skip,
}

impl Status {
    fn from_checks(checks: &[(Option<f64>, f64)]) -> Self {
        let mut any = false;
        for (value, tol) in checks {
            if let Some(v) = value {
                any = true;
                if v.is_nan() || *v > *tol {
                    return Status::Fail;
                }
            }
        }
        if any {
            Status::Pass
        } else {
            Status::Skip
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "-",
        }
    }
}

fn matrix_quantities<S: Scalar>(t: &TransitionMatrix<S>) -> Vec<Vec<Quantity>> {
    (0..t.n_rows()).map(|i| (0..t.n_cols()).map(|j| Quantity::of(t.entry(i, j))).collect()).collect()
}

/// Properties of the transition matrices of a pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDiagnostics {
    pub a: String,
    pub b: String,
    pub a_spectrum: Vec<f64>,
    pub b_spectrum: Vec<f64>,
    pub incompatible: bool,
    /// `P^{b|a}`, rows indexed by values of `a`.
    pub b_given_a: Vec<Vec<Quantity>>,
    pub a_given_b: Vec<Vec<Quantity>>,
    pub stochastic: bool,
    pub double_stochastic: Option<bool>,
    pub reverse_double_stochastic: Option<bool>,
    /// For dichotomous pairs only.
    pub symmetric: Option<bool>,
    pub uniform_marginals: Option<bool>,
}

pub fn pair_diagnostics<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
) -> Result<PairDiagnostics> {
    let forward = transition_matrix(space, a, b)?;
    let backward = transition_matrix(space, b, a)?;
    let square = |t: &TransitionMatrix<S>| t.is_double_stochastic().ok();
    let symmetry = if a.is_dichotomous() && b.is_dichotomous() {
        Some(check_symmetry_lemma(space, a, b)?)
    } else {
        None
    };
    Ok(PairDiagnostics {
        a: a.name().to_string(),
        b: b.name().to_string(),
        a_spectrum: a.spectrum().to_vec(),
        b_spectrum: b.spectrum().to_vec(),
        incompatible: is_incompatible(space, a, b)?,
        b_given_a: matrix_quantities(&forward),
        a_given_b: matrix_quantities(&backward),
        stochastic: forward.is_stochastic() && backward.is_stochastic(),
        double_stochastic: square(&forward),
        reverse_double_stochastic: square(&backward),
        symmetric: symmetry.map(|s| s.symmetric),
        uniform_marginals: symmetry.map(|s| s.uniform_marginals),
    })
}

fn opt_bool(b: Option<bool>) -> String {
    b.map(|v| v.to_string()).unwrap_or_else(|| "n/a".into())
}

impl PairDiagnostics {
    fn json(&self) -> Value {
        let m = |rows: &Vec<Vec<Quantity>>| Value::Array(rows.iter().map(|r| list_json(r)).collect());
        json!({
            "a": self.a,
            "b": self.b,
            "a_spectrum": self.a_spectrum,
            "b_spectrum": self.b_spectrum,
            "incompatible": self.incompatible,
            "b_given_a": m(&self.b_given_a),
            "a_given_b": m(&self.a_given_b),
            "stochastic": self.stochastic,
            "double_stochastic": self.double_stochastic,
            "reverse_double_stochastic": self.reverse_double_stochastic,
            "symmetric": self.symmetric,
            "uniform_marginals": self.uniform_marginals,
        })
    }

    fn text(&self) -> String {
        let mut out = String::new();
        let rows = |m: &Vec<Vec<Quantity>>| m.iter().map(|r| format!("[{}]", list_text(r))).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "pair ({}, {})  spectra {} | {}", self.a, self.b, floats_text(&self.a_spectrum), floats_text(&self.b_spectrum));
        let _ = writeln!(out, "  incompatible: {}", self.incompatible);
        let _ = writeln!(out, "  P^{{{}|{}}} = {}", self.b, self.a, rows(&self.b_given_a));
        let _ = writeln!(out, "  P^{{{}|{}}} = {}", self.a, self.b, rows(&self.a_given_b));
        let _ = writeln!(
            out,
            "  stochastic: {}  double stochastic: {} / {}  symmetric: {}  uniform marginals: {}",
            self.stochastic,
            opt_bool(self.double_stochastic),
            opt_bool(self.reverse_double_stochastic),
            opt_bool(self.symmetric),
            opt_bool(self.uniform_marginals)
        );
        out
    }
}

/// One context of an analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextRow {
    pub name: String,
    pub members: Vec<String>,
    pub pa: Vec<Quantity>,
    pub pb: Vec<Quantity>,
    pub delta: Vec<Quantity>,
    pub lambda: Vec<LambdaCell>,
    /// `None` for pairs that are not both dichotomous.
    pub class: Option<ContextClass>,
    pub boundary: bool,
    pub degenerate: Option<String>,
    /// Trigonometric or hyperbolic phases per outcome.
    pub phases: Vec<f64>,
    pub born_b: Option<f64>,
    pub born_a: Option<f64>,
    pub hyperbolic_born: Option<f64>,
    pub multivalued_born: Option<f64>,
    pub note: Option<String>,
    pub status: Status,
}

impl ContextRow {
    fn json(&self) -> Value {
        json!({
            "context": self.name,
            "members": self.members,
            "pa": list_json(&self.pa),
            "pb": list_json(&self.pb),
            "delta": list_json(&self.delta),
            "lambda": self.lambda.iter().map(LambdaCell::json).collect::<Vec<_>>(),
            "class": self.class,
            "boundary": self.boundary,
            "degenerate": self.degenerate,
            "phases": self.phases.iter().map(|t| json_f64(*t)).collect::<Vec<_>>(),
            "born_b_residual": self.born_b,
            "born_a_residual": self.born_a,
            "hyperbolic_born_residual": self.hyperbolic_born,
            "multivalued_born_residual": self.multivalued_born,
            "note": self.note,
            "status": self.status.label(),
        })
    }

    fn cells(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(sig).unwrap_or_else(|| "-".into());
        vec![
            self.name.clone(),
            self.members.join(" "),
            self.class.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
            self.boundary.to_string(),
            list_text(&self.pa),
            list_text(&self.pb),
            list_text(&self.delta),
            self.lambda.iter().map(|l| sig(l.value)).collect::<Vec<_>>().join(" "),
            floats_text(&self.phases),
            opt(self.born_b.or(self.hyperbolic_born).or(self.multivalued_born)),
            opt(self.born_a),
            self.status.label().to_string(),
        ]
    }
}

const ROW_HEADERS: [&str; 12] =
    ["context", "members", "class", "boundary", "pa", "pb", "delta", "lambda", "phase", "born_b", "born_a", "status"];

/// The basis context used when none is given: the first trigonometric named
/// context in name order, then `Omega`.
pub fn elect_basis_context<S: Scalar>(model: &Model<S>, a: &RandomVariable, b: &RandomVariable) -> Option<String> {
    let trig = |e: &Event| matches!(classify(&model.space, a, b, e), Ok(ContextClass::Trigonometric));
    model
        .contexts
        .iter()
        .find(|(_, e)| trig(e))
        .map(|(n, _)| n.clone())
        .or_else(|| trig(&model.space.whole()).then(|| "Omega".to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub title: Option<String>,
    pub diagnostics: PairDiagnostics,
    pub branch: Branch,
    pub convention: Option<PhaseConvention>,
    pub basis_context: Option<String>,
    pub rows: Vec<ContextRow>,
    pub counts: BTreeMap<String, usize>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::Fail).count()
    }
}

fn selected_contexts<S: Scalar>(model: &Model<S>, names: &[String]) -> Result<Vec<(String, Event)>> {
    if names.is_empty() {
        let mut all: Vec<(String, Event)> = model.contexts.iter().map(|(n, e)| (n.clone(), e.clone())).collect();
        if !model.contexts.contains_key("Omega") {
            all.insert(0, ("Omega".to_string(), model.space.whole()));
        }
        return Ok(all);
    }
    names.iter().map(|n| Ok((n.clone(), model.context(n)?))).collect()
}

/// Profiles, classes, representations and residuals for the chosen contexts
/// (all named contexts plus `Omega` when `contexts` is empty).
pub fn analyze<S: Scalar>(
    model: &Model<S>,
    a_name: &str,
    b_name: &str,
    contexts: &[String],
    branch: Branch,
    basis_context: Option<&str>,
) -> Result<AnalysisReport> {
    let a = model.variable(a_name)?;
    let b = model.variable(b_name)?;
    let diagnostics = pair_diagnostics(&model.space, a, b)?;
    if !diagnostics.incompatible {
        return Err(Error::NotIncompatible { a: a_name.to_string(), b: b_name.to_string() });
    }
    let selected = selected_contexts(model, contexts)?;
    let dichotomous = a.is_dichotomous() && b.is_dichotomous();
    let mut notes = Vec::new();

    let (convention, basis) = if dichotomous {
        let ds = diagnostics.double_stochastic == Some(true);
        let convention = if ds { PhaseConvention::Canonical } else { PhaseConvention::PerOutcome };
        if !ds {
            notes.push(format!("P^{{{b_name}|{a_name}}} is not double stochastic: per-outcome phases, no {a_name}-basis"));
        }
        let name = match basis_context {
            Some(n) => Some(n.to_string()),
            None if ds => elect_basis_context(model, a, b),
            None => None,
        };
        let basis = match (&name, ds) {
            (Some(n), true) => Some(build_a_basis(&model.space, a, b, &model.context(n)?, branch)?),
            _ => None,
        };
        if ds && basis.is_none() {
            notes.push("no trigonometric context available for the a-basis".into());
        }
        (Some(convention), basis.map(|bp| (name.unwrap_or_default(), bp)))
    } else {
        notes.push(format!("{a_name} takes {} values: amplitudes by successive splitting", a.spectrum().len()));
        (None, None)
    };

    let rows: Vec<ContextRow> = selected
        .par_iter()
        .map(|(name, e)| context_row(model, a, b, name, e, branch, convention, basis.as_ref().map(|(_, bp)| bp)))
        .collect::<Result<_>>()?;

    let mut counts = BTreeMap::new();
    for r in &rows {
        let key = r.class.map(|c| c.to_string()).unwrap_or_else(|| "n/a".into());
        *counts.entry(key).or_insert(0) += 1;
    }
    Ok(AnalysisReport {
        title: model.title.clone(),
        diagnostics,
        branch,
        convention,
        basis_context: basis.map(|(n, _)| n),
        rows,
        counts,
        notes,
    })
}

#[allow(clippy::too_many_arguments)]
fn context_row<S: Scalar>(
    model: &Model<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    name: &str,
    e: &Event,
    branch: Branch,
    convention: Option<PhaseConvention>,
    basis: Option<&BasisPair>,
) -> Result<ContextRow> {
    let space = &model.space;
    let mut row = ContextRow {
        name: name.to_string(),
        members: e.labels(space).iter().map(|s| s.to_string()).collect(),
        pa: Vec::new(),
        pb: Vec::new(),
        delta: Vec::new(),
        lambda: Vec::new(),
        class: None,
        boundary: false,
        degenerate: None,
        phases: Vec::new(),
        born_b: None,
        born_a: None,
        hyperbolic_born: None,
        multivalued_born: None,
        note: None,
        status: Status::Skip,
    };
    if !space.measure(e)?.is_positive_tol() {
        row.class = convention.map(|_| ContextClass::Degenerate);
        row.degenerate = Some("null context".into());
        return Ok(row);
    }

    match convention {
        Some(convention) => {
            let profile = interference_lambda(space, a, b, e)?;
            row.pa = quantities(&profile.pa);
            row.pb = quantities(&profile.pb);
            row.delta = quantities(&profile.delta);
            row.lambda = profile.lambda.iter().map(LambdaCell::of).collect();
            row.class = Some(profile.class);
            row.boundary = profile.boundary;
            row.degenerate = profile.degenerate.as_ref().map(|d| d.to_string());
            match profile.class {
                ContextClass::Trigonometric => {
                    let rep = represent(space, a, b, e, branch, convention)?;
                    row.phases = rep.phases.theta.to_vec();
                    row.born_b = Some(rep.born_b_residual());
                    if let Some(bp) = basis {
                        row.born_a = Some(born_a_residual_with(&rep, bp)?);
                    }
                }
                ContextClass::Hyperbolic => {
                    let h = represent_hyperbolic(space, a, b, e)?;
                    row.phases = h.theta.to_vec();
                    row.hyperbolic_born = Some(h.born_residual());
                }
                _ => {}
            }
        }
        None => {
            let profile = crate::multivalued::multi_profile(space, a, b, e)?;
            row.pa = quantities(&profile.pa);
            row.pb = quantities(&profile.pb);
            row.delta = (0..profile.pb.len())
                .map(|x| {
                    let classical = (0..profile.pa.len()).fold(S::zero(), |acc, y| acc + profile.term(x, y));
                    Quantity::of(&(profile.pb[x].clone() - classical))
                })
                .collect();
            match represent_multivalued(space, a, b, e, branch) {
                Ok(m) => row.multivalued_born = Some(m.born_residual()),
                Err(err) => row.note = Some(err.to_string()),
            }
        }
    }
    row.status = Status::from_checks(&[
        (row.born_b, BORN_TOL),
        (row.born_a, BORN_A_TOL),
        (row.hyperbolic_born, HYPERBOLIC_TOL),
        (row.multivalued_born, MULTI_BORN_TOL),
    ]);
    Ok(row)
}

impl Render for AnalysisReport {
    fn text(&self) -> String {
        let mut out = String::new();
        if let Some(t) = &self.title {
            let _ = writeln!(out, "{t}");
        }
        out.push_str(&self.diagnostics.text());
        let _ = writeln!(
            out,
            "branch {:?}  phases {}  basis context {}",
            self.branch,
            self.convention.map(|c| format!("{c:?}")).unwrap_or_else(|| "-".into()),
            self.basis_context.as_deref().unwrap_or("-")
        );
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out.push('\n');
        let rows: Vec<Vec<String>> = self.rows.iter().map(ContextRow::cells).collect();
        out.push_str(&table(&ROW_HEADERS, &rows));
        for r in self.rows.iter().filter(|r| r.note.is_some() || r.degenerate.is_some()) {
            let detail = r.note.as_ref().or(r.degenerate.as_ref()).expect("filtered");
            let _ = writeln!(out, "{}: {detail}", r.name);
        }
        let counts: Vec<String> = self.counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
        let _ = writeln!(out, "\nclasses: {}", counts.join(", "));
        out
    }

    fn json(&self) -> Value {
        json!({
            "title": self.title,
            "pair": self.diagnostics.json(),
            "branch": self.branch,
            "convention": self.convention,
            "basis_context": self.basis_context,
            "notes": self.notes,
            "contexts": self.rows.iter().map(ContextRow::json).collect::<Vec<_>>(),
            "classes": self.counts,
            "failures": self.failures(),
        })
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&ROW_HEADERS.iter().map(|h| h.to_string()).collect::<Vec<_>>());
        for r in &self.rows {
            out.push_str(&csv_line(&r.cells()));
        }
        out
    }
}

/// Classification of every context up to a size bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub points: usize,
    pub max_size: usize,
    pub enumerated: usize,
    pub counts: BTreeMap<ContextClass, usize>,
    pub boundary: usize,
    /// Up to three smallest contexts of each class.
    pub witnesses: BTreeMap<ContextClass, Vec<Vec<String>>>,
    /// Distinct amplitudes of the trigonometric contexts over both branches.
    pub image_states: usize,
    /// Distance `1 - |(ψ, φ)|²` from the image to the farthest probe state.
    pub image_gap: f64,
}

impl Census {
    /// Class counts add up to the number of enumerated contexts.
    pub fn is_conserved(&self) -> bool {
        self.counts.values().sum::<usize>() == self.enumerated
    }

    /// Every subset was enumerated.
    pub fn is_complete(&self) -> bool {
        self.enumerated == (1usize << self.points) - 1
    }
}

pub fn census<S: Scalar>(
    space: &FiniteSpace<S>,
    a: &RandomVariable,
    b: &RandomVariable,
    max_size: Option<usize>,
) -> Result<Census> {
    let n = space.len();
    if n > MAX_SCAN_POINTS {
        return Err(Error::SizeGuard { points: n, limit: MAX_SCAN_POINTS });
    }
    a.require_dichotomous()?;
    b.require_dichotomous()?;
    let max_size = max_size.unwrap_or(n).min(n);
    let classes: Vec<(u64, ContextClass, bool)> = (1u64..1 << n)
        .into_par_iter()
        .filter(|bits| bits.count_ones() as usize <= max_size)
        .map(|bits| {
            let e = Event::from_bits(n, bits);
            match interference_lambda(space, a, b, &e) {
                Ok(p) => Ok((bits, p.class, p.boundary)),
                Err(Error::DegenerateContext) => Ok((bits, ContextClass::Degenerate, false)),
                Err(err) => Err(err),
            }
        })
        .collect::<Result<_>>()?;

    let mut counts = BTreeMap::new();
    let mut witnesses: BTreeMap<ContextClass, Vec<u64>> = BTreeMap::new();
    let mut boundary = 0;
    for (bits, class, on_boundary) in &classes {
        *counts.entry(*class).or_insert(0) += 1;
        boundary += usize::from(*on_boundary);
        witnesses.entry(*class).or_default().push(*bits);
    }
    let witnesses = witnesses
        .into_iter()
        .map(|(class, mut list)| {
            list.sort_by_key(|bits| (bits.count_ones(), bits.reverse_bits()));
            let labels = list
                .iter()
                .take(3)
                .map(|&bits| Event::from_bits(n, bits).labels(space).iter().map(|s| s.to_string()).collect())
                .collect();
            (class, labels)
        })
        .collect();

    let ds = transition_matrix(space, a, b)?.is_double_stochastic()?;
    let convention = if ds { PhaseConvention::Canonical } else { PhaseConvention::PerOutcome };
    let image = image_scan(space, a, b, max_size, &Branch::both(), convention)?;
    let image_gap = if image.states.is_empty() { 1.0 } else { image.farthest_sphere_point(24).1 };
    Ok(Census {
        points: n,
        max_size,
        enumerated: classes.len(),
        counts,
        boundary,
        witnesses,
        image_states: image.states.len(),
        image_gap,
    })
}

impl Render for Census {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} points, contexts up to size {}: {} enumerated", self.points, self.max_size, self.enumerated);
        let rows: Vec<Vec<String>> = self
            .counts
            .iter()
            .map(|(class, count)| {
                let w = self.witnesses.get(class).map(|ws| {
                    ws.iter().map(|w| format!("{{{}}}", w.join(","))).collect::<Vec<_>>().join(" ")
                });
                vec![class.to_string(), count.to_string(), w.unwrap_or_default()]
            })
            .collect();
        out.push_str(&table(&["class", "count", "witnesses"], &rows));
        let _ = writeln!(out, "on the |lambda| = 1 boundary: {}", self.boundary);
        let _ = writeln!(out, "counts sum to enumerated: {}", self.is_conserved());
        let _ = writeln!(
            out,
            "image: {} distinct states, farthest probe state at distance {}",
            self.image_states,
            sig(self.image_gap)
        );
        out
    }

    fn json(&self) -> Value {
        json!({
            "points": self.points,
            "max_size": self.max_size,
            "enumerated": self.enumerated,
            "counts": self.counts.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "boundary": self.boundary,
            "witnesses": self.witnesses.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "conserved": self.is_conserved(),
            "image_states": self.image_states,
            "image_gap": json_f64(self.image_gap),
        })
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&["class".into(), "count".into(), "witnesses".into()]);
        for (class, count) in &self.counts {
            let w = self.witnesses.get(class).map(|ws| {
                ws.iter().map(|w| w.join(" ")).collect::<Vec<_>>().join(";")
            });
            out.push_str(&csv_line(&[class.to_string(), count.to_string(), w.unwrap_or_default()]));
        }
        out
    }
}

/// The basis, operators and `a`-side checks attached to a trigonometric state.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorReport {
    pub basis_context: String,
    pub e_a: [[Complex64; 2]; 2],
    pub v: Matrix2<Complex64>,
    pub unitarity_defect: f64,
    pub born_a: f64,
    pub a_hat: Matrix2<Complex64>,
    pub b_hat: Matrix2<Complex64>,
    /// `b̂ â - â b̂`.
    pub commutator: Matrix2<Complex64>,
    pub commutator_closed_form: Matrix2<Complex64>,
    /// Quantum and classical expectations of `a` and `b`.
    pub expectation_a: (f64, f64),
    pub expectation_b: (f64, f64),
}

/// Output of the `represent` command.
#[derive(Debug, Clone, PartialEq)]
pub enum StateReport {
    Trigonometric {
        context: String,
        branch: Branch,
        convention: PhaseConvention,
        lambda: Vec<f64>,
        theta: [f64; 2],
        amplitudes: [Complex64; 2],
        pb: Vec<Quantity>,
        born_b: f64,
        operators: Option<Box<OperatorReport>>,
    },
    Hyperbolic {
        context: String,
        lambda: Vec<f64>,
        sign: [f64; 2],
        theta: [f64; 2],
        amplitudes: [crate::hyperbolic::SplitComplex; 2],
        pb: Vec<Quantity>,
        born: f64,
    },
    Multivalued {
        context: String,
        branch: Branch,
        order: Vec<f64>,
        amplitudes: Vec<Complex64>,
        pb: Vec<Quantity>,
        born: f64,
        expansion: f64,
        traces: Vec<TraceTable>,
    },
}

/// A split trace with its numbers flattened for printing.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    pub outcome: f64,
    pub rows: Vec<TraceRow>,
    pub betas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub j: usize,
    pub kind: &'static str,
    pub tail: Quantity,
    pub head: Quantity,
    pub coefficient: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl TraceTable {
    pub fn of<S: Scalar>(t: &SplitTrace<S>) -> Self {
        Self {
            outcome: t.outcome,
            rows: t
                .steps
                .iter()
                .map(|s| TraceRow {
                    j: s.j,
                    kind: match s.kind {
                        crate::multivalued::StepKind::Mu => "mu",
                        crate::multivalued::StepKind::Lambda => "lambda",
                    },
                    tail: Quantity::of(&s.tail),
                    head: Quantity::of(&s.head),
                    coefficient: s.coefficient.as_f64(),
                    gamma: s.gamma,
                    alpha: s.alpha,
                    beta: s.beta,
                })
                .collect(),
            betas: t.betas.clone(),
        }
    }

    fn json(&self) -> Value {
        json!({
            "outcome": self.outcome,
            "steps": self.rows.iter().map(|r| json!({
                "j": r.j,
                "kind": r.kind,
                "T": r.tail.json(),
                "head": r.head.json(),
                "coefficient": json_f64(r.coefficient),
                "gamma": json_f64(r.gamma),
                "alpha": json_f64(r.alpha),
                "beta": json_f64(r.beta),
            })).collect::<Vec<_>>(),
            "betas": self.betas.iter().map(|b| json_f64(*b)).collect::<Vec<_>>(),
        })
    }

    fn cells(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    sig(self.outcome),
                    r.j.to_string(),
                    r.kind.to_string(),
                    r.tail.text(),
                    r.head.text(),
                    sig(r.coefficient),
                    sig(r.gamma),
                    sig(r.alpha),
                    sig(r.beta),
                ]
            })
            .collect()
    }
}

const TRACE_HEADERS: [&str; 9] = ["outcome", "j", "step", "T_j", "s_j^2", "coefficient", "gamma", "alpha", "beta"];

/// Amplitude of one context: complex for trigonometric contexts of a
/// dichotomous pair, split-complex for hyperbolic ones, and the splitting
/// trace when `a` takes more than two values.
pub fn represent_report<S: Scalar>(
    model: &Model<S>,
    a_name: &str,
    b_name: &str,
    context: &str,
    branch: Branch,
    basis_context: Option<&str>,
) -> Result<StateReport> {
    let a = model.variable(a_name)?;
    let b = model.variable(b_name)?;
    let e = model.context(context)?;
    let space = &model.space;
    if !is_incompatible(space, a, b)? {
        return Err(Error::NotIncompatible { a: a_name.into(), b: b_name.into() });
    }

    if !(a.is_dichotomous() && b.is_dichotomous()) {
        let m = represent_multivalued(space, a, b, &e, branch)?;
        return Ok(StateReport::Multivalued {
            context: context.to_string(),
            branch,
            order: a.spectrum().to_vec(),
            amplitudes: m.amplitudes.clone(),
            pb: quantities(&m.profile.pb),
            born: m.born_residual(),
            expansion: crate::multivalued::interference_expansion(&m, &m.profile),
            traces: m.traces.iter().map(TraceTable::of).collect(),
        });
    }

    let profile = interference_lambda(space, a, b, &e)?;
    if profile.class == ContextClass::Hyperbolic {
        let h = represent_hyperbolic(space, a, b, &e)?;
        return Ok(StateReport::Hyperbolic {
            context: context.to_string(),
            lambda: profile.lambda_values(),
            sign: h.sign,
            theta: h.theta,
            amplitudes: h.amplitudes,
            pb: quantities(&h.profile.pb),
            born: h.born_residual(),
        });
    }

    let ds = profile.transition.is_double_stochastic()?;
    let convention = if ds { PhaseConvention::Canonical } else { PhaseConvention::PerOutcome };
    let rep = represent(space, a, b, &e, branch, convention)?;
    let operators = if ds {
        let name = match basis_context {
            Some(n) => Some(n.to_string()),
            None => elect_basis_context(model, a, b),
        };
        match name {
            Some(name) => {
                let basis = build_a_basis(space, a, b, &model.context(&name)?, branch)?;
                let a_hat = operator_a(a, &basis)?;
                let b_hat = operator_b(b)?;
                let classical = |v: &RandomVariable, p: &[S]| crate::hilbert::classical_expectation(v.spectrum(), p);
                Some(Box::new(OperatorReport {
                    basis_context: name,
                    e_a: [[basis.e_a[0][0], basis.e_a[0][1]], [basis.e_a[1][0], basis.e_a[1][1]]],
                    v: basis.v,
                    unitarity_defect: basis.unitarity_defect(),
                    born_a: born_a_residual_with(&rep, &basis)?,
                    commutator: commutator(&b_hat, &a_hat),
                    commutator_closed_form: commutator_closed_form(a_hat.spectrum, b_hat.spectrum, basis.q),
                    expectation_a: (expectation(&a_hat, &rep.state)?, classical(a, &profile.pa)),
                    expectation_b: (expectation(&b_hat, &rep.state)?, classical(b, &profile.pb)),
                    a_hat: a_hat.matrix,
                    b_hat: b_hat.matrix,
                }))
            }
            None => None,
        }
    } else {
        None
    };
    Ok(StateReport::Trigonometric {
        context: context.to_string(),
        branch,
        convention,
        lambda: profile.lambda_values(),
        theta: rep.phases.theta,
        amplitudes: [rep.state.amplitudes[0], rep.state.amplitudes[1]],
        pb: quantities(&profile.pb),
        born_b: rep.born_b_residual(),
        operators,
    })
}

impl Render for StateReport {
    fn text(&self) -> String {
        let mut out = String::new();
        match self {
            StateReport::Trigonometric { context, branch, convention, lambda, theta, amplitudes, pb, born_b, operators } => {
                let _ = writeln!(out, "context {context}: trigonometric, branch {branch:?}, {convention:?} phases");
                let rows: Vec<Vec<String>> = (0..2)
                    .map(|x| {
                        vec![
                            format!("b_{}", x + 1),
                            sig(lambda[x]),
                            sig(theta[x]),
                            text_complex(amplitudes[x]),
                            sig(amplitudes[x].norm_sqr()),
                            pb[x].text(),
                        ]
                    })
                    .collect();
                out.push_str(&table(&["outcome", "lambda", "theta", "amplitude", "|amplitude|^2", "p_C^b"], &rows));
                let _ = writeln!(out, "born_b residual {}", sig(*born_b));
                if let Some(op) = operators {
                    let _ = writeln!(out, "a-basis from context {}", op.basis_context);
                    for (k, e) in op.e_a.iter().enumerate() {
                        let _ = writeln!(out, "  e_{}^a = ({}, {})", k + 1, text_complex(e[0]), text_complex(e[1]));
                    }
                    let _ = writeln!(out, "  |V V* - I|_max = {}", sig(op.unitarity_defect));
                    let _ = writeln!(out, "born_a residual {}", sig(op.born_a));
                    let _ = writeln!(out, "a_hat = {}", text_matrix(&op.a_hat));
                    let _ = writeln!(out, "b_hat = {}", text_matrix(&op.b_hat));
                    let _ = writeln!(out, "[b_hat, a_hat] = {}", text_matrix(&op.commutator));
                    let _ = writeln!(out, "closed form    = {}", text_matrix(&op.commutator_closed_form));
                    let _ = writeln!(out, "E(a|C) = {} (classical {})", sig(op.expectation_a.0), sig(op.expectation_a.1));
                    let _ = writeln!(out, "E(b|C) = {} (classical {})", sig(op.expectation_b.0), sig(op.expectation_b.1));
                }
            }
            StateReport::Hyperbolic { context, lambda, sign, theta, amplitudes, pb, born } => {
                let _ = writeln!(out, "context {context}: hyperbolic, split-complex amplitudes (j^2 = 1)");
                let rows: Vec<Vec<String>> = (0..2)
                    .map(|x| {
                        vec![
                            format!("b_{}", x + 1),
                            sig(lambda[x]),
                            sig(sign[x]),
                            sig(theta[x]),
                            text_split(amplitudes[x]),
                            sig(amplitudes[x].split_modulus()),
                            pb[x].text(),
                        ]
                    })
                    .collect();
                out.push_str(&table(&["outcome", "lambda", "sign", "theta", "amplitude", "z conj(z)", "p_C^b"], &rows));
                let _ = writeln!(out, "born residual {}", sig(*born));
                let _ = writeln!(out, "no a-basis or operators are built for hyperbolic contexts");
            }
            StateReport::Multivalued { context, branch, order, amplitudes, pb, born, expansion, traces } => {
                let _ = writeln!(out, "context {context}: splitting order {}, branch {branch:?}", floats_text(order));
                let rows: Vec<Vec<String>> = traces.iter().flat_map(TraceTable::cells).collect();
                out.push_str(&table(&TRACE_HEADERS, &rows));
                for (x, z) in amplitudes.iter().enumerate() {
                    let _ = writeln!(out, "phi(b_{}) = {}  |phi|^2 = {}  p_C^b = {}", x + 1, text_complex(*z), sig(z.norm_sqr()), pb[x].text());
                }
                let _ = writeln!(out, "born residual {}  expansion residual {}", sig(*born), sig(*expansion));
            }
        }
        out
    }

    fn json(&self) -> Value {
        match self {
            StateReport::Trigonometric { context, branch, convention, lambda, theta, amplitudes, pb, born_b, operators } => {
                json!({
                    "kind": "trigonometric",
                    "context": context,
                    "branch": branch,
                    "convention": convention,
                    "lambda": lambda.iter().map(|l| json_f64(*l)).collect::<Vec<_>>(),
                    "theta": theta.iter().map(|t| json_f64(*t)).collect::<Vec<_>>(),
                    "amplitudes": amplitudes.iter().map(|z| json_complex(*z)).collect::<Vec<_>>(),
                    "pb": list_json(pb),
                    "born_b_residual": json_f64(*born_b),
                    "operators": operators.as_ref().map(|op| json!({
                        "basis_context": op.basis_context,
                        "e_a": op.e_a.iter().map(|e| e.iter().map(|z| json_complex(*z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "v": json_matrix(&op.v),
                        "unitarity_defect": json_f64(op.unitarity_defect),
                        "born_a_residual": json_f64(op.born_a),
                        "a_hat": json_matrix(&op.a_hat),
                        "b_hat": json_matrix(&op.b_hat),
                        "commutator": json_matrix(&op.commutator),
                        "commutator_closed_form": json_matrix(&op.commutator_closed_form),
                        "expectation_a": [json_f64(op.expectation_a.0), json_f64(op.expectation_a.1)],
                        "expectation_b": [json_f64(op.expectation_b.0), json_f64(op.expectation_b.1)],
                    })),
                })
            }
            StateReport::Hyperbolic { context, lambda, sign, theta, amplitudes, pb, born } => json!({
                "kind": "hyperbolic",
                "context": context,
                "lambda": lambda.iter().map(|l| json_f64(*l)).collect::<Vec<_>>(),
                "sign": sign,
                "theta": theta.iter().map(|t| json_f64(*t)).collect::<Vec<_>>(),
                "amplitudes": amplitudes.iter().map(|z| json!({"re": json_f64(z.re), "hy": json_f64(z.hy)})).collect::<Vec<_>>(),
                "pb": list_json(pb),
                "born_residual": json_f64(*born),
            }),
            StateReport::Multivalued { context, branch, order, amplitudes, pb, born, expansion, traces } => json!({
                "kind": "multivalued",
                "context": context,
                "branch": branch,
                "order": order,
                "amplitudes": amplitudes.iter().map(|z| json_complex(*z)).collect::<Vec<_>>(),
                "pb": list_json(pb),
                "born_residual": json_f64(*born),
                "expansion_residual": json_f64(*expansion),
                "traces": traces.iter().map(TraceTable::json).collect::<Vec<_>>(),
            }),
        }
    }

    fn csv(&self) -> String {
        match self {
            StateReport::Trigonometric { lambda, theta, amplitudes, pb, .. } => {
                let mut out = csv_line(&["outcome", "lambda", "theta", "re", "im", "p"].map(String::from));
                for x in 0..2 {
                    out.push_str(&csv_line(&[
                        (x + 1).to_string(),
                        sig(lambda[x]),
                        sig(theta[x]),
                        sig(amplitudes[x].re),
                        sig(amplitudes[x].im),
                        pb[x].text(),
                    ]));
                }
                out
            }
            StateReport::Hyperbolic { lambda, sign, theta, amplitudes, pb, .. } => {
                let mut out = csv_line(&["outcome", "lambda", "sign", "theta", "re", "hy", "p"].map(String::from));
                for x in 0..2 {
                    out.push_str(&csv_line(&[
                        (x + 1).to_string(),
                        sig(lambda[x]),
                        sig(sign[x]),
                        sig(theta[x]),
                        sig(amplitudes[x].re),
                        sig(amplitudes[x].hy),
                        pb[x].text(),
                    ]));
                }
                out
            }
            StateReport::Multivalued { traces, .. } => {
                let mut out = csv_line(&TRACE_HEADERS.map(String::from));
                for t in traces {
                    for row in t.cells() {
                        out.push_str(&csv_line(&row));
                    }
                }
                out
            }
        }
    }
}

/// Split trace of a single outcome, for contexts where some outcomes fail.
pub fn trace_report<S: Scalar>(
    model: &Model<S>,
    a_name: &str,
    b_name: &str,
    context: &str,
    x: usize,
    branch: Branch,
) -> Result<TraceTable> {
    let a = model.variable(a_name)?;
    let b = model.variable(b_name)?;
    Ok(TraceTable::of(&split_trace(&model.space, a, b, &model.context(context)?, x, branch)?))
}

/// Oracle values next to the module values, with their largest disagreement.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub context: String,
    pub oracle: Value,
    pub module: Value,
    pub max_difference: f64,
    /// All probability-level quantities agree exactly (always false in float mode).
    pub exact_agreement: bool,
}

pub fn oracle_report<S: Scalar>(model: &Model<S>, a_name: &str, b_name: &str, context: &str) -> Result<OracleComparison> {
    let a = model.variable(a_name)?;
    let b = model.variable(b_name)?;
    let e = model.context(context)?;
    let record: OracleRecord<S> = oracle(model.space.weights(), a.values(), b.values(), e.mask())
        .ok_or(Error::DegenerateContext)?;
    let (module, diff, exact) = if a.is_dichotomous() {
        let p = interference_lambda(&model.space, a, b, &e)?;
        let mut diff = 0.0f64;
        let mut exact = S::EXACT;
        for (x, y) in p.pa.iter().chain(&p.pb).chain(&p.delta).zip(record.pa.iter().chain(&record.pb).chain(&record.delta)) {
            diff = diff.max((x.to_f64() - y.to_f64()).abs());
            exact &= x == y;
        }
        for (l, (lo, sq)) in p.lambda.iter().zip(record.lambda.iter().zip(&record.lambda_square)) {
            if l.as_f64().is_finite() && lo.is_finite() {
                diff = diff.max((l.as_f64() - lo).abs());
            }
            exact &= l.square() == sq.as_ref() || (sq.is_none() && l.square().is_none());
        }
        let module = json!({
            "pa": p.pa.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "pb": p.pb.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "delta": p.delta.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "lambda": p.lambda.iter().map(|l| LambdaCell::of(l).json()).collect::<Vec<_>>(),
            "class": p.class,
        });
        (module, diff, exact)
    } else {
        let p = crate::multivalued::multi_profile(&model.space, a, b, &e)?;
        let mut diff = 0.0f64;
        let mut exact = S::EXACT;
        for (x, y) in p.pa.iter().chain(&p.pb).zip(record.pa.iter().chain(&record.pb)) {
            diff = diff.max((x.to_f64() - y.to_f64()).abs());
            exact &= x == y;
        }
        let module = json!({
            "pa": p.pa.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "pb": p.pb.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        });
        (module, diff, exact)
    };
    Ok(OracleComparison {
        context: context.to_string(),
        oracle: record.to_json(),
        module,
        max_difference: diff,
        exact_agreement: exact,
    })
}

impl Render for OracleComparison {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "context {}", self.context);
        let _ = writeln!(out, "oracle: {}", self.oracle);
        let _ = writeln!(out, "module: {}", self.module);
        let _ = writeln!(out, "max difference {}  exact agreement {}", sig(self.max_difference), self.exact_agreement);
        out
    }

    fn json(&self) -> Value {
        json!({
            "context": self.context,
            "oracle": self.oracle,
            "module": self.module,
            "max_difference": json_f64(self.max_difference),
            "exact_agreement": self.exact_agreement,
        })
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&["context", "max_difference", "exact_agreement"].map(String::from));
        out.push_str(&csv_line(&[self.context.clone(), sig(self.max_difference), self.exact_agreement.to_string()]));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelFile;
    use num_rational::BigRational;

    fn load(text: &str) -> Model<BigRational> {
        ModelFile::from_json(text).unwrap().build().unwrap()
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig(2f64.sqrt() / 4.0), "0.353553390593");
        assert_eq!(sig(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(sig(1.0), "1");
        assert_eq!(sig(0.0), "0");
        assert_eq!(sig(1234.5), "1234.5");
        assert_eq!(sig(1e-20), "1.00000000000e-20");
    }

    #[test]
    fn u4_analysis() {
        let m = load(crate::fixtures::U4_JSON);
        let r = analyze(&m, "a", "b", &[], Branch::Plus, None).unwrap();
        let names: Vec<&str> = r.rows.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, vec!["C1", "Omega"]);
        assert_eq!(r.basis_context.as_deref(), Some("C1"));
        let c1 = &r.rows[0];
        assert!((c1.lambda[0].value - 2f64.sqrt() / 4.0).abs() < 1e-15);
        assert_eq!(c1.lambda[0].square.as_ref().unwrap().exact.as_deref(), Some("1/8"));
        assert_eq!(r.rows[1].lambda[0].value, 0.0);
        assert!(r.rows.iter().all(|row| row.status == Status::Pass));
        let json = r.json();
        assert_eq!(json["contexts"][0]["pb"][0], "2/3");
        let csv = r.csv();
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn h6_analysis() {
        let m = load(crate::fixtures::H6_JSON);
        let r = analyze(&m, "a", "b", &["C_hyp".into()], Branch::Plus, None).unwrap();
        let row = &r.rows[0];
        assert_eq!(row.class, Some(ContextClass::Hyperbolic));
        assert!((row.phases[0] - 3f64.ln()).abs() < 1e-12);
        assert_eq!(row.status, Status::Pass);
    }

    #[test]
    fn identical_pair_is_refused() {
        let m = load(crate::fixtures::U4_JSON);
        let err = analyze(&m, "a", "a", &[], Branch::Plus, None).unwrap_err();
        assert_eq!(err, Error::NotIncompatible { a: "a".into(), b: "a".into() });
    }

    #[test]
    fn censuses() {
        let u = crate::fixtures::u4();
        let c = census(&u.space, &u.a, &u.b, None).unwrap();
        assert_eq!(c.enumerated, 15);
        assert!(c.is_conserved() && c.is_complete());
        assert!(c.witnesses[&ContextClass::Degenerate].iter().any(|w| w.len() == 1));
        let h = crate::fixtures::h6();
        let c = census(&h.space, &h.a, &h.b, None).unwrap();
        assert_eq!(c.enumerated, 63);
        assert!(c.counts[&ContextClass::Hyperbolic] >= 1);
        assert!(c.is_conserved());
    }

    #[test]
    fn state_reports() {
        let m = load(crate::fixtures::U4_JSON);
        let r = represent_report(&m, "a", "b", "C1", Branch::Plus, None).unwrap();
        let StateReport::Trigonometric { operators: Some(op), born_b, .. } = &r else { panic!("{r:?}") };
        assert!(*born_b < 1e-12 && op.born_a < 1e-12);
        assert!((op.expectation_b.0 - op.expectation_b.1).abs() < 1e-12);
        assert!(r.text().contains("born_b residual"));

        let m = load(crate::fixtures::H6_JSON);
        let r = represent_report(&m, "a", "b", "C_hyp", Branch::Plus, None).unwrap();
        assert!(matches!(r, StateReport::Hyperbolic { born, .. } if born < 1e-12));

        let m = load(crate::fixtures::U9_JSON);
        let r = represent_report(&m, "a", "b", "Omega", Branch::Plus, None).unwrap();
        let StateReport::Multivalued { traces, born, .. } = &r else { panic!() };
        assert_eq!(traces.len(), 3);
        assert!(*born < 1e-12);
        assert_eq!(r.csv().lines().count(), 7);
    }

    #[test]
    fn oracle_comparisons() {
        let m = load(crate::fixtures::U4_JSON);
        let r = oracle_report(&m, "a", "b", "C1").unwrap();
        assert!(r.exact_agreement);
        assert_eq!(r.max_difference, 0.0);
        let m: Model<f64> = ModelFile::from_json(crate::fixtures::H6_JSON).unwrap().build().unwrap();
        let r = oracle_report(&m, "a", "b", "C_hyp").unwrap();
        assert!(r.max_difference < 1e-12);
    }
}
