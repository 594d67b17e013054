//! Finite Kolmogorov spaces.
//!
//! The sigma-algebra is the full power set of the sample space, so an [`Event`]
//! is any subset of points and every event with positive mass can serve as a
//! context.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{is_one, sum, Scalar};

/// A finite sample space with one nonnegative weight per point, total mass 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace<S> {
    ids: Vec<String>,
    weights: Vec<S>,
    index: HashMap<String, usize>,
}

impl<S: Scalar> FiniteSpace<S> {
    pub fn new<I: Into<String>>(points: impl IntoIterator<Item = (I, S)>) -> Result<Self> {
        let mut ids = Vec::new();
        let mut weights = Vec::new();
        let mut index = HashMap::new();
        for (id, weight) in points {
            let id = id.into();
            if weight.is_negative() {
                return Err(Error::NegativeWeight { point: id, weight: weight.to_string() });
            }
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(Error::DuplicatePoint(id));
            }
            ids.push(id);
            weights.push(weight);
        }
        if ids.is_empty() {
            return Err(Error::EmptySpace);
        }
        let total = sum(&weights);
        if !is_one(&total) {
            return Err(Error::TotalMass { total: total.to_string() });
        }
        Ok(Self { ids, weights, index })
    }

    /// `n` points named `w1..wn`, each of mass `1/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        let w = S::from_ratio(1, n.max(1) as i64);
        Self::new((1..=n).map(|i| (format!("w{i}"), w.clone())))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    /// The event made of the named points.
    pub fn event<I: AsRef<str>>(&self, ids: impl IntoIterator<Item = I>) -> Result<Event> {
        let mut mask = vec![false; self.len()];
        for id in ids {
            mask[self.index_of(id.as_ref())?] = true;
        }
        Ok(Event { mask })
    }

    pub fn whole(&self) -> Event {
        Event { mask: vec![true; self.len()] }
    }

    pub fn empty_event(&self) -> Event {
        Event { mask: vec![false; self.len()] }
    }

    fn check(&self, e: &Event) -> Result<()> {
        if e.universe() != self.len() {
            return Err(Error::SpaceMismatch { expected: self.len(), found: e.universe() });
        }
        Ok(())
    }

    /// Total weight of the event.
    pub fn measure(&self, e: &Event) -> Result<S> {
        self.check(e)?;
        Ok(e.indices().fold(S::zero(), |acc, i| acc + self.weights[i].clone()))
    }

    /// `P(A | C) = P(A ∩ C) / P(C)`; a null conditioning event is an error.
    pub fn cond_prob(&self, event: &Event, given: &Event) -> Result<S> {
        self.check(event)?;
        let mass = self.measure(given)?;
        if !mass.is_positive_tol() {
            return Err(Error::DegenerateContext);
        }
        Ok(self.measure(&event.intersection(given))? / mass)
    }

    /// Builds a named random variable from a point → value map.
    pub fn variable(&self, name: &str, assignment: &HashMap<String, f64>) -> Result<RandomVariable> {
        if let Some(stray) = assignment.keys().find(|k| !self.index.contains_key(k.as_str())) {
            return Err(Error::UnknownPoint(stray.clone()));
        }
        let values = self
            .ids
            .iter()
            .map(|id| {
                assignment.get(id).copied().ok_or_else(|| Error::MissingAssignment {
                    variable: name.to_string(),
                    point: id.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        RandomVariable::new(name, values)
    }

    /// Level sets of `v`, one cell per spectrum value in ascending order.
    pub fn level_partition(&self, v: &RandomVariable) -> Result<Partition> {
        if v.values.len() != self.len() {
            return Err(Error::SpaceMismatch { expected: self.len(), found: v.values.len() });
        }
        let cells = v
            .spectrum
            .iter()
            .map(|&y| Event { mask: v.values.iter().map(|&val| val == y).collect() })
            .collect();
        Ok(Partition { values: v.spectrum.clone(), cells })
    }

    /// `P(B|C) - Σ_j P(A_j|C) P(B|A_j C)` over the cells of a partition.
    ///
    /// Zero for every input; exists as a self-check of the arithmetic.
    pub fn classical_ftp_residual(&self, b: &Event, cells: &Partition, c: &Event) -> Result<S> {
        let mut degenerate = Vec::new();
        let mut total = S::zero();
        for (j, cell) in cells.cells.iter().enumerate() {
            let joint = cell.intersection(c);
            if !self.measure(&joint)?.is_positive_tol() {
                degenerate.push(j);
                continue;
            }
            total = total + self.cond_prob(cell, c)? * self.cond_prob(b, &joint)?;
        }
        if !degenerate.is_empty() {
            return Err(Error::DegenerateCells { cells: degenerate });
        }
        Ok(self.cond_prob(b, c)? - total)
    }
}

/// A subset of the sample space, stored as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    mask: Vec<bool>,
}

impl Event {
    pub fn from_mask(mask: Vec<bool>) -> Self {
        Self { mask }
    }

    /// The subset of an `n`-point space whose members are the set bits of `bits`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Self { mask: (0..n).map(|i| bits >> i & 1 == 1).collect() }
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; n];
        for i in indices {
            mask[i] = true;
        }
        Self { mask }
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i)
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    pub fn intersection(&self, other: &Event) -> Event {
        self.zip(other, |x, y| x && y)
    }

    pub fn union(&self, other: &Event) -> Event {
        self.zip(other, |x, y| x || y)
    }

    pub fn complement(&self) -> Event {
        Event { mask: self.mask.iter().map(|m| !m).collect() }
    }

    pub fn is_disjoint(&self, other: &Event) -> bool {
        self.intersection(other).is_empty()
    }

    fn zip(&self, other: &Event, f: impl Fn(bool, bool) -> bool) -> Event {
        debug_assert_eq!(self.universe(), other.universe());
        Event { mask: self.mask.iter().zip(&other.mask).map(|(&x, &y)| f(x, y)).collect() }
    }

    /// Point identifiers of the members.
    pub fn labels<'a, S>(&'a self, space: &'a FiniteSpace<S>) -> Vec<&'a str> {
        self.indices().map(|i| space.ids[i].as_str()).collect()
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", members.join(","))
    }
}

/// A real-valued function on the sample space with at least two distinct values.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomVariable {
    name: String,
    values: Vec<f64>,
    spectrum: Vec<f64>,
}

impl RandomVariable {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { variable: name });
        }
        let mut spectrum = values.clone();
        spectrum.sort_by(f64::total_cmp);
        spectrum.dedup();
        if spectrum.len() < 2 {
            return Err(Error::SpectrumTooSmall { variable: name });
        }
        Ok(Self { name, values, spectrum })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Distinct values, ascending. Index `k` here is index `k` of every
    /// matrix, profile and amplitude built from this variable.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn is_dichotomous(&self) -> bool {
        self.spectrum.len() == 2
    }

    pub(crate) fn require_dichotomous(&self) -> Result<()> {
        if self.is_dichotomous() {
            Ok(())
        } else {
            Err(Error::NotDichotomous { variable: self.name.clone(), values: self.spectrum.len() })
        }
    }
}

/// Level-set partition of a variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub values: Vec<f64>,
    pub cells: Vec<Event>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, k: usize) -> &Event {
        &self.cells[k]
    }

    /// Union of the cells `from..`.
    pub fn tail(&self, from: usize) -> Event {
        let n = self.cells.first().map_or(0, Event::universe);
        self.cells[from..].iter().fold(Event::from_mask(vec![false; n]), |acc, c| acc.union(c))
    }

    /// Cells are pairwise disjoint and cover the space.
    pub fn is_valid(&self) -> bool {
        let Some(first) = self.cells.first() else { return false };
        (0..first.universe()).all(|i| self.cells.iter().filter(|c| c.contains(i)).count() == 1)
    }
}
