//! JSON model files.
//!
//! ```json
//! {"space": {"points": [{"id": "w1", "weight": "1/4"}, ...]},
//!  "variables": {"a": {"w1": 1, ...}, "b": {...}},
//!  "contexts": {"C1": ["w1", "w3", "w4"]}}
//! ```
//!
//! Weights are `"p/q"` strings, decimal strings or JSON numbers.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kolmogorov::{Event, FiniteSpace, RandomVariable};
use crate::scalar::{sum, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub space: SpaceSpec,
    pub variables: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(default)]
    pub contexts: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub points: Vec<PointSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSpec {
    pub id: String,
    pub weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weight {
    Text(String),
    Number(serde_json::Number),
}

impl Weight {
    fn text(&self) -> String {
        match self {
            Weight::Text(s) => s.clone(),
            Weight::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("model files always serialize");
        out.push('\n');
        out
    }

    /// Every invariant violation, in file order. Empty means the model is valid.
    pub fn validate<S: Scalar>(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let mut seen = HashSet::new();
        let mut weights = Vec::new();
        if self.space.points.is_empty() {
            problems.push("sample space has no points".to_string());
        }
        for p in &self.space.points {
            if !seen.insert(p.id.as_str()) {
                problems.push(format!("duplicate point `{}`", p.id));
            }
            match S::parse_weight(&p.weight.text()) {
                Some(w) if w.is_negative() => {
                    problems.push(format!("point `{}` has negative weight {}", p.id, w))
                }
                Some(w) => weights.push(w),
                None => problems.push(format!("point `{}`: cannot parse weight `{}`", p.id, p.weight.text())),
            }
        }
        if weights.len() == self.space.points.len() && !weights.is_empty() {
            let total: S = sum(&weights);
            if !crate::scalar::is_one(&total) {
                problems.push(format!("total mass {total}, expected 1"));
            }
        }
        if self.variables.len() < 2 {
            problems.push(format!("{} variable(s) defined, need at least 2", self.variables.len()));
        }
        for (name, assignment) in &self.variables {
            for id in assignment.keys().filter(|id| !seen.contains(id.as_str())) {
                problems.push(format!("variable `{name}` assigns unknown point `{id}`"));
            }
            for p in self.space.points.iter().filter(|p| !assignment.contains_key(&p.id)) {
                problems.push(format!("variable `{name}` has no value at point `{}`", p.id));
            }
            if assignment.values().any(|v| !v.is_finite()) {
                problems.push(format!("variable `{name}` has a non-finite value"));
            }
            let mut distinct: Vec<f64> = assignment.values().copied().collect();
            distinct.sort_by(f64::total_cmp);
            distinct.dedup();
            if distinct.len() < 2 {
                problems.push(format!("variable `{name}` takes fewer than two distinct values"));
            }
        }
        for (name, members) in &self.contexts {
            for id in members.iter().filter(|id| !seen.contains(id.as_str())) {
                problems.push(format!("context `{name}` names unknown point `{id}`"));
            }
        }
        problems
    }

    /// Checks every invariant and builds the typed model.
    pub fn build<S: Scalar>(&self) -> Result<Model<S>> {
        let problems = self.validate::<S>();
        if !problems.is_empty() {
            return Err(Error::Invalid(problems));
        }
        let space = FiniteSpace::new(self.space.points.iter().map(|p| {
            (p.id.clone(), S::parse_weight(&p.weight.text()).expect("validated"))
        }))?;
        let variables = self
            .variables
            .iter()
            .map(|(name, assignment)| {
                let map: HashMap<String, f64> =
                    assignment.iter().map(|(k, v)| (k.clone(), *v)).collect();
                Ok((name.clone(), space.variable(name, &map)?))
            })
            .collect::<Result<_>>()?;
        let contexts = self
            .contexts
            .iter()
            .map(|(name, members)| Ok((name.clone(), space.event(members)?)))
            .collect::<Result<_>>()?;
        Ok(Model {
            title: self.metadata.as_ref().and_then(|m| m.title.clone()),
            space,
            variables,
            contexts,
        })
    }
}

/// A validated model: space, named variables and named contexts.
#[derive(Debug, Clone, PartialEq)]
pub struct Model<S> {
    pub title: Option<String>,
    pub space: FiniteSpace<S>,
    pub variables: BTreeMap<String, RandomVariable>,
    pub contexts: BTreeMap<String, Event>,
}

impl<S: Scalar> Model<S> {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        ModelFile::load(path)?.build()
    }

    pub fn variable(&self, name: &str) -> Result<&RandomVariable> {
        self.variables.get(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// A named context. `Omega` names the whole space unless the file defines it.
    pub fn context(&self, name: &str) -> Result<Event> {
        match self.contexts.get(name) {
            Some(e) => Ok(e.clone()),
            None if name == "Omega" => Ok(self.space.whole()),
            None => Err(Error::UnknownContext(name.to_string())),
        }
    }

    /// Label of an event: its name in the file, or its member list.
    pub fn describe(&self, e: &Event) -> String {
        self.contexts
            .iter()
            .find(|(_, c)| *c == e)
            .map(|(n, _)| n.clone())
            .unwrap_or_else(|| format!("{{{}}}", e.labels(&self.space).join(",")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    const U4: &str = include_str!("../fixtures/u4.json");

    #[test]
    fn shipped_fixture_is_valid() {
        let file = ModelFile::from_json(U4).unwrap();
        assert!(file.validate::<BigRational>().is_empty());
        assert!(file.validate::<f64>().is_empty());
        let model: Model<BigRational> = file.build().unwrap();
        assert_eq!(model.space.len(), 4);
        assert_eq!(model.variables.len(), 2);
    }

    #[test]
    fn reports_total_mass() {
        let text = r#"{"space": {"points": [{"id": "x", "weight": 0.5}, {"id": "y", "weight": "0.4"}]},
            "variables": {"a": {"x": 0, "y": 1}, "b": {"x": 1, "y": 0}}}"#;
        let file = ModelFile::from_json(text).unwrap();
        assert_eq!(file.validate::<BigRational>(), vec!["total mass 9/10, expected 1"]);
        assert!(matches!(file.build::<BigRational>(), Err(Error::Invalid(_))));
    }

    #[test]
    fn reports_unknown_context_point() {
        let mut file = ModelFile::from_json(U4).unwrap();
        file.contexts.insert("bad".into(), vec!["w1".into(), "w7".into()]);
        assert_eq!(file.validate::<BigRational>(), vec!["context `bad` names unknown point `w7`"]);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = ModelFile::from_json("{\n  \"space\": [").unwrap_err();
        let Error::Parse(msg) = err else { panic!() };
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn omega_is_implicit() {
        let model: Model<BigRational> = ModelFile::from_json(U4).unwrap().build().unwrap();
        assert_eq!(model.context("Omega").unwrap(), model.space.whole());
        assert_eq!(model.context("nope"), Err(Error::UnknownContext("nope".into())));
    }
}
