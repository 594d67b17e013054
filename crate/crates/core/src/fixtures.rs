//! The three reference models shipped in `fixtures/`.
//!
//! * `u4`: four equally likely points; `a` and `b` split them crosswise.
//! * `h6`: six points whose context `C_hyp = {w1, w5}` is hyperbolic.
//! * `u9`: nine equally likely points, `a` and `b` three-valued, every joint
//!   cell a single point.
//!
//! Every variable is named `a` or `b`, and values are ascending in index order.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::kolmogorov::{Event, FiniteSpace, RandomVariable};
use crate::model::{Model, ModelFile};

pub const U4_JSON: &str = include_str!("../fixtures/u4.json");
pub const H6_JSON: &str = include_str!("../fixtures/h6.json");
pub const U9_JSON: &str = include_str!("../fixtures/u9.json");

/// A model with its two reference variables pulled out.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub space: FiniteSpace<BigRational>,
    pub a: RandomVariable,
    pub b: RandomVariable,
    pub contexts: BTreeMap<String, Event>,
}

impl Fixture {
    fn from_json(text: &str) -> Self {
        let model: Model<BigRational> =
            ModelFile::from_json(text).and_then(|f| f.build()).expect("shipped fixture is valid");
        Self {
            a: model.variables["a"].clone(),
            b: model.variables["b"].clone(),
            space: model.space,
            contexts: model.contexts,
        }
    }

    /// Named context. Panics on an unknown name.
    pub fn context(&self, name: &str) -> Event {
        self.contexts.get(name).cloned().unwrap_or_else(|| panic!("fixture has no context {name}"))
    }

    /// The event made of the named points. Panics on an unknown id.
    pub fn event(&self, ids: &[&str]) -> Event {
        self.space.event(ids).expect("fixture point")
    }
}

pub fn u4() -> Fixture {
    Fixture::from_json(U4_JSON)
}

pub fn h6() -> Fixture {
    Fixture::from_json(H6_JSON)
}

pub fn u9() -> Fixture {
    Fixture::from_json(U9_JSON)
}
