//! Contextual probability on finite probability spaces.
//!
//! A context is an event of positive probability. Conditioning two
//! incompatible random variables on it perturbs the classical formula of
//! total probability by an interference term. This crate computes that term
//! and its normalized coefficient, classifies contexts by the size of the
//! coefficient, and represents the conditional distribution as a complex
//! amplitude (or a split-complex one when the coefficient exceeds one) whose
//! squared modulus gives the probabilities back.
//!
//! ```
//! use kontext::calculus::{interference_lambda, ContextClass};
//! use kontext::fixtures;
//!
//! let u = fixtures::u4();
//! let p = interference_lambda(&u.space, &u.a, &u.b, &u.context("C1")).unwrap();
//! assert_eq!(p.class, ContextClass::Trigonometric);
//! assert!((p.lambda[0].as_f64() - 2f64.sqrt() / 4.0).abs() < 1e-15);
//! ```
//!
//! Arithmetic is exact (`BigRational`) by default; every entry point is
//! generic over [`scalar::Scalar`] and also runs on `f64`.

pub mod calculus;
pub mod error;
pub mod fixtures;
pub mod hilbert;
pub mod hyperbolic;
pub mod kolmogorov;
pub mod model;
pub mod multivalued;
pub mod oracle;
pub mod random;
pub mod report;
pub mod scalar;

pub use calculus::{classify, interference_lambda, ContextClass, ContextProfile};
pub use error::{Error, Result};
pub use hilbert::{represent, Branch, PhaseConvention, StateVector};
pub use hyperbolic::{represent_hyperbolic, SplitComplex};
pub use kolmogorov::{Event, FiniteSpace, RandomVariable};
pub use model::{Model, ModelFile};
pub use multivalued::represent_multivalued;
