use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while building or analysing a contextual model.
///
/// Variants fall into three families that the command line maps onto distinct
/// exit codes: invalid models, violated preconditions, and contexts that admit
/// no amplitude representation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    // --- model consistency ---
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("point `{point}` has negative weight {weight}")]
    NegativeWeight { point: String, weight: String },
    #[error("cannot parse weight `{text}` of point `{point}`")]
    BadWeight { point: String, text: String },
    #[error("total mass {total}, expected 1")]
    TotalMass { total: String },
    #[error("sample space is empty")]
    EmptySpace,
    #[error("variable `{variable}` has no value at point `{point}`")]
    MissingAssignment { variable: String, point: String },
    #[error("variable `{variable}` has a non-finite value")]
    NonFiniteValue { variable: String },
    #[error("variable `{variable}` takes fewer than two distinct values")]
    SpectrumTooSmall { variable: String },
    #[error("object built for a space of {found} points used with a space of {expected}")]
    SpaceMismatch { expected: usize, found: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown context `{0}`")]
    UnknownContext(String),
    #[error("model file: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("model is invalid: {}", .0.join("; "))]
    Invalid(Vec<String>),

    // --- preconditions ---
    #[error("conditioning event has zero probability")]
    DegenerateContext,
    #[error("context has zero-mass intersection with cells {cells:?}")]
    DegenerateCells { cells: Vec<usize> },
    #[error("level set {cell} of variable `{variable}` has zero probability")]
    DegenerateVariable { variable: String, cell: usize },
    #[error("variable `{variable}` must be dichotomous, it takes {values} values")]
    NotDichotomous { variable: String, values: usize },
    #[error("variables `{a}` and `{b}` are not incompatible: some joint level set is null")]
    NotIncompatible { a: String, b: String },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("events D1 and D2 must be disjoint")]
    NotDisjoint,
    #[error("{quantity} vanishes")]
    Positivity { quantity: String },
    #[error("transition matrix is not double stochastic (column sums {column_sums:?})")]
    NotDoubleStochastic { column_sums: Vec<String> },
    #[error("basis change matrix is not unitary (max deviation {deviation:e})")]
    NonUnitary { deviation: f64 },
    #[error("context is {class}, expected {expected} (coefficients {coefficients:?})")]
    Classification {
        class: String,
        expected: String,
        coefficients: Vec<f64>,
    },
    #[error("phase convention: {0}")]
    Convention(String),
    #[error("|lambda| = {0} is below 1; use the trigonometric representation")]
    HyperbolicDomain(f64),
    #[error("cosine argument {0} lies outside [-1, 1]")]
    PhaseDomain(f64),
    #[error("state is not normalized (norm {0})")]
    Unnormalized(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{points} points give 2^{points} subsets, above the enumeration limit 2^{limit}")]
    SizeGuard { points: usize, limit: usize },
    #[error("{points} points cannot cover {cells} joint cells")]
    InfeasibleShape { points: usize, cells: usize },

    // --- representability ---
    #[error("step {step}: coefficient {value} has modulus above 1")]
    NonRepresentable { step: usize, value: f64 },
    #[error("step {step}: tail probability vanishes")]
    ZeroTail { step: usize },
    #[error("outcomes failed: {}", .0.iter().map(|(x, e)| format!("b={x}: {e}")).collect::<Vec<_>>().join("; "))]
    Outcomes(Vec<(f64, Error)>),
}

impl Error {
    /// Process exit code: 1 invalid model, 2 failed precondition, 3 non-representable.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            UnknownPoint(_) | DuplicatePoint(_) | NegativeWeight { .. } | BadWeight { .. }
            | TotalMass { .. } | EmptySpace | MissingAssignment { .. } | NonFiniteValue { .. }
            | SpectrumTooSmall { .. } | SpaceMismatch { .. } | UnknownVariable(_)
            | UnknownContext(_) | Parse(_) | Io(_) | Invalid(_) => 1,
            NonRepresentable { .. } => 3,
            Outcomes(inner) => inner.iter().map(|(_, e)| e.exit_code()).max().unwrap_or(2),
            _ => 2,
        }
    }
}
