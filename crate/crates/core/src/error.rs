use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("scenario has no variables")]
    NoVariables,
    #[error("scenario has no outcomes")]
    NoOutcomes,
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("duplicate outcome `{0}`")]
    DuplicateOutcome(String),
    #[error("context {0} is empty")]
    EmptyContext(usize),
    #[error("context {context} references unknown variable `{name}`")]
    UnknownVariable { context: usize, name: String },
    #[error("context {context} repeats variable `{name}`")]
    RepeatedVariable { context: usize, name: String },
    #[error("context {0} duplicates context {1}")]
    DuplicateContext(usize, usize),
    #[error("unknown context")]
    UnknownContext,
    #[error("unknown variable `{0}`")]
    UnknownVariableName(String),
    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),
    #[error("variables {0:?} are not contained in the assignment's domain")]
    NotInDomain(Vec<String>),
    #[error("cell index {index} out of range (n = {cells})")]
    CellOutOfRange { index: usize, cells: usize },
    #[error("assignment does not match context")]
    AssignmentMismatch,
    #[error("global assignment must cover all {0} variables")]
    PartialGlobalAssignment(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("expected a vector of length {expected}, got {actual}")]
    WrongLength { expected: usize, actual: usize },
    #[error("context {context} is not normalized (sum = {sum})")]
    NotNormalized { context: usize, sum: String },
    #[error("negative entry {value} at cell {cell}")]
    NegativeEntry { cell: usize, value: String },
    #[error("models are defined on different scenarios")]
    ScenarioMismatch,
    #[error("weights must sum to 1 (got {0})")]
    WeightSum(String),
    #[error("negative weight {0}")]
    NegativeWeight(String),
    #[error("{models} models but {weights} weights")]
    WeightCount { models: usize, weights: usize },
    #[error("empty convex combination")]
    EmptyCombination,
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(
        "the constraint system does not define a bounded polytope (coordinate {0} is unbounded)"
    )]
    Unbounded(usize),
    #[error("point is not in the polytope")]
    NotInPolytope,
    #[error("support is not achievable")]
    NotAchievable,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("support is not a node of the lattice")]
    NotANode,
    #[error(
        "face oracle refused: {cells} cells exceeds the limit of {limit} (use force to override)"
    )]
    OracleTooLarge { cells: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextualityError {
    #[error("model is signalling: {0}")]
    Signalling(String),
    #[error("{count} global assignments exceed the limit of {limit}")]
    TooManyAssignments { count: String, limit: usize },
    #[error("variable `{0}` occurs in no context")]
    UnmeasuredVariable(String),
    #[error("marginal support of `{0}` differs between contexts")]
    MarginalDisagreement(String),
    #[error("context {0} does not have exactly two variables")]
    NotPairwise(usize),
    #[error("contexts do not form the complete family of variable pairs")]
    IncompletePairFamily,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("invalid document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
}

impl FormatError {
    pub(crate) fn field(path: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError::Field {
            path: path.into(),
            message: message.into(),
        }
    }
}
