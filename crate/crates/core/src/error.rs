use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("rank mismatch: expected {expected} coordinates, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("input element {index} is negative in the group order")]
    NegativeInput { index: usize },
    #[error("matrix is not unimodular")]
    NonUnimodular,
    #[error("basis reduction exceeded {steps} steps")]
    AlgorithmStall { steps: usize },
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("{0} is not a square-free positive integer")]
    NotSquareFree(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative exponent {0} in polynomial power")]
    NegativeExponent(i64),
    #[error("syntax error at offset {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("wrong characteristic: {0}")]
    WrongCharacteristic(String),
    #[error("characteristic {0} is not 0 or a prime below 2^16")]
    InvalidField(u32),
    #[error("operands live in different contexts")]
    ContextMismatch,
    #[error("invalid context: {0}")]
    InvalidContext(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("residue requested for an element of nonzero value")]
    NonzeroValue,
    #[error("element of negative value has no residue")]
    NegativeValue,
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonomializeError {
    #[error("element {index} has negative value")]
    NegativeValue { index: usize },
    #[error("two distinct monomials share the value {0}; values are not injective")]
    NonInjective(String),
    #[error("internal consistency failure: {0}")]
    InternalInconsistency(String),
    #[error("context is invalid: {0}")]
    ContextInvalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("empty center")]
    EmptyCenter,
    #[error("local ring has dimension zero")]
    DimensionZero,
    #[error("base rings of dimension {0} are not supported (at most 2)")]
    DimensionTooLarge(usize),
    #[error("coefficient {index} has negative value")]
    NegativeValue { index: usize },
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("transform cap of {cap} exceeded; residual: {residual}")]
    IterationCapExceeded { cap: usize, residual: String },
    #[error("rational dependence unresolved for {0}")]
    RationalDependenceUnresolved(String),
    #[error("coefficient {0} is not a polynomial in the parameters")]
    NotInBaseRing(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InertialError {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("element {index} has negative value")]
    NegativeValue { index: usize },
    #[error("denominator of representation {index} is not a unit")]
    NonUnitDenominator { index: usize },
    #[error("base chart does not cover required constant {0}")]
    MissingConstant(String),
    #[error("inertial check failed: {0}")]
    InertialCheckFailed(String),
    #[error("value not determined within the approximation limit: {0}")]
    Undetermined(String),
    #[error(transparent)]
    Monomialize(#[from] MonomializeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}
