use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Variable indices are stored 0-based and printed 1-based.
struct Scope<'a>(&'a [usize]);

impl fmt::Display for Scope<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("an instance needs at least one variable")]
    EmptyInstance,
    #[error("expected {expected} domain sizes, found {found}")]
    DomainCount { expected: usize, found: usize },
    #[error("variable {} has domain size {size}; at least 2 is required", .var + 1)]
    DomainSize { var: usize, size: usize },
    #[error("scope {} is not strictly increasing", Scope(.scope))]
    ScopeOrder { scope: Vec<usize> },
    #[error("scope refers to variable {} but the instance has {n} variables", .var + 1)]
    ScopeRange { var: usize, n: usize },
    #[error("constraint on scope {} needs {expected} values, found {found}", Scope(.scope))]
    TableSize {
        scope: Vec<usize>,
        expected: usize,
        found: usize,
    },
    #[error("more than one constraint on scope {}", Scope(.scope))]
    DuplicateScope { scope: Vec<usize> },
    #[error("integer overflow: {0}")]
    Overflow(&'static str),
    #[error("assignment has {found} entries, instance has {expected} variables")]
    Dimension { expected: usize, found: usize },
    #[error("variable {} takes value {value} outside its domain of size {size}", .var + 1)]
    ValueOutOfDomain { var: usize, value: usize, size: usize },
    #[error("constraint of arity {arity} is not supported here (maximum is 2)")]
    UnsupportedArity { arity: usize },
    #[error("variable {} has domain size {size}; only Boolean domains are supported here", .var + 1)]
    UnsupportedDomain { var: usize, size: usize },
    #[error("assignment space has {required} points, above the budget of {limit}")]
    SizeLimit { required: u128, limit: usize },
    #[error("variable {} has {degree} incident weights, above the limit of {limit}", .var + 1)]
    DegreeLimit {
        var: usize,
        degree: usize,
        limit: usize,
    },
    #[error("stored weights must be nonzero (scope {})", Scope(.scope))]
    ZeroWeight { scope: Vec<usize> },
    #[error("the two instances do not share the same variables and domains")]
    ShapeMismatch,
    #[error("the integer program has no feasible solution")]
    Infeasible,
    #[error("search stopped after {0} nodes without proving optimality")]
    NodeLimit(u64),
    #[error("invalid trace at step {}: {reason}", .step + 1)]
    InvalidTrace { step: usize, reason: &'static str },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("generator self-check failed: {0}")]
    GeneratorInvariant(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code for reports and exit status mapping.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyInstance => "EMPTY_INSTANCE",
            Error::DomainCount { .. } => "DOMAIN_COUNT",
            Error::DomainSize { .. } => "DOMAIN_SIZE",
            Error::ScopeOrder { .. } => "SCOPE_ORDER",
            Error::ScopeRange { .. } => "SCOPE_RANGE",
            Error::TableSize { .. } => "TABLE_SIZE",
            Error::DuplicateScope { .. } => "DUPLICATE_SCOPE",
            Error::Overflow(_) => "OVERFLOW",
            Error::Dimension { .. } => "DIMENSION",
            Error::ValueOutOfDomain { .. } => "DOMAIN_VALUE",
            Error::UnsupportedArity { .. } => "UNSUPPORTED_ARITY",
            Error::UnsupportedDomain { .. } => "UNSUPPORTED_DOMAIN",
            Error::SizeLimit { .. } => "SIZE_LIMIT",
            Error::DegreeLimit { .. } => "DEGREE_LIMIT",
            Error::ZeroWeight { .. } => "ZERO_WEIGHT",
            Error::ShapeMismatch => "SHAPE_MISMATCH",
            Error::Infeasible => "INFEASIBLE",
            Error::NodeLimit(_) => "NODE_LIMIT",
            Error::InvalidTrace { .. } => "INVALID_TRACE",
            Error::InvalidParameter(_) => "INVALID_PARAMETER",
            Error::GeneratorInvariant(_) => "GENERATOR_INVARIANT",
            Error::Internal(_) => "INTERNAL",
        }
    }

    /// Budget errors are reported separately from validation errors.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::SizeLimit { .. } | Error::DegreeLimit { .. } | Error::NodeLimit(_)
        )
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
