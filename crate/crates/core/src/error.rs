use thiserror::Error;

use crate::formula::Variable;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: clause contains both {var} and -{var}")]
    TautologicalClause { line: usize, var: u32 },

    #[error("clause contains both polarities of variable {0}")]
    ComplementaryLiterals(Variable),

    #[error("{what}: {value} exceeds the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("unknown formula family `{0}`")]
    UnknownFamily(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),

    #[error("variable {0} is not in the formula")]
    UnknownVariable(Variable),

    #[error("order is not a permutation of the formula's variables")]
    InvalidOrder,

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("formula is not nested")]
    NotNested,

    #[error("invalid grid model: {0}")]
    InvalidGridModel(String),

    #[error("invalid obstruction: {0}")]
    InvalidObstruction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal structural error: {0}")]
    Structural(String),

    #[error("candidate provider returned an empty set for a non-nested formula")]
    ProviderContract,

    #[error("not a strong backdoor: the reduct under {} is not nested", format_assignment(.assignment))]
    InvalidBackdoor { assignment: Vec<(Variable, bool)> },
}

fn format_assignment(assignment: &[(Variable, bool)]) -> String {
    if assignment.is_empty() {
        return "the empty assignment".to_string();
    }
    let parts: Vec<String> = assignment
        .iter()
        .map(|(v, b)| format!("{}={}", v, u8::from(*b)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}
