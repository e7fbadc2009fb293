use thiserror::Error;

use crate::lattice::AxiomViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown lattice `{0}`")]
    UnknownLattice(String),

    #[error("grid size must be at least 2 (got {0})")]
    GridTooSmall(usize),

    #[error("lattice `{name}` would have {size} elements, over the limit of {limit}")]
    LatticeTooLarge {
        name: String,
        size: usize,
        limit: usize,
    },

    #[error("`{0}` is not an element of the active lattice")]
    UnknownElement(String),

    #[error("invalid lattice `{name}`: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidLattice {
        name: String,
        violations: Vec<AxiomViolation>,
    },

    #[error("no residuum for ({a}, {b}): the join `{join}` of the candidate set is not itself a candidate")]
    NotResiduated { a: String, b: String, join: String },

    #[error("predicate `{predicate}` used with arity {found}, declared with arity {declared}")]
    Arity {
        predicate: String,
        declared: usize,
        found: usize,
    },

    #[error("fact `{0}` contains a variable")]
    VariableInFact(String),

    #[error("rules contain variables but the program has no constants")]
    EmptyConstants,

    #[error("program is not stratified: `{0}` depends negatively on itself")]
    NotStratified(String),

    #[error("atom `{0}` is not in the Herbrand base")]
    UnknownAtom(String),

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("world {0} does not exist in this model")]
    UnknownWorld(String),

    #[error("operator `{operator}` cannot be evaluated in {model} models")]
    WrongMode {
        operator: &'static str,
        model: &'static str,
    },

    #[error("connective `{0}` cannot be encapsulated")]
    NotEncapsulable(String),

    #[error("unknown connective `{0}`")]
    UnknownConnective(String),

    #[error("{what} needs {required} but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: String,
        budget: usize,
    },

    #[error("bare formula `{0}` in a thesis set needs a matrix of designated values")]
    MissingMatrix(String),

    #[error("designated set must be a non-empty subset of the carrier")]
    EmptyDesignated,

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
