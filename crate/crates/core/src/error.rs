use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed word `{0}`")]
    Word(String),
    #[error("line {line}: {msg}")]
    Tower { line: usize, msg: String },
    #[error("malformed field spec: {0}")]
    Field(String),
    #[error("malformed element: {0}")]
    Element(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("letter {letter} is not valid at stage {stage}")]
    InvalidLetter { letter: String, stage: usize },
    #[error("associated subgroup generator must be non-trivial at step {0}")]
    TrivialGenerator(usize),
    #[error("membership of `{word}` in <{generator}> undecided within bound {bound}")]
    MembershipUndecided {
        word: String,
        generator: String,
        bound: usize,
    },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("only {found} distinct pairs available, {wanted} requested")]
    InsufficientPairs { found: usize, wanted: usize },
    #[error("ball holds more than {cap} distinct normal forms")]
    CapExceeded { cap: usize },
}

pub type Result<T, E = TowerError> = std::result::Result<T, E>;
