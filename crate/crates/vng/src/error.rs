use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(u8),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u8, u8),
    #[error("degree {got} exceeds the enumeration budget (max {max})")]
    BudgetExceeded { got: u8, max: u8 },
    #[error("letter {letter} out of range for degree {degree}")]
    LetterOutOfRange { letter: u8, degree: u8 },
    #[error("invalid permutation: {0}")]
    BadPerm(String),
    #[error("invalid word: {0}")]
    BadWord(String),
    #[error("invalid point: {0}")]
    BadPoint(String),
    #[error("a periodic point needs a nonempty period")]
    EmptyPeriod,
    #[error("group is not semiregular: {0} fixes a letter")]
    NotSemiregular(String),
    #[error("invalid transversal: {0}")]
    BadTransversal(String),
    #[error("permutation {0} is not an element of the group")]
    NotInGroup(String),
    #[error("words {0} and {1} are prefix-comparable")]
    ComparableWords(String, String),
    #[error("cones [{0}] and [{1}] cover the whole space; the swap is not small")]
    SwapNotSmall(String, String),
    #[error("prefix sets do not form a complete antichain: {0}")]
    BadAntichain(String),
    #[error("row tail {0} lies outside the designated tail group")]
    TailOutsideGroup(String),
    #[error("invalid element table: {0}")]
    BadElement(String),
    #[error("invalid transducer: {0}")]
    BadTransducer(String),
    #[error("invalid conjugation data: {0}")]
    BadContext(String),
    #[error("malformed input: {0}")]
    Parse(String),
}
