use thiserror::Error;

/// Errors raised anywhere in the engine.
///
/// Each variant has a stable token (see [`Error::name`]) that the CLI prints as
/// `error=<Name>`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("edge `{0}` is a loop")]
    LoopEdge(String),
    #[error("edge `{edge}` has chain length {n} < 1")]
    BadChainLength { edge: String, n: i64 },
    #[error("collapsed dual graph is not a tree: {0}")]
    NotPseudocompactType(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex `{vertex}` is not adjacent to the collapsed edge {edge}")]
    NotAdjacent { edge: String, vertex: String },
    #[error("vertex `{vertex}`: {flag} flag is unknown but decides the case")]
    UnknownFlag { vertex: String, flag: &'static str },
    #[error("multidegree concentrated at `{0}` is negative there")]
    VacuousTheory(String),
    #[error("invalid concentrated family: {0}")]
    InvalidFamily(String),
    #[error("complementarity violated: {0}")]
    ComplementarityViolation(String),
    #[error("enumeration exceeded budget of {budget}")]
    EnumerationBudgetExceeded { budget: usize },
    #[error("degree identity violated: d={d}, ledger gives {ledger}")]
    IdentityViolation { d: i64, ledger: i64 },
    #[error("combinatorial inequality violated: {0}")]
    LemmaViolation(String),
    #[error("reduction produced a non-equivalent divisor")]
    NonEquivalentInput,
    #[error("rank oracle budget exceeded: {0}")]
    OracleBudgetExceeded(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("graph is not a binary curve: {0}")]
    NotBinary(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable token.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::DuplicateId(_) => "DuplicateId",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::EmptyGraph => "EmptyGraph",
            Error::LoopEdge(_) => "LoopEdge",
            Error::BadChainLength { .. } => "BadChainLength",
            Error::NotPseudocompactType(_) => "NotPseudocompactType",
            Error::Disconnected => "Disconnected",
            Error::NotAdjacent { .. } => "NotAdjacent",
            Error::UnknownFlag { .. } => "UnknownFlag",
            Error::VacuousTheory(_) => "VacuousTheory",
            Error::InvalidFamily(_) => "InvalidFamily",
            Error::ComplementarityViolation(_) => "ComplementarityViolation",
            Error::EnumerationBudgetExceeded { .. } => "EnumerationBudgetExceeded",
            Error::IdentityViolation { .. } => "IdentityViolation",
            Error::LemmaViolation(_) => "LemmaViolation",
            Error::NonEquivalentInput => "NonEquivalentInput",
            Error::OracleBudgetExceeded(_) => "OracleBudgetExceeded",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::NotBinary(_) => "NotBinary",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    /// Whether the error reports a failed internal check rather than bad input.
    pub fn is_condition_failure(&self) -> bool {
        matches!(
            self,
            Error::ComplementarityViolation(_)
                | Error::IdentityViolation { .. }
                | Error::LemmaViolation(_)
                | Error::NonEquivalentInput
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
