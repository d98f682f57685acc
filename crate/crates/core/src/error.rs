use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("duplicate leg id `{0}`")]
    DuplicateLeg(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    DanglingEdge { edge: String, vertex: String },
    #[error("leg `{leg}` references unknown vertex `{vertex}`")]
    DanglingLeg { leg: String, vertex: String },
    #[error("leg labels must be a permutation of 1..{0}")]
    BadLegLabels(usize),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("graph too large: at most 128 vertices and 128 edges are supported")]
    TooLarge,
    #[error("graph or subgraph is disconnected")]
    Disconnected,
    #[error("vertex subset must be non-empty and proper")]
    TrivialCut,
    #[error("multidegree has {got} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("expected total degree {expected}, found {got}")]
    WrongDegree { expected: i64, got: i64 },
    #[error("polarization total is not an integer")]
    NonIntegralTotal,
    #[error("polarization is degenerate")]
    Degenerate,
    #[error("canonical polarization needs 2g-2 != 0")]
    GenusOne,
    #[error("no nondegenerate polarization found within {0} attempts")]
    BudgetExhausted(u32),
    #[error("the linear system has no integer solution")]
    NoIntegerSolution,
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("parameters out of supported range: {0}")]
    OutOfRange(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
