use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("component order bound must be at least 1 (got {0})")]
    InvalidBound(usize),

    #[error("at least one cop is required")]
    NoCops,

    #[error("robber edge ({0}, {1}) is not an edge of the graph")]
    ForeignRobberEdge(usize, usize),

    #[error("no winning initial placement for {0} cop(s)")]
    NoWinningPlacement(usize),

    #[error("vertex set is not a 2-component order connectivity cover")]
    InvalidCover,

    #[error("cop budget violated: {what} uses {used} cops but the bound is {bound}")]
    BudgetExceeded {
        what: &'static str,
        used: usize,
        bound: usize,
    },

    #[error("no cop count up to {0} wins the residual game")]
    InnerUnsolved(usize),

    #[error("illegal {mover} move from {from} to {to}")]
    IllegalMove {
        mover: &'static str,
        from: usize,
        to: usize,
    },

    #[error("robber is on deleted vertex {0}")]
    RobberOnDeleted(usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Usage(String),
}
