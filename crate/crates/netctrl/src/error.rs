use thiserror::Error;

/// Errors split by how the CLI maps them to exit codes: `Input` variants are
/// caller mistakes (exit 2), the rest are analysis-infeasible (exit 3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("node not in graph: {0}")]
    UnknownNode(String),
    #[error("duplicate node label: {0}")]
    DuplicateNode(String),
    #[error("edge weight must be positive: ({u},{v}) has weight {w}")]
    NonPositiveWeight { u: String, v: String, w: f64 },
    #[error("self-loop not allowed on {0}")]
    SelfLoop(String),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(String, String),
    #[error("distance partition requires connected graph")]
    Disconnected,
    #[error("compression set must induce a connected subgraph")]
    CompressionSetDisconnected,
    #[error("compression set must be nonempty")]
    EmptyCompressionSet,
    #[error("source and target must differ")]
    SourceEqualsTarget,
    #[error("{0} must not appear in {1}")]
    ForbiddenMembership(String, String),
    #[error("oracle bound exceeded: {n} nodes > {bound}")]
    OracleBound { n: usize, bound: usize },
    #[error("minimal cutset defined for connected graphs")]
    CutsetDisconnected,
    #[error("matrix must be square")]
    NotSquare,
    #[error("matrix must be symmetric")]
    NotSymmetric,
    #[error("matrix entries must be finite")]
    NonFiniteEntry,
    #[error("time horizon requires t1 > t0 (got t0={t0}, t1={t1})")]
    BadHorizon { t0: f64, t1: f64 },
    #[error("the leader can not be removed")]
    LeaderRemoved,
    #[error("group must be nonempty")]
    EmptyGroup,
    #[error("seed group is not partially controllable")]
    SeedNotControllable,
    #[error("enumeration bound exceeded ({count} > {bound}); use maximal_group instead")]
    EnumerationBound { count: usize, bound: usize },
    #[error("non-fragility is discussed for controllable systems; input is uncontrollable")]
    UncontrollableInput,
    #[error("removal count p={p} out of range 1..={max}")]
    BadRemovalCount { p: usize, max: usize },
    #[error("brute-force bound exceeded (n={n} > {bound}); use the graphic method")]
    BruteForceBound { n: usize, bound: usize },
    #[error("SNF requires every follower adjacent to the leader")]
    LengthNotOne,
    #[error("weight synthesis halving cap exceeded; failing subset {0:?}")]
    SynthesisCap(Vec<String>),
    #[error("preservation synthesis halving cap exceeded; failing scenario {0:?}")]
    PreservationCap(Vec<String>),
    #[error("scenario does not pass the structural preservation check: {0:?}")]
    ScenarioNotStructural(Vec<String>),
    #[error("group is not partially controllable")]
    GroupNotControllable,
    #[error("group Grammian minor is singular at the requested tolerance")]
    SingularMinor,
    #[error("targets must be keyed exactly by the group members")]
    TargetKeyMismatch,
    #[error("simulation needs at least 10 steps")]
    TooFewSteps,
    #[error("criteria disagree under --strict: {0}")]
    StrictDisagreement(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code class for the CLI: 2 = input error, 3 = analysis infeasible.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            UnknownNode(_) | DuplicateNode(_) | NonPositiveWeight { .. } | SelfLoop(_)
            | DuplicateEdge(..) | SourceEqualsTarget | ForbiddenMembership(..)
            | BadHorizon { .. } | LeaderRemoved | EmptyGroup | BadRemovalCount { .. }
            | TargetKeyMismatch | TooFewSteps | Parse(_) | Io(_) | NonFiniteEntry
            | EmptyCompressionSet => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
