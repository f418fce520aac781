use thiserror::Error;

use crate::FleetId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("key size of {0} bits is too small (minimum is 3)")]
    KeySizeTooSmall(u32),
    #[error("no usable prime pair found after {0} attempts")]
    KeyGenerationExhausted(usize),
    #[error("invalid primes: {0}")]
    InvalidPrimes(String),
    #[error("invalid public modulus: {0}")]
    InvalidModulus(String),
    #[error("plaintext is not below the public modulus")]
    PlaintextOverflow,
    #[error("randomizer is not a unit modulo N")]
    InvalidRandomizer,
    #[error("ciphertext is not below N^2")]
    CiphertextOutOfRange,
    #[error("corrupt ciphertext: c^lambda - 1 is not divisible by N")]
    CorruptCiphertext,
    #[error("failed to sample a unit modulo N after {0} draws")]
    SamplingExhausted(usize),
    #[error("world needs at least one road and one slot")]
    EmptyWorld,
    #[error("index {index} is outside 1..={size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("query has {actual} entries but the world has {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("malformed wire message: {0}")]
    Wire(String),
    #[error("invalid key file: {0}")]
    KeyFile(String),
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph needs at least 3 vertices, got {0}")]
    GraphTooSmall(usize),
    #[error("graph is not 2-connected: removing fleet {0} disconnects it")]
    NotTwoConnected(FleetId),
    #[error("unknown fleet {0}")]
    UnknownFleet(FleetId),
    #[error("fleet {0} has no interest set")]
    MissingInterests(FleetId),
    #[error("no loop walk from fleet {enquirer} through fleet {target}")]
    NoLoopWalk { enquirer: FleetId, target: FleetId },
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("walk has {interior} interior positions, so floor(N / {interior}) < 1")]
    WalkTooLong { interior: usize },
    #[error("walk with {interior} interior positions can push the coefficient sum to exactly N")]
    BoundaryUnavoidable { interior: usize },
    #[error("coefficient is not below the modulus")]
    CoefficientOverflow,
    #[error("enumeration needs {required} tuples, budget is {budget}")]
    EnumerationBudget { required: String, budget: u64 },
    #[error("attack targets must be two distinct indices")]
    SameTargets,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
