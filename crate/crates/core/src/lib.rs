//! Privacy-preserving match-making for fleet coordination.
//!
//! A fleet owner asks whether another fleet operates on a given road and time
//! window without revealing which one it is asking about. The query is a
//! vector of Paillier ciphertexts encrypting an indicator; responders fold
//! their interest sets into it homomorphically and only the enquirer can
//! decrypt the (randomised) answer.
//!
//! * [`paillier`]: key generation, encryption and the homomorphic operations.
//! * [`matchmaking`]: the two-party query/response protocol and its wire format.
//! * [`network`]: communication graphs, loop walks and the multi-fleet protocol.
//! * [`adversary`]: crafted queries, closed-form decryption predictions and
//!   brute-force counting of the solutions an attacker must distinguish.

pub mod adversary;
pub mod error;
pub mod matchmaking;
pub mod network;
pub mod paillier;

pub use error::{Error, Result};
pub use matchmaking::{InterestSet, QueryVector, Response, Scenario, World};
pub use network::{CommGraph, LoopWalk};
pub use paillier::{Ciphertext, KeyPair, Plaintext, PrivateKey, PublicKey};

/// Identifier of a fleet owner (a vertex of the communication graph).
pub type FleetId = u32;
