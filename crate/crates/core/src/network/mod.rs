//! Distributed coordination over a fleet communication graph.
//!
//! The graph must be 2-connected so that every fleet can be reached, and
//! the query returned, without passing through the enquirer.

pub mod graph;
pub mod protocol;
pub mod session;
pub mod walk;

pub use graph::{is_two_connected, CommGraph, GraphFile};
pub use protocol::{dist_response, dist_response_traced, FleetContribution, OmegaRange};
pub use session::{
    run_session, run_session_with_keys, FleetNode, HopRecord, SessionOutcome, Transcript,
};
pub use walk::{find_query_loop, LoopWalk};
