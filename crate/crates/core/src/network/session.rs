//! In-process simulation of a multi-fleet query session.
//!
//! Every fleet is a [`FleetNode`] with a FIFO inbox. The enquirer encrypts
//! its query and sends it to the first fleet on the walk; each fleet decodes
//! the message, folds in its contribution and forwards it. The last fleet
//! sends only the response ciphertext back. Messages are real wire bytes so
//! the transcript reports exact communication volume.
//!
//! Hop message layout (all integers big-endian):
//!
//! ```text
//! u32 position of the receiver on the walk
//! u32 walk length, then that many u32 fleet ids
//! running response field (ciphertext width)
//! query (see `matchmaking::wire`)
//! ```
//!
//! The final hop to the enquirer carries the response field alone.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::graph::CommGraph;
use super::protocol::{contribute, FleetContribution, OmegaRange};
use super::walk::{find_query_loop, LoopWalk};
use crate::matchmaking::{self, wire, InterestSet, QueryVector, Response, Scenario, World};
use crate::paillier::{self, Ciphertext, KeyPair, PublicKey};
use crate::{Error, FleetId, Result};

/// One transcript line: `{"from": int, "to": int, "bytes": int, "elapsed_ns": int}`.
///
/// `elapsed_ns` is the sender's processing time for the hop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopRecord {
    pub from: FleetId,
    pub to: FleetId,
    pub bytes: u64,
    pub elapsed_ns: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub hops: Vec<HopRecord>,
}

impl Transcript {
    /// JSON lines, one record per hop, newline-terminated.
    pub fn to_json_lines(&self) -> String {
        self.hops
            .iter()
            .map(|h| serde_json::to_string(h).expect("hop serialises") + "\n")
            .collect()
    }

    pub fn from_json_lines(s: &str) -> Result<Self> {
        let hops = s
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Transcript { hops })
    }

    pub fn total_bytes(&self) -> u64 {
        self.hops.iter().map(|h| h.bytes).sum()
    }
}

#[derive(Clone, Debug)]
pub struct SessionOutcome {
    pub answer: bool,
    pub walk: LoopWalk,
    pub transcript: Transcript,
    pub response: Response,
    pub contributions: Vec<FleetContribution>,
}

/// A fleet owner taking part in the simulation.
#[derive(Debug)]
pub struct FleetNode {
    pub id: FleetId,
    pub interests: Option<InterestSet>,
    inbox: VecDeque<Vec<u8>>,
}

impl FleetNode {
    pub fn new(id: FleetId, interests: Option<InterestSet>) -> Self {
        FleetNode {
            id,
            interests,
            inbox: VecDeque::new(),
        }
    }

    pub fn deliver(&mut self, message: Vec<u8>) {
        self.inbox.push_back(message);
    }

    pub fn pending(&self) -> usize {
        self.inbox.len()
    }

    /// Handles the oldest queued hop message and returns the outgoing one
    /// with its recipient.
    fn step<R: Rng + ?Sized>(
        &mut self,
        g: &CommGraph,
        pk: &PublicKey,
        rng: &mut R,
        trace: &mut Vec<FleetContribution>,
    ) -> Result<(FleetId, Vec<u8>)> {
        let message = self
            .inbox
            .pop_front()
            .ok_or_else(|| Error::Wire(format!("fleet {} has an empty inbox", self.id)))?;
        let hop = HopMessage::decode(g, pk, &message)?;
        if hop.walk.vertices()[hop.position] != self.id {
            return Err(Error::Wire(format!(
                "message for position {} delivered to fleet {}",
                hop.position, self.id
            )));
        }
        let interests = self
            .interests
            .as_ref()
            .ok_or(Error::MissingInterests(self.id))?;
        let range = OmegaRange::for_walk(pk, &hop.walk)?;
        let y = contribute(
            pk,
            &hop.query,
            &hop.y,
            &hop.walk,
            hop.position,
            interests,
            &range,
            rng,
            trace,
        )?;
        let next = hop.position + 1;
        let to = hop.walk.vertices()[next];
        if next == hop.walk.hops() {
            Ok((to, wire::encode_response(pk, &Response { y })))
        } else {
            let forward = HopMessage {
                position: next,
                walk: hop.walk,
                y,
                query: hop.query,
            };
            Ok((to, forward.encode(pk)))
        }
    }
}

struct HopMessage {
    position: usize,
    walk: LoopWalk,
    y: Ciphertext,
    query: QueryVector,
}

impl HopMessage {
    fn encode(&self, pk: &PublicKey) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.position as u32).to_be_bytes());
        out.extend_from_slice(&(self.walk.len() as u32).to_be_bytes());
        for &v in self.walk.vertices() {
            out.extend_from_slice(&v.to_be_bytes());
        }
        out.extend(wire::encode_response(pk, &Response { y: self.y.clone() }));
        out.extend(wire::encode_query(pk, &self.query));
        out
    }

    fn decode(g: &CommGraph, pk: &PublicKey, bytes: &[u8]) -> Result<Self> {
        let mut cursor = bytes;
        let mut take = |n: usize| -> Result<&[u8]> {
            if cursor.len() < n {
                return Err(Error::Wire("truncated hop message".into()));
            }
            let (head, rest) = cursor.split_at(n);
            cursor = rest;
            Ok(head)
        };
        let read_u32 = |b: &[u8]| u32::from_be_bytes(b.try_into().unwrap());
        let position = read_u32(take(4)?) as usize;
        let len = read_u32(take(4)?) as usize;
        let mut vertices = Vec::with_capacity(len);
        for _ in 0..len {
            vertices.push(read_u32(take(4)?));
        }
        let walk = LoopWalk::new(g, vertices)?;
        if position == 0 || position >= walk.hops() {
            return Err(Error::Wire(format!("position {position} is not interior")));
        }
        let y = wire::decode_response(pk, take(pk.ciphertext_width())?)?.y;
        let query = wire::decode_query(pk, cursor)?;
        Ok(HopMessage {
            position,
            walk,
            y,
            query,
        })
    }
}

/// Generates fresh keys of `key_bits` for the enquirer and runs a session.
pub fn run_session<R: Rng + ?Sized>(
    g: &CommGraph,
    enquirer: FleetId,
    w: usize,
    scenario: &Scenario,
    key_bits: u32,
    rng: &mut R,
) -> Result<SessionOutcome> {
    let keys = paillier::generate_keys(key_bits, rng)?;
    run_session_with_keys(g, enquirer, w, scenario, &keys, rng)
}

/// Queries every other fleet in `g` about index `w` along a spanning loop walk.
pub fn run_session_with_keys<R: Rng + ?Sized>(
    g: &CommGraph,
    enquirer: FleetId,
    w: usize,
    scenario: &Scenario,
    keys: &KeyPair,
    rng: &mut R,
) -> Result<SessionOutcome> {
    if let Some(cut) = g.two_connectivity_witness()? {
        return Err(Error::NotTwoConnected(cut));
    }
    if !g.contains(enquirer) {
        return Err(Error::UnknownFleet(enquirer));
    }
    let world: World = scenario.world()?;
    world.check_index(w)?;
    let mut interests = scenario.interest_sets()?;
    let targets: BTreeSet<FleetId> = g.vertices().filter(|&v| v != enquirer).collect();
    let walk = find_query_loop(g, enquirer, &targets)?;
    let pk = &keys.public;
    OmegaRange::for_walk(pk, &walk)?;

    let mut nodes: BTreeMap<FleetId, FleetNode> = g
        .vertices()
        .map(|v| {
            let own = if v == enquirer {
                None
            } else {
                interests.remove(&v)
            };
            (v, FleetNode::new(v, own))
        })
        .collect();
    for fleet in walk.distinct_interior() {
        if nodes[&fleet].interests.is_none() {
            return Err(Error::MissingInterests(fleet));
        }
    }

    let mut transcript = Transcript::default();
    let mut contributions = Vec::new();

    let started = Instant::now();
    let query = matchmaking::submit_query(pk, world, w, rng)?;
    let first = HopMessage {
        position: 1,
        walk: walk.clone(),
        y: Ciphertext::one(),
        query,
    }
    .encode(pk);
    let to = walk.vertices()[1];
    transcript.hops.push(HopRecord {
        from: enquirer,
        to,
        bytes: first.len() as u64,
        elapsed_ns: started.elapsed().as_nanos() as u64,
    });
    nodes.get_mut(&to).unwrap().deliver(first);

    for pos in 1..walk.hops() {
        let from = walk.vertices()[pos];
        let started = Instant::now();
        let (to, message) = nodes
            .get_mut(&from)
            .unwrap()
            .step(g, pk, rng, &mut contributions)?;
        transcript.hops.push(HopRecord {
            from,
            to,
            bytes: message.len() as u64,
            elapsed_ns: started.elapsed().as_nanos() as u64,
        });
        nodes.get_mut(&to).unwrap().deliver(message);
    }

    let final_message = nodes
        .get_mut(&enquirer)
        .unwrap()
        .inbox
        .pop_front()
        .ok_or_else(|| Error::Wire("no response reached the enquirer".into()))?;
    let response = wire::decode_response(pk, &final_message)?;
    let answer = matchmaking::interpret(&keys.private, pk, &response)?;
    Ok(SessionOutcome {
        answer,
        walk,
        transcript,
        response,
        contributions,
    })
}
