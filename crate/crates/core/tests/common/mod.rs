#![allow(dead_code)]

use std::collections::BTreeSet;

use fleetmatch_core::{CommGraph, FleetId};
use rand::Rng;

/// Erdős–Rényi graph on `1..=n` with edge probability `p`.
pub fn random_graph<R: Rng>(n: FleetId, p: f64, rng: &mut R) -> CommGraph {
    let mut edges = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    CommGraph::new(1..=n, edges).unwrap()
}

/// Connectivity of `g` with `removed` deleted, by plain BFS over the edge list.
pub fn connected_without(g: &CommGraph, removed: Option<FleetId>) -> bool {
    let rest: Vec<FleetId> = g.vertices().filter(|&v| Some(v) != removed).collect();
    let Some(&start) = rest.first() else {
        return true;
    };
    let edges: Vec<(FleetId, FleetId)> = g.edges().collect();
    let mut seen = BTreeSet::from([start]);
    let mut frontier = vec![start];
    while let Some(u) = frontier.pop() {
        for &(a, b) in &edges {
            let other = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            if Some(other) != removed && seen.insert(other) {
                frontier.push(other);
            }
        }
    }
    seen.len() == rest.len()
}

/// Two-connectivity by deleting every vertex in turn.
pub fn deletion_oracle(g: &CommGraph) -> bool {
    connected_without(g, None) && g.vertices().all(|v| connected_without(g, Some(v)))
}

/// A random 2-connected graph on `n` vertices: a Hamiltonian cycle in random
/// order plus random chords.
pub fn random_two_connected<R: Rng>(n: FleetId, chord_p: f64, rng: &mut R) -> CommGraph {
    use rand::seq::SliceRandom;
    let mut order: Vec<FleetId> = (1..=n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(FleetId, FleetId)> = (0..n as usize)
        .map(|i| (order[i], order[(i + 1) % n as usize]))
        .collect();
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.gen_bool(chord_p) {
                edges.push((a, b));
            }
        }
    }
    CommGraph::new(1..=n, edges).unwrap()
}
