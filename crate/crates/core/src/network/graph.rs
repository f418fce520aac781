//! Fleet communication graph and 2-connectivity.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::{Error, FleetId, Result};

/// Graph file: `{"vertices": [int, …], "edges": [[int, int], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<FleetId>,
    pub edges: Vec<[FleetId; 2]>,
}

/// Undirected simple graph over fleet ids. Adjacency is kept sorted so every
/// traversal is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommGraph {
    adjacency: BTreeMap<FleetId, BTreeSet<FleetId>>,
}

impl CommGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = FleetId>,
        edges: impl IntoIterator<Item = (FleetId, FleetId)>,
    ) -> Result<Self> {
        let mut adjacency: BTreeMap<FleetId, BTreeSet<FleetId>> =
            vertices.into_iter().map(|v| (v, BTreeSet::new())).collect();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            for v in [a, b] {
                if !adjacency.contains_key(&v) {
                    return Err(Error::InvalidGraph(format!(
                        "edge ({a}, {b}) references unknown vertex {v}"
                    )));
                }
            }
            adjacency.get_mut(&a).unwrap().insert(b);
            adjacency.get_mut(&b).unwrap().insert(a);
        }
        Ok(CommGraph { adjacency })
    }

    /// Cycle `1 - 2 - … - n - 1`.
    pub fn cycle(n: FleetId) -> Result<Self> {
        CommGraph::new(1..=n, (1..=n).map(|v| (v, v % n + 1)))
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let unique: BTreeSet<_> = file.vertices.iter().collect();
        if unique.len() != file.vertices.len() {
            return Err(Error::InvalidGraph("duplicate vertex".into()));
        }
        CommGraph::new(
            file.vertices.iter().copied(),
            file.edges.iter().map(|e| (e[0], e[1])),
        )
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.vertices().collect(),
            edges: self.edges().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph serialises")
    }

    pub fn vertices(&self) -> impl Iterator<Item = FleetId> + '_ {
        self.adjacency.keys().copied()
    }

    /// Each edge once, as `(smaller, larger)`.
    pub fn edges(&self) -> impl Iterator<Item = (FleetId, FleetId)> + '_ {
        self.adjacency
            .iter()
            .flat_map(|(&a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn contains(&self, v: FleetId) -> bool {
        self.adjacency.contains_key(&v)
    }

    pub fn has_edge(&self, a: FleetId, b: FleetId) -> bool {
        self.adjacency.get(&a).is_some_and(|ns| ns.contains(&b))
    }

    pub fn neighbors(&self, v: FleetId) -> impl Iterator<Item = FleetId> + '_ {
        self.adjacency.get(&v).into_iter().flatten().copied()
    }

    /// Vertices reachable from `start` without entering `blocked`.
    pub(crate) fn reachable_avoiding(
        &self,
        start: FleetId,
        blocked: Option<FleetId>,
    ) -> BTreeSet<FleetId> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if Some(v) != blocked && seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        match self.vertices().next() {
            None => true,
            Some(start) => self.reachable_avoiding(start, None).len() == self.vertex_count(),
        }
    }

    /// Cut vertices, found with a single iterative low-link DFS per component.
    pub fn articulation_points(&self) -> BTreeSet<FleetId> {
        let index: BTreeMap<FleetId, usize> =
            self.vertices().enumerate().map(|(i, v)| (v, i)).collect();
        let ids: Vec<FleetId> = self.vertices().collect();
        let adj: Vec<Vec<usize>> = ids
            .iter()
            .map(|v| self.neighbors(*v).map(|u| index[&u]).collect())
            .collect();
        let n = ids.len();
        let mut order = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut cut = vec![false; n];
        let mut clock = 0;

        for root in 0..n {
            if order[root] != usize::MAX {
                continue;
            }
            order[root] = clock;
            low[root] = clock;
            clock += 1;
            let mut root_children = 0;
            // (vertex, parent, next neighbour position)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
                if let Some(&v) = adj[u].get(*next) {
                    *next += 1;
                    if order[v] == usize::MAX {
                        order[v] = clock;
                        low[v] = clock;
                        clock += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((v, u, 0));
                    } else if v != parent {
                        low[u] = low[u].min(order[v]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if parent != root && low[u] >= order[parent] {
                            cut[parent] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                cut[root] = true;
            }
        }
        (0..n).filter(|&i| cut[i]).map(|i| ids[i]).collect()
    }

    /// `None` if the graph is 2-connected, otherwise the smallest vertex whose
    /// removal leaves the rest disconnected.
    pub fn two_connectivity_witness(&self) -> Result<Option<FleetId>> {
        if self.vertex_count() < 3 {
            return Err(Error::GraphTooSmall(self.vertex_count()));
        }
        if self.is_connected() {
            return Ok(self.articulation_points().into_iter().next());
        }
        // Disconnected: with at least 3 vertices some single deletion still
        // leaves two components; report the smallest such vertex.
        let witness = self.vertices().find(|&v| {
            let start = self.vertices().find(|&u| u != v).unwrap();
            self.reachable_avoiding(start, Some(v)).len() != self.vertex_count() - 1
        });
        Ok(Some(witness.expect(
            "a disconnected graph of 3+ vertices has a witness",
        )))
    }
}

/// True iff deleting any single vertex leaves a connected graph.
pub fn is_two_connected(g: &CommGraph) -> Result<bool> {
    Ok(g.two_connectivity_witness()?.is_none())
}
