//! Closed walks that route a query from the enquirer through the other
//! fleets and back without touching the enquirer in between.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::graph::CommGraph;
use crate::{Error, FleetId, Result};

/// `(v_0, …, v_k)` with `v_0 = v_k = ℓ`, `v_j ≠ ℓ` for `0 < j < k`,
/// consecutive vertices adjacent and `k ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopWalk {
    vertices: Vec<FleetId>,
}

impl LoopWalk {
    pub fn new(g: &CommGraph, vertices: Vec<FleetId>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidWalk(msg));
        if vertices.len() < 3 {
            return invalid(format!("needs at least 3 entries, got {}", vertices.len()));
        }
        let enquirer = vertices[0];
        if *vertices.last().unwrap() != enquirer {
            return invalid("walk does not return to the enquirer".into());
        }
        if let Some(v) = vertices[1..vertices.len() - 1]
            .iter()
            .find(|&&v| v == enquirer)
        {
            return invalid(format!("interior revisits the enquirer {v}"));
        }
        for pair in vertices.windows(2) {
            if !g.has_edge(pair[0], pair[1]) {
                return invalid(format!("({}, {}) is not an edge", pair[0], pair[1]));
            }
        }
        Ok(LoopWalk { vertices })
    }

    pub fn vertices(&self) -> &[FleetId] {
        &self.vertices
    }

    pub fn enquirer(&self) -> FleetId {
        self.vertices[0]
    }

    /// `|L|`, the number of entries including both copies of the enquirer.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of edges traversed, `k`.
    pub fn hops(&self) -> usize {
        self.vertices.len() - 1
    }

    /// `v_1, …, v_{k−1}`; `|L| − 2` entries.
    pub fn interior(&self) -> &[FleetId] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    /// Interior fleets in order of first appearance.
    pub fn distinct_interior(&self) -> Vec<FleetId> {
        let mut seen = BTreeSet::new();
        self.interior()
            .iter()
            .copied()
            .filter(|v| seen.insert(*v))
            .collect()
    }

    /// Whether position `pos` (0-based into [`vertices`](Self::vertices)) is
    /// the first time that fleet appears on the walk.
    pub fn is_first_visit(&self, pos: usize) -> bool {
        let v = self.vertices[pos];
        !self.vertices[..pos].contains(&v)
    }
}

/// Builds a loop walk from `enquirer` whose interior visits every target.
///
/// The first uncovered target (in ascending order) is reached through a
/// cycle made of two internally vertex-disjoint enquirer–target paths, found
/// as a unit-vertex-capacity max flow. Each later target not yet on the walk
/// is spliced in as an out-and-back detour along a shortest path in
/// `g − enquirer` from the nearest interior vertex. An empty target set means
/// the enquirer's smallest neighbour.
pub fn find_query_loop(
    g: &CommGraph,
    enquirer: FleetId,
    targets: &BTreeSet<FleetId>,
) -> Result<LoopWalk> {
    if !g.contains(enquirer) {
        return Err(Error::UnknownFleet(enquirer));
    }
    for &t in targets {
        if !g.contains(t) {
            return Err(Error::UnknownFleet(t));
        }
        if t == enquirer {
            return Err(Error::InvalidWalk("the enquirer cannot be a target".into()));
        }
    }
    let mut targets = targets.clone();
    if targets.is_empty() {
        let first = g.neighbors(enquirer).next().ok_or(Error::NoLoopWalk {
            enquirer,
            target: enquirer,
        })?;
        targets.insert(first);
    }

    let mut walk: Vec<FleetId> = Vec::new();
    for &target in &targets {
        if walk.is_empty() {
            walk = disjoint_cycle(g, enquirer, target)?;
            continue;
        }
        if walk[1..walk.len() - 1].contains(&target) {
            continue;
        }
        let (anchor, path) = detour(g, enquirer, &walk, target)?;
        let tail: Vec<FleetId> = path[1..]
            .iter()
            .chain(path[..path.len() - 1].iter().rev())
            .copied()
            .collect();
        walk.splice(anchor + 1..anchor + 1, tail);
    }
    LoopWalk::new(g, walk)
}

/// Shortest path in `g − enquirer` from the walk interior to `target`,
/// returning the walk position of the anchor and the path (anchor first).
fn detour(
    g: &CommGraph,
    enquirer: FleetId,
    walk: &[FleetId],
    target: FleetId,
) -> Result<(usize, Vec<FleetId>)> {
    let mut parent: BTreeMap<FleetId, Option<FleetId>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &v in &walk[1..walk.len() - 1] {
        if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(v) {
            e.insert(None);
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        if u == target {
            break;
        }
        for v in g.neighbors(u) {
            if v != enquirer && !parent.contains_key(&v) {
                parent.insert(v, Some(u));
                queue.push_back(v);
            }
        }
    }
    if !parent.contains_key(&target) {
        return Err(Error::NoLoopWalk { enquirer, target });
    }
    let mut path = vec![target];
    while let Some(Some(prev)) = parent.get(path.last().unwrap()) {
        path.push(*prev);
    }
    path.reverse();
    let anchor = walk[1..]
        .iter()
        .position(|&v| v == path[0])
        .map(|p| p + 1)
        .expect("anchor lies on the walk");
    Ok((anchor, path))
}

/// Residual network edge.
struct Arc {
    to: usize,
    cap: i32,
    rev: usize,
    original: bool,
}

/// `ℓ, P₁…, t, reverse(P₂)…, ℓ` for two internally vertex-disjoint paths
/// `P₁`, `P₂` from `ℓ` to `t`, the shorter path first.
fn disjoint_cycle(g: &CommGraph, enquirer: FleetId, target: FleetId) -> Result<Vec<FleetId>> {
    let ids: Vec<FleetId> = g.vertices().collect();
    let index: BTreeMap<FleetId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // Vertex i splits into in-node 2i and out-node 2i+1.
    let node_in = |i: usize| 2 * i;
    let node_out = |i: usize| 2 * i + 1;
    let mut net: Vec<Vec<Arc>> = (0..2 * ids.len()).map(|_| Vec::new()).collect();
    let add = |net: &mut Vec<Vec<Arc>>, from: usize, to: usize, cap: i32| {
        let rev_from = net[to].len();
        let rev_to = net[from].len();
        net[from].push(Arc {
            to,
            cap,
            rev: rev_from,
            original: true,
        });
        net[to].push(Arc {
            to: from,
            cap: 0,
            rev: rev_to,
            original: false,
        });
    };
    let (src, dst) = (index[&enquirer], index[&target]);
    for (i, &v) in ids.iter().enumerate() {
        if i != src && i != dst {
            add(&mut net, node_in(i), node_out(i), 1);
        }
        for u in g.neighbors(v) {
            let j = index[&u];
            if j != src && i != dst {
                add(&mut net, node_out(i), node_in(j), 1);
            }
        }
    }
    let (source, sink) = (node_out(src), node_in(dst));

    for _ in 0..2 {
        // BFS for a shortest augmenting path.
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; net.len()];
        let mut seen = vec![false; net.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for (k, arc) in net[u].iter().enumerate() {
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    prev[arc.to] = Some((u, k));
                    queue.push_back(arc.to);
                }
            }
        }
        if !seen[sink] {
            return Err(Error::NoLoopWalk { enquirer, target });
        }
        let mut v = sink;
        while let Some((u, k)) = prev[v] {
            net[u][k].cap -= 1;
            let rev = net[u][k].rev;
            net[v][rev].cap += 1;
            v = u;
        }
    }

    // Decompose the two units of flow into vertex paths.
    let mut paths = Vec::new();
    for _ in 0..2 {
        let mut path = vec![enquirer];
        let mut u = source;
        while u != sink {
            let k = net[u]
                .iter()
                .position(|a| a.original && flow_on(&net, a) > 0)
                .expect("flow is conserved");
            let to = net[u][k].to;
            // Consume this unit so the second decomposition takes the other path.
            let rev = net[u][k].rev;
            net[to][rev].cap -= 1;
            if to % 2 == 0 {
                path.push(ids[to / 2]);
            }
            u = to;
        }
        paths.push(path);
    }
    paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut cycle = paths[0].clone();
    cycle.extend(paths[1][..paths[1].len() - 1].iter().rev());
    Ok(cycle)
}

/// Flow on an original arc: what its reverse residual arc has absorbed.
fn flow_on(net: &[Vec<Arc>], arc: &Arc) -> i32 {
    net[arc.to][arc.rev].cap
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_cycle_spanning_walk() {
        let g = CommGraph::cycle(4).unwrap();
        let walk = find_query_loop(&g, 1, &BTreeSet::from([2, 3, 4])).unwrap();
        assert_eq!(walk.vertices(), &[1, 2, 3, 4, 1]);
        assert_eq!(walk.len(), 5);
        assert_eq!(walk.hops(), 4);
        assert_eq!(walk.interior(), &[2, 3, 4]);
    }

    #[test]
    fn single_neighbour_target() {
        let g = CommGraph::cycle(5).unwrap();
        let walk = find_query_loop(&g, 1, &BTreeSet::from([5])).unwrap();
        assert!(walk.interior().contains(&5));
        assert_eq!(walk.vertices(), &[1, 5, 4, 3, 2, 1]);
    }

    #[test]
    fn detours_on_a_wheel() {
        // Hub 1 connected to a 5-cycle 2..6; enquirer on the rim.
        let mut edges: Vec<(FleetId, FleetId)> = (2..=6).map(|v| (1, v)).collect();
        edges.extend((2..=6).map(|v| (v, if v == 6 { 2 } else { v + 1 })));
        let g = CommGraph::new(1..=6, edges).unwrap();
        let all: BTreeSet<FleetId> = (1..=6).filter(|&v| v != 2).collect();
        let walk = find_query_loop(&g, 2, &all).unwrap();
        for t in &all {
            assert!(walk.interior().contains(t));
        }
        assert_eq!(walk.enquirer(), 2);
    }

    #[test]
    fn empty_targets_use_first_neighbour() {
        let g = CommGraph::cycle(4).unwrap();
        let walk = find_query_loop(&g, 3, &BTreeSet::new()).unwrap();
        assert!(walk.interior().contains(&2));
    }

    #[test]
    fn no_walk_through_cut_vertex() {
        // Path 1-2-3: every walk from 1 must come back through 2.
        let g = CommGraph::new(1..=3, [(1, 2), (2, 3)]).unwrap();
        assert!(matches!(
            find_query_loop(&g, 1, &BTreeSet::from([3])),
            Err(Error::NoLoopWalk { .. })
        ));
    }

    #[test]
    fn walk_validation() {
        let g = CommGraph::cycle(4).unwrap();
        assert!(LoopWalk::new(&g, vec![1, 2, 1]).is_ok());
        assert!(LoopWalk::new(&g, vec![1, 2]).is_err());
        assert!(LoopWalk::new(&g, vec![1, 3, 4, 1]).is_err());
        assert!(LoopWalk::new(&g, vec![1, 2, 1, 4, 1]).is_err());
        assert!(LoopWalk::new(&g, vec![1, 2, 3, 2]).is_err());
        let w = LoopWalk::new(&g, vec![1, 2, 3, 2, 1]).unwrap();
        assert_eq!(w.distinct_interior(), vec![2, 3]);
        assert!(w.is_first_visit(1));
        assert!(!w.is_first_visit(3));
    }

    #[test]
    fn bad_arguments() {
        let g = CommGraph::cycle(4).unwrap();
        assert!(matches!(
            find_query_loop(&g, 9, &BTreeSet::new()),
            Err(Error::UnknownFleet(9))
        ));
        assert!(find_query_loop(&g, 1, &BTreeSet::from([1])).is_err());
        assert!(find_query_loop(&g, 1, &BTreeSet::from([7])).is_err());
    }
}
