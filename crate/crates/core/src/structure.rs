//! Girth, bipartiteness and edge-cut structure.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::flow::FlowNetwork;
use crate::graph::{Graph, GraphError};

/// Length of a shortest cycle, or `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            // Any cycle closed from here on has length at least 2 * dist[u].
            if 2 * dist[u] >= best {
                break;
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                    if dist[w] == dist[u] {
                        break 'bfs;
                    }
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

/// Result of a 2-colouring attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartition {
    /// `side[v]` is 0 or 1; each component is coloured from its lowest vertex.
    Bipartite { side: Vec<u8> },
    /// An odd cycle, as a closed vertex sequence without repetition.
    OddCycle(Vec<usize>),
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartition::Bipartite { .. })
    }

    /// The two colour classes, if bipartite.
    pub fn sides(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        match self {
            Bipartition::Bipartite { side } => {
                let (a, b): (Vec<usize>, Vec<usize>) = (0..side.len()).partition(|&v| side[v] == 0);
                Some((a, b))
            }
            Bipartition::OddCycle(_) => None,
        }
    }
}

pub fn bipartition(g: &Graph) -> Bipartition {
    let n = g.n();
    let mut side = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[u];
                    parent[w] = u;
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                } else if side[w] == side[u] {
                    return Bipartition::OddCycle(odd_cycle(u, w, &parent, &depth));
                }
            }
        }
    }
    Bipartition::Bipartite { side }
}

fn odd_cycle(mut a: usize, mut b: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    left.extend(right.into_iter().rev());
    left
}

fn unit_network(g: &Graph) -> FlowNetwork {
    let mut net = FlowNetwork::new(g.n());
    for (u, v) in g.edges() {
        net.add_undirected(u, v, 1);
    }
    net
}

/// Minimum number of edges whose removal disconnects `g`: the smallest
/// max-flow from vertex 0 to any other vertex. Graphs with fewer than two
/// vertices report 0.
pub fn edge_connectivity(g: &Graph) -> usize {
    let n = g.n();
    if n < 2 || !g.is_connected() {
        return 0;
    }
    let min_degree = (0..n).map(|v| g.degree(v)).min().unwrap_or(0);
    let mut best = min_degree as u32;
    for t in 1..n {
        let mut net = unit_network(g);
        best = best.min(net.max_flow(0, t, best));
        if best == 0 {
            break;
        }
    }
    best as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CutKind {
    /// The edges at a single vertex.
    Trivial,
    /// Both sides have at least two vertices, but one side is acyclic.
    Nontrivial,
    /// Both sides contain a cycle.
    Cyclic,
}

/// An edge cut whose removal leaves exactly two components.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeCut {
    /// Sorted edges `(u, v)` with `u < v`.
    pub edges: Vec<(usize, usize)>,
    pub kind: CutKind,
    /// The side containing the lowest endpoint of the first cut edge; the
    /// other side is its complement.
    pub side: Vec<usize>,
}

impl EdgeCut {
    /// Validates `edges` as a bond of `g` (exactly two components, every
    /// edge crossing) and classifies it.
    pub fn from_edges(g: &Graph, edges: &[(usize, usize)]) -> Option<EdgeCut> {
        let mut edges: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        edges.dedup();
        if edges.is_empty() || edges.iter().any(|&(u, v)| !g.has_edge(u, v)) {
            return None;
        }
        let comp = components_without(g, &edges);
        let count = comp.iter().copied().max().map_or(0, |m| m + 1);
        if count != 2 || edges.iter().any(|&(u, v)| comp[u] == comp[v]) {
            return None;
        }
        let side_id = comp[edges[0].0];
        let side: Vec<usize> = (0..g.n()).filter(|&v| comp[v] == side_id).collect();
        let other: Vec<usize> = (0..g.n()).filter(|&v| comp[v] != side_id).collect();
        let kind = if side.len() == 1 || other.len() == 1 {
            CutKind::Trivial
        } else if has_cycle(g, &side, &comp) && has_cycle(g, &other, &comp) {
            CutKind::Cyclic
        } else {
            CutKind::Nontrivial
        };
        Some(EdgeCut { edges, kind, side })
    }

    pub fn other_side(&self, n: usize) -> Vec<usize> {
        let mut mark = vec![false; n];
        self.side.iter().for_each(|&v| mark[v] = true);
        (0..n).filter(|&v| !mark[v]).collect()
    }
}

/// Component labels of `g` minus `removed` (given as sorted `u < v` pairs).
fn components_without(g: &Graph, removed: &[(usize, usize)]) -> Vec<usize> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if comp[w] == usize::MAX && !removed.contains(&(u.min(w), u.max(w))) {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

fn has_cycle(g: &Graph, part: &[usize], comp: &[usize]) -> bool {
    // A connected part has a cycle iff it has at least as many internal edges as vertices.
    let c = comp[part[0]];
    let internal: usize = part
        .iter()
        .map(|&v| g.neighbors(v).iter().filter(|&&w| comp[w] == c).count())
        .sum::<usize>()
        / 2;
    internal >= part.len()
}

/// Bridges of `g` with the edges flagged in `dead` (indexed like
/// [`Graph::edges`]) removed.
fn bridges(g: &Graph, edge_ids: &[Vec<usize>], dead: &[bool]) -> Vec<usize> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut out = Vec::new();
    let mut time = 0;
    // (vertex, edge id used to enter, next neighbor position)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (u, via, ref mut pos)) = stack.last_mut() {
            if *pos < g.degree(u) {
                let i = *pos;
                *pos += 1;
                let e = edge_ids[u][i];
                if dead[e] || e == via {
                    continue;
                }
                let w = g.neighbors(u)[i];
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, e, 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] > disc[p] {
                        out.push(via);
                    }
                }
            }
        }
    }
    out
}

/// Edge ids per adjacency slot, matching [`Graph::edges`] order.
pub(crate) fn adjacency_edge_ids(g: &Graph) -> Vec<Vec<usize>> {
    let edges = g.edges();
    let mut ids: Vec<Vec<usize>> = (0..g.n()).map(|v| vec![0; g.degree(v)]).collect();
    for (e, &(u, v)) in edges.iter().enumerate() {
        let iu = g.neighbors(u).binary_search(&v).unwrap();
        let iv = g.neighbors(v).binary_search(&u).unwrap();
        ids[u][iu] = e;
        ids[v][iv] = e;
    }
    ids
}

/// All 3-edge bonds of a connected cubic graph that are not the star of a
/// single vertex, sorted by edge list.
pub fn nontrivial_3_edge_cuts(g: &Graph) -> Result<Vec<EdgeCut>, GraphError> {
    g.require_cubic()?;
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let edges = g.edges();
    let ids = adjacency_edge_ids(g);
    let m = edges.len();
    let mut dead = vec![false; m];
    let mut found: BTreeSet<[usize; 3]> = BTreeSet::new();
    for a in 0..m {
        dead[a] = true;
        for b in a + 1..m {
            dead[b] = true;
            for c in bridges(g, &ids, &dead) {
                let mut t = [a, b, c];
                t.sort_unstable();
                found.insert(t);
            }
            dead[b] = false;
        }
        dead[a] = false;
    }
    let mut cuts: Vec<EdgeCut> = found
        .into_iter()
        .filter_map(|t| EdgeCut::from_edges(g, &t.map(|e| edges[e])))
        .filter(|c| c.kind != CutKind::Trivial)
        .collect();
    cuts.sort();
    cuts.dedup();
    Ok(cuts)
}

/// A cubic graph is essentially 4-edge-connected when it has no nontrivial
/// 3-edge cut (and is 3-edge-connected).
pub fn is_essentially_4_edge_connected(g: &Graph) -> Result<bool, GraphError> {
    Ok(edge_connectivity(g) >= 3 && nontrivial_3_edge_cuts(g)?.is_empty())
}

/// Shortest-cycle seeds: for every edge, the shortest cycles through it
/// (at most `per_edge` of them), deduplicated by vertex set.
fn cycle_seeds(g: &Graph, per_edge: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut dist = vec![usize::MAX; n];
    for (u, v) in g.edges() {
        // BFS from u avoiding the edge u-v, then walk back all shortest v->u paths.
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for &y in g.neighbors(x) {
                if dist[y] == usize::MAX && !(x == u && y == v) {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if dist[v] == usize::MAX {
            continue;
        }
        let mut paths: Vec<Vec<usize>> = vec![vec![v]];
        for _ in 0..dist[v] {
            let mut next = Vec::new();
            for p in &paths {
                let x = *p.last().unwrap();
                for &y in g.neighbors(x) {
                    if dist[y] != usize::MAX
                        && dist[y] + 1 == dist[x]
                        && !(x == v && y == u)
                        && next.len() < per_edge
                    {
                        let mut q = p.clone();
                        q.push(y);
                        next.push(q);
                    }
                }
            }
            paths = next;
        }
        for mut p in paths {
            p.sort_unstable();
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
    }
    out
}

/// Minimum size of an edge cut leaving two components that both contain a
/// cycle; `None` when no such cut exists.
///
/// Pairs of vertex-disjoint shortest-cycle seeds are contracted and
/// separated by max-flow; the minimum over all pairs is returned.
pub fn cyclic_edge_connectivity(g: &Graph) -> Option<usize> {
    let seeds = cycle_seeds(g, 64);
    let n = g.n();
    let edges = g.edges();
    let mut best: Option<u32> = None;
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    for (i, a) in seeds.iter().enumerate() {
        a.iter().for_each(|&x| in_a[x] = true);
        for b in &seeds[i + 1..] {
            if b.iter().any(|&x| in_a[x]) {
                continue;
            }
            b.iter().for_each(|&x| in_b[x] = true);
            // Contract a into node n and b into node n + 1.
            let node = |x: usize| {
                if in_a[x] {
                    n
                } else if in_b[x] {
                    n + 1
                } else {
                    x
                }
            };
            let mut net = FlowNetwork::new(n + 2);
            for &(u, v) in &edges {
                let (p, q) = (node(u), node(v));
                if p != q {
                    net.add_undirected(p, q, 1);
                }
            }
            let limit = best.unwrap_or(u32::MAX);
            let f = net.max_flow(n, n + 1, limit);
            if best.is_none_or(|bst| f < bst) {
                best = Some(f);
            }
            b.iter().for_each(|&x| in_b[x] = false);
        }
        a.iter().for_each(|&x| in_a[x] = false);
    }
    best.map(|b| b as usize)
}
