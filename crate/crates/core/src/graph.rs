//! Simple undirected graphs on dense vertex ids `0..n`.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Errors raised while building or validating a [`Graph`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(usize, usize),
    #[error("graph is not cubic (vertex {vertex} has degree {degree})")]
    NotCubic { vertex: usize, degree: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has an odd number of vertices ({0})")]
    OddOrder(usize),
}

/// An undirected simple graph stored as sorted adjacency lists.
///
/// Vertices are `0..n`. Every neighbor list is strictly increasing and the
/// adjacency relation is symmetric; both are enforced by the constructors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, rejecting loops, parallel edges and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::ParallelEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { adj })
    }

    /// Builds a graph from adjacency lists. Lists are sorted; symmetry, loops
    /// and duplicates are checked.
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let n = adj.len();
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            for w in list.windows(2) {
                if w[0] == w[1] {
                    return Err(GraphError::ParallelEdge(u.min(w[0]), u.max(w[0])));
                }
            }
            for &v in list.iter() {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
                if v == u {
                    return Err(GraphError::SelfLoop(u));
                }
            }
        }
        for u in 0..n {
            for &v in &adj[u] {
                if adj[v].binary_search(&u).is_err() {
                    return Err(GraphError::ParallelEdge(u.min(v), u.max(v)));
                }
            }
        }
        Ok(Graph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Position of edge `(u, v)` in [`Graph::edges`], if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let (u, v) = (u.min(v), u.max(v));
        if !self.has_edge(u, v) {
            return None;
        }
        let before: usize = self.adj[..u]
            .iter()
            .enumerate()
            .map(|(w, list)| list.iter().filter(|&&x| x > w).count())
            .sum();
        let within = self.adj[u].iter().filter(|&&x| x > u && x < v).count();
        Some(before + within)
    }

    pub fn is_regular(&self) -> bool {
        self.adj.windows(2).all(|w| w[0].len() == w[1].len())
    }

    pub fn is_cubic(&self) -> bool {
        self.adj.iter().all(|l| l.len() == 3)
    }

    pub fn require_cubic(&self) -> Result<(), GraphError> {
        match self.adj.iter().position(|l| l.len() != 3) {
            None => Ok(()),
            Some(v) => Err(GraphError::NotCubic {
                vertex: v,
                degree: self.adj[v].len(),
            }),
        }
    }

    /// Component index per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// True for the graphs with exactly one component (the empty graph on
    /// zero vertices is not connected).
    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.components().1 == 1
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length mismatch");
        let mut adj = vec![Vec::new(); self.n()];
        for (u, list) in self.adj.iter().enumerate() {
            adj[perm[u]] = list.iter().map(|&v| perm[v]).collect();
            adj[perm[u]].sort_unstable();
        }
        Graph { adj }
    }

    /// Induced subgraph on `vertices` (relabelled `0..k` in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut l: Vec<usize> = self.adj[v]
                    .iter()
                    .filter(|&&w| index[w] != usize::MAX)
                    .map(|&w| index[w])
                    .collect();
                l.sort_unstable();
                l
            })
            .collect();
        Graph { adj }
    }

    /// Disjoint union, with `other`'s vertices shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|l| l.iter().map(|&v| v + off).collect::<Vec<_>>()),
        );
        Graph { adj }
    }

    /// Whether `perm` maps edges to edges (and is a permutation).
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.n() {
            return false;
        }
        let mut seen = vec![false; self.n()];
        for &p in perm {
            if p >= self.n() || std::mem::replace(&mut seen[p], true) {
                return false;
            }
        }
        self.adj.iter().enumerate().all(|(u, list)| {
            self.adj[perm[u]].len() == list.len()
                && list.iter().all(|&v| self.has_edge(perm[u], perm[v]))
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_parallels() {
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(GraphError::ParallelEdge(0, 1))
        );
        assert!(matches!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn adjacency_is_sorted_and_symmetric() {
        let g = Graph::from_edges(4, &[(3, 0), (2, 0), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.neighbors(2), &[0, 1]);
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (0, 3), (1, 2)]);
        assert_eq!(g.edge_index(2, 1), Some(3));
        assert_eq!(g.edge_index(2, 3), None);
    }

    #[test]
    fn from_adjacency_checks_symmetry() {
        assert!(Graph::from_adjacency(vec![vec![1], vec![]]).is_err());
        assert!(Graph::from_adjacency(vec![vec![1], vec![0]]).is_ok());
    }

    #[test]
    fn components_and_relabel() {
        let g = Graph::from_edges(5, &[(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components().1, 3);
        assert!(!g.is_connected());
        let h = g.relabel(&[4, 3, 2, 1, 0]);
        assert!(h.has_edge(4, 3) && h.has_edge(1, 0));
        assert!(g.is_automorphism(&[1, 0, 2, 4, 3]));
        assert!(!g.is_automorphism(&[2, 0, 1, 4, 3]));
    }
}
