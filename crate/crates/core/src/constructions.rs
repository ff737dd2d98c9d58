//! Named graphs, the star product and its inverse, the 3-cut reduction.

use std::collections::VecDeque;

use thiserror::Error;

use crate::canon::canonical_form;
use crate::graph::{Graph, GraphError};
use crate::graph6::parse_graph6;
use crate::structure::{nontrivial_3_edge_cuts, CutKind, EdgeCut};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("unknown graph name {0:?}")]
    UnknownName(String),
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotDegreeThree { vertex: usize, degree: usize },
    #[error("pairing {0:?} is not a permutation of 0..3")]
    BadPairing([usize; 3]),
    #[error("cut is not a 3-edge bond leaving two components")]
    NotAThreeCut,
    #[error("cut is trivial")]
    TrivialCut,
    #[error("a vertex meets two cut edges; reduction would create a multigraph")]
    Multigraph,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Names accepted by [`named`].
pub const NAMES: &[&str] = &["K4", "K5", "K33", "Petersen", "Heawood", "Pappus", "Gray", "G30"];

/// The 30-vertex essentially 4-edge-connected pseudo 2-factor isomorphic
/// graph that is not 2-factor isomorphic, in graph6.
const G30_GRAPH6: &str = include_str!("../../../data/named/G30.g6");

/// Builds a named graph with a fixed labeling:
///
/// * `K33`: sides `{0,1,2}` and `{3,4,5}`.
/// * `Petersen`: outer 5-cycle `0..5`, spokes `i - i+5`, inner pentagram.
/// * `Heawood`: incidence graph of the Fano plane with points `0..7` and
///   line `7 + j` through points `j, j+1, j+3 (mod 7)`.
/// * `Pappus`: Hamiltonian cycle `0..18` with LCF chords `[5,7,-7,7,-7,-5]^3`.
/// * `Gray`: see [`gray`].
/// * `G30`: loaded from embedded graph6 data.
pub fn named(name: &str) -> Result<Graph, ConstructionError> {
    let g = match name.to_ascii_lowercase().as_str() {
        "k4" => complete(4),
        "k5" => complete(5),
        "k33" | "k3,3" => complete_bipartite(3, 3),
        "petersen" => {
            let mut e = Vec::new();
            for i in 0..5 {
                e.push((i, (i + 1) % 5));
                e.push((i, i + 5));
                e.push((i + 5, (i + 2) % 5 + 5));
            }
            Graph::from_edges(10, &e)?
        }
        "heawood" => {
            let mut e = Vec::new();
            for j in 0..7 {
                for k in [0, 1, 3] {
                    e.push(((j + k) % 7, 7 + j));
                }
            }
            Graph::from_edges(14, &e)?
        }
        "pappus" => lcf(18, &[5, 7, -7, 7, -7, -5]),
        "gray" => gray(),
        "g30" => parse_graph6(G30_GRAPH6.trim()).expect("embedded G30 data is valid graph6"),
        _ => return Err(ConstructionError::UnknownName(name.to_string())),
    };
    Ok(g)
}

pub fn complete(n: usize) -> Graph {
    let e: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Graph::from_edges(n, &e).expect("complete graph is simple")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let e: Vec<_> = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
    Graph::from_edges(a + b, &e).expect("complete bipartite graph is simple")
}

/// Cubic graph from LCF notation: a Hamiltonian cycle `0..n` plus chords
/// `i - (i + shifts[i mod len])`.
pub fn lcf(n: usize, shifts: &[isize]) -> Graph {
    let mut e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for i in 0..n {
        let j = (i as isize + shifts[i % shifts.len()]).rem_euclid(n as isize) as usize;
        if i < j {
            e.push((i, j));
        }
    }
    Graph::from_edges(n, &e).expect("LCF description yields a simple graph")
}

/// Bouwer's construction of the Gray graph. Take three copies of `K33`;
/// for each of its nine edges, subdivide that edge in every copy and join
/// the three subdivision vertices to a new apex.
///
/// Labels: in copy `c` the sides are `a_i = 6c + i` and `b_j = 6c + 3 + j`;
/// the edge `a_i b_j` has index `e = 3i + j`, its subdivision vertex in copy
/// `c` is `18 + 9c + e` and its apex is `45 + e`.
pub fn gray() -> Graph {
    let mut edges = Vec::with_capacity(81);
    for c in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let e = 3 * i + j;
                let sub = 18 + 9 * c + e;
                edges.push((6 * c + i, sub));
                edges.push((sub, 6 * c + 3 + j));
                edges.push((sub, 45 + e));
            }
        }
    }
    Graph::from_edges(54, &edges).expect("Gray construction is simple")
}

/// Two cubic graphs glued at a vertex of each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarProductSpec {
    pub g1: Graph,
    pub g2: Graph,
    pub x: usize,
    pub y: usize,
    /// The `i`-th neighbour of `x` (ascending) is joined to the
    /// `pairing[i]`-th neighbour of `y` (ascending).
    pub pairing: [usize; 3],
}

/// `(g1 - x) ∪ (g2 - y)` plus a perfect matching between the former
/// neighbourhoods of `x` and `y`.
///
/// Vertices of `g1 - x` keep their relative order and come first, followed
/// by those of `g2 - y`.
pub fn star_product(spec: &StarProductSpec) -> Result<Graph, ConstructionError> {
    let StarProductSpec { g1, g2, x, y, pairing } = spec;
    for (g, v) in [(g1, *x), (g2, *y)] {
        if g.degree(v) != 3 {
            return Err(ConstructionError::NotDegreeThree {
                vertex: v,
                degree: g.degree(v),
            });
        }
    }
    let mut seen = [false; 3];
    for &p in pairing {
        if p >= 3 || std::mem::replace(&mut seen[p], true) {
            return Err(ConstructionError::BadPairing(*pairing));
        }
    }
    let map1 = |v: usize| if v < *x { v } else { v - 1 };
    let off = g1.n() - 1;
    let map2 = |v: usize| off + if v < *y { v } else { v - 1 };
    let mut edges = Vec::new();
    for (u, v) in g1.edges() {
        if u != *x && v != *x {
            edges.push((map1(u), map1(v)));
        }
    }
    for (u, v) in g2.edges() {
        if u != *y && v != *y {
            edges.push((map2(u), map2(v)));
        }
    }
    let xs = g1.neighbors(*x);
    let ys = g2.neighbors(*y);
    for i in 0..3 {
        edges.push((map1(xs[i]), map2(ys[pairing[i]])));
    }
    Ok(Graph::from_edges(g1.n() + g2.n() - 2, &edges)?)
}

/// The two sides of a 3-cut reduction. In each side the new vertex is the
/// last one; the remaining vertices keep their relative order from the
/// host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutReduction {
    pub left: Graph,
    pub right: Graph,
    /// Original vertex of each non-new vertex, per side.
    pub left_vertices: Vec<usize>,
    pub right_vertices: Vec<usize>,
    /// Pairing that rebuilds the host via [`star_product`] with
    /// `x`, `y` the new vertices.
    pub pairing: [usize; 3],
}

impl CutReduction {
    pub fn into_pair(self) -> (Graph, Graph) {
        (self.left, self.right)
    }

    pub fn star_spec(&self) -> StarProductSpec {
        StarProductSpec {
            g1: self.left.clone(),
            g2: self.right.clone(),
            x: self.left.n() - 1,
            y: self.right.n() - 1,
            pairing: self.pairing,
        }
    }
}

/// Removes a nontrivial 3-edge cut and closes each side with a new vertex.
pub fn three_cut_reduction(g: &Graph, cut_edges: &[(usize, usize)]) -> Result<CutReduction, ConstructionError> {
    g.require_cubic()?;
    if cut_edges.len() != 3 {
        return Err(ConstructionError::NotAThreeCut);
    }
    let cut = EdgeCut::from_edges(g, cut_edges).ok_or(ConstructionError::NotAThreeCut)?;
    if cut.edges.len() != 3 {
        return Err(ConstructionError::NotAThreeCut);
    }
    if cut.kind == CutKind::Trivial {
        return Err(ConstructionError::TrivialCut);
    }
    let mut left_vertices = cut.side.clone();
    let mut right_vertices = cut.other_side(g.n());
    if right_vertices[0] < left_vertices[0] {
        std::mem::swap(&mut left_vertices, &mut right_vertices);
    }
    let mut on_left = vec![false; g.n()];
    left_vertices.iter().for_each(|&v| on_left[v] = true);

    let close = |verts: &[usize], left: bool| -> Result<(Graph, Vec<usize>), ConstructionError> {
        let mut index = vec![usize::MAX; g.n()];
        verts.iter().enumerate().for_each(|(i, &v)| index[v] = i);
        let new = verts.len();
        let mut edges = Vec::new();
        let mut ends = Vec::new();
        for &(u, v) in &cut.edges {
            let end = if on_left[u] == left { u } else { v };
            ends.push(index[end]);
            edges.push((index[end], new));
        }
        for &v in verts {
            for &w in g.neighbors(v) {
                if v < w && index[w] != usize::MAX {
                    edges.push((index[v], index[w]));
                }
            }
        }
        let h = Graph::from_edges(new + 1, &edges).map_err(|_| ConstructionError::Multigraph)?;
        Ok((h, ends))
    };
    let (left, left_ends) = close(&left_vertices, true)?;
    let (right, right_ends) = close(&right_vertices, false)?;
    // Cut edge k joins left_ends[k] and right_ends[k]; express that as a
    // pairing between the sorted neighbour lists of the two new vertices.
    let ln = left.neighbors(left.n() - 1).to_vec();
    let rn = right.neighbors(right.n() - 1).to_vec();
    let mut pairing = [0; 3];
    for k in 0..3 {
        let i = ln.binary_search(&left_ends[k]).expect("cut end is adjacent to new vertex");
        pairing[i] = rn.binary_search(&right_ends[k]).expect("cut end is adjacent to new vertex");
    }
    Ok(CutReduction {
        left,
        right,
        left_vertices,
        right_vertices,
        pairing,
    })
}

/// Which nontrivial 3-cut to reduce next when several exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutChoice {
    Smallest,
    Largest,
    /// Index `seed mod count`, with the seed advanced per step.
    Seeded(u64),
}

/// Essentially 4-edge-connected constituents, sorted by canonical form.
pub fn constituents(g: &Graph) -> Result<Vec<Graph>, ConstructionError> {
    constituents_with(g, CutChoice::Smallest)
}

pub fn constituents_with(g: &Graph, choice: CutChoice) -> Result<Vec<Graph>, ConstructionError> {
    g.require_cubic()?;
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let mut state = match choice {
        CutChoice::Seeded(s) => s,
        _ => 0,
    };
    let mut done: Vec<(Vec<u8>, Graph)> = Vec::new();
    let mut work = VecDeque::from([g.clone()]);
    while let Some(h) = work.pop_front() {
        let cuts = nontrivial_3_edge_cuts(&h)?;
        if cuts.is_empty() {
            done.push((canonical_form(&h), h));
            continue;
        }
        let pick = match choice {
            CutChoice::Smallest => 0,
            CutChoice::Largest => cuts.len() - 1,
            CutChoice::Seeded(_) => {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 33) % cuts.len() as u64) as usize
            }
        };
        let (a, b) = three_cut_reduction(&h, &cuts[pick].edges)?.into_pair();
        work.push_back(a);
        work.push_back(b);
    }
    done.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(done.into_iter().map(|(_, h)| h).collect())
}
