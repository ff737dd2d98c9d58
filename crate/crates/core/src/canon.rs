//! Automorphism groups and canonical labelings by individualization and
//! refinement.
//!
//! The search tree is the usual one: each node is an equitable ordered
//! partition, children individualize one vertex of the first smallest
//! non-singleton cell, leaves are discrete partitions. A refinement trace
//! hash per level acts as the node invariant. The canonical leaf is the one
//! with the largest (trace, relabelled edge list) key. Automorphisms found by
//! comparing leaves prune the search at the first-path nodes (orbit pruning)
//! and by jumping back to the point of divergence.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::Graph;

#[derive(Clone)]
struct Partition {
    elems: Vec<usize>,
    pos: Vec<usize>,
    /// Start index of each vertex's cell.
    cell_of: Vec<usize>,
    /// End (exclusive) of the cell starting at a given index.
    cell_end: Vec<usize>,
    cells: usize,
}

impl Partition {
    fn from_colors(colors: &[u32]) -> (Partition, Vec<usize>) {
        let n = colors.len();
        let mut elems: Vec<usize> = (0..n).collect();
        elems.sort_by_key(|&v| (colors[v], v));
        let mut pos = vec![0; n];
        let mut cell_of = vec![0; n];
        let mut cell_end = vec![0; n];
        let mut starts = Vec::new();
        let mut start = 0;
        for i in 0..n {
            pos[elems[i]] = i;
            if i > 0 && colors[elems[i]] != colors[elems[i - 1]] {
                cell_end[start] = i;
                starts.push(start);
                start = i;
            }
            cell_of[elems[i]] = start;
        }
        if n > 0 {
            cell_end[start] = n;
            starts.push(start);
        }
        let cells = starts.len();
        (
            Partition {
                elems,
                pos,
                cell_of,
                cell_end,
                cells,
            },
            starts,
        )
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.elems.len()
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> Option<usize> {
        let n = self.elems.len();
        let mut best: Option<(usize, usize)> = None;
        let mut i = 0;
        while i < n {
            let e = self.cell_end[i];
            let size = e - i;
            if size > 1 && best.is_none_or(|(_, s)| size < s) {
                best = Some((i, size));
                if size == 2 {
                    break;
                }
            }
            i = e;
        }
        best.map(|(s, _)| s)
    }

    /// Splits `v` off the front of its cell; returns the new singleton cell.
    fn individualize(&mut self, v: usize) -> usize {
        let s = self.cell_of[v];
        let e = self.cell_end[s];
        let p = self.pos[v];
        let w = self.elems[s];
        self.elems.swap(s, p);
        self.pos[w] = p;
        self.pos[v] = s;
        self.cell_end[s] = s + 1;
        self.cell_end[s + 1] = e;
        for i in s + 1..e {
            self.cell_of[self.elems[i]] = s + 1;
        }
        self.cells += 1;
        s
    }
}

fn mix(h: u64, x: u64) -> u64 {
    // splitmix-style avalanche
    let mut z = h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Refiner<'a> {
    adj: &'a [Vec<usize>],
    count: Vec<usize>,
    touched: Vec<usize>,
    cell_touched: Vec<bool>,
    in_queue: Vec<bool>,
    scratch: Vec<(usize, usize)>,
}

impl<'a> Refiner<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        Refiner {
            adj,
            count: vec![0; n],
            touched: Vec::new(),
            cell_touched: vec![false; n],
            in_queue: vec![false; n],
            scratch: Vec::new(),
        }
    }

    /// Refines `p` to the coarsest equitable partition finer than it,
    /// starting from the given splitter cells. Returns a trace hash that is
    /// invariant under relabelling.
    fn refine(&mut self, p: &mut Partition, splitters: &[usize]) -> u64 {
        let mut trace = 0x5151_u64;
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in splitters {
            if !self.in_queue[s] {
                self.in_queue[s] = true;
                queue.push_back(s);
            }
        }
        let mut cells_touched: Vec<usize> = Vec::new();
        while let Some(s) = queue.pop_front() {
            self.in_queue[s] = false;
            if p.is_discrete() {
                continue;
            }
            let end = p.cell_end[s];
            for i in s..end {
                let x = p.elems[i];
                for &y in &self.adj[x] {
                    if self.count[y] == 0 {
                        self.touched.push(y);
                    }
                    self.count[y] += 1;
                }
            }
            trace = mix(trace, ((s as u64) << 32) | self.touched.len() as u64);
            cells_touched.clear();
            for &y in &self.touched {
                let c = p.cell_of[y];
                if !self.cell_touched[c] {
                    self.cell_touched[c] = true;
                    cells_touched.push(c);
                }
            }
            cells_touched.sort_unstable();
            for &c in &cells_touched {
                self.cell_touched[c] = false;
                let ce = p.cell_end[c];
                if ce - c == 1 {
                    continue;
                }
                self.scratch.clear();
                for i in c..ce {
                    let v = p.elems[i];
                    self.scratch.push((self.count[v], v));
                }
                let first = self.scratch[0].0;
                if self.scratch.iter().all(|&(k, _)| k == first) {
                    trace = mix(trace, (c as u64) << 16 | first as u64);
                    continue;
                }
                self.scratch.sort_unstable_by_key(|&(k, _)| k);
                let was_queued = self.in_queue[c];
                let mut runs: Vec<(usize, usize)> = Vec::new();
                let mut run_start = c;
                for (i, &(k, v)) in self.scratch.iter().enumerate() {
                    let at = c + i;
                    p.elems[at] = v;
                    p.pos[v] = at;
                    if i > 0 && k != self.scratch[i - 1].0 {
                        runs.push((run_start, at));
                        run_start = at;
                    }
                }
                runs.push((run_start, ce));
                for &(rs, re) in &runs {
                    p.cell_end[rs] = re;
                    for i in rs..re {
                        p.cell_of[p.elems[i]] = rs;
                    }
                    let k = self.scratch[rs - c].0;
                    trace = mix(trace, ((rs as u64) << 40) | ((re - rs) as u64) << 20 | k as u64);
                }
                p.cells += runs.len() - 1;
                let skip = if was_queued {
                    None
                } else {
                    // Hopcroft: every piece but one largest.
                    let mut big = 0;
                    for (i, &(rs, re)) in runs.iter().enumerate() {
                        if re - rs > runs[big].1 - runs[big].0 {
                            big = i;
                        }
                    }
                    Some(big)
                };
                for (i, &(rs, _)) in runs.iter().enumerate() {
                    if Some(i) != skip && !self.in_queue[rs] {
                        self.in_queue[rs] = true;
                        queue.push_back(rs);
                    }
                }
            }
            for &y in &self.touched {
                self.count[y] = 0;
            }
            self.touched.clear();
        }
        mix(trace, p.cells as u64)
    }
}

struct Leaf {
    path: Vec<usize>,
    invariants: Vec<u64>,
    /// Vertex at each canonical position.
    order: Vec<usize>,
    /// Relabelled sorted edge list.
    key: Vec<(usize, usize)>,
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    refiner: Refiner<'a>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
    path: Vec<usize>,
    invariants: Vec<u64>,
    /// Target-cell contents at each first-path node.
    first_cells: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn relabelled_edges(&self, p: &Partition) -> Vec<(usize, usize)> {
        let mut key = Vec::new();
        for (u, list) in self.adj.iter().enumerate() {
            let pu = p.pos[u];
            for &v in list {
                let pv = p.pos[v];
                if pu < pv {
                    key.push((pu, pv));
                }
            }
        }
        key.sort_unstable();
        key
    }

    fn compare_with(&self, leaf: &Option<Leaf>) -> Ordering {
        match leaf {
            None => Ordering::Greater,
            Some(l) => {
                let k = self.invariants.len().min(l.invariants.len());
                self.invariants[..k].cmp(&l.invariants[..k])
            }
        }
    }

    fn matches_first(&self) -> bool {
        match &self.first {
            None => true,
            Some(l) => {
                self.invariants.len() <= l.invariants.len()
                    && self.invariants[..] == l.invariants[..self.invariants.len()]
            }
        }
    }

    fn automorphism(&mut self, from: &[usize], to: &[usize]) {
        let mut perm = vec![0; from.len()];
        for (i, &v) in from.iter().enumerate() {
            perm[v] = to[i];
        }
        if perm.iter().enumerate().any(|(i, &v)| i != v) && !self.generators.contains(&perm) {
            self.generators.push(perm);
        }
    }

    /// Returns `Some(level)` to unwind the search to the node at `level`.
    fn visit(&mut self, p: Partition, on_first_path: bool) -> Option<usize> {
        let level = self.path.len();
        let first_eq = self.matches_first();
        let best_cmp = self.compare_with(&self.best);
        if self.first.is_some() && !first_eq && best_cmp == Ordering::Less {
            return None;
        }

        if p.is_discrete() {
            let key = self.relabelled_edges(&p);
            let leaf = Leaf {
                path: self.path.clone(),
                invariants: self.invariants.clone(),
                order: p.elems.clone(),
                key,
            };
            let Some(first) = &self.first else {
                self.best = Some(Leaf {
                    path: leaf.path.clone(),
                    invariants: leaf.invariants.clone(),
                    order: leaf.order.clone(),
                    key: leaf.key.clone(),
                });
                self.first = Some(leaf);
                return None;
            };
            if first_eq && first.invariants.len() == leaf.invariants.len() && first.key == leaf.key {
                let from = first.order.clone();
                let back = divergence(&first.path, &leaf.path);
                self.automorphism(&from, &leaf.order);
                return Some(back);
            }
            let best = self.best.as_ref().expect("best leaf exists once first does");
            let cmp = best_cmp.then_with(|| leaf.key.cmp(&best.key));
            match cmp {
                Ordering::Equal => {
                    let from = best.order.clone();
                    let back = divergence(&best.path, &leaf.path);
                    self.automorphism(&from, &leaf.order);
                    return Some(back);
                }
                Ordering::Greater => self.best = Some(leaf),
                Ordering::Less => {}
            }
            return None;
        }

        let target = p.target_cell().expect("non-discrete partition has a target cell");
        let mut cell: Vec<usize> = p.elems[target..p.cell_end[target]].to_vec();
        cell.sort_unstable();
        if on_first_path {
            self.first_cells.push(cell.clone());
        }
        let mut explored: Vec<usize> = Vec::new();
        for (idx, &v) in cell.iter().enumerate() {
            if on_first_path && idx > 0 {
                let orbit_of = self.stabilizer_orbits(level);
                if explored.iter().any(|&w| orbit_of[w] == orbit_of[v]) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = p.clone();
            let s = child.individualize(v);
            let inv = self.refiner.refine(&mut child, &[s]);
            self.path.push(v);
            self.invariants.push(inv);
            let res = self.visit(child, on_first_path && idx == 0);
            self.path.pop();
            self.invariants.pop();
            if let Some(back) = res {
                if back < level {
                    return Some(back);
                }
            }
        }
        None
    }

    /// Orbit representative of each vertex under the generators fixing the
    /// first `level` first-path vertices.
    fn stabilizer_orbits(&self, level: usize) -> Vec<usize> {
        let first_path = &self.first.as_ref().expect("first leaf").path;
        let fixed = &first_path[..level];
        let gens = self
            .generators
            .iter()
            .filter(|g| fixed.iter().all(|&x| g[x] == x));
        orbits_of(self.adj.len(), gens)
    }
}

fn divergence(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Orbit label (the minimum element) of each point under the group
/// generated by `gens`.
pub fn orbits_of<'g>(n: usize, gens: impl IntoIterator<Item = &'g Vec<usize>>) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    for g in gens {
        for (x, &y) in g.iter().enumerate() {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi] = lo;
            }
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// Canonical labeling of a vertex-coloured graph together with its
/// automorphism group.
#[derive(Debug, Clone)]
pub struct CanonicalLabeling {
    /// `labeling[v]` is the canonical position of vertex `v`.
    pub labeling: Vec<usize>,
    /// Generators of the colour-preserving automorphism group.
    pub generators: Vec<Vec<usize>>,
    pub group_order: u128,
    /// Orbit label (minimum vertex) per vertex.
    pub orbits: Vec<usize>,
}

impl CanonicalLabeling {
    pub fn canonical_graph(&self, g: &Graph) -> Graph {
        g.relabel(&self.labeling)
    }
}

/// Runs the search. Colours are any `u32`s; vertices of different colours
/// are never mapped onto each other and the colour classes are ordered by
/// colour value in the canonical labeling.
pub fn canonical_labeling(g: &Graph, colors: Option<&[u32]>) -> CanonicalLabeling {
    let n = g.n();
    if n == 0 {
        return CanonicalLabeling {
            labeling: Vec::new(),
            generators: Vec::new(),
            group_order: 1,
            orbits: Vec::new(),
        };
    }
    let uniform = vec![0u32; n];
    let colors = colors.unwrap_or(&uniform);
    assert_eq!(colors.len(), n, "one colour per vertex");
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let (mut root, starts) = Partition::from_colors(colors);
    let mut search = Search {
        adj: &adj,
        refiner: Refiner::new(&adj),
        first: None,
        best: None,
        generators: Vec::new(),
        path: Vec::new(),
        invariants: Vec::new(),
        first_cells: Vec::new(),
    };
    let inv = search.refiner.refine(&mut root, &starts);
    search.invariants.push(inv);
    search.visit(root, true);

    let first_path = search.first.as_ref().expect("search reaches a leaf").path.clone();
    let mut order: u128 = 1;
    for (level, &v) in first_path.iter().enumerate() {
        let orbit = search.stabilizer_orbits(level);
        let size = search.first_cells[level]
            .iter()
            .filter(|&&w| orbit[w] == orbit[v])
            .count() as u128;
        order = order.saturating_mul(size);
    }
    let best = search.best.expect("search reaches a leaf");
    let mut labeling = vec![0; n];
    for (i, &v) in best.order.iter().enumerate() {
        labeling[v] = i;
    }
    let orbits = orbits_of(n, &search.generators);
    CanonicalLabeling {
        labeling,
        generators: search.generators,
        group_order: order,
        orbits,
    }
}

/// Byte string that is equal for two graphs exactly when they are
/// isomorphic.
pub fn canonical_form(g: &Graph) -> Vec<u8> {
    canonical_form_colored(g, None)
}

/// Like [`canonical_form`], but isomorphisms must preserve colours.
pub fn canonical_form_colored(g: &Graph, colors: Option<&[u32]>) -> Vec<u8> {
    let cl = canonical_labeling(g, colors);
    encode_form(g, &cl.labeling, colors)
}

pub(crate) fn encode_form(g: &Graph, labeling: &[usize], colors: Option<&[u32]>) -> Vec<u8> {
    let n = g.n();
    let mut out = Vec::with_capacity(4 + 8 * g.edge_count());
    out.extend((n as u32).to_le_bytes());
    if let Some(colors) = colors {
        let mut by_pos = vec![0u32; n];
        for v in 0..n {
            by_pos[labeling[v]] = colors[v];
        }
        for c in by_pos {
            out.extend(c.to_le_bytes());
        }
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (labeling[u], labeling[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    for (a, b) in edges {
        out.extend((a as u32).to_le_bytes());
        out.extend((b as u32).to_le_bytes());
    }
    out
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.n() == h.n() && g.edge_count() == h.edge_count() && canonical_form(g) == canonical_form(h)
}

/// Automorphism group summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutomorphismInfo {
    pub generators: Vec<Vec<usize>>,
    pub group_order: u128,
    /// Vertex orbits, each sorted, ordered by least element.
    pub vertex_orbits: Vec<Vec<usize>>,
    /// Edge orbits, each sorted, ordered by least edge.
    pub edge_orbits: Vec<Vec<(usize, usize)>>,
}

pub fn automorphisms(g: &Graph) -> AutomorphismInfo {
    let cl = canonical_labeling(g, None);
    let n = g.n();
    let vertex_orbits = group_classes(&cl.orbits);

    let edges = g.edges();
    let edge_gens: Vec<Vec<usize>> = cl
        .generators
        .iter()
        .map(|perm| {
            edges
                .iter()
                .map(|&(u, v)| g.edge_index(perm[u], perm[v]).expect("automorphism maps edges to edges"))
                .collect()
        })
        .collect();
    let edge_labels = orbits_of(edges.len(), &edge_gens);
    let edge_orbits = group_classes(&edge_labels)
        .into_iter()
        .map(|cls| cls.into_iter().map(|e| edges[e]).collect())
        .collect();
    debug_assert_eq!(cl.orbits.len(), n);
    AutomorphismInfo {
        generators: cl.generators,
        group_order: cl.group_order,
        vertex_orbits,
        edge_orbits,
    }
}

fn group_classes(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; labels.len()];
    for (x, &l) in labels.iter().enumerate() {
        if index[l] == usize::MAX {
            index[l] = classes.len();
            classes.push(Vec::new());
        }
        classes[index[l]].push(x);
    }
    classes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Transitivity {
    pub vertex_transitive: bool,
    pub edge_transitive: bool,
    pub semisymmetric: bool,
}

pub fn transitivity(g: &Graph) -> Transitivity {
    transitivity_from(g, &automorphisms(g))
}

pub fn transitivity_from(g: &Graph, info: &AutomorphismInfo) -> Transitivity {
    let vertex_transitive = info.vertex_orbits.len() <= 1;
    let edge_transitive = info.edge_orbits.len() == 1;
    Transitivity {
        vertex_transitive,
        edge_transitive,
        semisymmetric: g.is_regular() && edge_transitive && !vertex_transitive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph6::parse_graph6;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn small_group_orders() {
        assert_eq!(automorphisms(&parse_graph6("C~").unwrap()).group_order, 24);
        assert_eq!(automorphisms(&cycle(7)).group_order, 14);
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(automorphisms(&path).group_order, 2);
        assert_eq!(automorphisms(&Graph::empty(4)).group_order, 24);
    }

    #[test]
    fn generators_are_automorphisms() {
        let g = cycle(9);
        let info = automorphisms(&g);
        assert!(info.generators.iter().all(|p| g.is_automorphism(p)));
        assert_eq!(info.vertex_orbits.len(), 1);
        assert_eq!(info.edge_orbits.len(), 1);
    }

    #[test]
    fn colours_restrict_the_group() {
        let g = cycle(4);
        let cl = canonical_labeling(&g, Some(&[0, 1, 0, 1]));
        assert_eq!(cl.group_order, 4);
        let cl = canonical_labeling(&g, Some(&[0, 0, 1, 1]));
        assert_eq!(cl.group_order, 2);
    }

    #[test]
    fn canonical_form_distinguishes() {
        let c6 = cycle(6);
        let two_triangles =
            Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_ne!(canonical_form(&c6), canonical_form(&two_triangles));
        assert_eq!(canonical_form(&c6), canonical_form(&c6.relabel(&[3, 5, 1, 0, 2, 4])));
    }
}
