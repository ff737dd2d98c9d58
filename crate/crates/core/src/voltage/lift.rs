//! Base multigraphs, voltage assignments, regular lifts, and exhaustive
//! enumeration of lifts with a girth bound.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use super::group::FiniteGroup;
use crate::canon::canonical_form;
use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("expected {expected} voltages, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("voltage {0} is not a group element")]
    BadElement(usize),
    #[error("lift has a loop at base vertex {0}")]
    Loop(usize),
    #[error("lift has parallel edges")]
    ParallelEdge,
    #[error("base vertex {0} out of range")]
    VertexOutOfRange(usize),
}

/// Undirected multigraph with loops. Edge `e` has arcs `2e` (as given) and
/// `2e + 1` (reversed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseGraph {
    n: usize,
    ends: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
}

impl BaseGraph {
    pub fn new(n: usize) -> Self {
        BaseGraph {
            n,
            ends: Vec::new(),
            out: vec![Vec::new(); n],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize, LiftError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(LiftError::VertexOutOfRange(x));
            }
        }
        let e = self.ends.len();
        self.ends.push((u, v));
        self.out[u].push(2 * e);
        self.out[v].push(2 * e + 1);
        Ok(e)
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut b = BaseGraph::new(g.n());
        for (u, v) in g.edges() {
            b.add_edge(u, v).expect("in range");
        }
        b
    }

    /// Two vertices joined by three parallel edges.
    pub fn theta() -> Self {
        let mut b = BaseGraph::new(2);
        for _ in 0..3 {
            b.add_edge(0, 1).expect("in range");
        }
        b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub fn arc_tail(&self, a: usize) -> usize {
        let (u, v) = self.ends[a / 2];
        if a % 2 == 0 {
            u
        } else {
            v
        }
    }

    pub fn arc_head(&self, a: usize) -> usize {
        self.arc_tail(a ^ 1)
    }

    /// Arcs leaving `v`; a loop contributes both of its arcs.
    pub fn arcs_from(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs_tree().iter().filter(|t| t.is_some()).count() == self.n - 1
    }

    /// Parent arc (pointing from parent to child) of each vertex in a BFS
    /// tree from vertex 0, trying arcs in order.
    fn bfs_tree(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.n];
        if self.n == 0 {
            return parent;
        }
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.out[u] {
                let v = self.arc_head(a);
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(a);
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    /// Edges of the BFS spanning tree from vertex 0.
    pub fn spanning_tree(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.bfs_tree().into_iter().flatten().map(|a| a / 2).collect();
        t.sort_unstable();
        t
    }
}

/// Group element per edge, read along arc `2e`; arc `2e + 1` carries the
/// inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoltageAssignment {
    pub base: BaseGraph,
    pub group: FiniteGroup,
    voltages: Vec<usize>,
}

impl VoltageAssignment {
    pub fn new(base: BaseGraph, group: FiniteGroup, voltages: Vec<usize>) -> Result<Self, LiftError> {
        if voltages.len() != base.edge_count() {
            return Err(LiftError::WrongLength {
                expected: base.edge_count(),
                found: voltages.len(),
            });
        }
        if let Some(&x) = voltages.iter().find(|&&x| x >= group.order()) {
            return Err(LiftError::BadElement(x));
        }
        Ok(VoltageAssignment { base, group, voltages })
    }

    pub fn voltages(&self) -> &[usize] {
        &self.voltages
    }

    pub fn arc_voltage(&self, a: usize) -> usize {
        let x = self.voltages[a / 2];
        if a % 2 == 0 {
            x
        } else {
            self.group.inv(x)
        }
    }

    /// An equivalent assignment (isomorphic lift) that is the identity on
    /// the BFS spanning tree.
    pub fn normalized(&self) -> Self {
        let gr = &self.group;
        let mut potential = vec![0; self.base.n()];
        let parent = self.base.bfs_tree();
        let mut order: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.base.n()];
        if self.base.n() > 0 {
            let mut queue = VecDeque::from([0]);
            seen[0] = true;
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &a in self.base.arcs_from(u) {
                    let v = self.base.arc_head(a);
                    if !seen[v] && parent[v] == Some(a) {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        for &v in &order {
            if let Some(a) = parent[v] {
                potential[v] = gr.mul(potential[self.base.arc_tail(a)], self.arc_voltage(a));
            }
        }
        let voltages = (0..self.base.edge_count())
            .map(|e| {
                let (u, v) = self.base.edge(e);
                gr.mul(gr.mul(potential[u], self.voltages[e]), gr.inv(potential[v]))
            })
            .collect();
        VoltageAssignment {
            base: self.base.clone(),
            group: self.group.clone(),
            voltages,
        }
    }
}

/// The regular lift: vertex `(v, g)` is `v·|Γ| + g`, and arc `u → v` with
/// voltage α gives the edges `(u, g) - (v, g·α)`.
pub fn lift(a: &VoltageAssignment) -> Result<Graph, LiftError> {
    let k = a.group.order();
    let mut edges = Vec::with_capacity(a.base.edge_count() * k);
    for e in 0..a.base.edge_count() {
        let (u, v) = a.base.edge(e);
        let alpha = a.voltages[e];
        if u == v && alpha == 0 {
            return Err(LiftError::Loop(u));
        }
        for g in 0..k {
            let h = a.group.mul(g, alpha);
            if u == v && h < g && a.group.mul(h, alpha) == g {
                // A loop whose voltage has order two meets each lifted edge twice.
                return Err(LiftError::ParallelEdge);
            }
            edges.push((u * k + g, v * k + h));
        }
    }
    Graph::from_edges(a.base.n() * k, &edges).map_err(|e| match e {
        GraphError::SelfLoop(x) => LiftError::Loop(x / k),
        GraphError::ParallelEdge(..) => LiftError::ParallelEdge,
        other => unreachable!("{other}"),
    })
}

#[derive(Debug, Clone)]
pub struct LiftOptions {
    pub min_girth: usize,
    /// Drop lifts that are not connected.
    pub connected_only: bool,
    pub workers: usize,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            min_girth: 3,
            connected_only: true,
            workers: 1,
        }
    }
}

/// A lift found by [`enumerate_lifts`], with the normalized voltages that
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundLift {
    pub voltages: Vec<usize>,
    pub graph: Graph,
}

/// Closed non-backtracking walks of length below `limit` that are also
/// cyclically reduced, as arc sequences. Each walk starts on an arc of its
/// least edge; rotations that start elsewhere are skipped.
fn short_closed_walks(base: &BaseGraph, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut walk = Vec::new();
    fn extend(base: &BaseGraph, start: usize, limit: usize, walk: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let first = walk[0];
        let last = *walk.last().expect("nonempty");
        let here = base.arc_head(last);
        if here == base.arc_tail(first) && (last ^ 1) != first {
            out.push(walk.clone());
        }
        if walk.len() + 1 >= limit {
            return;
        }
        for &a in base.arcs_from(here) {
            if a == last ^ 1 || a / 2 < start {
                continue;
            }
            walk.push(a);
            extend(base, start, limit, walk, out);
            walk.pop();
        }
    }
    for e in 0..base.edge_count() {
        for a in [2 * e, 2 * e + 1] {
            walk.push(a);
            extend(base, e, limit, &mut walk, &mut out);
            walk.pop();
        }
    }
    out
}

struct Plan {
    /// Cotree edges in assignment order.
    order: Vec<usize>,
    /// Walks to test right after assigning `order[i]`.
    checks: Vec<Vec<Vec<usize>>>,
}

fn plan(base: &BaseGraph, min_girth: usize) -> Plan {
    let tree = base.spanning_tree();
    let mut assigned = vec![false; base.edge_count()];
    for &e in &tree {
        assigned[e] = true;
    }
    let walks = short_closed_walks(base, min_girth);
    let mut missing: Vec<Vec<usize>> = walks
        .iter()
        .map(|w| {
            let mut m: Vec<usize> = w.iter().map(|a| a / 2).filter(|&e| !assigned[e]).collect();
            m.sort_unstable();
            m.dedup();
            m
        })
        .collect();
    let mut order = Vec::new();
    let mut checks = Vec::new();
    let mut remaining: Vec<usize> = (0..base.edge_count()).filter(|&e| !assigned[e]).collect();
    while !remaining.is_empty() {
        // Greedy: the edge that completes the most walks, then the one that
        // touches the most, then the lowest index.
        let score = |e: usize| {
            let mut done = 0usize;
            let mut touch = 0usize;
            for m in &missing {
                if m.contains(&e) {
                    touch += 1;
                    if m.len() == 1 {
                        done += 1;
                    }
                }
            }
            (done, touch)
        };
        let (pos, &e) = remaining
            .iter()
            .enumerate()
            .max_by(|(_, &a), (_, &b)| score(a).cmp(&score(b)).then(b.cmp(&a)))
            .expect("nonempty");
        remaining.remove(pos);
        let mut now = Vec::new();
        for (i, m) in missing.iter_mut().enumerate() {
            if let Some(p) = m.iter().position(|&x| x == e) {
                m.remove(p);
                if m.is_empty() {
                    now.push(walks[i].clone());
                }
            }
        }
        order.push(e);
        checks.push(now);
    }
    Plan { order, checks }
}

fn walk_voltage(group: &FiniteGroup, volt: &[usize], walk: &[usize]) -> usize {
    walk.iter().fold(0, |acc, &a| {
        let x = volt[a / 2];
        group.mul(acc, if a % 2 == 0 { x } else { group.inv(x) })
    })
}

/// Walks of length below `min_girth` that use tree edges only; if any
/// exists the tree itself rules out every lift.
fn tree_only_walks(base: &BaseGraph, min_girth: usize) -> bool {
    let tree = base.spanning_tree();
    short_closed_walks(base, min_girth)
        .iter()
        .any(|w| w.iter().all(|a| tree.binary_search(&(a / 2)).is_ok()))
}

struct Searcher<'a, F> {
    base: &'a BaseGraph,
    group: &'a FiniteGroup,
    plan: &'a Plan,
    opts: &'a LiftOptions,
    filter: &'a F,
    volt: Vec<usize>,
    found: BTreeMap<Vec<u8>, FoundLift>,
}

impl<F: Fn(&Graph) -> bool> Searcher<'_, F> {
    fn search(&mut self, depth: usize) {
        if depth == self.plan.order.len() {
            self.leaf();
            return;
        }
        let e = self.plan.order[depth];
        for x in 0..self.group.order() {
            self.volt[e] = x;
            if self.plan.checks[depth]
                .iter()
                .all(|w| walk_voltage(self.group, &self.volt, w) != 0)
            {
                self.search(depth + 1);
            }
        }
        self.volt[e] = 0;
    }

    fn leaf(&mut self) {
        if self.opts.connected_only {
            let cotree: Vec<usize> = self.plan.order.iter().map(|&e| self.volt[e]).collect();
            if self.group.generated_order(&cotree) != self.group.order() || !self.base.is_connected() {
                return;
            }
        }
        let a = VoltageAssignment {
            base: self.base.clone(),
            group: self.group.clone(),
            voltages: self.volt.clone(),
        };
        let Ok(g) = lift(&a) else { return };
        if !(self.filter)(&g) {
            return;
        }
        let key = canonical_form(&g);
        match self.found.get(&key) {
            Some(f) if f.voltages <= self.volt => {}
            _ => {
                self.found.insert(
                    key,
                    FoundLift {
                        voltages: self.volt.clone(),
                        graph: g,
                    },
                );
            }
        }
    }
}

/// All pairwise non-isomorphic simple lifts of `base` over `group` with
/// girth at least `min_girth` that pass `filter`, sorted by canonical form.
/// Voltages are the identity on the BFS spanning tree; each class is
/// represented by its lexicographically smallest voltage vector.
pub fn enumerate_lifts<F>(base: &BaseGraph, group: &FiniteGroup, opts: &LiftOptions, filter: F) -> Vec<FoundLift>
where
    F: Fn(&Graph) -> bool + Sync,
{
    let min_girth = opts.min_girth.max(3);
    if tree_only_walks(base, min_girth) {
        return Vec::new();
    }
    let plan = plan(base, min_girth);
    let new_searcher = || Searcher {
        base,
        group,
        plan: &plan,
        opts,
        filter: &filter,
        volt: vec![0; base.edge_count()],
        found: BTreeMap::new(),
    };
    let workers = opts.workers.max(1);
    let found = if workers == 1 || plan.order.is_empty() {
        let mut s = new_searcher();
        s.search(0);
        s.found
    } else {
        let e = plan.order[0];
        let parts: Vec<BTreeMap<Vec<u8>, FoundLift>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let new_searcher = &new_searcher;
                    let plan = &plan;
                    scope.spawn(move || {
                        let mut s = new_searcher();
                        for x in (w..group.order()).step_by(workers) {
                            s.volt[e] = x;
                            if plan.checks[0].iter().all(|wk| walk_voltage(group, &s.volt, wk) != 0) {
                                s.search(1);
                            }
                        }
                        s.found
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut merged: BTreeMap<Vec<u8>, FoundLift> = BTreeMap::new();
        for part in parts {
            for (k, f) in part {
                match merged.get(&k) {
                    Some(old) if old.voltages <= f.voltages => {}
                    _ => {
                        merged.insert(k, f);
                    }
                }
            }
        }
        merged
    };
    found.into_values().collect()
}
