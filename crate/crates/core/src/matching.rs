//! Perfect matchings: exhaustive enumeration with forced-edge propagation,
//! and a randomized Karp-Sipser construction completed by augmenting paths.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("graph has no perfect matching")]
    NoPerfectMatching,
    #[error("edge {0}-{1} is not in the graph")]
    MissingEdge(usize, usize),
    #[error("vertex {0} is not covered exactly once")]
    NotPerfect(usize),
}

/// A set of disjoint edges covering every vertex, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfectMatching {
    edges: Vec<(usize, usize)>,
}

impl PerfectMatching {
    /// Validates `edges` as a perfect matching of `g`.
    pub fn new(g: &Graph, edges: &[(usize, usize)]) -> Result<Self, MatchingError> {
        let mut covered = vec![false; g.n()];
        let mut out = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if !g.has_edge(u, v) {
                return Err(MatchingError::MissingEdge(u, v));
            }
            for w in [u, v] {
                if std::mem::replace(&mut covered[w], true) {
                    return Err(MatchingError::NotPerfect(w));
                }
            }
            out.push((u.min(v), u.max(v)));
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return Err(MatchingError::NotPerfect(v));
        }
        out.sort_unstable();
        Ok(PerfectMatching { edges: out })
    }

    pub(crate) fn from_mate(mate: &[usize]) -> Self {
        PerfectMatching {
            edges: mate_edges(mate),
        }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `mate[v]` for every vertex.
    pub fn mate(&self, n: usize) -> Vec<usize> {
        let mut mate = vec![NONE; n];
        for &(u, v) in &self.edges {
            mate[u] = v;
            mate[v] = u;
        }
        mate
    }

    /// One line of space-separated `u-v` pairs, sorted.
    pub fn to_line(&self) -> String {
        self.edges
            .iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn mate_edges(mate: &[usize]) -> Vec<(usize, usize)> {
    mate.iter()
        .enumerate()
        .filter(|&(u, &v)| u < v && v != NONE)
        .map(|(u, &v)| (u, v))
        .collect()
}

/// Borrowed view of the matching currently held by the enumerator.
#[derive(Clone, Copy)]
pub struct MatchingRef<'a> {
    mate: &'a [usize],
}

impl<'a> MatchingRef<'a> {
    pub fn mate(&self) -> &'a [usize] {
        self.mate
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        mate_edges(self.mate)
    }

    pub fn to_owned(&self) -> PerfectMatching {
        PerfectMatching::from_mate(self.mate)
    }
}

struct Enumerator<'g, F> {
    g: &'g Graph,
    mate: Vec<usize>,
    /// Unmatched neighbours per vertex.
    avail: Vec<usize>,
    trail: Vec<usize>,
    count: u64,
    stopped: bool,
    visitor: F,
}

impl<'g, F> Enumerator<'g, F>
where
    F: FnMut(MatchingRef<'_>) -> ControlFlow<()>,
{
    fn pair(&mut self, u: usize, v: usize) {
        self.mate[u] = v;
        self.mate[v] = u;
        for x in [u, v] {
            for &w in self.g.neighbors(x) {
                self.avail[w] -= 1;
            }
        }
        self.trail.push(u);
    }

    fn unpair(&mut self) {
        let u = self.trail.pop().expect("trail not empty");
        let v = self.mate[u];
        for x in [u, v] {
            for &w in self.g.neighbors(x) {
                self.avail[w] += 1;
            }
        }
        self.mate[u] = NONE;
        self.mate[v] = NONE;
    }

    /// Matches forced vertices (one free neighbour) around the last pairs;
    /// false if some free vertex is left with no free neighbour.
    fn propagate(&mut self, from: usize) -> bool {
        let mut pending: Vec<usize> = Vec::new();
        let mut i = from;
        while i < self.trail.len() {
            let u = self.trail[i];
            let v = self.mate[u];
            pending.clear();
            for x in [u, v] {
                pending.extend(self.g.neighbors(x).iter().copied());
            }
            for &w in &pending {
                if self.mate[w] != NONE {
                    continue;
                }
                match self.avail[w] {
                    0 => return false,
                    1 => {
                        let x = *self
                            .g
                            .neighbors(w)
                            .iter()
                            .find(|&&x| self.mate[x] == NONE)
                            .expect("one free neighbour");
                        self.pair(w, x);
                    }
                    _ => {}
                }
            }
            i += 1;
        }
        true
    }

    fn search(&mut self, mut lowest: usize) {
        let n = self.g.n();
        while lowest < n && self.mate[lowest] != NONE {
            lowest += 1;
        }
        if lowest == n {
            self.count += 1;
            if (self.visitor)(MatchingRef { mate: &self.mate }).is_break() {
                self.stopped = true;
            }
            return;
        }
        let u = lowest;
        for i in 0..self.g.degree(u) {
            let v = self.g.neighbors(u)[i];
            if self.mate[v] != NONE {
                continue;
            }
            let depth = self.trail.len();
            self.pair(u, v);
            if self.propagate(depth) {
                self.search(lowest + 1);
            }
            while self.trail.len() > depth {
                self.unpair();
            }
            if self.stopped {
                return;
            }
        }
    }
}

/// Calls `visitor` once per perfect matching of `g`, in a fixed order for a
/// fixed labeling: branch on the lowest unmatched vertex, trying its edges
/// in neighbour order, with forced edges matched eagerly. The visitor may
/// return `Break` to stop early. Returns the number of matchings visited.
pub fn enumerate_perfect_matchings<F>(g: &Graph, visitor: F) -> u64
where
    F: FnMut(MatchingRef<'_>) -> ControlFlow<()>,
{
    let n = g.n();
    if n % 2 == 1 {
        return 0;
    }
    let mut e = Enumerator {
        g,
        mate: vec![NONE; n],
        avail: (0..n).map(|v| g.degree(v)).collect(),
        trail: Vec::with_capacity(n / 2),
        count: 0,
        stopped: false,
        visitor,
    };
    if (0..n).any(|v| g.degree(v) == 0) {
        return 0;
    }
    // Degree-one vertices are forced before any branching.
    for v in 0..n {
        if e.mate[v] == NONE && e.avail[v] == 1 {
            let w = *g.neighbors(v).iter().find(|&&w| e.mate[w] == NONE).expect("free neighbour");
            let depth = e.trail.len();
            e.pair(v, w);
            if !e.propagate(depth) {
                return 0;
            }
        } else if e.mate[v] == NONE && e.avail[v] == 0 {
            return 0;
        }
    }
    e.search(0);
    e.count
}

pub fn count_perfect_matchings(g: &Graph) -> u64 {
    enumerate_perfect_matchings(g, |_| ControlFlow::Continue(()))
}

/// Randomized Karp-Sipser matching completed to a perfect matching by
/// augmenting paths. Deterministic for a given seed.
pub fn heuristic_matching(g: &Graph, seed: u64) -> Result<PerfectMatching, MatchingError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    heuristic_matching_with(g, &mut rng)
}

pub(crate) fn heuristic_matching_with<R: Rng>(g: &Graph, rng: &mut R) -> Result<PerfectMatching, MatchingError> {
    let mut mate = karp_sipser(g, rng);
    complete_matching(g, &mut mate)?;
    Ok(PerfectMatching::from_mate(&mate))
}

/// Greedy phase: match a forced degree-1 vertex when one exists, otherwise
/// a uniformly random remaining edge.
fn karp_sipser<R: Rng>(g: &Graph, rng: &mut R) -> Vec<usize> {
    let n = g.n();
    let mut mate = vec![NONE; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut ones: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut pool = g.edges();
    let take = |u: usize, v: usize, mate: &mut Vec<usize>, deg: &mut Vec<usize>, ones: &mut Vec<usize>| {
        mate[u] = v;
        mate[v] = u;
        for x in [u, v] {
            for &w in g.neighbors(x) {
                if mate[w] == NONE {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        ones.push(w);
                    }
                }
            }
        }
    };
    loop {
        if let Some(v) = ones.pop() {
            if mate[v] != NONE || deg[v] != 1 {
                continue;
            }
            let w = *g.neighbors(v).iter().find(|&&w| mate[w] == NONE).expect("degree one");
            take(v, w, &mut mate, &mut deg, &mut ones);
            continue;
        }
        let mut picked = None;
        while !pool.is_empty() {
            let i = rng.gen_range(0..pool.len());
            let (u, v) = pool.swap_remove(i);
            if mate[u] == NONE && mate[v] == NONE {
                picked = Some((u, v));
                break;
            }
        }
        match picked {
            Some((u, v)) => take(u, v, &mut mate, &mut deg, &mut ones),
            None => break,
        }
    }
    mate
}

/// Extends `mate` to a perfect matching with Edmonds' blossom search.
fn complete_matching(g: &Graph, mate: &mut [usize]) -> Result<(), MatchingError> {
    let n = g.n();
    let mut blossom = Blossom::new(n);
    for root in 0..n {
        if mate[root] == NONE && !blossom.augment(g, mate, root) {
            return Err(MatchingError::NoPerfectMatching);
        }
    }
    Ok(())
}

struct Blossom {
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom {
    fn new(n: usize) -> Self {
        Blossom {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mate: &[usize], mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mate: &[usize], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[mate[v]]] = true;
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    /// Finds and applies an augmenting path from the exposed `root`.
    fn augment(&mut self, g: &Graph, mate: &mut [usize], root: usize) -> bool {
        let n = g.n();
        self.parent.iter_mut().for_each(|p| *p = NONE);
        self.used.iter_mut().for_each(|u| *u = false);
        for i in 0..n {
            self.base[i] = i;
        }
        self.queue.clear();
        self.used[root] = true;
        self.queue.push_back(root);
        let mut end = NONE;
        'search: while let Some(v) = self.queue.pop_front() {
            for &to in g.neighbors(v) {
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    let cur = self.lca(mate, v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(mate, v, cur, to);
                    self.mark_path(mate, to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        end = to;
                        break 'search;
                    }
                    let next = mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        if end == NONE {
            return false;
        }
        let mut v = end;
        while v != NONE {
            let pv = self.parent[v];
            let ppv = mate[pv];
            mate[v] = pv;
            mate[pv] = v;
            v = ppv;
        }
        true
    }
}
