//! Independent reference implementations and random graph sources shared by
//! the integration tests. Nothing here calls the algorithms under test.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use twofactor_core::constructions::{named, star_product, StarProductSpec};
use twofactor_core::Graph;

/// Union of three random perfect matchings between `0..k` and `k..2k`,
/// retried until simple and connected.
pub fn random_cubic_bipartite<R: Rng>(n: usize, rng: &mut R) -> Graph {
    assert!(n % 2 == 0 && n >= 6);
    let k = n / 2;
    loop {
        let mut edges = Vec::with_capacity(3 * k);
        for _ in 0..3 {
            let mut p: Vec<usize> = (0..k).collect();
            p.shuffle(rng);
            for (a, &b) in p.iter().enumerate() {
                edges.push((a, k + b));
            }
        }
        if let Ok(g) = Graph::from_edges(n, &edges) {
            if g.is_connected() {
                return g;
            }
        }
    }
}

/// Random connected simple cubic graph by the pairing model.
pub fn random_cubic<R: Rng>(n: usize, rng: &mut R) -> Graph {
    assert!(n % 2 == 0 && n >= 4);
    loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
        stubs.shuffle(rng);
        let edges: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0], c[1])).collect();
        if let Ok(g) = Graph::from_edges(n, &edges) {
            if g.is_connected() {
                return g;
            }
        }
    }
}

pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Number of spanning 2-regular subgraphs, by deciding edge by edge
/// whether it is in the subgraph.
pub fn brute_two_factor_count(g: &Graph) -> u64 {
    let edges = g.edges();
    let n = g.n();
    // Edges remaining after position i that touch each vertex.
    let mut remaining = vec![vec![0u8; n]; edges.len() + 1];
    for i in (0..edges.len()).rev() {
        remaining[i] = remaining[i + 1].clone();
        remaining[i][edges[i].0] += 1;
        remaining[i][edges[i].1] += 1;
    }
    fn go(i: usize, edges: &[(usize, usize)], rem: &[Vec<u8>], deg: &mut Vec<u8>) -> u64 {
        if i == edges.len() {
            return deg.iter().all(|&d| d == 2) as u64;
        }
        let (u, v) = edges[i];
        let mut total = 0;
        for take in [false, true] {
            if take {
                if deg[u] == 2 || deg[v] == 2 {
                    continue;
                }
                deg[u] += 1;
                deg[v] += 1;
            }
            let ok = [u, v].iter().all(|&w| deg[w] + rem[i + 1][w] >= 2);
            if ok {
                total += go(i + 1, edges, rem, deg);
            }
            if take {
                deg[u] -= 1;
                deg[v] -= 1;
            }
        }
        total
    }
    go(0, &edges, &remaining, &mut vec![0; n])
}

/// Perfect matchings by trying every subset of n/2 edges in index order,
/// abandoning a subset as soon as two of its edges share a vertex.
pub fn subset_matching_count(g: &Graph) -> u64 {
    let edges = g.edges();
    let half = g.n() / 2;
    fn go(start: usize, left: usize, edges: &[(usize, usize)], covered: &mut Vec<bool>) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for i in start..=edges.len() - left {
            let (u, v) = edges[i];
            if covered[u] || covered[v] {
                continue;
            }
            covered[u] = true;
            covered[v] = true;
            total += go(i + 1, left - 1, edges, covered);
            covered[u] = false;
            covered[v] = false;
        }
        total
    }
    if half == 0 {
        return 1;
    }
    go(0, half, &edges, &mut vec![false; g.n()])
}

/// Automorphism count by extending partial maps vertex by vertex.
pub fn brute_automorphism_count(g: &Graph) -> u64 {
    let n = g.n();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(v: usize, g: &Graph, image: &mut Vec<usize>, used: &mut Vec<bool>) -> u64 {
        let n = g.n();
        if v == n {
            return 1;
        }
        let mut total = 0;
        for w in 0..n {
            if used[w] || g.degree(w) != g.degree(v) {
                continue;
            }
            let consistent = (0..v).all(|u| g.has_edge(u, v) == g.has_edge(image[u], w));
            if consistent {
                image[v] = w;
                used[w] = true;
                total += go(v + 1, g, image, used);
                used[w] = false;
            }
        }
        total
    }
    go(0, g, &mut image, &mut used)
}

/// Minimum cyclic edge cut over all vertex bipartitions, `None` if no
/// bipartition leaves a cycle on both sides.
pub fn brute_cyclic_connectivity(g: &Graph) -> Option<usize> {
    let n = g.n();
    assert!(n <= 24);
    let edges = g.edges();
    let has_cycle = |mask: u32| {
        // An induced subgraph is a forest iff edges = vertices - components.
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let m = edges
            .iter()
            .filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
            .count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut comps = verts.len();
        for &(u, v) in &edges {
            if mask >> u & 1 == 1 && mask >> v & 1 == 1 {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a != b {
                    parent[a] = b;
                    comps -= 1;
                }
            }
        }
        m + comps > verts.len()
    };
    let full = (1u32 << n) - 1;
    let mut best: Option<usize> = None;
    // Vertex 0 always on the first side.
    for mask in (1..full).filter(|m| m & 1 == 1) {
        let cut = edges
            .iter()
            .filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1))
            .count();
        if best.is_some_and(|b| cut >= b) {
            continue;
        }
        if has_cycle(mask) && has_cycle(full & !mask) {
            best = Some(cut);
        }
    }
    best
}

/// Cycle lengths of a spanning 2-regular edge set, checked from scratch.
pub fn cycle_lengths(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    if adj.iter().any(|a| a.len() != 2) {
        return None;
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut stack = vec![s];
        seen[s] = true;
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.push(size);
    }
    out.sort_unstable();
    Some(out)
}

/// A random iterated star product of K33, Heawood and Pappus, with the
/// factors used.
pub fn random_star_product<R: Rng>(steps: usize, rng: &mut R) -> (Graph, Vec<Graph>) {
    let pool = ["K33", "Heawood", "Pappus"];
    let pick = |rng: &mut R| named(pool[rng.gen_range(0..pool.len())]).unwrap();
    let first = pick(rng);
    let mut factors = vec![first.clone()];
    let mut g = first;
    for _ in 0..steps {
        let h = pick(rng);
        let mut pairing = [0, 1, 2];
        pairing.shuffle(rng);
        let spec = StarProductSpec {
            x: rng.gen_range(0..g.n()),
            y: rng.gen_range(0..h.n()),
            g1: g,
            g2: h.clone(),
            pairing,
        };
        g = star_product(&spec).unwrap();
        factors.push(h);
    }
    (g, factors)
}
