//! Small integer max-flow (shortest augmenting paths) used by the
//! connectivity routines.

use std::collections::VecDeque;

/// Residual network with arcs stored in reverse pairs `a`, `a ^ 1`.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    head: Vec<usize>,
    cap: Vec<u32>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            head: Vec::new(),
            cap: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    /// Adds an undirected edge of capacity `c` in both directions.
    pub fn add_undirected(&mut self, u: usize, v: usize, c: u32) {
        let a = self.head.len();
        self.head.push(v);
        self.cap.push(c);
        self.head.push(u);
        self.cap.push(c);
        self.out[u].push(a);
        self.out[v].push(a + 1);
    }

    /// Pushes flow from `s` to `t` until none remains or `limit` is reached;
    /// returns the flow value. The network keeps its residual state.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        let nodes = self.out.len();
        let mut flow = 0;
        let mut pred = vec![usize::MAX; nodes];
        let mut queue = VecDeque::new();
        while flow < limit {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            queue.clear();
            queue.push_back(s);
            let mut reached = false;
            'bfs: while let Some(u) = queue.pop_front() {
                for &a in &self.out[u] {
                    let v = self.head[a];
                    if self.cap[a] > 0 && v != s && pred[v] == usize::MAX {
                        pred[v] = a;
                        if v == t {
                            reached = true;
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if !reached {
                break;
            }
            let mut bottleneck = u32::MAX;
            let mut v = t;
            while v != s {
                let a = pred[v];
                bottleneck = bottleneck.min(self.cap[a]);
                v = self.head[a ^ 1];
            }
            bottleneck = bottleneck.min(limit - flow);
            let mut v = t;
            while v != s {
                let a = pred[v];
                self.cap[a] -= bottleneck;
                self.cap[a ^ 1] += bottleneck;
                v = self.head[a ^ 1];
            }
            flow += bottleneck;
        }
        flow
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_paths() {
        let mut net = FlowNetwork::new(4);
        net.add_undirected(0, 1, 1);
        net.add_undirected(0, 2, 1);
        net.add_undirected(1, 3, 1);
        net.add_undirected(2, 3, 1);
        net.add_undirected(1, 2, 5);
        assert_eq!(net.max_flow(0, 3, u32::MAX), 2);
    }

    #[test]
    fn respects_limit() {
        let mut net = FlowNetwork::new(2);
        for _ in 0..5 {
            net.add_undirected(0, 1, 1);
        }
        assert_eq!(net.max_flow(0, 1, 3), 3);
    }
}
