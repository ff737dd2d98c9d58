//! 2-factors of cubic graphs as complements of perfect matchings.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::matching::{MatchingError, PerfectMatching};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoFactorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("edge set is not a spanning 2-regular subgraph")]
    NotTwoFactor,
}

/// Sorted cycle lengths of a 2-factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut lengths: Vec<usize>) -> Self {
        lengths.sort_unstable();
        CycleType(lengths)
    }

    pub fn lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn cycle_count(&self) -> usize {
        self.0.len()
    }

    /// Parity of the number of cycles, `true` for odd.
    pub fn parity(&self) -> bool {
        self.0.len() % 2 == 1
    }

    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_hamiltonian(&self) -> bool {
        self.0.len() == 1
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An explicit 2-factor with its cycle type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoFactor {
    pub edges: Vec<(usize, usize)>,
    pub cycle_type: CycleType,
}

impl TwoFactor {
    /// Recomputes the cycle type of `edges` from scratch, checking that it
    /// is a spanning 2-regular subgraph of `g`.
    pub fn verify(g: &Graph, edges: &[(usize, usize)]) -> Result<CycleType, TwoFactorError> {
        let n = g.n();
        let mut adj = vec![Vec::with_capacity(2); n];
        for &(u, v) in edges {
            if u >= n || v >= n || !g.has_edge(u, v) {
                return Err(TwoFactorError::NotTwoFactor);
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        if adj.iter().any(|a| a.len() != 2) {
            return Err(TwoFactorError::NotTwoFactor);
        }
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let (mut prev, mut cur, mut len) = (usize::MAX, s, 0);
            loop {
                seen[cur] = true;
                len += 1;
                let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
                prev = cur;
                cur = next;
                if cur == s {
                    break;
                }
            }
            lengths.push(len);
        }
        Ok(CycleType::new(lengths))
    }
}

/// Cycle type of the complement of a perfect matching given as `mate`.
/// Assumes a cubic graph and a valid matching.
pub(crate) fn cycle_type_from_mate(g: &Graph, mate: &[usize], seen: &mut Vec<bool>) -> CycleType {
    let n = g.n();
    seen.clear();
    seen.resize(n, false);
    let mut lengths = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let (mut prev, mut cur, mut len) = (mate[s], s, 0);
        loop {
            seen[cur] = true;
            len += 1;
            let next = g
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&w| w != mate[cur] && w != prev)
                .expect("cubic");
            prev = cur;
            cur = next;
            if cur == s {
                break;
            }
        }
        lengths.push(len);
    }
    CycleType::new(lengths)
}

pub(crate) fn two_factor_from_mate(g: &Graph, mate: &[usize]) -> TwoFactor {
    let edges = g
        .edges()
        .into_iter()
        .filter(|&(u, v)| mate[u] != v)
        .collect();
    let mut seen = Vec::new();
    TwoFactor {
        edges,
        cycle_type: cycle_type_from_mate(g, mate, &mut seen),
    }
}

/// The cycle type of `E(g) \ m`.
pub fn two_factor_of(g: &Graph, m: &PerfectMatching) -> Result<CycleType, TwoFactorError> {
    g.require_cubic()?;
    let m = PerfectMatching::new(g, m.edges())?;
    let mut seen = Vec::new();
    Ok(cycle_type_from_mate(g, &m.mate(g.n()), &mut seen))
}
