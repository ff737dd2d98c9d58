//! Isomorph-free generation of connected cubic bipartite graphs of girth at
//! least 6, as Levi graphs of configurations with three points per line and
//! three lines per point. Lines are added one at a time by canonical
//! augmentation; the finished graphs are deduplicated once more because a
//! configuration and its dual share a Levi graph.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::canon::{canonical_form, canonical_labeling, orbits_of, CanonicalLabeling};
use crate::classify::{classify, ClassificationReport, ClassifyError, ClassifyOptions};
use crate::graph::Graph;
use crate::structure::is_essentially_4_edge_connected;

/// Points are bits of a `u64`.
pub const MAX_ORDER: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("order {0} is odd")]
    OddOrder(usize),
    #[error("order {0} is above the supported maximum {MAX_ORDER}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, Default)]
pub struct GenOptions {
    /// Worker threads; branches are split at a fixed depth.
    pub workers: usize,
    /// Called with the number of configurations finished so far.
    pub progress: Option<fn(u64)>,
}

#[derive(Clone)]
struct Config {
    k: usize,
    lines: Vec<[usize; 3]>,
    deg: Vec<u8>,
    /// Points sharing a line with each point.
    collinear: Vec<u64>,
}

impl Config {
    fn new(k: usize) -> Self {
        Config {
            k,
            lines: Vec::with_capacity(k),
            deg: vec![0; k],
            collinear: vec![0; k],
        }
    }

    fn push(&mut self, l: [usize; 3]) {
        for (i, &p) in l.iter().enumerate() {
            self.deg[p] += 1;
            for (j, &q) in l.iter().enumerate() {
                if i != j {
                    self.collinear[p] |= 1 << q;
                }
            }
        }
        self.lines.push(l);
    }

    fn pop(&mut self) {
        let l = self.lines.pop().expect("line to remove");
        for (i, &p) in l.iter().enumerate() {
            self.deg[p] -= 1;
            for (j, &q) in l.iter().enumerate() {
                if i != j {
                    self.collinear[p] &= !(1 << q);
                }
            }
        }
    }

    /// Levi graph: points `0..k`, lines `k..k + lines`.
    fn levi(&self) -> (Graph, Vec<u32>) {
        let k = self.k;
        let mut edges = Vec::with_capacity(3 * self.lines.len());
        for (i, l) in self.lines.iter().enumerate() {
            for &p in l {
                edges.push((p, k + i));
            }
        }
        let g = Graph::from_edges(k + self.lines.len(), &edges).expect("simple incidence graph");
        let mut colors = vec![0u32; k];
        colors.resize(k + self.lines.len(), 1);
        (g, colors)
    }

    fn labeling(&self) -> CanonicalLabeling {
        let (g, colors) = self.levi();
        canonical_labeling(&g, Some(&colors))
    }

    /// Every unfinished point still has enough partners for its missing
    /// lines: each new line through `p` takes two fresh, mutually
    /// non-collinear points.
    fn feasible(&self) -> bool {
        let open: u64 = (0..self.k).filter(|&p| self.deg[p] < 3).fold(0, |m, p| m | 1 << p);
        (0..self.k).all(|p| {
            let need = 3 - self.deg[p] as u32;
            need == 0 || (open & !self.collinear[p] & !(1 << p)).count_ones() >= 2 * need
        })
    }

    /// Isomorphism-invariant score of line `i`, used to pick the line the
    /// canonical parent deletes.
    fn score(&self, i: usize) -> u32 {
        let l = self.lines[i];
        let mut meet = 0;
        for (j, m) in self.lines.iter().enumerate() {
            if j != i && m.iter().any(|p| l.contains(p)) {
                meet += 1;
            }
        }
        let degs: u32 = l.iter().map(|&p| self.deg[p] as u32).sum();
        degs * 16 + meet
    }

    fn candidates(&self) -> Vec<[usize; 3]> {
        let k = self.k;
        let open: Vec<usize> = (0..k).filter(|&p| self.deg[p] < 3).collect();
        let mut out = Vec::new();
        for (i, &a) in open.iter().enumerate() {
            for (j, &b) in open.iter().enumerate().skip(i + 1) {
                if self.collinear[a] >> b & 1 == 1 {
                    continue;
                }
                for &c in &open[j + 1..] {
                    if self.collinear[a] >> c & 1 == 0 && self.collinear[b] >> c & 1 == 0 {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }
}

struct Run {
    k: usize,
    split_depth: usize,
    worker: usize,
    workers: usize,
    split_counter: usize,
    found: BTreeMap<Vec<u8>, Graph>,
    configs: u64,
    progress: Option<fn(u64)>,
}

impl Run {
    fn extend(&mut self, cfg: &mut Config, lab: &CanonicalLabeling) {
        let depth = cfg.lines.len();
        if depth == self.split_depth {
            let mine = self.split_counter % self.workers == self.worker;
            self.split_counter += 1;
            if !mine {
                return;
            }
        }
        if depth == self.k {
            self.emit(cfg);
            return;
        }
        let cands = self.orbit_representatives(cfg, lab);
        for l in cands {
            cfg.push(l);
            if cfg.feasible() {
                if let Some(child_lab) = self.accept(cfg) {
                    self.extend(cfg, &child_lab);
                }
            }
            cfg.pop();
        }
    }

    fn orbit_representatives(&self, cfg: &Config, lab: &CanonicalLabeling) -> Vec<[usize; 3]> {
        let k = self.k;
        let cands = cfg.candidates();
        let mut index = vec![u32::MAX; k * k * k];
        let key = |l: [usize; 3]| l[0] * k * k + l[1] * k + l[2];
        for (i, &l) in cands.iter().enumerate() {
            index[key(l)] = i as u32;
        }
        let gens: Vec<Vec<usize>> = lab
            .generators
            .iter()
            .map(|g| {
                let n = cands.len();
                let mut img = Vec::with_capacity(n);
                for &l in &cands {
                    let mut m = [g[l[0]], g[l[1]], g[l[2]]];
                    m.sort_unstable();
                    img.push(index[key(m)] as usize);
                }
                img
            })
            .collect();
        let orbits = orbits_of(cands.len(), &gens);
        cands
            .iter()
            .enumerate()
            .filter(|&(i, _)| orbits[i] == i)
            .map(|(_, &l)| l)
            .collect()
    }

    /// Canonical-deletion test for the last line of `cfg`; returns the
    /// child's labeling when accepted and more lines follow.
    fn accept(&self, cfg: &Config) -> Option<CanonicalLabeling> {
        let last = cfg.lines.len() - 1;
        let scores: Vec<u32> = (0..cfg.lines.len()).map(|i| cfg.score(i)).collect();
        let best = *scores.iter().max().expect("at least one line");
        if scores[last] < best {
            return None;
        }
        let tied = scores.iter().filter(|&&s| s == best).count();
        let finished = cfg.lines.len() == self.k;
        if tied == 1 && finished {
            return Some(CanonicalLabeling {
                labeling: Vec::new(),
                generators: Vec::new(),
                group_order: 1,
                orbits: Vec::new(),
            });
        }
        let lab = cfg.labeling();
        if tied > 1 {
            let k = self.k;
            let chosen = (0..cfg.lines.len())
                .filter(|&i| scores[i] == best)
                .min_by_key(|&i| lab.labeling[k + i])
                .expect("tied lines");
            if lab.orbits[k + chosen] != lab.orbits[k + last] {
                return None;
            }
        }
        Some(lab)
    }

    fn emit(&mut self, cfg: &Config) {
        self.configs += 1;
        if let Some(p) = self.progress {
            if self.configs % 1000 == 0 {
                p(self.configs);
            }
        }
        let (g, _) = cfg.levi();
        if !g.is_connected() {
            return;
        }
        let cl = canonical_labeling(&g, None);
        let form = crate::canon::encode_form(&g, &cl.labeling, None);
        self.found.entry(form).or_insert_with(|| cl.canonical_graph(&g));
    }
}

fn check_order(n: usize) -> Result<usize, GenError> {
    if n % 2 == 1 {
        return Err(GenError::OddOrder(n));
    }
    if n > MAX_ORDER {
        return Err(GenError::TooLarge(n));
    }
    Ok(n / 2)
}

fn run_worker(k: usize, worker: usize, workers: usize, progress: Option<fn(u64)>) -> BTreeMap<Vec<u8>, Graph> {
    let mut run = Run {
        k,
        split_depth: if workers > 1 { 4.min(k) } else { usize::MAX },
        worker,
        workers,
        split_counter: 0,
        found: BTreeMap::new(),
        configs: 0,
        progress,
    };
    let mut cfg = Config::new(k);
    let lab = cfg.labeling();
    run.extend(&mut cfg, &lab);
    run.found
}

/// Every connected cubic bipartite graph of girth at least 6 on `n`
/// vertices, one per isomorphism class, canonically labeled and sorted by
/// canonical form.
pub fn generate_all(n: usize, opts: &GenOptions) -> Result<Vec<Graph>, GenError> {
    let k = check_order(n)?;
    if k < 7 {
        return Ok(Vec::new());
    }
    let workers = opts.workers.max(1);
    let mut all = BTreeMap::new();
    if workers == 1 {
        all = run_worker(k, 0, 1, opts.progress);
    } else {
        let parts: Vec<_> = std::thread::scope(|s| {
            let hs: Vec<_> = (0..workers)
                .map(|w| s.spawn(move || run_worker(k, w, workers, None)))
                .collect();
            hs.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for p in parts {
            all.extend(p);
        }
    }
    Ok(all.into_values().collect())
}

/// Calls `sink` for each graph of [`generate_all`] in order and returns the
/// count.
pub fn generate(n: usize, mut sink: impl FnMut(&Graph)) -> Result<u64, GenError> {
    let graphs = generate_all(n, &GenOptions::default())?;
    for g in &graphs {
        sink(g);
    }
    Ok(graphs.len() as u64)
}

/// A pseudo 2-factor isomorphic graph found by [`pipeline_classify`].
#[derive(Debug, Clone)]
pub struct PipelineHit {
    pub graph: Graph,
    pub essentially_4_edge_connected: bool,
    pub report: ClassificationReport,
}

#[derive(Debug, Clone)]
pub struct PipelineSummary {
    pub n: usize,
    pub graphs: u64,
    pub hits: Vec<PipelineHit>,
    /// Graphs whose classification ran out of budget.
    pub undecided: u64,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// Generates all graphs of order `n` and classifies each one.
pub fn pipeline_classify(n: usize, gen: &GenOptions, opts: &ClassifyOptions) -> Result<PipelineSummary, PipelineError> {
    let graphs = generate_all(n, gen)?;
    let mut hits = Vec::new();
    let mut undecided = 0;
    for g in &graphs {
        let report = classify(g, opts)?;
        match report.verdict_p2fi {
            Some(true) => hits.push(PipelineHit {
                graph: g.clone(),
                essentially_4_edge_connected: is_essentially_4_edge_connected(g).expect("cubic"),
                report,
            }),
            Some(false) => {}
            None => undecided += 1,
        }
    }
    Ok(PipelineSummary {
        n,
        graphs: graphs.len() as u64,
        hits,
        undecided,
    })
}

/// Canonical forms of the generated graphs, for comparison with other
/// sources.
pub fn canonical_forms(graphs: &[Graph]) -> Vec<Vec<u8>> {
    graphs.iter().map(canonical_form).collect()
}
