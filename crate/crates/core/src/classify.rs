//! Classification of cubic graphs by the parity and types of their
//! 2-factors: exhaustive enumeration with parity pruning, randomized
//! refutation, and a hybrid of the two running on worker threads.

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::matching::{enumerate_perfect_matchings, heuristic_matching_with, MatchingError};
use crate::two_factor::{cycle_type_from_mate, two_factor_from_mate, CycleType, TwoFactor};

/// Heuristic attempts per worker when no budget is given.
pub const DEFAULT_HEURISTIC_ATTEMPTS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Heuristic,
    Hybrid,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "heuristic" => Ok(Mode::Heuristic),
            "hybrid" => Ok(Mode::Hybrid),
            _ => Err(format!("unknown mode {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Every perfect matching was examined.
    Complete,
    /// A parity witness was found before enumeration finished.
    Refuted,
    /// The budget ran out without a parity witness.
    NotRefutedWithinBudget,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Budget {
    pub time: Option<Duration>,
    /// Per-worker cap on matchings examined.
    pub matchings: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyOptions {
    pub mode: Mode,
    pub workers: usize,
    pub seed: u64,
    pub budget: Budget,
    /// Keep enumerating after a parity witness to get the full multiset.
    pub full: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            mode: Mode::Exhaustive,
            workers: 1,
            seed: 0,
            budget: Budget::default(),
            full: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("workers must be at least 1")]
    NoWorkers,
}

/// Two 2-factors whose cycle counts have different parity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub even: TwoFactor,
    pub odd: TwoFactor,
}

impl Witness {
    /// Re-checks both 2-factors against `g` from their edge lists.
    pub fn verify(&self, g: &Graph) -> bool {
        match (TwoFactor::verify(g, &self.even.edges), TwoFactor::verify(g, &self.odd.edges)) {
            (Ok(a), Ok(b)) => {
                a == self.even.cycle_type && b == self.odd.cycle_type && !a.parity() && b.parity()
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub n: usize,
    /// `None` when the run neither completed nor found a counterexample.
    pub verdict_p2fi: Option<bool>,
    pub verdict_2fi: Option<bool>,
    pub verdict_2fh: Option<bool>,
    pub status: Status,
    /// Exact number of 2-factors, known only after a complete enumeration.
    pub two_factor_count: Option<u64>,
    /// Types seen by exhaustive enumeration, partial unless complete.
    #[serde(serialize_with = "type_list")]
    pub type_multiset: BTreeMap<CycleType, u64>,
    /// Types seen by heuristic sampling, counted per sample.
    #[serde(serialize_with = "type_list")]
    pub sampled_types: BTreeMap<CycleType, u64>,
    pub witness: Option<Witness>,
    pub mode: Mode,
    pub seed: u64,
    pub workers: usize,
    pub matchings_examined: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn type_list<S: Serializer>(map: &BTreeMap<CycleType, u64>, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        lengths: &'a CycleType,
        count: u64,
    }
    let mut seq = s.serialize_seq(Some(map.len()))?;
    for (lengths, &count) in map {
        seq.serialize_element(&Entry { lengths, count })?;
    }
    seq.end()
}

impl ClassificationReport {
    /// Distinct types seen by any worker.
    pub fn observed_types(&self) -> Vec<&CycleType> {
        let mut all: Vec<&CycleType> = self.type_multiset.keys().chain(self.sampled_types.keys()).collect();
        all.sort();
        all.dedup();
        all
    }
}

struct Shared {
    stop: AtomicBool,
    refuted: AtomicBool,
    no_matching: AtomicBool,
    reference: OnceLock<TwoFactor>,
    witness: OnceLock<Witness>,
    deadline: Option<Instant>,
    full: bool,
}

impl Shared {
    fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }

    fn past_deadline(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn observe(&self, ct: &CycleType, sample: impl FnOnce() -> TwoFactor) {
        if self.refuted.load(Ordering::Relaxed) {
            return;
        }
        let mut make = Some(sample);
        let reference = self.reference.get_or_init(|| (make.take().expect("unused"))());
        if reference.cycle_type.parity() == ct.parity() {
            return;
        }
        if let Some(make) = make {
            let other = make();
            let (even, odd) = if other.cycle_type.parity() {
                (reference.clone(), other)
            } else {
                (other, reference.clone())
            };
            let _ = self.witness.set(Witness { even, odd });
            self.refuted.store(true, Ordering::Relaxed);
            if !self.full {
                self.stop.store(true, Ordering::Relaxed);
            }
        }
    }
}

struct Exhaustive {
    complete: bool,
    count: u64,
    types: BTreeMap<CycleType, u64>,
}

fn run_exhaustive(g: &Graph, shared: &Shared, cap: Option<u64>) -> Exhaustive {
    let mut types = BTreeMap::new();
    let mut seen = Vec::new();
    let mut complete = true;
    let mut visited = 0u64;
    let count = enumerate_perfect_matchings(g, |m| {
        let ct = cycle_type_from_mate(g, m.mate(), &mut seen);
        shared.observe(&ct, || two_factor_from_mate(g, m.mate()));
        *types.entry(ct).or_insert(0) += 1;
        visited += 1;
        if shared.stopped() {
            complete = false;
            return ControlFlow::Break(());
        }
        if cap.is_some_and(|c| visited >= c) || (visited % 256 == 0 && shared.past_deadline()) {
            complete = false;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    Exhaustive { complete, count, types }
}

struct Sampled {
    attempts: u64,
    types: BTreeMap<CycleType, u64>,
}

fn run_heuristic(g: &Graph, shared: &Shared, seed: u64, stream: u64, cap: Option<u64>) -> Sampled {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut types = BTreeMap::new();
    let mut seen = Vec::new();
    let mut attempts = 0;
    while !shared.stopped() && !cap.is_some_and(|c| attempts >= c) && !shared.past_deadline() {
        attempts += 1;
        match heuristic_matching_with(g, &mut rng) {
            Ok(m) => {
                let mate = m.mate(g.n());
                let ct = cycle_type_from_mate(g, &mate, &mut seen);
                shared.observe(&ct, || two_factor_from_mate(g, &mate));
                *types.entry(ct).or_insert(0) += 1;
            }
            Err(MatchingError::NoPerfectMatching) => {
                shared.no_matching.store(true, Ordering::Relaxed);
                shared.stop.store(true, Ordering::Relaxed);
            }
            Err(e) => unreachable!("{e}"),
        }
    }
    Sampled { attempts, types }
}

/// Classifies a connected cubic graph of even order.
pub fn classify(g: &Graph, opts: &ClassifyOptions) -> Result<ClassificationReport, ClassifyError> {
    g.require_cubic()?;
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    if g.n() % 2 == 1 {
        return Err(GraphError::OddOrder(g.n()).into());
    }
    if opts.workers == 0 {
        return Err(ClassifyError::NoWorkers);
    }
    let start = Instant::now();
    let shared = Shared {
        stop: AtomicBool::new(false),
        refuted: AtomicBool::new(false),
        no_matching: AtomicBool::new(false),
        reference: OnceLock::new(),
        witness: OnceLock::new(),
        deadline: opts.budget.time.map(|t| start + t),
        full: opts.full,
    };
    let heuristic_cap = match opts.mode {
        Mode::Heuristic => Some(opts.budget.matchings.unwrap_or(DEFAULT_HEURISTIC_ATTEMPTS)),
        _ => opts.budget.matchings,
    };
    let (exhaustive, sampled) = std::thread::scope(|scope| {
        let helpers = match opts.mode {
            Mode::Exhaustive => 0,
            Mode::Hybrid => opts.workers - 1,
            Mode::Heuristic => opts.workers,
        };
        let handles: Vec<_> = (0..helpers)
            .map(|i| {
                let shared = &shared;
                scope.spawn(move || run_heuristic(g, shared, opts.seed, i as u64, heuristic_cap))
            })
            .collect();
        let exhaustive = (opts.mode != Mode::Heuristic).then(|| {
            let out = run_exhaustive(g, &shared, opts.budget.matchings);
            shared.stop.store(true, Ordering::Relaxed);
            out
        });
        let sampled: Vec<Sampled> = handles.into_iter().map(|h| h.join().expect("worker panicked")).collect();
        (exhaustive, sampled)
    });

    let mut sampled_types = BTreeMap::new();
    let mut examined = 0;
    for s in sampled {
        examined += s.attempts;
        for (ct, c) in s.types {
            *sampled_types.entry(ct).or_insert(0) += c;
        }
    }
    let no_matching = shared.no_matching.load(Ordering::Relaxed);
    let (complete, count, type_multiset) = match exhaustive {
        Some(e) => {
            examined += e.count;
            (e.complete || no_matching, e.complete.then_some(e.count), e.types)
        }
        None => (no_matching, None, BTreeMap::new()),
    };
    let count = if no_matching { Some(0) } else { count };
    let witness = shared.witness.into_inner();

    let mut report = ClassificationReport {
        n: g.n(),
        verdict_p2fi: None,
        verdict_2fi: None,
        verdict_2fh: None,
        status: if complete {
            Status::Complete
        } else if witness.is_some() {
            Status::Refuted
        } else {
            Status::NotRefutedWithinBudget
        },
        two_factor_count: count,
        type_multiset,
        sampled_types,
        witness,
        mode: opts.mode,
        seed: opts.seed,
        workers: opts.workers,
        matchings_examined: examined,
        elapsed: Duration::ZERO,
    };
    let types = report.observed_types();
    let several = types.len() > 1;
    let non_hamiltonian = types.iter().any(|t| !t.is_hamiltonian());
    report.verdict_p2fi = if report.witness.is_some() {
        Some(false)
    } else {
        complete.then_some(true)
    };
    report.verdict_2fi = if several { Some(false) } else { complete.then_some(true) };
    report.verdict_2fh = if non_hamiltonian {
        Some(false)
    } else {
        complete.then_some(true)
    };
    report.elapsed = start.elapsed();
    Ok(report)
}
