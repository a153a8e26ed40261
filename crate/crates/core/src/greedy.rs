//! Randomized greedy search for small complete arcs.
//!
//! One trial starts from a few random points and then repeatedly adds the
//! uncovered point that covers the most new points, choosing uniformly among
//! the best-scoring candidates, until nothing is left uncovered. A search
//! runs many independent trials and keeps the smallest arc.
//!
//! Trial `i` draws from ChaCha8 seeded with the master seed on stream `i`,
//! and trials are processed in fixed batches, so a search gives the same
//! result for any number of worker threads.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arc::{verify_arc, verify_complete, Arc, ArcError, CoverageState};
use crate::bounds;
use crate::gf::{factor_prime_power, Field, GfError};
use crate::plane::{LineId, PlaneError, PlaneIndex, PointId};

/// Trials are scheduled and merged in batches of at most this size.
pub const BATCH_SIZE: u64 = 64;

/// Batch size for a plane with `n` points: smaller for large planes so that
/// an early stop is noticed soon. Depends only on the plane, never on jobs.
pub fn batch_size(n: u32) -> u64 {
    ((1u64 << 22) / n as u64).clamp(1, BATCH_SIZE)
}

/// Above this order the default policy samples candidates.
pub const EXACT_POLICY_MAX_Q: u32 = 1024;

pub const DEFAULT_SAMPLE: usize = 4096;

/// Up to this order the default mixes pool widths 1 to 3 across trials;
/// pure greedy alone misses the optimum at several of these orders.
pub const SMALL_Q: u32 = 32;

/// Memory the per-point line caches of all workers may use together.
const PENCIL_CACHE_BYTES: usize = 1536 << 20;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Arc(#[from] ArcError),
    #[error("time budget expired before any trial completed")]
    BudgetExhausted,
    #[error("search produced an arc that failed re-verification: {0}")]
    VerificationFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidatePolicy {
    /// Score every uncovered point at every step.
    ExactAll,
    /// Score a uniform sample of at most this many uncovered points.
    Sample(usize),
}

impl CandidatePolicy {
    pub fn default_for(q: u32) -> Self {
        if q <= EXACT_POLICY_MAX_Q {
            CandidatePolicy::ExactAll
        } else {
            CandidatePolicy::Sample(DEFAULT_SAMPLE)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub q: u32,
    pub p: u32,
    pub h: u32,
    pub trials: u64,
    pub master_seed: u64,
    pub candidate_policy: CandidatePolicy,
    /// Number of distinct top score levels the next point is drawn from.
    pub top_k: usize,
    /// Trial `i` uses width `1 + i mod top_k` instead of `top_k`.
    pub vary_top_k: bool,
    /// Uniformly random points placed before the greedy phase.
    pub seed_arc_size: usize,
    pub time_budget: Option<Duration>,
    /// Stop once an arc of at most this size is found.
    pub target_size: Option<usize>,
    /// Worker threads; results do not depend on it.
    pub jobs: usize,
}

impl SearchConfig {
    /// Defaults for a prime power `q`; the target is the smallest known size.
    pub fn new(q: u32) -> Result<Self, SearchError> {
        let (p, h) = factor_prime_power(q as u64).ok_or(GfError::NotPrimePower(q as u64))?;
        Ok(SearchConfig {
            q,
            p,
            h,
            trials: 1000,
            master_seed: 0,
            candidate_policy: CandidatePolicy::default_for(q),
            top_k: if q <= SMALL_Q { 3 } else { 1 },
            vary_top_k: q <= SMALL_Q,
            seed_arc_size: 2,
            time_budget: None,
            target_size: bounds::embedded_t2bar(q).map(|t| t as usize),
            jobs: 1,
        })
    }

    pub fn trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn target(mut self, target: Option<usize>) -> Self {
        self.target_size = target;
        self
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    /// Pool width used by trial `index`.
    pub fn top_k_for(&self, index: u64) -> usize {
        if self.vary_top_k {
            1 + (index % self.top_k as u64) as usize
        } else {
            self.top_k
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::InvalidConfig(m.to_string()));
        if factor_prime_power(self.q as u64) != Some((self.p, self.h)) {
            return bad("q must equal p^h for a prime p");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.top_k == 0 {
            return bad("top_k must be at least 1");
        }
        if self.candidate_policy == CandidatePolicy::Sample(0) {
            return bad("sample size must be at least 1");
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub q: u32,
    pub p: u32,
    pub h: u32,
    pub best_arc: Arc,
    pub best_size: usize,
    pub best_trial: u64,
    pub trials_run: u64,
    pub trials_requested: u64,
    pub master_seed: u64,
    /// Completed trials per final arc size.
    pub histogram: BTreeMap<usize, u64>,
    pub elapsed: Duration,
    pub target_size: Option<usize>,
    pub budget_exhausted: bool,
}

impl SearchReport {
    pub fn target_reached(&self) -> bool {
        self.target_size.is_some_and(|t| self.best_size <= t)
    }

    /// Human-readable summary; leaves out wall-clock time so that equal
    /// searches render identically.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "q = {} (p = {}, h = {})", self.q, self.p, self.h);
        let _ = writeln!(s, "seed = {}", self.master_seed);
        let _ = writeln!(
            s,
            "trials = {} of {}",
            self.trials_run, self.trials_requested
        );
        let _ = writeln!(
            s,
            "best size = {} (trial {})",
            self.best_size, self.best_trial
        );
        match self.target_size {
            Some(t) if self.target_reached() => {
                let _ = writeln!(s, "target = {t} (reached)");
            }
            Some(t) => {
                let _ = writeln!(s, "target = {t} (not reached)");
            }
            None => {}
        }
        if self.budget_exhausted {
            let _ = writeln!(s, "time budget exhausted");
        }
        let _ = writeln!(s, "histogram:");
        for (size, count) in &self.histogram {
            let _ = writeln!(s, "  {size:>5} {count:>8}");
        }
        s
    }
}

/// Per-trial scratch state, reused across trials.
///
/// Besides the arc's coverage it keeps, for each line through exactly one
/// arc point, the number of uncovered points on it. The greedy score of an
/// uncovered point `c` is then `1 + Σ_r (uncov(rc) − 1)` over arc points `r`.
pub struct TrialEngine<'p> {
    plane: &'p PlaneIndex,
    state: CoverageState,
    arc: Arc,
    uncovered: Vec<PointId>,
    position: Vec<u32>,
    tally: Vec<u32>,
    /// Line through arc point `i` and every plane point, when cached.
    pencils: Vec<Option<Vec<LineId>>>,
    spare: Vec<Vec<LineId>>,
    max_cached: usize,
    scores: Vec<u32>,
    pool: Vec<PointId>,
}

impl<'p> TrialEngine<'p> {
    pub fn new(plane: &'p PlaneIndex) -> Self {
        Self::with_cache_budget(plane, PENCIL_CACHE_BYTES)
    }

    pub fn with_cache_budget(plane: &'p PlaneIndex, bytes: usize) -> Self {
        let n = plane.n_points() as usize;
        TrialEngine {
            plane,
            state: CoverageState::new(plane),
            arc: Arc::new(plane),
            uncovered: (0..n as PointId).collect(),
            position: (0..n as u32).collect(),
            tally: vec![0; n],
            pencils: Vec::new(),
            spare: Vec::new(),
            max_cached: bytes / (n * std::mem::size_of::<LineId>()),
            scores: Vec::new(),
            pool: Vec::new(),
        }
    }

    fn reset(&mut self) {
        let n = self.plane.n_points();
        self.state.reset();
        self.arc.clear();
        self.uncovered.clear();
        self.uncovered.extend(0..n);
        self.position.clear();
        self.position.extend(0..n);
        for pencil in self.pencils.drain(..).flatten() {
            self.spare.push(pencil);
        }
    }

    pub fn arc(&self) -> &Arc {
        &self.arc
    }

    pub fn coverage(&self) -> &CoverageState {
        &self.state
    }

    #[inline]
    fn line_to(&self, slot: usize, c: PointId) -> LineId {
        match &self.pencils[slot] {
            Some(pencil) => pencil[c as usize],
            None => self
                .plane
                .line_through_unchecked(self.arc.points()[slot], c),
        }
    }

    /// Greedy score of an uncovered point: the points it would newly cover.
    #[inline]
    pub fn score(&self, c: PointId) -> u32 {
        let mut s = 1u32;
        for slot in 0..self.arc.len() {
            s += self.tally[self.line_to(slot, c) as usize] - 1;
        }
        s
    }

    /// Adds an uncovered point, updating coverage and line tallies.
    pub fn add(&mut self, p: PointId) -> Result<(), ArcError> {
        let plane = self.plane;
        let old: Vec<PointId> = self.arc.points().to_vec();
        let TrialEngine {
            state,
            arc,
            uncovered,
            position,
            tally,
            pencils,
            ..
        } = self;
        state.add_with(plane, arc, p, |x| {
            let i = position[x as usize] as usize;
            let last = *uncovered.last().expect("covered point was uncovered");
            uncovered[i] = last;
            position[last as usize] = i as u32;
            uncovered.pop();
            for (slot, &r) in old.iter().enumerate() {
                let l = match &pencils[slot] {
                    Some(pencil) => pencil[x as usize],
                    None => plane.line_through_unchecked(r, x),
                };
                tally[l as usize] -= 1;
            }
        })?;

        let cached = if self.pencils.len() < self.max_cached {
            let mut pencil = self
                .spare
                .pop()
                .unwrap_or_else(|| vec![0; plane.n_points() as usize]);
            plane.for_each_line_through(p, |l| {
                plane.for_each_point_on_line(l, |x| pencil[x as usize] = l);
            });
            pencil[p as usize] = LineId::MAX;
            Some(pencil)
        } else {
            None
        };
        self.pencils.push(cached);

        let covered = self.state.covered();
        let tally = &mut self.tally;
        plane.for_each_line_through(p, |l| {
            let mut count = 0;
            plane.for_each_point_on_line(l, |x| {
                if !covered.contains(x as usize) {
                    count += 1;
                }
            });
            tally[l as usize] = count;
        });
        Ok(())
    }

    /// Runs one trial with pool width `top_k`; `None` if the deadline
    /// passed first.
    pub fn run_trial<R: Rng>(
        &mut self,
        cfg: &SearchConfig,
        top_k: usize,
        rng: &mut R,
        deadline: Option<Instant>,
    ) -> Option<&Arc> {
        self.reset();
        for _ in 0..cfg.seed_arc_size {
            if self.uncovered.is_empty() {
                break;
            }
            let p = self.uncovered[rng.gen_range(0..self.uncovered.len())];
            self.add(p).expect("seed point is uncovered");
        }
        while !self.uncovered.is_empty() {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return None;
            }
            let p = self.pick(cfg, top_k, rng);
            self.add(p).expect("candidate is uncovered");
        }
        Some(&self.arc)
    }

    fn pick<R: Rng>(&mut self, cfg: &SearchConfig, top_k: usize, rng: &mut R) -> PointId {
        let u = self.uncovered.len();
        let mut scores = std::mem::take(&mut self.scores);
        let mut pool = std::mem::take(&mut self.pool);
        scores.clear();
        pool.clear();

        let sampled: Option<Vec<usize>> = match cfg.candidate_policy {
            CandidatePolicy::Sample(m) if m < u => Some(index::sample(rng, u, m).into_vec()),
            _ => None,
        };
        let candidate = |i: usize| match &sampled {
            Some(idx) => self.uncovered[idx[i]],
            None => self.uncovered[i],
        };
        let count = sampled.as_ref().map_or(u, |v| v.len());

        // Distinct top score levels, descending, at most top_k of them.
        let mut levels: Vec<u32> = Vec::with_capacity(top_k + 1);
        for i in 0..count {
            let s = self.score(candidate(i));
            scores.push(s);
            if levels.len() < top_k || s > *levels.last().unwrap() {
                if let Err(at) = levels.binary_search_by(|v| s.cmp(v)) {
                    levels.insert(at, s);
                    levels.truncate(top_k);
                }
            }
        }
        let threshold = *levels.last().expect("at least one candidate");
        for (i, &s) in scores.iter().enumerate() {
            if s >= threshold {
                pool.push(candidate(i));
            }
        }
        let chosen = pool[rng.gen_range(0..pool.len())];
        self.scores = scores;
        self.pool = pool;
        chosen
    }
}

/// RNG for trial `index` of a search seeded with `master_seed`.
pub fn trial_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// One greedy trial; the result is a complete arc.
pub fn greedy_trial<R: Rng>(plane: &PlaneIndex, cfg: &SearchConfig, rng: &mut R) -> Arc {
    let mut engine = TrialEngine::new(plane);
    engine
        .run_trial(cfg, cfg.top_k, rng, None)
        .expect("no deadline")
        .clone()
}

/// Extends an arc by uniformly random uncovered points until it is complete.
pub fn complete_extension<R: Rng>(
    plane: &PlaneIndex,
    arc: &Arc,
    rng: &mut R,
) -> Result<Arc, ArcError> {
    if !verify_arc(plane, arc.points()) {
        return Err(ArcError::NotAnArc);
    }
    let (mut state, mut out) = CoverageState::for_arc(plane, arc)?;
    loop {
        let free: Vec<usize> = state.covered().zeroes().collect();
        if free.is_empty() {
            return Ok(out);
        }
        let p = free[rng.gen_range(0..free.len())] as PointId;
        state.add(plane, &mut out, p)?;
    }
}

/// Builds GF(q) and PG(2,q), then runs [`search_in`].
pub fn search(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    let plane = PlaneIndex::build(Field::new(cfg.p, cfg.h)?)?;
    search_in(&plane, cfg)
}

struct TrialOutcome {
    index: u64,
    points: Option<Vec<PointId>>,
}

/// Runs `cfg.trials` trials on `plane` and keeps the smallest complete arc.
pub fn search_in(plane: &PlaneIndex, cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    if plane.order() != cfg.q {
        return Err(SearchError::InvalidConfig(format!(
            "plane has order {} but the configuration asks for q = {}",
            plane.order(),
            cfg.q
        )));
    }
    let start = Instant::now();
    let deadline = cfg.time_budget.map(|b| start + b);
    let jobs = cfg.jobs.min(batch_size(plane.n_points()) as usize).max(1);
    let budget = PENCIL_CACHE_BYTES / jobs;
    let mut engines: Vec<TrialEngine> = (0..jobs)
        .map(|_| TrialEngine::with_cache_budget(plane, budget))
        .collect();

    let mut best: Option<(usize, u64, Vec<PointId>)> = None;
    let mut histogram = BTreeMap::new();
    let mut trials_run = 0u64;
    let mut budget_exhausted = false;
    let mut next = 0u64;
    let batch = batch_size(plane.n_points());

    while next < cfg.trials {
        let end = (next + batch).min(cfg.trials);
        let mut outcomes = run_batch(&mut engines, cfg, next..end, deadline);
        outcomes.sort_by_key(|o| o.index);
        for o in outcomes {
            let Some(points) = o.points else {
                budget_exhausted = true;
                continue;
            };
            trials_run += 1;
            *histogram.entry(points.len()).or_insert(0u64) += 1;
            if best
                .as_ref()
                .is_none_or(|(size, _, _)| points.len() < *size)
            {
                best = Some((points.len(), o.index, points));
            }
        }
        next = end;
        let reached = matches!((&best, cfg.target_size), (Some((s, _, _)), Some(t)) if *s <= t);
        if reached || budget_exhausted {
            break;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            budget_exhausted = next < cfg.trials;
            break;
        }
    }

    let Some((best_size, best_trial, points)) = best else {
        return Err(SearchError::BudgetExhausted);
    };
    if !verify_arc(plane, &points) {
        return Err(SearchError::VerificationFailed(
            "three collinear points".into(),
        ));
    }
    if !verify_complete(plane, &points)?.complete {
        return Err(SearchError::VerificationFailed(
            "arc is not complete".into(),
        ));
    }
    Ok(SearchReport {
        q: cfg.q,
        p: cfg.p,
        h: cfg.h,
        best_arc: Arc::from_points(plane, &points)?,
        best_size,
        best_trial,
        trials_run,
        trials_requested: cfg.trials,
        master_seed: cfg.master_seed,
        histogram,
        elapsed: start.elapsed(),
        target_size: cfg.target_size,
        budget_exhausted,
    })
}

fn run_batch(
    engines: &mut [TrialEngine],
    cfg: &SearchConfig,
    range: std::ops::Range<u64>,
    deadline: Option<Instant>,
) -> Vec<TrialOutcome> {
    let run = |engine: &mut TrialEngine, index: u64| {
        let mut rng = trial_rng(cfg.master_seed, index);
        TrialOutcome {
            index,
            points: engine
                .run_trial(cfg, cfg.top_k_for(index), &mut rng, deadline)
                .map(|a| a.points().to_vec()),
        }
    };
    if engines.len() == 1 {
        return range.map(|i| run(&mut engines[0], i)).collect();
    }
    let jobs = engines.len() as u64;
    std::thread::scope(|s| {
        let handles: Vec<_> = engines
            .iter_mut()
            .enumerate()
            .map(|(j, engine)| {
                let range = range.clone();
                s.spawn(move || {
                    range
                        .filter(|i| i % jobs == j as u64)
                        .map(|i| run(engine, i))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("trial worker panicked"))
            .collect()
    })
}
