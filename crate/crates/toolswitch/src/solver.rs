//! Iterated local search over job orders, parameterized by evaluator.
//!
//! The solver exists to show the end-to-end effect of evaluator speed: it
//! is a deliberately ordinary first-improvement local search with random
//! restart kicks, whose wall-clock throughput is completely dominated by
//! evaluator calls. Swapping in a faster evaluator changes how many
//! sequences a budget explores, never which objective any sequence gets,
//! so with a fixed evaluation budget and seed the entire trajectory is
//! identical across the four evaluators.
//!
//! Algorithm: evaluate a random start, descend to a local optimum
//! (first-improvement over the configured neighborhood, restarting the
//! scan after every accepted move), then repeatedly kick the incumbent
//! with random swaps, descend again, and accept the result when it is not
//! worse. The run stops when the evaluation budget is spent or the wall
//! clock passes `time_limit` (the only nondeterministic stop; the path up
//! to the cutoff is still seed-determined).

use crate::eval::{EvaluatorKind, Scratch};
use crate::model::{Instance, JobSequence};
use crate::rng::{seeded, shuffle, uniform_below, Prng};
use std::time::{Duration, Instant};

/// Neighborhood scanned by the local search, in fixed lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Neighborhood {
    /// Swap positions `i` and `i + 1`.
    AdjacentSwap,
    /// Swap any two positions.
    AnySwap,
    /// Remove the job at one position and reinsert it at another.
    Insertion,
}

impl Neighborhood {
    pub const ALL: [Neighborhood; 3] = [
        Neighborhood::AdjacentSwap,
        Neighborhood::AnySwap,
        Neighborhood::Insertion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Neighborhood::AdjacentSwap => "adjacent-swap",
            Neighborhood::AnySwap => "any-swap",
            Neighborhood::Insertion => "insertion",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|n| n.name() == name)
    }
}

impl std::fmt::Display for Neighborhood {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct SolverConfig {
    pub evaluator: EvaluatorKind,
    /// Evaluator-call budget; every tried move costs one call.
    pub max_evaluations: u64,
    /// Random swaps per kick once a local optimum is reached.
    pub perturbation_strength: usize,
    pub neighborhood: Neighborhood,
    pub seed: u64,
    /// Optional wall-clock cap, checked before each evaluation.
    pub time_limit: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            evaluator: EvaluatorKind::MpcaBitwise,
            max_evaluations: 10_000,
            perturbation_strength: 3,
            neighborhood: Neighborhood::AnySwap,
            seed: 1,
            time_limit: None,
        }
    }
}

/// A new best objective, recorded at the evaluation that found it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TrajectoryPoint {
    pub evaluations: u64,
    pub switches: usize,
}

#[derive(Clone, PartialEq, Debug)]
pub struct SolveOutcome {
    pub best: JobSequence,
    pub switches: usize,
    pub evaluations_used: u64,
    /// Strictly improving incumbents, in order; `switches` is monotonically
    /// decreasing and the last entry matches the returned best.
    pub trajectory: Vec<TrajectoryPoint>,
}

struct Search<'a> {
    inst: &'a Instance,
    evaluator: EvaluatorKind,
    neighborhood: Neighborhood,
    scratch: Scratch,
    rng: Prng,
    used: u64,
    cap: u64,
    deadline: Option<Instant>,
    best: JobSequence,
    best_value: usize,
    trajectory: Vec<TrajectoryPoint>,
}

impl Search<'_> {
    fn exhausted(&self) -> bool {
        self.used >= self.cap
            || self
                .deadline
                .is_some_and(|deadline| Instant::now() >= deadline)
    }

    fn evaluate(&mut self, seq: &JobSequence) -> usize {
        self.used += 1;
        self.evaluator
            .evaluate(self.inst, seq, &mut self.scratch)
            .expect("solver sequences always match the instance")
            .switches
    }

    fn record(&mut self, seq: &JobSequence, value: usize) {
        if value < self.best_value {
            self.best_value = value;
            self.best = seq.clone();
            self.trajectory.push(TrajectoryPoint {
                evaluations: self.used,
                switches: value,
            });
        }
    }

    /// Applies one move; keeps it on strict improvement, reverts otherwise.
    fn try_move(
        &mut self,
        seq: &mut JobSequence,
        value: &mut usize,
        apply: impl Fn(&mut JobSequence),
        revert: impl Fn(&mut JobSequence),
    ) -> bool {
        apply(seq);
        let candidate = self.evaluate(seq);
        if candidate < *value {
            *value = candidate;
            self.record(seq, candidate);
            true
        } else {
            revert(seq);
            false
        }
    }

    /// One first-improvement pass; returns whether a move was accepted.
    fn improve_once(&mut self, seq: &mut JobSequence, value: &mut usize) -> bool {
        let n = seq.len();
        match self.neighborhood {
            Neighborhood::AdjacentSwap => {
                for i in 0..n.saturating_sub(1) {
                    if self.exhausted() {
                        return false;
                    }
                    let swap = move |s: &mut JobSequence| s.swap(i, i + 1);
                    if self.try_move(seq, value, swap, swap) {
                        return true;
                    }
                }
            }
            Neighborhood::AnySwap => {
                for i in 0..n.saturating_sub(1) {
                    for j in i + 1..n {
                        if self.exhausted() {
                            return false;
                        }
                        let swap = move |s: &mut JobSequence| s.swap(i, j);
                        if self.try_move(seq, value, swap, swap) {
                            return true;
                        }
                    }
                }
            }
            Neighborhood::Insertion => {
                for from in 0..n {
                    for to in 0..n {
                        if from == to {
                            continue;
                        }
                        if self.exhausted() {
                            return false;
                        }
                        let apply = move |s: &mut JobSequence| s.shift(from, to);
                        let revert = move |s: &mut JobSequence| s.shift(to, from);
                        if self.try_move(seq, value, apply, revert) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    fn descend(&mut self, seq: &mut JobSequence, value: &mut usize) {
        while !self.exhausted() && self.improve_once(seq, value) {}
    }

    fn kick(&mut self, seq: &mut JobSequence, strength: usize) {
        let n = seq.len();
        for _ in 0..strength {
            let i = uniform_below(&mut self.rng, n as u64) as usize;
            let mut j = uniform_below(&mut self.rng, n as u64 - 1) as usize;
            if j >= i {
                j += 1;
            }
            seq.swap(i, j);
        }
    }
}

/// Runs the iterated local search to the configured budget and returns the
/// best order found. Deterministic per `config.seed` (modulo `time_limit`
/// truncation).
pub fn ils_solve(inst: &Instance, config: &SolverConfig) -> SolveOutcome {
    assert!(
        config.max_evaluations >= 1,
        "budget must admit at least one evaluation"
    );
    assert!(
        config.perturbation_strength >= 1,
        "kicks must move something"
    );
    let n = inst.num_jobs();
    let mut search = Search {
        inst,
        evaluator: config.evaluator,
        neighborhood: config.neighborhood,
        scratch: Scratch::new(),
        rng: seeded(config.seed),
        used: 0,
        cap: config.max_evaluations,
        deadline: config.time_limit.map(|limit| Instant::now() + limit),
        best: JobSequence::identity(n),
        best_value: usize::MAX,
        trajectory: Vec::new(),
    };

    let mut order: Vec<usize> = (0..n).collect();
    shuffle(&mut search.rng, &mut order);
    let mut current = JobSequence::new(order).expect("shuffled identity is a permutation");
    let mut value = search.evaluate(&current);
    search.record(&current, value);

    // A single job admits a single order; descending or kicking would only
    // re-evaluate it.
    if n > 1 {
        search.descend(&mut current, &mut value);
        while !search.exhausted() {
            let mut candidate = current.clone();
            search.kick(&mut candidate, config.perturbation_strength);
            let mut candidate_value = search.evaluate(&candidate);
            search.record(&candidate, candidate_value);
            search.descend(&mut candidate, &mut candidate_value);
            if candidate_value <= value {
                current = candidate;
                value = candidate_value;
            }
        }
    }

    SolveOutcome {
        best: search.best,
        switches: search.best_value,
        evaluations_used: search.used,
        trajectory: search.trajectory,
    }
}

/// Evaluations per wall-clock second achieved by [`ils_solve`] under the
/// given config; meaningful with a `time_limit` set and a roomy budget.
pub fn solver_throughput(inst: &Instance, config: &SolverConfig) -> f64 {
    let started = Instant::now();
    let outcome = ils_solve(inst, config);
    let seconds = started.elapsed().as_secs_f64().max(1e-9);
    outcome.evaluations_used as f64 / seconds
}
