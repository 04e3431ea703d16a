//! Backtracking searches for seed matrices.
//!
//! [`search_seed`] looks for a DSRG adjacency matrix `A1` with given
//! parameters; [`search_pair`] looks for the blocky pair `(B1, C1)` that lets
//! `A1` grow into a family. Both count explored nodes against a
//! [`SearchBudget`] and report progress through a [`SearchObserver`], which is
//! also where wall-clock limits come from since this crate has no clock.

mod pair;
mod seed;

pub use pair::{assemble_seed, search_pair, search_pair_with, PairSearchProblem, PairSolution};
pub use seed::{
    search_seed, search_seed_with, SeedSearchConfig, SeedSolution, DEFAULT_SEED_CEILING,
};

use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::dsrg::Violation;

/// How often (in nodes) the observer is consulted.
pub const PROGRESS_INTERVAL: u64 = 4096;

/// First per-attempt node limit of the restart schedule; doubles after every restart.
pub const RESTART_BASE_NODES: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    /// Enforced through [`SearchObserver::elapsed_seconds`]; never changes the explored order.
    pub max_wall_seconds: Option<f64>,
    pub rng_seed: u64,
    /// Fixed lexicographic value order and no restarts.
    pub deterministic: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_nodes: 50_000_000,
            max_wall_seconds: None,
            rng_seed: 0,
            deterministic: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub restarts: u32,
    /// Deepest level reached by any branch.
    pub best_depth: usize,
    pub wall_seconds: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Progress {
    pub nodes: u64,
    pub depth: usize,
    pub best_depth: usize,
    pub restarts: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

pub trait SearchObserver {
    fn progress(&mut self, _progress: &Progress) -> Control {
        Control::Continue
    }

    /// Seconds since the search started, if the caller has a clock.
    fn elapsed_seconds(&self) -> Option<f64> {
        None
    }
}

/// Observer that never stops a search and has no clock.
#[derive(Debug, Default, Clone, Copy)]
pub struct Silent;

impl SearchObserver for Silent {}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// Budget or observer stopped the search first.
    Exhausted(SearchStats),
    /// The whole (symmetry-reduced) space was explored without a solution.
    Infeasible(SearchStats),
    /// Necessary conditions already rule the parameters out.
    PrecheckFailed(Vec<Violation>),
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(x) => Some(x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Halt {
    /// Per-attempt limit reached; a restart may follow.
    AttemptLimit,
    /// Global budget or observer; the search ends.
    Budget,
}

/// Node accounting shared by both searches.
struct Ticker<'o> {
    budget: SearchBudget,
    observer: &'o mut dyn SearchObserver,
    stats: SearchStats,
    attempt_limit: u64,
    attempt_nodes: u64,
}

impl<'o> Ticker<'o> {
    fn new(budget: SearchBudget, observer: &'o mut dyn SearchObserver) -> Self {
        Self {
            budget,
            observer,
            stats: SearchStats::default(),
            attempt_limit: u64::MAX,
            attempt_nodes: 0,
        }
    }

    /// Counts one node at `depth`.
    fn tick(&mut self, depth: usize) -> Result<(), Halt> {
        if self.stats.nodes >= self.budget.max_nodes {
            return Err(Halt::Budget);
        }
        if self.attempt_nodes >= self.attempt_limit {
            return Err(Halt::AttemptLimit);
        }
        self.stats.nodes += 1;
        self.attempt_nodes += 1;
        self.stats.best_depth = self.stats.best_depth.max(depth);
        if self.stats.nodes % PROGRESS_INTERVAL == 0 {
            let progress = Progress {
                nodes: self.stats.nodes,
                depth,
                best_depth: self.stats.best_depth,
                restarts: self.stats.restarts,
            };
            if self.observer.progress(&progress) == Control::Stop {
                return Err(Halt::Budget);
            }
            if let (Some(limit), Some(now)) = (
                self.budget.max_wall_seconds,
                self.observer.elapsed_seconds(),
            ) {
                if now >= limit {
                    return Err(Halt::Budget);
                }
            }
        }
        Ok(())
    }

    fn finish(mut self) -> SearchStats {
        self.stats.wall_seconds = self.observer.elapsed_seconds();
        self.stats
    }
}

/// Runs `attempt` under the restart policy.
///
/// Deterministic budgets get one unrestricted attempt with no shuffling;
/// otherwise attempt `r` is limited to `RESTART_BASE_NODES * 2^r` nodes and
/// receives a generator seeded from `rng_seed` and `r`.
fn with_restarts<T>(
    ticker: &mut Ticker<'_>,
    mut attempt: impl FnMut(&mut Ticker<'_>, Option<&mut Shuffler>) -> Result<Option<T>, Halt>,
) -> Result<Option<T>, Halt> {
    if ticker.budget.deterministic {
        ticker.attempt_limit = u64::MAX;
        return attempt(ticker, None);
    }
    let mut round = 0u32;
    loop {
        ticker.attempt_limit = RESTART_BASE_NODES.saturating_mul(1u64 << round.min(40));
        ticker.attempt_nodes = 0;
        let mut shuffler = Shuffler::new(
            ticker.budget.rng_seed ^ u64::from(round).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        match attempt(ticker, Some(&mut shuffler)) {
            Err(Halt::AttemptLimit) => {
                round += 1;
                ticker.stats.restarts = round;
            }
            other => return other,
        }
    }
}

/// Source of randomized value orders for non-deterministic attempts.
pub(crate) struct Shuffler {
    rng: SplitMix64,
}

impl Shuffler {
    fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    fn coin(&mut self) -> bool {
        self.rng.next_u64() >> 63 == 1
    }
}
