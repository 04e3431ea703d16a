use alloc::vec;
use alloc::vec::Vec;

use super::{
    with_restarts, Halt, SearchBudget, SearchObserver, SearchOutcome, SearchStats, Shuffler,
    Silent, Ticker,
};
use crate::dsrg::{precheck_seed_feasibility, verify_algebraic, DsrgParams};
use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

pub const DEFAULT_SEED_CEILING: usize = 24;

/// Rows are held as single machine words, so no ceiling can exceed this.
const HARD_CEILING: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSearchConfig {
    /// Largest order accepted.
    pub ceiling: usize,
}

impl Default for SeedSearchConfig {
    fn default() -> Self {
        Self {
            ceiling: DEFAULT_SEED_CEILING,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedSolution {
    pub a1: BinaryMatrix,
    pub stats: SearchStats,
}

pub fn search_seed(p: &DsrgParams, budget: &SearchBudget) -> Result<SearchOutcome<SeedSolution>> {
    search_seed_with(p, budget, &SeedSearchConfig::default(), &mut Silent)
}

/// Cell-by-cell backtracking over the rows of an adjacency matrix.
///
/// The first row is fixed to ones in columns `1..=k`. Each decision is
/// checked against row and column sums and against the running 2-path counts
/// of every completed row; a completed row additionally checks lower and
/// upper bounds of all 2-path counts it takes part in.
pub fn search_seed_with(
    p: &DsrgParams,
    budget: &SearchBudget,
    config: &SeedSearchConfig,
    observer: &mut dyn SearchObserver,
) -> Result<SearchOutcome<SeedSolution>> {
    let ceiling = config.ceiling.min(HARD_CEILING);
    if p.v > ceiling {
        return Err(Error::OrderAboveCeiling { v: p.v, ceiling });
    }
    if p.k == 0 || p.v <= p.k {
        return Err(Error::UnsupportedParameters("parameters need v > k >= 1"));
    }
    let violations = precheck_seed_feasibility(p);
    if !violations.is_empty() {
        return Ok(SearchOutcome::PrecheckFailed(violations));
    }

    let mut ticker = Ticker::new(*budget, observer);
    let found = with_restarts(&mut ticker, |ticker, shuffler| {
        let mut state = SeedState::new(*p);
        state
            .cell(0, 0, ticker, shuffler)
            .map(|ok| ok.then(|| state.to_matrix()))
    });
    let stats = ticker.finish();
    Ok(match found {
        Ok(Some(a1)) => {
            debug_assert!(verify_algebraic(&a1, p).map(|r| r.ok).unwrap_or(false));
            SearchOutcome::Found(SeedSolution { a1, stats })
        }
        Ok(None) => SearchOutcome::Infeasible(stats),
        Err(_) => SearchOutcome::Exhausted(stats),
    })
}

struct SeedState {
    p: DsrgParams,
    v: usize,
    /// `rows[i]` bit `j` is `A[i][j]`.
    rows: Vec<u64>,
    /// `cols[j]` bit `i` is `A[i][j]`, for rows decided so far.
    cols: Vec<u64>,
    colsum: Vec<u32>,
    rowcount: u32,
    /// 2-paths out of the current row through already completed rows.
    partial: Vec<u32>,
}

#[inline]
fn bit(word: u64, i: usize) -> bool {
    word >> i & 1 == 1
}

impl SeedState {
    fn new(p: DsrgParams) -> Self {
        let v = p.v;
        Self {
            p,
            v,
            rows: vec![0; v],
            cols: vec![0; v],
            colsum: vec![0; v],
            rowcount: 0,
            partial: vec![0; v],
        }
    }

    fn to_matrix(&self) -> BinaryMatrix {
        BinaryMatrix::from_fn(self.v, self.v, |i, j| bit(self.rows[i], j))
            .expect("order is positive")
    }

    #[inline]
    fn target(&self, r: usize, l: usize) -> u32 {
        self.p.two_path_target(r == l, bit(self.rows[r], l))
    }

    fn can_set_one(&self, i: usize, j: usize) -> bool {
        let k = self.p.k as u32;
        if self.rowcount >= k || self.colsum[j] >= k {
            return false;
        }
        // completed rows r with r -> i gain a 2-path r -> i -> j
        let mut preds = self.cols[i];
        while preds != 0 {
            let r = preds.trailing_zeros() as usize;
            preds &= preds - 1;
            if (self.rows[r] & self.cols[j]).count_ones() + 1 > self.target(r, j) {
                return false;
            }
        }
        if j < i {
            // row i gains the 2-paths i -> j -> l
            let loose = self.p.lambda.max(self.p.mu) as u32;
            let row_j = self.rows[j];
            for l in 0..self.v {
                let bound = if l == i {
                    self.p.t as u32
                } else if l < j {
                    self.p.two_path_target(false, bit(self.rows[i], l))
                } else if l == j {
                    self.p.lambda as u32
                } else {
                    loose
                };
                if self.partial[l] + u32::from(bit(row_j, l)) > bound {
                    return false;
                }
            }
        }
        true
    }

    fn can_set_zero(&self, i: usize, j: usize) -> bool {
        let k = self.p.k as u32;
        let rest = (j + 1..self.v).filter(|&l| l != i).count() as u32;
        if self.rowcount + rest < k {
            return false;
        }
        let below = (self.v - 1 - i - usize::from(j > i)) as u32;
        self.colsum[j] + below >= k
    }

    fn set_one(&mut self, i: usize, j: usize) {
        self.rows[i] |= 1 << j;
        self.cols[j] |= 1 << i;
        self.colsum[j] += 1;
        self.rowcount += 1;
        if j < i {
            let row_j = self.rows[j];
            for (l, count) in self.partial.iter_mut().enumerate() {
                *count += u32::from(bit(row_j, l));
            }
        }
    }

    fn unset_one(&mut self, i: usize, j: usize) {
        self.rows[i] &= !(1 << j);
        self.cols[j] &= !(1 << i);
        self.colsum[j] -= 1;
        self.rowcount -= 1;
        if j < i {
            let row_j = self.rows[j];
            for (l, count) in self.partial.iter_mut().enumerate() {
                *count -= u32::from(bit(row_j, l));
            }
        }
    }

    /// Bounds check after row `i` is complete.
    fn row_complete_ok(&self, i: usize) -> bool {
        let k = self.p.k as u32;
        let v = self.v;
        for l in 0..v {
            let below = (v - 1 - i - usize::from(l > i)) as u32;
            if self.colsum[l] + below < k {
                return false;
            }
        }
        let decided: u64 = if i + 1 >= 64 {
            u64::MAX
        } else {
            (1u64 << (i + 1)) - 1
        };
        for r in 0..=i {
            let open = self.rows[r] & !decided;
            for l in 0..v {
                let lower = (self.rows[r] & self.cols[l]).count_ones();
                let upper = lower + (open & !(1u64 << l)).count_ones();
                let target = self.target(r, l);
                if lower > target || upper < target {
                    return false;
                }
            }
        }
        true
    }

    fn start_row(&mut self) {
        self.rowcount = 0;
        self.partial.iter_mut().for_each(|c| *c = 0);
    }

    fn row_state(&self) -> (u32, Vec<u32>) {
        (self.rowcount, self.partial.clone())
    }

    fn restore_row_state(&mut self, state: (u32, Vec<u32>)) {
        self.rowcount = state.0;
        self.partial = state.1;
    }

    fn cell(
        &mut self,
        i: usize,
        j: usize,
        ticker: &mut Ticker<'_>,
        mut shuffler: Option<&mut Shuffler>,
    ) -> core::result::Result<bool, Halt> {
        let v = self.v;
        if j == v {
            if !self.row_complete_ok(i) {
                return Ok(false);
            }
            if i + 1 == v {
                return Ok(true);
            }
            let saved = self.row_state();
            self.start_row();
            let found = self.cell(i + 1, 0, ticker, shuffler)?;
            if !found {
                self.restore_row_state(saved);
            }
            return Ok(found);
        }
        if j == i {
            return self.cell(i, j + 1, ticker, shuffler);
        }
        ticker.tick(i * v + j)?;

        let first_row_value = (i == 0).then_some(j <= self.p.k);
        let one_first = match shuffler.as_deref_mut() {
            Some(s) => s.coin(),
            None => true,
        };
        for value in [one_first, !one_first] {
            if first_row_value.is_some_and(|forced| forced != value) {
                continue;
            }
            if value {
                if !self.can_set_one(i, j) {
                    continue;
                }
                self.set_one(i, j);
                if self.cell(i, j + 1, ticker, shuffler.as_deref_mut())? {
                    return Ok(true);
                }
                self.unset_one(i, j);
            } else {
                if !self.can_set_zero(i, j) {
                    continue;
                }
                if self.cell(i, j + 1, ticker, shuffler.as_deref_mut())? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}
