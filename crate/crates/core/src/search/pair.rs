use alloc::vec;
use alloc::vec::Vec;

use super::{
    with_restarts, Halt, SearchBudget, SearchObserver, SearchOutcome, SearchStats, Shuffler,
    Silent, Ticker,
};
use crate::dsrg::{precheck_family_feasibility, verify_algebraic, DsrgParams};
use crate::error::{Error, Result, SeedClause};
use crate::family::{check_pair_system, FamilySpec};
use crate::matrix::BinaryMatrix;

/// A verified seed matrix waiting for its `(B1, C1)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSearchProblem {
    a1: BinaryMatrix,
    params: DsrgParams,
    force: bool,
}

impl PairSearchProblem {
    pub fn new(a1: BinaryMatrix, params: DsrgParams) -> Result<Self> {
        if a1.shape() != (params.v, params.v) {
            return Err(Error::Dimension {
                context: "A1",
                expected: (params.v, params.v),
                found: a1.shape(),
            });
        }
        if !verify_algebraic(&a1, &params)?.ok {
            return Err(Error::SeedContract(SeedClause::SeedAdjacency));
        }
        Ok(Self {
            a1,
            params,
            force: false,
        })
    }

    /// Search even when the feasibility precheck rejects the parameters.
    pub fn with_force(mut self, force: bool) -> Self {
        self.force = force;
        self
    }

    pub fn a1(&self) -> &BinaryMatrix {
        &self.a1
    }

    pub fn params(&self) -> &DsrgParams {
        &self.params
    }

    pub fn force(&self) -> bool {
        self.force
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairSolution {
    pub b1: BinaryMatrix,
    pub c1: BinaryMatrix,
    pub stats: SearchStats,
}

pub fn search_pair(
    problem: &PairSearchProblem,
    budget: &SearchBudget,
) -> Result<SearchOutcome<PairSolution>> {
    search_pair_with(problem, budget, &mut Silent)
}

/// Searches for a blocky pair completing `A1` to a family seed.
///
/// Row `w` of `B1` is all ones on the left half when `x_w = 1` and on the
/// right half otherwise, so `B1` reduces to the vector `x` with
/// `(A1+sI)x = (A1+sI)(1-x) = t1` and `k` ones on each side. Once `x` is
/// fixed, the top half of `C1` is filled column by column, each column
/// choosing `t` of its `2t` rows. A row `c` must satisfy `c(A1+sI) = t1`,
/// weight `k`, and `c.x = t` (first `t` rows) or `c.x = lambda` (next `t`).
/// The bottom half is subject to the same constraints and reuses the top.
///
/// `x_0 = 1` is fixed since complementing `x` and swapping the two row groups
/// maps solutions onto solutions. Within a group, rows that agree on all
/// columns so far are kept in descending order.
pub fn search_pair_with(
    problem: &PairSearchProblem,
    budget: &SearchBudget,
    observer: &mut dyn SearchObserver,
) -> Result<SearchOutcome<PairSolution>> {
    let p = problem.params;
    let violations = precheck_family_feasibility(&p);
    if !violations.is_empty() && !problem.force {
        return Ok(SearchOutcome::PrecheckFailed(violations));
    }
    if p.lambda > p.t {
        return Err(Error::UnsupportedParameters(
            "pair search needs t >= lambda",
        ));
    }

    let system = System::new(&problem.a1, &p);
    let mut ticker = Ticker::new(*budget, observer);
    let found = with_restarts(&mut ticker, |ticker, shuffler| {
        let mut x = XSearch::new(&system);
        x.run(0, ticker, shuffler)
    });
    let stats = ticker.finish();
    match found {
        Ok(Some((x, top))) => {
            let (b1, c1) = system.matrices(&x, &top)?;
            check_pair_system(&p, &problem.a1, &b1, &c1)?;
            Ok(SearchOutcome::Found(PairSolution { b1, c1, stats }))
        }
        Ok(None) => Ok(SearchOutcome::Infeasible(stats)),
        Err(_) => Ok(SearchOutcome::Exhausted(stats)),
    }
}

/// Builds the family seed from a pair, re-running the full seed contract.
pub fn assemble_seed(
    a1: &BinaryMatrix,
    solution: &PairSolution,
    params: &DsrgParams,
) -> Result<FamilySpec> {
    FamilySpec::new(
        *params,
        a1.clone(),
        solution.b1.clone(),
        solution.c1.clone(),
    )
}

/// Constants of one pair problem.
struct System {
    v: usize,
    t: usize,
    k: u32,
    /// `M = A1 + sI`, row-major.
    m: Vec<u32>,
    /// `suffix[i * (v+1) + j] = sum of M[i][j..]`.
    row_suffix: Vec<u32>,
    /// `col_suffix[j * v + l] = sum of M[j'][l] for j' > j`.
    col_suffix_after: Vec<u32>,
    /// Targets of `c.x` and `c.(1-x)` for the two row groups.
    dot_targets: [(u32, u32); 2],
}

impl System {
    fn new(a1: &BinaryMatrix, p: &DsrgParams) -> Self {
        let v = p.v;
        let s = (p.t - p.lambda) as u32;
        let mut m = vec![0u32; v * v];
        for i in 0..v {
            a1.for_each_one_in_row(i, |j| m[i * v + j] = 1);
            m[i * v + i] += s;
        }
        let mut row_suffix = vec![0u32; v * (v + 1)];
        for i in 0..v {
            for j in (0..v).rev() {
                row_suffix[i * (v + 1) + j] = row_suffix[i * (v + 1) + j + 1] + m[i * v + j];
            }
        }
        let mut col_suffix_after = vec![0u32; v * v];
        for j in (0..v.saturating_sub(1)).rev() {
            for l in 0..v {
                col_suffix_after[j * v + l] =
                    col_suffix_after[(j + 1) * v + l] + m[(j + 1) * v + l];
            }
        }
        let t = p.t as u32;
        Self {
            v,
            t: p.t,
            k: p.k as u32,
            m,
            row_suffix,
            col_suffix_after,
            dot_targets: [(t, t - s), (t - s, t)],
        }
    }

    #[inline]
    fn m_row(&self, j: usize) -> &[u32] {
        &self.m[j * self.v..(j + 1) * self.v]
    }

    fn matrices(&self, x: &[bool], top: &[Vec<bool>]) -> Result<(BinaryMatrix, BinaryMatrix)> {
        let t = self.t;
        let b1 = BinaryMatrix::from_fn(self.v, 4 * t, |i, j| x[i] == (j < 2 * t))?;
        let c1 = BinaryMatrix::from_fn(4 * t, self.v, |r, j| top[r % (2 * t)][j])?;
        Ok((b1, c1))
    }
}

struct XSearch<'s> {
    sys: &'s System,
    x: Vec<bool>,
    ones: u32,
    /// `t - (Mx)_i` and `t - (M(1-x))_i` so far.
    residual: [Vec<u32>; 2],
}

impl<'s> XSearch<'s> {
    fn new(sys: &'s System) -> Self {
        let t = sys.t as u32;
        Self {
            sys,
            x: vec![false; sys.v],
            ones: 0,
            residual: [vec![t; sys.v], vec![t; sys.v]],
        }
    }

    /// Whether every residual can still be met by the columns after `j`.
    fn fits(&self, j: usize, value: bool) -> bool {
        let sys = self.sys;
        let v = sys.v;
        let ones = self.ones + u32::from(value);
        let zeros = (j + 1) as u32 - ones;
        let left = (v - j - 1) as u32;
        if ones > sys.k || ones + left < sys.k || zeros > sys.k || zeros + left < sys.k {
            return false;
        }
        let side = usize::from(!value);
        (0..v).all(|i| {
            let mij = sys.m[i * v + j];
            let rest = sys.row_suffix[i * (v + 1) + j + 1];
            let own = self.residual[side][i];
            let other = self.residual[1 - side][i];
            own >= mij && own - mij <= rest && other <= rest
        })
    }

    fn apply(&mut self, j: usize, value: bool, undo: bool) {
        let v = self.sys.v;
        let side = usize::from(!value);
        for i in 0..v {
            let mij = self.sys.m[i * v + j];
            if undo {
                self.residual[side][i] += mij;
            } else {
                self.residual[side][i] -= mij;
            }
        }
        self.x[j] = value;
        if value {
            if undo {
                self.ones -= 1;
            } else {
                self.ones += 1;
            }
        }
    }

    fn run(
        &mut self,
        j: usize,
        ticker: &mut Ticker<'_>,
        mut shuffler: Option<&mut Shuffler>,
    ) -> core::result::Result<Option<(Vec<bool>, Vec<Vec<bool>>)>, Halt> {
        if j == self.sys.v {
            let mut c = CSearch::new(self.sys, &self.x);
            return Ok(c
                .run(0, ticker, shuffler)?
                .then(|| (self.x.clone(), c.rows)));
        }
        ticker.tick(j)?;
        let one_first = match shuffler.as_deref_mut() {
            Some(s) => s.coin(),
            None => true,
        };
        for value in [one_first, !one_first] {
            if j == 0 && !value {
                continue;
            }
            if !self.fits(j, value) {
                continue;
            }
            self.apply(j, value, false);
            let found = self.run(j + 1, ticker, shuffler.as_deref_mut())?;
            self.apply(j, value, true);
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Column-by-column search for the top `2t` rows of `C1` with `x` fixed.
struct CSearch<'s> {
    sys: &'s System,
    x: &'s [bool],
    /// Chosen entries, one row of length `v` per top row.
    rows: Vec<Vec<bool>>,
    weight: Vec<u32>,
    /// Ones of each row on the `x = 1` and `x = 0` columns.
    dots: Vec<[u32; 2]>,
    /// `c_r M` so far, row-major `2t x v`.
    image: Vec<u32>,
    /// `x = 1` and `x = 0` columns strictly after each column.
    after: Vec<[u32; 2]>,
}

impl<'s> CSearch<'s> {
    fn new(sys: &'s System, x: &'s [bool]) -> Self {
        let v = sys.v;
        let h = 2 * sys.t;
        let mut after = vec![[0u32; 2]; v];
        for j in (0..v.saturating_sub(1)).rev() {
            after[j] = after[j + 1];
            after[j][usize::from(!x[j + 1])] += 1;
        }
        Self {
            sys,
            x,
            rows: vec![vec![false; v]; h],
            weight: vec![0; h],
            dots: vec![[0; 2]; h],
            image: vec![0; h * v],
            after,
        }
    }

    /// Whether row `r` can take `value` at column `j` and still be completed.
    fn allows(&self, r: usize, j: usize, value: bool) -> bool {
        let sys = self.sys;
        let v = sys.v;
        let add = u32::from(value);
        let weight = self.weight[r] + add;
        let left = (v - j - 1) as u32;
        if weight > sys.k || weight + left < sys.k {
            return false;
        }
        let targets = sys.dot_targets[r / sys.t];
        let side = usize::from(!self.x[j]);
        for (s, target) in [targets.0, targets.1].into_iter().enumerate() {
            let dot = self.dots[r][s] + if s == side { add } else { 0 };
            if dot > target || dot + self.after[j][s] < target {
                return false;
            }
        }
        let t = sys.t as u32;
        let image = &self.image[r * v..(r + 1) * v];
        let rest = &sys.col_suffix_after[j * v..(j + 1) * v];
        let mj = sys.m_row(j);
        (0..v).all(|l| {
            let got = image[l] + if value { mj[l] } else { 0 };
            got <= t && got + rest[l] >= t
        })
    }

    fn set(&mut self, r: usize, j: usize, undo: bool) {
        let v = self.sys.v;
        let side = usize::from(!self.x[j]);
        let mj = &self.sys.m[j * v..(j + 1) * v];
        let image = &mut self.image[r * v..(r + 1) * v];
        if undo {
            image.iter_mut().zip(mj).for_each(|(a, b)| *a -= b);
            self.weight[r] -= 1;
            self.dots[r][side] -= 1;
        } else {
            image.iter_mut().zip(mj).for_each(|(a, b)| *a += b);
            self.weight[r] += 1;
            self.dots[r][side] += 1;
        }
        self.rows[r][j] = !undo;
    }

    /// Rows `r` and `r + 1` are interchangeable so far.
    fn tied(&self, r: usize, j: usize) -> bool {
        let t = self.sys.t;
        r / t == (r + 1) / t && self.rows[r][..j] == self.rows[r + 1][..j]
    }

    fn run(
        &mut self,
        j: usize,
        ticker: &mut Ticker<'_>,
        shuffler: Option<&mut Shuffler>,
    ) -> core::result::Result<bool, Halt> {
        let v = self.sys.v;
        if j == v {
            return Ok(true);
        }
        ticker.tick(v + j)?;
        let h = 2 * self.sys.t;
        let mut options = Vec::with_capacity(h);
        for r in 0..h {
            let one = self.allows(r, j, true);
            let zero = self.allows(r, j, false);
            if !one && !zero {
                return Ok(false);
            }
            options.push((one, zero));
        }
        let ties: Vec<bool> = (0..h - 1).map(|r| self.tied(r, j)).collect();
        self.pick(j, 0, self.sys.t, &options, &ties, ticker, shuffler)
    }

    /// Chooses `need` more rows from `r..2t` for column `j`, then moves on.
    #[allow(clippy::too_many_arguments)]
    fn pick(
        &mut self,
        j: usize,
        r: usize,
        need: usize,
        options: &[(bool, bool)],
        ties: &[bool],
        ticker: &mut Ticker<'_>,
        mut shuffler: Option<&mut Shuffler>,
    ) -> core::result::Result<bool, Halt> {
        let h = options.len();
        if r == h {
            return if need == 0 {
                self.run(j + 1, ticker, shuffler)
            } else {
                Ok(false)
            };
        }
        let left = h - r;
        let one_first = match shuffler.as_deref_mut() {
            Some(s) => s.coin(),
            None => true,
        };
        for value in [one_first, !one_first] {
            let (one, zero) = options[r];
            if value && (!one || need == 0) {
                continue;
            }
            if !value && (!zero || need >= left) {
                continue;
            }
            // of two tied rows the later one may only be chosen with the earlier
            if value && r > 0 && ties[r - 1] && !self.rows[r - 1][j] {
                continue;
            }
            if value {
                self.set(r, j, false);
                let found = self.pick(
                    j,
                    r + 1,
                    need - 1,
                    options,
                    ties,
                    ticker,
                    shuffler.as_deref_mut(),
                )?;
                if found {
                    return Ok(true);
                }
                self.set(r, j, true);
            } else if self.pick(
                j,
                r + 1,
                need,
                options,
                ties,
                ticker,
                shuffler.as_deref_mut(),
            )? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
