//! DSRG parameters, feasibility prechecks and verifiers.
//!
//! Two full verifiers are provided and deliberately share no code path:
//! [`verify_algebraic`] squares the adjacency matrix with popcount products,
//! [`verify_combinatorial`] counts 2-paths by intersecting sorted neighbour
//! lists. [`verify_sampled`] spot-checks the `mu = t` identity
//! `A^2 + sA = tJ` on pseudo-random entries after exact degree checks.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::matrix::{and_popcount, BinaryMatrix};

/// Maximum number of witnesses kept in a [`VerifyReport`].
pub const WITNESS_CAP: usize = 32;

/// Parameter set `(v, k, t, lambda, mu)` of a directed strongly regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DsrgParams {
    pub v: usize,
    pub k: usize,
    pub t: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl DsrgParams {
    /// Checks `v > k >= 1`.
    pub fn new(v: usize, k: usize, t: usize, lambda: usize, mu: usize) -> Result<Self> {
        if k == 0 || v <= k {
            return Err(Error::UnsupportedParameters("parameters need v > k >= 1"));
        }
        Ok(Self {
            v,
            k,
            t,
            lambda,
            mu,
        })
    }

    /// `s = t - lambda`; may be zero or negative for parameters outside the family machinery.
    pub fn s(&self) -> i64 {
        self.t as i64 - self.lambda as i64
    }

    pub fn mu_equals_t(&self) -> bool {
        self.mu == self.t
    }

    /// The value `(A^2)_{ij}` must take for a pair that is a diagonal entry, an edge, or neither.
    #[inline]
    pub fn two_path_target(&self, diagonal: bool, edge: bool) -> u32 {
        (if diagonal {
            self.t
        } else if edge {
            self.lambda
        } else {
            self.mu
        }) as u32
    }
}

impl fmt::Display for DsrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {})",
            self.v, self.k, self.t, self.lambda, self.mu
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerifyMode {
    AlgebraicFull,
    CombinatorialFull,
    Sampled,
    /// The six block-product equations of a family term.
    BlockSystem,
    /// Row/column sum and block-structure checks of the auxiliary matrices.
    Structural,
}

impl fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerifyMode::AlgebraicFull => "algebraic-full",
            VerifyMode::CombinatorialFull => "combinatorial-full",
            VerifyMode::Sampled => "sampled",
            VerifyMode::BlockSystem => "block-system",
            VerifyMode::Structural => "structural",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailureKind {
    /// Row `i` has the wrong number of ones (`j` unused).
    OutDegree,
    /// Column `i` has the wrong number of ones (`j` unused).
    InDegree,
    /// Entry `(i, j)` of the 2-path count matrix is wrong.
    TwoPaths,
    /// Entry `(i, j)` of block equation `e` is wrong.
    Equation(u8),
    /// Row `i` of the named matrix has the wrong sum.
    RowSum(&'static str),
    /// Column `i` of the named matrix has the wrong sum.
    ColumnSum(&'static str),
    /// Row `i` of the named matrix is not one all-ones block plus zero blocks.
    RowBlocks(&'static str),
    /// Block `j` of column `i` of the named matrix has the wrong number of ones.
    ColumnBlocks(&'static str),
}

/// A single failed check: position, expected and observed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Failure {
    pub kind: FailureKind,
    pub i: usize,
    pub j: usize,
    pub expected: u64,
    pub got: u64,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FailureKind::OutDegree => write!(
                f,
                "row {} sum: expected {}, got {}",
                self.i, self.expected, self.got
            ),
            FailureKind::InDegree => write!(
                f,
                "column {} sum: expected {}, got {}",
                self.i, self.expected, self.got
            ),
            FailureKind::TwoPaths => write!(
                f,
                "2-paths {} -> {}: expected {}, got {}",
                self.i, self.j, self.expected, self.got
            ),
            FailureKind::Equation(e) => write!(
                f,
                "equation {e} entry ({}, {}): expected {}, got {}",
                self.i, self.j, self.expected, self.got
            ),
            FailureKind::RowSum(m) => write!(
                f,
                "{m} row {} sum: expected {}, got {}",
                self.i, self.expected, self.got
            ),
            FailureKind::ColumnSum(m) => {
                write!(
                    f,
                    "{m} column {} sum: expected {}, got {}",
                    self.i, self.expected, self.got
                )
            }
            FailureKind::RowBlocks(m) => write!(
                f,
                "{m} row {}: expected exactly {} all-ones block, found {}",
                self.i, self.expected, self.got
            ),
            FailureKind::ColumnBlocks(m) => write!(
                f,
                "{m} column {} block {}: expected {} ones, got {}",
                self.i, self.j, self.expected, self.got
            ),
        }
    }
}

/// Outcome of a verification run. `ok` holds exactly when no check failed;
/// `failures` keeps the first [`WITNESS_CAP`] witnesses while `total_failures`
/// stays exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    pub mode: VerifyMode,
    pub failures: Vec<Failure>,
    pub total_failures: u64,
    pub samples_checked: u64,
}

impl VerifyReport {
    pub fn new(mode: VerifyMode) -> Self {
        Self {
            ok: true,
            mode,
            failures: Vec::new(),
            total_failures: 0,
            samples_checked: 0,
        }
    }

    pub fn record(&mut self, failure: Failure) {
        self.ok = false;
        self.total_failures += 1;
        if self.failures.len() < WITNESS_CAP {
            self.failures.push(failure);
        }
    }

    /// Appends another report's results after this one's, as if checked in sequence.
    pub fn merge(&mut self, other: VerifyReport) {
        self.ok &= other.ok;
        self.total_failures += other.total_failures;
        self.samples_checked += other.samples_checked;
        let room = WITNESS_CAP - self.failures.len();
        self.failures.extend(other.failures.into_iter().take(room));
    }
}

fn check_adjacency(a: &BinaryMatrix, p: &DsrgParams) -> Result<()> {
    if !a.is_square() || a.rows() != p.v {
        return Err(Error::Dimension {
            context: "adjacency matrix",
            expected: (p.v, p.v),
            found: a.shape(),
        });
    }
    if let Some(vertex) = (0..a.rows()).find(|&i| a.get(i, i)) {
        return Err(Error::Loop { vertex });
    }
    Ok(())
}

fn degree_failures(a: &BinaryMatrix, p: &DsrgParams, report: &mut VerifyReport) {
    let k = p.k as u64;
    for (i, s) in a.row_sums().into_iter().enumerate() {
        if u64::from(s) != k {
            report.record(Failure {
                kind: FailureKind::OutDegree,
                i,
                j: 0,
                expected: k,
                got: s.into(),
            });
        }
    }
    for (j, s) in a.col_sums().into_iter().enumerate() {
        if u64::from(s) != k {
            report.record(Failure {
                kind: FailureKind::InDegree,
                i: j,
                j: 0,
                expected: k,
                got: s.into(),
            });
        }
    }
}

/// Row-chunked form of [`verify_algebraic`], for callers that split the work.
///
/// `degrees()` followed by `rows(..)` over consecutive ranges, merged in order,
/// reproduces `verify_algebraic` exactly.
pub struct AlgebraicCheck<'a> {
    a: &'a BinaryMatrix,
    a_t: BinaryMatrix,
    params: DsrgParams,
}

impl<'a> AlgebraicCheck<'a> {
    pub fn new(a: &'a BinaryMatrix, params: DsrgParams) -> Result<Self> {
        check_adjacency(a, &params)?;
        Ok(Self {
            a,
            a_t: a.transpose(),
            params,
        })
    }

    pub fn order(&self) -> usize {
        self.a.rows()
    }

    pub fn degrees(&self) -> VerifyReport {
        let mut report = VerifyReport::new(VerifyMode::AlgebraicFull);
        degree_failures(self.a, &self.params, &mut report);
        report
    }

    /// Checks `A^2 = tI + lambda A + mu (J - I - A)` on the given rows.
    pub fn rows(&self, rows: Range<usize>) -> VerifyReport {
        let mut report = VerifyReport::new(VerifyMode::AlgebraicFull);
        for i in rows {
            let row = self.a.row_words(i);
            for j in 0..self.a.cols() {
                let got = and_popcount(row, self.a_t.row_words(j));
                let expected = self.params.two_path_target(i == j, self.a.get(i, j));
                if got != expected {
                    report.record(Failure {
                        kind: FailureKind::TwoPaths,
                        i,
                        j,
                        expected: expected.into(),
                        got: got.into(),
                    });
                }
            }
        }
        report
    }
}

/// Full check of the matrix identities: the 2-path count matrix and all row and column sums.
pub fn verify_algebraic(a: &BinaryMatrix, p: &DsrgParams) -> Result<VerifyReport> {
    let check = AlgebraicCheck::new(a, *p)?;
    let mut report = check.degrees();
    report.merge(check.rows(0..a.rows()));
    Ok(report)
}

fn intersection_len(xs: &[usize], ys: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < xs.len() && j < ys.len() {
        match xs[i].cmp(&ys[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Path-counting check: degrees from neighbour lists, and for every ordered
/// pair the number of middle vertices `w` with `x -> w -> y`.
pub fn verify_combinatorial(a: &BinaryMatrix, p: &DsrgParams) -> Result<VerifyReport> {
    check_adjacency(a, p)?;
    let v = a.rows();
    let mut out_nbrs: Vec<Vec<usize>> = (0..v).map(|_| Vec::new()).collect();
    let mut in_nbrs: Vec<Vec<usize>> = (0..v).map(|_| Vec::new()).collect();
    for (x, outs) in out_nbrs.iter_mut().enumerate() {
        for y in 0..v {
            if a.get(x, y) {
                outs.push(y);
                in_nbrs[y].push(x);
            }
        }
    }
    let mut report = VerifyReport::new(VerifyMode::CombinatorialFull);
    for (x, outs) in out_nbrs.iter().enumerate() {
        if outs.len() != p.k {
            report.record(Failure {
                kind: FailureKind::OutDegree,
                i: x,
                j: 0,
                expected: p.k as u64,
                got: outs.len() as u64,
            });
        }
    }
    for (y, ins) in in_nbrs.iter().enumerate() {
        if ins.len() != p.k {
            report.record(Failure {
                kind: FailureKind::InDegree,
                i: y,
                j: 0,
                expected: p.k as u64,
                got: ins.len() as u64,
            });
        }
    }
    for x in 0..v {
        for y in 0..v {
            let paths = intersection_len(&out_nbrs[x], &in_nbrs[y]);
            let expected = if x == y {
                p.t
            } else if out_nbrs[x].binary_search(&y).is_ok() {
                p.lambda
            } else {
                p.mu
            };
            if paths != expected {
                report.record(Failure {
                    kind: FailureKind::TwoPaths,
                    i: x,
                    j: y,
                    expected: expected as u64,
                    got: paths as u64,
                });
            }
        }
    }
    Ok(report)
}

/// Deterministic generator for sampled verification.
///
/// SplitMix64 with its standard constants: the state advances by
/// `0x9E3779B97F4A7C15` and each output is mixed with multipliers
/// `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`. The state is initialised to
/// the seed itself. An index below `n` is drawn as the high 64 bits of
/// `next_u64() * n`; a pair `(i, j)` takes two consecutive draws, row first.
pub struct PairSampler {
    rng: SplitMix64,
    n: u64,
}

impl PairSampler {
    pub fn new(seed: u64, n: usize) -> Self {
        Self {
            rng: SplitMix64::seed_from_u64(seed),
            n: n as u64,
        }
    }

    pub fn next_index(&mut self) -> usize {
        ((u128::from(self.rng.next_u64()) * u128::from(self.n)) >> 64) as usize
    }

    pub fn next_pair(&mut self) -> (usize, usize) {
        let i = self.next_index();
        (i, self.next_index())
    }
}

/// Checks all row and column sums exactly, then `(A^2 + sA)_{ij} = t` on the given pairs.
///
/// Only the `mu = t` form is supported.
pub fn verify_pairs(
    a: &BinaryMatrix,
    p: &DsrgParams,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Result<VerifyReport> {
    if !p.mu_equals_t() {
        return Err(Error::UnsupportedParameters(
            "sampled verification needs mu = t",
        ));
    }
    check_adjacency(a, p)?;
    let a_t = a.transpose();
    let mut report = VerifyReport::new(VerifyMode::Sampled);
    degree_failures(a, p, &mut report);
    for (i, j) in pairs {
        let edge = a.get(i, j);
        // mu = t turns the identity into (A^2)_{ij} = lambda on edges and t elsewhere.
        let expected = if edge { p.lambda } else { p.t } as u32;
        let got = and_popcount(a.row_words(i), a_t.row_words(j));
        report.samples_checked += 1;
        if got != expected {
            report.record(Failure {
                kind: FailureKind::TwoPaths,
                i,
                j,
                expected: expected.into(),
                got: got.into(),
            });
        }
    }
    Ok(report)
}

/// [`verify_pairs`] on `samples` pairs drawn by a [`PairSampler`] seeded with `rng_seed`.
pub fn verify_sampled(
    a: &BinaryMatrix,
    p: &DsrgParams,
    samples: u64,
    rng_seed: u64,
) -> Result<VerifyReport> {
    let mut sampler = PairSampler::new(rng_seed, a.rows());
    verify_pairs(a, p, (0..samples).map(move |_| sampler.next_pair()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// The family construction only covers `mu = t`.
    MuNotT,
    /// `s = t - lambda` must be positive.
    NonPositiveS,
    /// `k = t + lambda`, forced by the row sums of `(A1 + sI) B1 = tJ`.
    DegreeNotTPlusLambda,
    /// `v = 2k`, forced by the column sums of a blocky `B1`.
    OrderNotTwiceDegree,
    /// `k^2 = t + lambda k + mu (v - 1 - k)` from counting 2-walks out of a vertex.
    CountingIdentity,
    /// `t`, `lambda` and `mu` cannot exceed `k`.
    ExceedsDegree,
}

/// What a violated condition rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Necessary for any DSRG, or for the product equations alone.
    Forced,
    /// Necessary under the blockiness ansatz for `B1` and `C1`, which a non-blocky search might avoid.
    Blockiness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Violation {
    pub kind: ViolationKind,
    pub basis: Basis,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::MuNotT => "mu != t",
            ViolationKind::NonPositiveS => "s = t - lambda <= 0",
            ViolationKind::DegreeNotTPlusLambda => "k != t + lambda",
            ViolationKind::OrderNotTwiceDegree => "v != 2k",
            ViolationKind::CountingIdentity => "k^2 != t + lambda*k + mu*(v-1-k)",
            ViolationKind::ExceedsDegree => "t, lambda or mu exceeds k",
        };
        let basis = match self.basis {
            Basis::Forced => "forced",
            Basis::Blockiness => "under blockiness",
        };
        write!(f, "{what} ({basis})")
    }
}

/// Conditions a seed must meet for the pair search to have any chance.
pub fn precheck_family_feasibility(p: &DsrgParams) -> Vec<Violation> {
    let mut out = Vec::new();
    if !p.mu_equals_t() {
        out.push(Violation {
            kind: ViolationKind::MuNotT,
            basis: Basis::Forced,
        });
    }
    if p.s() <= 0 {
        out.push(Violation {
            kind: ViolationKind::NonPositiveS,
            basis: Basis::Forced,
        });
    }
    if p.k != p.t + p.lambda {
        out.push(Violation {
            kind: ViolationKind::DegreeNotTPlusLambda,
            basis: Basis::Forced,
        });
    }
    if p.v != 2 * p.k {
        out.push(Violation {
            kind: ViolationKind::OrderNotTwiceDegree,
            basis: Basis::Blockiness,
        });
    }
    out
}

/// Necessary conditions for a DSRG with these parameters to exist at all.
pub fn precheck_seed_feasibility(p: &DsrgParams) -> Vec<Violation> {
    let mut out = Vec::new();
    if p.t > p.k || p.lambda > p.k || p.mu > p.k {
        out.push(Violation {
            kind: ViolationKind::ExceedsDegree,
            basis: Basis::Forced,
        });
    }
    let (v, k, t, l, m) = (
        p.v as i128,
        p.k as i128,
        p.t as i128,
        p.lambda as i128,
        p.mu as i128,
    );
    if k * k != t + l * k + m * (v - 1 - k) {
        out.push(Violation {
            kind: ViolationKind::CountingIdentity,
            basis: Basis::Forced,
        });
    }
    if p.mu_equals_t() && p.s() <= 0 {
        out.push(Violation {
            kind: ViolationKind::NonPositiveS,
            basis: Basis::Forced,
        });
    }
    out
}
