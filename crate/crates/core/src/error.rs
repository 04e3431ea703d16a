use core::fmt;

use crate::dsrg::Violation;

/// Which part of the seed contract a `(A1, B1, C1)` triple broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeedClause {
    /// `A1` itself is not a DSRG with the declared parameters.
    SeedAdjacency,
    /// One of the six product equations, numbered 1..=6:
    /// `B1C1`, `B1P1`, `P1C1`, `(A1+sI)B1`, `C1(A1+sI)`, `C1B1+sP1`, each equal to `tJ`.
    Equation(u8),
    /// One of the four sum conditions, numbered 1..=4:
    /// `B1` rows `2t`, `B1` columns `k`, `C1` rows `k`, `C1` columns `2t`.
    SumCondition(u8),
    /// A row of `B1` is not one all-ones half plus one all-zeros half.
    BlockinessB,
    /// A column of `C1` does not have exactly `t` ones in each half.
    BlockinessC,
}

impl fmt::Display for SeedClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedClause::SeedAdjacency => write!(f, "seed adjacency matrix is not a DSRG"),
            SeedClause::Equation(1) => write!(f, "equation 1 (B1*C1 = tJ)"),
            SeedClause::Equation(2) => write!(f, "equation 2 (B1*P1 = tJ)"),
            SeedClause::Equation(3) => write!(f, "equation 3 (P1*C1 = tJ)"),
            SeedClause::Equation(4) => write!(f, "equation 4 ((A1+sI)*B1 = tJ)"),
            SeedClause::Equation(5) => write!(f, "equation 5 (C1*(A1+sI) = tJ)"),
            SeedClause::Equation(6) => write!(f, "equation 6 (C1*B1 + s*P1 = tJ)"),
            SeedClause::Equation(e) => write!(f, "equation {e}"),
            SeedClause::SumCondition(1) => write!(f, "sum condition 1 (B1 row sums 2t)"),
            SeedClause::SumCondition(2) => write!(f, "sum condition 2 (B1 column sums k)"),
            SeedClause::SumCondition(3) => write!(f, "sum condition 3 (C1 row sums k)"),
            SeedClause::SumCondition(4) => write!(f, "sum condition 4 (C1 column sums 2t)"),
            SeedClause::SumCondition(c) => write!(f, "sum condition {c}"),
            SeedClause::BlockinessB => write!(f, "blockiness of B1 (row halves)"),
            SeedClause::BlockinessC => write!(f, "blockiness of C1 (column halves)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A zero dimension, a non-square input or mismatched operand shapes.
    Dimension {
        context: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// The requested matrix would exceed the configured bit capacity.
    Capacity {
        context: &'static str,
        bits: u128,
        limit: u64,
    },
    /// Row truncation needs the row count to be divisible by the factor.
    Divisibility {
        rows: usize,
        factor: usize,
    },
    Index {
        index: usize,
        len: usize,
    },
    /// Family terms are indexed from 1.
    FamilyIndex(usize),
    /// Block layout cells overlap, leave gaps, or disagree with their spans.
    Layout(&'static str),
    /// Adjacency matrices must have a zero diagonal.
    Loop {
        vertex: usize,
    },
    /// The operation needs parameters it does not support (for example `mu != t`).
    UnsupportedParameters(&'static str),
    SeedContract(SeedClause),
    /// The feasibility precheck rejected the parameters.
    Precheck(alloc::vec::Vec<Violation>),
    /// Seed search is limited to small orders.
    OrderAboveCeiling {
        v: usize,
        ceiling: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension {
                context,
                expected,
                found,
            } => write!(
                f,
                "{context}: dimension mismatch, expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::Capacity {
                context,
                bits,
                limit,
            } => {
                write!(
                    f,
                    "{context}: {bits} bits exceeds capacity limit of {limit} bits"
                )
            }
            Error::Divisibility { rows, factor } => {
                write!(f, "row count {rows} is not divisible by {factor}")
            }
            Error::Index { index, len } => write!(f, "index {index} out of range for length {len}"),
            Error::FamilyIndex(n) => write!(f, "family index must be at least 1, got {n}"),
            Error::Layout(msg) => write!(f, "invalid block layout: {msg}"),
            Error::Loop { vertex } => write!(f, "adjacency matrix has a loop at vertex {vertex}"),
            Error::UnsupportedParameters(msg) => write!(f, "unsupported parameters: {msg}"),
            Error::SeedContract(clause) => write!(f, "seed contract violated: {clause}"),
            Error::Precheck(violations) => {
                write!(f, "feasibility precheck failed:")?;
                for v in violations {
                    write!(f, " [{v}]")?;
                }
                Ok(())
            }
            Error::OrderAboveCeiling { v, ceiling } => {
                write!(f, "order {v} is above the seed-search ceiling {ceiling}")
            }
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

impl core::error::Error for Error {}
