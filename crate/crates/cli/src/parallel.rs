//! Multi-threaded full verification with results identical to the serial check.

use std::num::NonZeroUsize;
use std::thread;

use dsrg_core::dsrg::{AlgebraicCheck, DsrgParams, VerifyReport};
use dsrg_core::BinaryMatrix;

pub const THREADS_ENV: &str = "DSRG_THREADS";

pub fn default_threads() -> usize {
    thread::available_parallelism()
        .map(NonZeroUsize::get)
        .unwrap_or(1)
}

/// Splits the rows into `threads` consecutive chunks and merges the chunk
/// reports in row order, so witnesses and counts match `verify_algebraic`.
pub fn verify_algebraic_parallel(
    a: &BinaryMatrix,
    p: &DsrgParams,
    threads: usize,
) -> dsrg_core::Result<VerifyReport> {
    let check = AlgebraicCheck::new(a, *p)?;
    let n = check.order();
    let threads = threads.clamp(1, n);
    let mut report = check.degrees();
    if threads == 1 {
        report.merge(check.rows(0..n));
        return Ok(report);
    }
    let chunk = n.div_ceil(threads);
    let parts: Vec<VerifyReport> = thread::scope(|scope| {
        let handles: Vec<_> = (0..n)
            .step_by(chunk)
            .map(|start| {
                let check = &check;
                scope.spawn(move || check.rows(start..(start + chunk).min(n)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification worker panicked"))
            .collect()
    });
    for part in parts {
        report.merge(part);
    }
    Ok(report)
}
