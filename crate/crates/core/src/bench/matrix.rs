use rayon::prelude::*;

use super::cases::BenchmarkCase;
use super::run::{run_benchmark, BenchReport, RunSpec};
use crate::error::Error;

/// One entry of a run matrix.
#[derive(Debug, Clone)]
pub struct Job<'a> {
    pub case: &'a BenchmarkCase,
    pub spec: RunSpec,
}

/// Runs every job on a pool of `threads` workers (all cores when `None`). Results come back
/// in job order whatever the scheduling.
pub fn run_matrix(jobs: &[Job<'_>], threads: Option<usize>) -> Result<Vec<Result<BenchReport, Error>>, Error> {
    par_map(jobs, threads, |j| run_benchmark(j.case, &j.spec).map(|(_, r)| r))
}

/// Applies `f` to every item on a pool of `threads` workers, keeping the input order.
pub fn par_map<T: Sync, R: Send>(
    items: &[T],
    threads: Option<usize>,
    f: impl Fn(&T) -> R + Sync + Send,
) -> Result<Vec<R>, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Bench(format!("thread pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}
