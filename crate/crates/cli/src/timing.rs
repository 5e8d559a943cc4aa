//! Wall-clock measurement around solver calls. Instance generation and file
//! I/O happen outside these wrappers.

use std::time::Instant;

use latred_core::solvers::SolveReport;

/// Runs `f`, returning its result and the elapsed seconds.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

/// Runs a solver closure and stamps the elapsed wall time into its report.
pub fn timed_solve(f: impl FnOnce() -> anyhow::Result<SolveReport>) -> anyhow::Result<SolveReport> {
    let (rep, secs) = timed(f);
    let mut rep = rep?;
    rep.wall_seconds = secs;
    Ok(rep)
}
