//! Range-partitioned exponent search on worker threads.

use loopkex_core::attack::{scan_range, AttackResult};
use loopkex_core::general_extension::ExtError;
use loopkex_core::PublicParams;

/// Same result as [`loopkex_core::attack::recover_exponent`], with `1..=cap`
/// split into `jobs` contiguous ranges. Each worker jumps to the start of
/// its range by square-and-multiply; the smallest hit wins.
pub fn recover_exponent_parallel(
    params: &PublicParams,
    target: usize,
    cap: u64,
    jobs: usize,
) -> Result<AttackResult, ExtError> {
    let jobs = jobs.max(1) as u64;
    let chunk = cap.div_ceil(jobs).max(1);
    let ranges: Vec<(u64, u64)> = (0..jobs)
        .map(|k| (1 + k * chunk, (1 + (k + 1) * chunk).min(cap + 1)))
        .filter(|(s, e)| s < e)
        .collect();
    let hits = std::thread::scope(|scope| {
        let workers: Vec<_> = ranges
            .iter()
            .map(|&(s, e)| scope.spawn(move || scan_range(params, target, s, e)))
            .collect();
        workers
            .into_iter()
            .map(|w| w.join().expect("scan worker panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let exponent = hits.into_iter().flatten().min();
    Ok(AttackResult {
        found: exponent.is_some(),
        exponent,
        iterations: exponent.unwrap_or(cap),
        elapsed: None,
    })
}
