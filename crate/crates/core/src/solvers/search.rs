//! Shared search plumbing: the guess budget, cancellation, and rank-ordered
//! parallel reduction over independent tasks.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub(crate) struct Budget {
    count: AtomicU64,
    limit: u64,
    cancel: Option<Arc<AtomicBool>>,
}

impl Budget {
    pub(crate) fn new(limit: u64, cancel: Option<Arc<AtomicBool>>) -> Self {
        Budget {
            count: AtomicU64::new(0),
            limit,
            cancel,
        }
    }

    /// Records one explored guess.
    pub(crate) fn tick(&self) -> Result<()> {
        let c = self.count.fetch_add(1, Ordering::Relaxed) + 1;
        if c > self.limit {
            return Err(Error::BudgetExceeded { limit: self.limit });
        }
        self.check_cancel()
    }

    pub(crate) fn check_cancel(&self) -> Result<()> {
        match &self.cancel {
            Some(flag) if flag.load(Ordering::Relaxed) => Err(Error::Cancelled),
            _ => Ok(()),
        }
    }

    pub(crate) fn explored(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

/// Best candidate seen so far; the first of equal keys is kept.
pub(crate) struct Best<T> {
    pub(crate) key: i64,
    pub(crate) value: Option<T>,
}

impl<T> Best<T> {
    /// Only keys strictly below `bound` are accepted.
    pub(crate) fn below(bound: i64) -> Self {
        Best {
            key: bound,
            value: None,
        }
    }

    /// True when nothing with key `>= lb` can improve on the incumbent.
    pub(crate) fn dominated(&self, lb: i64) -> bool {
        lb >= self.key
    }

    pub(crate) fn offer(&mut self, key: i64, value: impl FnOnce() -> T) {
        if key < self.key {
            self.key = key;
            self.value = Some(value());
        }
    }

    pub(crate) fn into_option(self) -> Option<(i64, T)> {
        self.value.map(|v| (self.key, v))
    }
}

/// Tasks after the first run in waves of this many; each wave only looks
/// for keys strictly below the best of the earlier waves.
const WAVE: usize = 16;

/// Runs tasks `0..n_tasks` and keeps the minimum key, ties going to the
/// lowest task rank. A task receives a bound and should only report keys
/// strictly below it. Wave boundaries are fixed, so the outcome (and the
/// work done) does not depend on `workers`.
pub(crate) fn run_tasks<T, F>(n_tasks: usize, workers: usize, task: F) -> Result<Option<(i64, T)>>
where
    T: Send,
    F: Fn(usize, i64) -> Result<Option<(i64, T)>> + Sync + Send,
{
    let pool = if workers > 1 && n_tasks > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?,
        )
    } else {
        None
    };
    let mut best: Option<(i64, T)> = None;
    let mut start = 0;
    while start < n_tasks {
        let end = if start == 0 { 1 } else { (start + WAVE).min(n_tasks) };
        let bound = best.as_ref().map_or(i64::MAX, |(k, _)| *k);
        let outcomes: Vec<Result<Option<(i64, T)>>> = match &pool {
            Some(pool) => pool.install(|| (start..end).into_par_iter().map(|t| task(t, bound)).collect()),
            None => (start..end).map(|t| task(t, bound)).collect(),
        };
        for r in outcomes {
            if let Some((key, value)) = r? {
                if key < bound && best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, value));
                }
            }
        }
        start = end;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_rank_wins_ties() {
        for workers in [1, 2, 8] {
            let r = run_tasks(40, workers, |t, _| Ok(Some((((t + 1) % 3) as i64, t)))).unwrap();
            assert_eq!(r, Some((0, 2)));
        }
    }

    #[test]
    fn budget_trips_past_limit() {
        let b = Budget::new(2, None);
        assert!(b.tick().is_ok());
        assert!(b.tick().is_ok());
        assert_eq!(b.tick(), Err(Error::BudgetExceeded { limit: 2 }));
    }

    #[test]
    fn cancellation_is_observed() {
        let flag = Arc::new(AtomicBool::new(true));
        let b = Budget::new(10, Some(flag));
        assert_eq!(b.tick(), Err(Error::Cancelled));
    }
}
