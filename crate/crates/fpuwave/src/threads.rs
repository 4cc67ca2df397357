//! Scoped-thread [`Executor`] with a shared job counter.

use fpu_core::Executor;
use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "FPUWAVE_WORKERS";

#[derive(Clone, Copy, Debug)]
pub struct Threads {
    workers: usize,
}

impl Threads {
    pub fn new(workers: usize) -> Threads {
        Threads { workers: workers.max(1) }
    }

    /// Worker count from the environment, else the available parallelism.
    pub fn from_env() -> Threads {
        let n = std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, NonZeroUsize::get));
        Threads::new(n)
    }

    pub fn workers(&self) -> usize {
        self.workers
    }
}

impl Executor for Threads {
    fn map(&self, n: usize, f: &(dyn Fn(usize) -> Vec<f64> + Sync)) -> Vec<Vec<f64>> {
        let workers = self.workers.min(n);
        if workers <= 1 {
            return (0..n).map(f).collect();
        }
        let next = AtomicUsize::new(0);
        let out: Mutex<Vec<Option<Vec<f64>>>> = Mutex::new(vec![None; n]);
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= n {
                        break;
                    }
                    let v = f(i);
                    out.lock().expect("no worker panicked")[i] = Some(v);
                });
            }
        });
        out.into_inner().expect("no worker panicked").into_iter().map(|v| v.expect("every job ran")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kept() {
        let t = Threads::new(4);
        let v = t.map(100, &|i| vec![i as f64, (i * i) as f64]);
        assert_eq!(v.len(), 100);
        for (i, r) in v.iter().enumerate() {
            assert_eq!(r, &vec![i as f64, (i * i) as f64]);
        }
        assert!(t.map(0, &|_| vec![]).is_empty());
    }
}
