//! Thread-pool sizing from `SOFICLAB_THREADS`.

use std::sync::OnceLock;

use rayon::ThreadPool;

pub const THREADS_ENV: &str = "SOFICLAB_THREADS";

/// Shared pool capped by `SOFICLAB_THREADS` (unset or 0 means rayon's default).
pub fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
    })
}
