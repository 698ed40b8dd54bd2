//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature, [`map`] fans out over rayon's pool. Without it,
//! or inside [`sequential`], it is a plain iterator map. Output order always
//! matches input order.

use std::cell::Cell;

thread_local! {
    static FORCE_SEQ: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with every [`map`] issued from this thread executed sequentially.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    let prev = FORCE_SEQ.with(|c| c.replace(true));
    let out = f();
    FORCE_SEQ.with(|c| c.set(prev));
    out
}

fn forced_sequential() -> bool {
    FORCE_SEQ.with(|c| c.get())
}

/// True when [`map`] would fan out from the current thread.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !forced_sequential()
}

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if forced_sequential() || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Runs `f` on a pool of `jobs` workers (`0` keeps the global default).
#[cfg(feature = "parallel")]
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    if jobs == 0 {
        return f();
    }
    if jobs == 1 {
        return sequential(f);
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_jobs<R: Send>(_jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..200).collect();
        let par = map(&xs, |x| x * x);
        let seq = sequential(|| map(&xs, |x| x * x));
        assert_eq!(par, seq);
        assert_eq!(par[199], 199 * 199);
        assert!(!sequential(is_parallel));
    }
}
