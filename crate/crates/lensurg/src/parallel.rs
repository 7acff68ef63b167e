//! Rayon fan-out of the supporter scan. Chunks are merged in box order, so
//! results never depend on the thread count.

use lensurg_core::plumbing::{PlumbedDinv, PlumbingError, PlumbingGraph, ScanOptions, Supporter, SupporterScan};
use rayon::prelude::*;

const CHUNK: u64 = 1 << 12;

/// Every maximising-path supporter, in box order.
pub fn supporters(scan: &SupporterScan) -> Result<Vec<Supporter>, PlumbingError> {
    let total = scan.total();
    let chunks = total.div_ceil(CHUNK);
    let parts: Vec<Vec<Supporter>> = (0..chunks)
        .into_par_iter()
        .map(|c| scan.scan_range(c * CHUNK, ((c + 1) * CHUNK).min(total)))
        .collect::<Result<_, _>>()?;
    Ok(parts.into_iter().flatten().collect())
}

pub fn dinv_plumbed_par(g: &PlumbingGraph, options: ScanOptions) -> Result<PlumbedDinv, PlumbingError> {
    let scan = SupporterScan::new(g, options)?;
    let sup = supporters(&scan)?;
    scan.assemble(&sup)
}

/// Runs `f` on a pool of `jobs` threads; `0` means one per core.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
