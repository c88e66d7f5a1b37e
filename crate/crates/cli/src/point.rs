//! One fibre computation, through the cache when one is given.

use tautring::fiber::{compute_fiber, FiberDimensionRecord, FiberOptions, HirzebruchFamily};
use tautring::model::signature_p2;
use tautring::Rational;

use crate::cache::{self, Cache, CachedFiber, Lookup};
use crate::error::Result;

/// The record for `(p1, p2)`; cached results replay their original runtime so
/// that repeated runs are byte-identical.
pub fn run_point(
    family: &HirzebruchFamily,
    p1: &Rational,
    p2: Option<&Rational>,
    opts: &FiberOptions,
    cache: Option<&Cache>,
    warn: &(dyn Fn(&str) + Sync),
) -> Result<FiberDimensionRecord> {
    let Some(cache) = cache else {
        return Ok(compute_fiber(family, p1, p2, opts)?.record);
    };
    let ideal = family.specialize(p1, p2)?;
    let key = cache::key(&ideal, opts);
    let lock = cache.lock(&key);
    let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
    match cache.load(&key) {
        Lookup::Hit(hit) => {
            return Ok(FiberDimensionRecord {
                p1: p1.clone(),
                p2: p2.cloned().unwrap_or_else(|| signature_p2(p1)),
                mode: family.mode(),
                k_max: family.k_max(),
                p4_mode: family.p4_mode(),
                field: hit.field,
                dimension: hit.dimension,
                runtime_ms: hit.runtime_ms,
            })
        }
        Lookup::Corrupt(why) => warn(&format!("cache entry {key} is corrupt ({why}); recomputing")),
        Lookup::Miss => {}
    }
    let out = compute_fiber(family, p1, p2, opts)?;
    // A prime-field fallback answers a different question than the one keyed.
    if out.record.field == opts.field {
        cache.store(
            &key,
            &CachedFiber {
                dimension: out.record.dimension,
                field: out.record.field,
                runtime_ms: out.record.runtime_ms,
                evidence: out.evidence.canonical_text(),
            },
        )?;
    }
    Ok(out.record)
}
