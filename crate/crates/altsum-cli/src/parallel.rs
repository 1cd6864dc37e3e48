//! Parallel search driver.
//!
//! Units are pure functions of `(expr, cfg, index)`, so they can be
//! evaluated speculatively across threads; the shared accumulator then
//! consumes them in index order with the same sequential-prefix
//! semantics as the serial driver. Results past the accumulator's stop
//! point are discarded, which makes the outcome identical to
//! [`altsum_core::search_violation`] for any thread count.

use altsum_core::search::driver;
use altsum_core::{FuncExpr, SearchConfig, SearchOutcome};
use rayon::prelude::*;

pub fn search_violation_parallel(expr: &FuncExpr, cfg: &SearchConfig) -> SearchOutcome {
    cfg.validate().expect("invalid search configuration");
    let limit = driver::max_units(cfg);
    let chunk = (rayon::current_num_threads().max(1) as u64) * 2;
    let mut acc = driver::Accumulator::new(cfg);
    while acc.wants_more() {
        let start = acc.next_index();
        let end = (start + chunk).min(limit);
        let units: Vec<driver::UnitResult> = (start..end)
            .into_par_iter()
            .map(|i| driver::run_unit(expr, cfg, i))
            .collect();
        for unit in units {
            if !acc.wants_more() {
                break;
            }
            acc.push(unit);
        }
    }
    acc.finish()
}
