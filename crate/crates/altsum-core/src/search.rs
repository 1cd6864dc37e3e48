//! Seeded search for violations of the generalized inequality.
//!
//! The search minimizes `margin(a) = Σ(−1)^{s−1}f(a_s) − f(Sₘ(ã))` over
//! admissible sequences of a fixed length. Work is decomposed into
//! *units* (one restart, or one slice of candidates) that are pure
//! functions of `(expr, config, unit index)`; a sequential-prefix
//! [`driver::Accumulator`] combines unit results in index order. Any
//! driver that evaluates units — serially or speculatively in parallel —
//! and feeds them to the accumulator in order produces the identical
//! [`SearchOutcome`], which is how parallel and serial runs agree.
//!
//! Every candidate is repaired to admissibility (clamp to `[0, A]`, sort
//! nonincreasing) before evaluation, and every margin comes from
//! [`check_generalized`], so a reported violation re-verifies bit-for-bit.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::FuncExpr;
use crate::ineq::{check_generalized, AltSequence};

/// Extra absolute slack on top of the hybrid tolerance before a margin
/// counts as a *clear* violation that stops the search early.
pub const CLEAR_VIOLATION_SLACK: f64 = 1e-3;

/// Candidate generation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SearchStrategy {
    /// Independent uniform samples.
    Random,
    /// Exhaustive sweep of a lattice of admissible tuples.
    Grid,
    /// Random restarts refined by per-coordinate steps with halving.
    #[default]
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SearchConfig {
    /// Sequence length, at least 2.
    pub m: usize,
    /// Domain bound `A`; candidates live in `[0, A]^m`.
    pub bound: f64,
    /// Maximum number of candidate evaluations.
    pub budget: u64,
    pub seed: u64,
    pub strategy: SearchStrategy,
}

impl SearchConfig {
    pub fn new(m: usize) -> Self {
        SearchConfig {
            m,
            bound: 10.0,
            budget: 10_000,
            seed: 0,
            strategy: SearchStrategy::Pattern,
        }
    }

    pub fn with_seed(m: usize, seed: u64) -> Self {
        SearchConfig {
            seed,
            ..SearchConfig::new(m)
        }
    }

    pub fn validate(&self) -> Result<(), SearchConfigError> {
        if self.m < 2 {
            return Err(SearchConfigError::SequenceTooShort(self.m));
        }
        if !self.bound.is_finite() || self.bound <= 0.0 {
            return Err(SearchConfigError::BadBound(self.bound));
        }
        if self.budget < self.m as u64 {
            return Err(SearchConfigError::BudgetTooSmall {
                budget: self.budget,
                m: self.m,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SearchConfigError {
    #[error("search needs sequences of length >= 2, got {0}")]
    SequenceTooShort(usize),
    #[error("bound must be finite and positive, got {0}")]
    BadBound(f64),
    #[error("budget {budget} is smaller than the sequence length {m}")]
    BudgetTooSmall { budget: u64, m: usize },
}

/// Result of a search run. Re-running with the same configuration and
/// seed reproduces the outcome exactly.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SearchOutcome {
    pub best_seq: Option<AltSequence>,
    /// Smallest margin seen; negative beyond tolerance means violation.
    pub best_margin: f64,
    pub evaluations: u64,
    pub seed: u64,
    pub violated: bool,
}

/// `n` admissible sequences of length `m`: uniform draws in `[0, A]`
/// sorted nonincreasing, deterministic in the seed.
pub fn sample_sequences(m: usize, n: usize, bound: f64, seed: u64) -> Vec<AltSequence> {
    assert!(m >= 1, "sequences need at least one entry");
    assert!(bound > 0.0, "bound must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut values: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..=bound)).collect();
            values.sort_unstable_by(|a, b| b.partial_cmp(a).expect("samples are finite"));
            AltSequence::new(values).expect("sorted nonnegative draws are admissible")
        })
        .collect()
}

/// Serial search driver. See [`driver`] for the decomposition that
/// parallel drivers reuse.
pub fn search_violation(expr: &FuncExpr, cfg: &SearchConfig) -> SearchOutcome {
    cfg.validate().expect("invalid search configuration");
    let mut acc = driver::Accumulator::new(cfg);
    while acc.wants_more() {
        let unit = driver::run_unit(expr, cfg, acc.next_index());
        acc.push(unit);
    }
    acc.finish()
}

/// Deterministic unit decomposition shared by serial and parallel drivers.
pub mod driver {
    use super::*;
    use crate::ineq::CheckResult;

    /// Outcome of one unit of work.
    #[derive(Debug, Clone, PartialEq)]
    pub struct UnitResult {
        pub index: u64,
        pub evals: u64,
        pub best: Option<(AltSequence, CheckResult)>,
        pub clear_violation: bool,
    }

    /// Evaluation cap of one unit; caps partition the budget exactly.
    pub fn unit_cap(cfg: &SearchConfig, index: u64) -> u64 {
        let u = per_unit(cfg);
        let full = cfg.budget / u;
        if index < full {
            u
        } else {
            cfg.budget % u
        }
    }

    /// Number of scheduled units.
    pub fn max_units(cfg: &SearchConfig) -> u64 {
        let u = per_unit(cfg);
        cfg.budget.div_ceil(u)
    }

    fn per_unit(cfg: &SearchConfig) -> u64 {
        let floor = 2 * cfg.m as u64 + 2;
        (cfg.budget / 10).max(floor).min(cfg.budget).max(1)
    }

    /// Combines unit results in index order with sequential-prefix
    /// semantics: stop after the budget schedule is exhausted or a unit
    /// reports a clear violation. Ties in margin keep the lowest index.
    pub struct Accumulator {
        seed: u64,
        limit: u64,
        next: u64,
        stopped: bool,
        evals: u64,
        best: Option<(AltSequence, CheckResult)>,
    }

    impl Accumulator {
        pub fn new(cfg: &SearchConfig) -> Self {
            Accumulator {
                seed: cfg.seed,
                limit: max_units(cfg),
                next: 0,
                stopped: false,
                evals: 0,
                best: None,
            }
        }

        pub fn wants_more(&self) -> bool {
            !self.stopped && self.next < self.limit
        }

        pub fn next_index(&self) -> u64 {
            self.next
        }

        /// Consumes the unit with index `next_index()`.
        pub fn push(&mut self, unit: UnitResult) {
            assert_eq!(unit.index, self.next, "units must arrive in index order");
            self.next += 1;
            self.evals += unit.evals;
            if let Some((seq, res)) = unit.best {
                let replace = match &self.best {
                    None => true,
                    Some((_, cur)) => res.margin < cur.margin,
                };
                if replace {
                    self.best = Some((seq, res));
                }
            }
            if unit.clear_violation {
                self.stopped = true;
            }
        }

        pub fn finish(self) -> SearchOutcome {
            match self.best {
                Some((seq, res)) => SearchOutcome {
                    violated: res.margin < -res.tol,
                    best_seq: Some(seq),
                    best_margin: res.margin,
                    evaluations: self.evals,
                    seed: self.seed,
                },
                None => SearchOutcome {
                    best_seq: None,
                    best_margin: f64::INFINITY,
                    evaluations: self.evals,
                    seed: self.seed,
                    violated: false,
                },
            }
        }
    }

    /// Runs one unit: a pure function of `(expr, cfg, index)`.
    pub fn run_unit(expr: &FuncExpr, cfg: &SearchConfig, index: u64) -> UnitResult {
        let cap = unit_cap(cfg, index);
        let mut state = UnitState {
            index,
            cap,
            evals: 0,
            best: None,
            clear: false,
        };
        match cfg.strategy {
            SearchStrategy::Pattern => pattern_unit(expr, cfg, index, &mut state),
            SearchStrategy::Random => random_unit(expr, cfg, index, &mut state),
            SearchStrategy::Grid => grid_unit(expr, cfg, index, &mut state),
        }
        UnitResult {
            index: state.index,
            evals: state.evals,
            best: state.best,
            clear_violation: state.clear,
        }
    }

    struct UnitState {
        index: u64,
        cap: u64,
        evals: u64,
        best: Option<(AltSequence, CheckResult)>,
        clear: bool,
    }

    impl UnitState {
        fn exhausted(&self) -> bool {
            self.evals >= self.cap || self.clear
        }

        /// Repairs and evaluates one candidate, counting it against the
        /// cap. Evaluation failures reject the candidate but still count.
        fn try_candidate(
            &mut self,
            expr: &FuncExpr,
            values: Vec<f64>,
            bound: f64,
        ) -> Option<(AltSequence, CheckResult)> {
            debug_assert!(!self.exhausted());
            self.evals += 1;
            let seq = repair(values, bound)?;
            let res = check_generalized(expr, &seq).ok()?;
            let replace = match &self.best {
                None => true,
                Some((_, cur)) => res.margin < cur.margin,
            };
            if replace {
                self.best = Some((seq.clone(), res));
            }
            if res.margin < -(res.tol + CLEAR_VIOLATION_SLACK) {
                self.clear = true;
            }
            Some((seq, res))
        }
    }

    /// Feasibility repair: clamp into `[0, A]` and sort nonincreasing.
    /// Repair precedes evaluation, so every evaluated candidate is
    /// admissible.
    fn repair(mut values: Vec<f64>, bound: f64) -> Option<AltSequence> {
        for v in &mut values {
            if !v.is_finite() {
                return None;
            }
            *v = v.clamp(0.0, bound);
        }
        values.sort_unstable_by(|a, b| b.partial_cmp(a).expect("values are finite"));
        AltSequence::new(values).ok()
    }

    /// Per-unit random stream: ChaCha streams keyed by unit index keep
    /// units independent of one another.
    fn unit_rng(seed: u64, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index + 1);
        rng
    }

    fn uniform_point(rng: &mut ChaCha8Rng, m: usize, bound: f64) -> Vec<f64> {
        (0..m).map(|_| rng.random_range(0.0..=bound)).collect()
    }

    /// One random restart refined by coordinate steps with halving:
    /// initial step `A/8`, halved after any sweep without improvement,
    /// restart ends below `10⁻⁶·A` or at the unit cap.
    fn pattern_unit(expr: &FuncExpr, cfg: &SearchConfig, index: u64, state: &mut UnitState) {
        let mut rng = unit_rng(cfg.seed, index);
        let start = uniform_point(&mut rng, cfg.m, cfg.bound);
        if state.exhausted() {
            return;
        }
        let (mut center, mut center_margin) = match state.try_candidate(expr, start, cfg.bound) {
            Some((seq, res)) => (seq.values().to_vec(), res.margin),
            None => return,
        };
        let mut step = cfg.bound / 8.0;
        let min_step = 1e-6 * cfg.bound;
        while step >= min_step && !state.exhausted() {
            let mut improved = false;
            'sweep: for k in 0..cfg.m {
                for dir in [1.0, -1.0] {
                    if state.exhausted() {
                        break 'sweep;
                    }
                    let mut cand = center.clone();
                    cand[k] += dir * step;
                    if let Some((seq, res)) = state.try_candidate(expr, cand, cfg.bound) {
                        if res.margin < center_margin {
                            center = seq.values().to_vec();
                            center_margin = res.margin;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
    }

    /// A slice of independent uniform samples.
    fn random_unit(expr: &FuncExpr, cfg: &SearchConfig, index: u64, state: &mut UnitState) {
        let mut rng = unit_rng(cfg.seed, index);
        while !state.exhausted() {
            let cand = uniform_point(&mut rng, cfg.m, cfg.bound);
            state.try_candidate(expr, cand, cfg.bound);
        }
    }

    /// A slice of the lattice of nonincreasing tuples over a uniform
    /// axis. The axis is the densest one whose full lattice fits the
    /// budget.
    fn grid_unit(expr: &FuncExpr, cfg: &SearchConfig, index: u64, state: &mut UnitState) {
        let axis_len = grid_axis_len(cfg);
        let skip = index * per_unit(cfg);
        let mut lattice = LatticeIter::new(axis_len, cfg.m);
        for _ in 0..skip {
            if lattice.next_tuple().is_none() {
                return;
            }
        }
        while !state.exhausted() {
            let Some(tuple) = lattice.next_tuple() else {
                return;
            };
            let values: Vec<f64> = tuple
                .iter()
                .map(|&i| cfg.bound * i as f64 / (axis_len - 1) as f64)
                .collect();
            state.try_candidate(expr, values, cfg.bound);
        }
    }

    /// Largest axis length whose nonincreasing-tuple count fits the
    /// budget (at least 2).
    fn grid_axis_len(cfg: &SearchConfig) -> u64 {
        let mut k = 2u64;
        while tuple_count(k + 1, cfg.m as u64).is_some_and(|c| c <= cfg.budget) {
            k += 1;
        }
        k
    }

    /// Number of nonincreasing m-tuples over k values: C(k+m−1, m),
    /// None on overflow.
    fn tuple_count(k: u64, m: u64) -> Option<u64> {
        let mut acc: u64 = 1;
        for i in 0..m {
            acc = acc.checked_mul(k + i)?;
            acc /= i + 1;
        }
        Some(acc)
    }

    /// Iterates nonincreasing index tuples in descending lexicographic
    /// order, starting from the all-max tuple.
    struct LatticeIter {
        current: Option<Vec<u64>>,
    }

    impl LatticeIter {
        fn new(axis_len: u64, m: usize) -> Self {
            LatticeIter {
                current: Some(alloc::vec![axis_len - 1; m]),
            }
        }

        fn next_tuple(&mut self) -> Option<Vec<u64>> {
            let out = self.current.clone()?;
            let mut next = out.clone();
            // decrement the rightmost position that can still drop,
            // resetting everything after it to the new ceiling
            let mut pos = next.len();
            loop {
                if pos == 0 {
                    self.current = None;
                    break;
                }
                pos -= 1;
                if next[pos] > 0 {
                    next[pos] -= 1;
                    let ceil = next[pos];
                    for v in next.iter_mut().skip(pos + 1) {
                        *v = ceil;
                    }
                    self.current = Some(next);
                    break;
                }
            }
            Some(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::ineq::check_generalized;

    #[test]
    fn sampled_sequences_are_admissible_and_deterministic() {
        let a = sample_sequences(3, 2, 10.0, 42);
        let b = sample_sequences(3, 2, 10.0, 42);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        for seq in &a {
            assert_eq!(seq.len(), 3);
            assert!(seq.values().iter().all(|&v| (0.0..=10.0).contains(&v)));
            assert!(AltSequence::new(seq.values().to_vec()).is_ok());
        }
        assert_ne!(a, sample_sequences(3, 2, 10.0, 43));
        let single = sample_sequences(1, 1, 5.0, 0);
        assert_eq!(single[0].len(), 1);
    }

    #[test]
    fn exp_pair_search_finds_violation_and_reverifies() {
        let cfg = SearchConfig::with_seed(2, 7);
        let out = search_violation(&FuncExpr::Exp, &cfg);
        assert!(out.violated, "margin = {}", out.best_margin);
        let seq = out.best_seq.as_ref().unwrap();
        // soundness: the reported margin re-verifies bit-for-bit
        let again = check_generalized(&FuncExpr::Exp, seq).unwrap();
        assert_eq!(again.margin, out.best_margin);
        assert!(out.evaluations <= cfg.budget);
    }

    #[test]
    fn power_search_reports_no_violation() {
        let out = search_violation(&FuncExpr::Power(2.0), &SearchConfig::with_seed(4, 11));
        assert!(!out.violated, "margin = {}", out.best_margin);
    }

    #[test]
    fn floor_even_length_search_finds_violation() {
        let out = search_violation(&FuncExpr::Floor, &SearchConfig::with_seed(4, 3));
        assert!(out.violated, "margin = {}", out.best_margin);
    }

    #[test]
    fn search_is_deterministic() {
        let e = parse("exp()").unwrap();
        let cfg = SearchConfig::with_seed(2, 7);
        assert_eq!(search_violation(&e, &cfg), search_violation(&e, &cfg));
    }

    #[test]
    fn all_strategies_find_the_exp_violation() {
        for strategy in [
            SearchStrategy::Pattern,
            SearchStrategy::Random,
            SearchStrategy::Grid,
        ] {
            let cfg = SearchConfig {
                strategy,
                ..SearchConfig::with_seed(2, 5)
            };
            let out = search_violation(&FuncExpr::Exp, &cfg);
            assert!(out.violated, "{strategy:?} missed the violation");
        }
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(2).validate().is_ok());
        assert!(SearchConfig::new(1).validate().is_err());
        assert!(SearchConfig {
            budget: 1,
            ..SearchConfig::new(2)
        }
        .validate()
        .is_err());
        assert!(SearchConfig {
            bound: 0.0,
            ..SearchConfig::new(2)
        }
        .validate()
        .is_err());
    }

    #[test]
    fn budget_partition_is_exact() {
        let cfg = SearchConfig {
            budget: 10_007,
            ..SearchConfig::new(3)
        };
        let total: u64 = (0..driver::max_units(&cfg))
            .map(|i| driver::unit_cap(&cfg, i))
            .sum();
        assert_eq!(total, cfg.budget);
    }
}
