//! Admissible sequences and the alternating-sum inequality checks.
//!
//! An admissible sequence satisfies `a₁ ≥ a₂ ≥ … ≥ a_m ≥ 0`. For a
//! function `f` the checks compare
//!
//! ```text
//! lhs = f(Σ (−1)^{s−1} a_s)      rhs = Σ (−1)^{s−1} f(a_s)
//! ```
//!
//! and report `holds` when `rhs − lhs ≥ −tol` under the shared hybrid
//! tolerance. [`check_generalized`] never pre-screens the function: a
//! violated result for a non-qualifying function is the falsification
//! workflow working as intended.

use alloc::vec::Vec;

use crate::expr::{EvalError, FuncExpr};
use crate::tol::hybrid_tol;

/// A finite nonincreasing nonnegative sequence, validated at construction.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct AltSequence(Vec<f64>);

/// Admissibility failures. Validation reports the first offending index;
/// sequences are never reordered on the caller's behalf.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SequenceError {
    #[error("sequence is empty")]
    Empty,
    #[error("entries {index} and {} are out of order", index + 1)]
    OrderViolation { index: usize },
    #[error("entry {index} is negative")]
    NegativeEntry { index: usize },
    #[error("entry {index} is not finite")]
    NonFinite { index: usize },
}

impl AltSequence {
    /// Validates `a₁ ≥ … ≥ a_m ≥ 0` and wraps the values unchanged.
    ///
    /// Ties and zero entries are admissible: the condition is the
    /// displayed non-strict one, even where classical statements say
    /// "positive numbers".
    pub fn new(values: Vec<f64>) -> Result<Self, SequenceError> {
        if values.is_empty() {
            return Err(SequenceError::Empty);
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(SequenceError::NonFinite { index: i });
            }
        }
        for i in 0..values.len() - 1 {
            if values[i] < values[i + 1] {
                return Err(SequenceError::OrderViolation { index: i });
            }
        }
        let last = values.len() - 1;
        if values[last] < 0.0 {
            return Err(SequenceError::NegativeEntry { index: last });
        }
        Ok(AltSequence(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest entry `a₁`.
    pub fn head(&self) -> f64 {
        self.0[0]
    }
}

/// Alternating fold shared by [`alt_sum`] and [`alt_f_sum`] so that the
/// identity function yields an exactly zero margin.
fn alt_fold<E>(values: &[f64], mut f: impl FnMut(usize, f64) -> Result<f64, E>) -> Result<f64, E> {
    let mut acc = 0.0;
    for (i, &a) in values.iter().enumerate() {
        let term = f(i, a)?;
        acc = if i % 2 == 0 { acc + term } else { acc - term };
    }
    Ok(acc)
}

/// Alternating sum `Σ (−1)^{s−1} a_s`; always lies in `[0, a₁]`.
pub fn alt_sum(seq: &AltSequence) -> f64 {
    match alt_fold::<core::convert::Infallible>(seq.values(), |_, a| Ok(a)) {
        Ok(v) => v,
        Err(e) => match e {},
    }
}

/// Evaluation failure at a specific sequence entry.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("evaluation failed at entry {index}: {source}")]
pub struct IndexedEvalError {
    pub index: usize,
    pub source: EvalError,
}

/// Alternating sum of function values `Σ (−1)^{s−1} f(a_s)`.
pub fn alt_f_sum(expr: &FuncExpr, seq: &AltSequence) -> Result<f64, IndexedEvalError> {
    alt_fold(seq.values(), |i, a| {
        expr.eval_at(a)
            .map_err(|source| IndexedEvalError { index: i, source })
    })
}

/// Which inequality a [`CheckResult`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CheckKind {
    Generalized,
    Weinberger,
    Szego,
}

/// Outcome of one inequality check.
///
/// `margin = rhs − lhs`; the verdict is `holds ⇔ margin ≥ −tol`. The raw
/// margin is kept so callers can re-threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CheckResult {
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tol: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CheckError {
    #[error("exponent must be > 1, got {0}")]
    InvalidExponent(f64),
    #[error("sequence length must be odd, got {0}")]
    EvenLength(usize),
    #[error("left side: {0}")]
    LhsEval(EvalError),
    #[error("right side: {0}")]
    RhsEval(#[from] IndexedEvalError),
}

fn check(expr: &FuncExpr, seq: &AltSequence, kind: CheckKind) -> Result<CheckResult, CheckError> {
    let s = alt_sum(seq);
    let lhs = expr.eval_at(s).map_err(CheckError::LhsEval)?;
    let rhs = alt_f_sum(expr, seq)?;
    let margin = rhs - lhs;
    let tol = hybrid_tol(&[lhs, rhs]);
    Ok(CheckResult {
        kind,
        lhs,
        rhs,
        margin,
        tol,
        holds: margin >= -tol,
    })
}

/// Checks `f(Sₘ(ã)) ≤ Sₘ(f̃(a))` for any length. No hypothesis check is
/// performed on `expr`; callers decide whether it qualifies.
pub fn check_generalized(expr: &FuncExpr, seq: &AltSequence) -> Result<CheckResult, CheckError> {
    check(expr, seq, CheckKind::Generalized)
}

/// The power-function check with `f(x) = x^r`, `r > 1`.
pub fn check_weinberger(r: f64, seq: &AltSequence) -> Result<CheckResult, CheckError> {
    if !r.is_finite() || r <= 1.0 {
        return Err(CheckError::InvalidExponent(r));
    }
    check(&FuncExpr::Power(r), seq, CheckKind::Weinberger)
}

/// The odd-length check for convex functions.
///
/// The classical statement assumes strictly decreasing entries; ties are
/// permitted here and the inequality is still tested.
pub fn check_szego(expr: &FuncExpr, seq: &AltSequence) -> Result<CheckResult, CheckError> {
    if seq.len().is_multiple_of(2) {
        return Err(CheckError::EvenLength(seq.len()));
    }
    check(expr, seq, CheckKind::Szego)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use alloc::vec;

    fn seq(values: &[f64]) -> AltSequence {
        AltSequence::new(values.to_vec()).unwrap()
    }

    #[test]
    fn validation_reports_first_offense() {
        assert_eq!(seq(&[3.0, 2.0, 1.0]).values(), &[3.0, 2.0, 1.0]);
        assert_eq!(
            AltSequence::new(vec![1.0, 2.0]),
            Err(SequenceError::OrderViolation { index: 0 })
        );
        assert_eq!(
            AltSequence::new(vec![1.0, -0.5]),
            Err(SequenceError::NegativeEntry { index: 1 })
        );
        assert_eq!(AltSequence::new(vec![]), Err(SequenceError::Empty));
        assert_eq!(
            AltSequence::new(vec![1.0, f64::NAN]),
            Err(SequenceError::NonFinite { index: 1 })
        );
        // ties are admissible
        assert!(AltSequence::new(vec![2.0, 2.0, 0.0]).is_ok());
    }

    #[test]
    fn alt_sum_examples() {
        assert_eq!(alt_sum(&seq(&[5.0, 3.0, 2.0])), 4.0);
        // direct arithmetic oracle for the four-term example
        let oracle = 4.6 - 3.1 + 2.8 - 1.2;
        assert_eq!(alt_sum(&seq(&[4.6, 3.1, 2.8, 1.2])), oracle);
        assert!((oracle - 3.1).abs() < 1e-12);
        assert_eq!(alt_sum(&seq(&[7.25])), 7.25);
    }

    #[test]
    fn alt_f_sum_examples() {
        // 9 - 4 + 1
        assert_eq!(
            alt_f_sum(&FuncExpr::Power(2.0), &seq(&[3.0, 2.0, 1.0])).unwrap(),
            6.0
        );
        // 4 - 3 + 2 - 1
        assert_eq!(
            alt_f_sum(&FuncExpr::Floor, &seq(&[4.6, 3.1, 2.8, 1.2])).unwrap(),
            2.0
        );
        let s = seq(&[6.5, 3.25, 1.125]);
        assert_eq!(alt_f_sum(&FuncExpr::Identity, &s).unwrap(), alt_sum(&s));
    }

    #[test]
    fn alt_f_sum_reports_offending_index() {
        // exp overflows at the second entry
        let err = alt_f_sum(&FuncExpr::Exp, &seq(&[1e6, 1e5])).unwrap_err();
        assert_eq!(err.index, 0);
    }

    #[test]
    fn generalized_check_replicates_exp_counterexample() {
        let r = check_generalized(&FuncExpr::Exp, &seq(&[1.0, 0.1])).unwrap();
        assert!((r.lhs - 2.4596).abs() < 1e-3, "lhs = {}", r.lhs);
        assert!((r.rhs - 1.61311).abs() < 1e-3, "rhs = {}", r.rhs);
        assert!(!r.holds);
    }

    #[test]
    fn generalized_check_floor_even_failure() {
        let r = check_generalized(&FuncExpr::Floor, &seq(&[4.6, 3.1, 2.8, 1.2])).unwrap();
        assert_eq!(r.lhs, 3.0);
        assert_eq!(r.rhs, 2.0);
        assert_eq!(r.margin, -1.0);
        assert!(!r.holds);
    }

    #[test]
    fn generalized_check_xlogx_cancellation() {
        let r = check_generalized(&FuncExpr::XLogX, &seq(&[1.0, 1.0])).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn identity_margin_is_exactly_zero() {
        for values in [&[5.0, 3.0, 2.0][..], &[4.6, 3.1, 2.8, 1.2], &[0.7]] {
            let r = check_generalized(&FuncExpr::Identity, &seq(values)).unwrap();
            assert_eq!(r.margin, 0.0);
        }
    }

    #[test]
    fn weinberger_examples() {
        let r = check_weinberger(2.0, &seq(&[3.0, 2.0, 1.0])).unwrap();
        assert_eq!((r.lhs, r.rhs), (4.0, 6.0));
        assert!(r.holds);
        assert_eq!(r.kind, CheckKind::Weinberger);

        let r = check_weinberger(3.5, &seq(&[1.0, 1.0])).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.holds);

        assert_eq!(
            check_weinberger(1.0, &seq(&[1.0])),
            Err(CheckError::InvalidExponent(1.0))
        );
    }

    #[test]
    fn szego_examples() {
        let r = check_szego(&FuncExpr::Exp, &seq(&[1.0, 0.5, 0.2])).unwrap();
        assert!(r.holds);
        assert_eq!(r.kind, CheckKind::Szego);

        assert_eq!(
            check_szego(&FuncExpr::Exp, &seq(&[1.0, 0.1])),
            Err(CheckError::EvenLength(2))
        );

        let r = check_szego(&FuncExpr::Power(2.0), &seq(&[1.7])).unwrap();
        assert_eq!(r.lhs, r.rhs);
        assert_eq!(r.margin, 0.0);
    }

    #[test]
    fn even_length_holds_for_convex_member() {
        let e = parse("pow(2) + pow(4) + pow(6)").unwrap();
        let r = check_generalized(&e, &seq(&[4.6, 3.1, 2.8, 1.2])).unwrap();
        assert!(r.holds, "margin = {}", r.margin);
    }
}
