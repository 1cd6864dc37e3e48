//! Numeric property testers over grid pairs.
//!
//! A passing grid sweep yields `Unknown` — grids are evidence, never
//! proof. A violation beyond the hybrid tolerance yields `Refuted` with
//! the worst witness, selected deterministically (maximum violation,
//! ties broken by the lexicographically smallest pair), so results do
//! not depend on how the pair sweep is partitioned.
//!
//! Superadditivity has two equivalent formulations: `f(x+y) ≥ f(x)+f(y)`
//! and `f(x) − f(y) ≥ f(x−y)` for `x ≥ y`. The superadditive form at
//! `(u, v)` is the primitive here; the difference form at `(x, y)` is
//! derived from it by the substitution `(u, v) = (x − y, y)`, which makes
//! the two tests arithmetically identical on matched pairs.

use alloc::vec::Vec;

use super::{GridError, GridSpec, PropertyStatus, Witness};
use crate::expr::{EvalError, FuncExpr};
use crate::tol::hybrid_tol;

/// The pairwise inequality a tester sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PairTest {
    /// `f(x) + f(y) ≤ f(x+y)` at `(x, y)`.
    Superadditivity,
    /// `f(x−y) ≤ f(x) − f(y)` at `(x, y)` with `x ≥ y`.
    DifferenceBound,
    /// `f((x+y)/2) ≤ (f(x) + f(y))/2` at `(x, y)`.
    MidpointConvexity,
}

/// A pair where the tested inequality failed by more than the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PairWitness {
    pub x: f64,
    pub y: f64,
    pub violation: f64,
    pub tol: f64,
}

/// Result of a grid sweep for one property.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MembershipVerdict {
    pub test: PairTest,
    pub status: PropertyStatus,
    pub witness: Option<PairWitness>,
    pub pairs_tested: usize,
}

impl MembershipVerdict {
    /// Recomputes the stored witness; a sound `Refuted` reproduces a
    /// violation above its tolerance.
    pub fn reverify(&self, expr: &FuncExpr) -> Result<Option<(f64, f64)>, PropTestError> {
        match &self.witness {
            None => Ok(None),
            Some(w) => {
                let (violation, tol) = pair_violation(expr, self.test, w.x, w.y)?;
                Ok(Some((violation, tol)))
            }
        }
    }
}

/// Grid testing failures: the grid itself was malformed, or the
/// expression failed to evaluate at a visited point.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PropTestError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("evaluation failed at point {x}: {source}")]
    Eval { x: f64, source: EvalError },
}

fn eval_pt(expr: &FuncExpr, x: f64) -> Result<f64, PropTestError> {
    expr.eval_at(x)
        .map_err(|source| PropTestError::Eval { x, source })
}

/// Violation and tolerance of `test` at one pair. Positive violation
/// means the inequality failed at `(x, y)`.
pub fn pair_violation(
    expr: &FuncExpr,
    test: PairTest,
    x: f64,
    y: f64,
) -> Result<(f64, f64), PropTestError> {
    match test {
        PairTest::Superadditivity => {
            let fx = eval_pt(expr, x)?;
            let fy = eval_pt(expr, y)?;
            let fsum = eval_pt(expr, x + y)?;
            Ok(((fx + fy) - fsum, hybrid_tol(&[fx, fy, fsum])))
        }
        // derived from the superadditive form by (u, v) = (x − y, y)
        PairTest::DifferenceBound => pair_violation(expr, PairTest::Superadditivity, x - y, y),
        PairTest::MidpointConvexity => {
            let fx = eval_pt(expr, x)?;
            let fy = eval_pt(expr, y)?;
            let fmid = eval_pt(expr, (x + y) / 2.0)?;
            Ok((fmid - (fx + fy) / 2.0, hybrid_tol(&[fx, fy, fmid])))
        }
    }
}

/// Sweeps `test` over the given pairs.
pub fn test_pairs(
    expr: &FuncExpr,
    test: PairTest,
    pairs: impl IntoIterator<Item = (f64, f64)>,
) -> Result<MembershipVerdict, PropTestError> {
    let mut worst: Option<PairWitness> = None;
    let mut tested = 0usize;
    for (x, y) in pairs {
        let (violation, tol) = pair_violation(expr, test, x, y)?;
        tested += 1;
        if violation > tol {
            let replace = match &worst {
                None => true,
                Some(w) => {
                    violation > w.violation || (violation == w.violation && (x, y) < (w.x, w.y))
                }
            };
            if replace {
                worst = Some(PairWitness {
                    x,
                    y,
                    violation,
                    tol,
                });
            }
        }
    }
    let status = match &worst {
        Some(w) => PropertyStatus::Refuted {
            witness: Witness::Pair { x: w.x, y: w.y },
            violation: w.violation,
        },
        None => PropertyStatus::Unknown,
    };
    Ok(MembershipVerdict {
        test,
        status,
        witness: worst,
        pairs_tested: tested,
    })
}

/// All grid pairs `(x, y)` with `x ≥ y`, in lexicographic order.
fn ordered_pairs(axis: &[f64]) -> Vec<(f64, f64)> {
    let mut pairs = Vec::with_capacity(axis.len() * (axis.len() + 1) / 2);
    for (i, &x) in axis.iter().enumerate() {
        for &y in &axis[..=i] {
            pairs.push((x, y));
        }
    }
    pairs
}

/// Tests superadditivity `f(x+y) ≥ f(x) + f(y)` over all grid pairs with
/// `x ≥ y`. A pass is `Unknown`, never proof of membership.
pub fn test_w_membership(
    expr: &FuncExpr,
    grid: &GridSpec,
) -> Result<MembershipVerdict, PropTestError> {
    let axis = grid.axis_points()?;
    test_pairs(expr, PairTest::Superadditivity, ordered_pairs(&axis))
}

/// Tests midpoint convexity `f((x+y)/2) ≤ (f(x)+f(y))/2` over grid pairs.
pub fn test_convexity(
    expr: &FuncExpr,
    grid: &GridSpec,
) -> Result<MembershipVerdict, PropTestError> {
    let axis = grid.axis_points()?;
    let mut pairs = Vec::new();
    for (i, &x) in axis.iter().enumerate() {
        for &y in &axis[..i] {
            pairs.push((x, y));
        }
    }
    test_pairs(expr, PairTest::MidpointConvexity, pairs)
}
