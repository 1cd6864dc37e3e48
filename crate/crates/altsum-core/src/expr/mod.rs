//! Function-expression trees over `[0, ∞)`.
//!
//! [`FuncExpr`] is an immutable tree; evaluation is pure, so values can be
//! shared freely across threads. The text DSL is parsed by [`parse`] and
//! printed canonically by `Display`, with `parse(e.to_string()) == e` for
//! every constructible tree.

mod parse;
mod print;

pub use parse::{parse, ParseError, ParseErrorKind};

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::math;

/// Default cap on the number of series terms accepted at construction.
pub const DEFAULT_SERIES_CAP: usize = 20;

/// A function on `[0, ∞)` as an expression tree.
///
/// Leaves are the identity, constants, powers `x^r` (r > 0), the floor
/// function, `x ln x` (0 at 0), and `e^x`. Compound nodes are pointwise
/// sum and product, scaling by a nonzero factor, composition, and finite
/// truncated series `Σ cᵢ·fᵢ`.
///
/// Subtraction in the DSL desugars to `Scale(-1, ·)` and negative
/// constants, so these eleven kinds are the whole language.
#[derive(Debug, Clone, PartialEq)]
pub enum FuncExpr {
    Identity,
    Constant(f64),
    Power(f64),
    Floor,
    XLogX,
    Exp,
    Sum(Box<FuncExpr>, Box<FuncExpr>),
    Product(Box<FuncExpr>, Box<FuncExpr>),
    Scale(f64, Box<FuncExpr>),
    /// `Compose(outer, inner)` is `outer ∘ inner`.
    Compose(Box<FuncExpr>, Box<FuncExpr>),
    Series {
        coeffs: Vec<f64>,
        terms: Vec<FuncExpr>,
    },
}

/// Construction-time invariant violations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("power exponent must be finite and > 0, got {0}")]
    BadExponent(f64),
    #[error("scale factor must be finite and nonzero, got {0}")]
    BadScale(f64),
    #[error("constant must be finite, got {0}")]
    BadConstant(f64),
    #[error("series coefficient must be finite, got {0}")]
    BadCoefficient(f64),
    #[error("series needs between 1 and {cap} terms, got {len}")]
    BadSeriesLength { len: usize, cap: usize },
}

impl FuncExpr {
    pub fn constant(c: f64) -> Result<Self, ExprError> {
        if c.is_finite() {
            Ok(FuncExpr::Constant(c))
        } else {
            Err(ExprError::BadConstant(c))
        }
    }

    pub fn power(r: f64) -> Result<Self, ExprError> {
        if r.is_finite() && r > 0.0 {
            Ok(FuncExpr::Power(r))
        } else {
            Err(ExprError::BadExponent(r))
        }
    }

    pub fn scale(alpha: f64, child: FuncExpr) -> Result<Self, ExprError> {
        if alpha.is_finite() && alpha != 0.0 {
            Ok(FuncExpr::Scale(alpha, Box::new(child)))
        } else {
            Err(ExprError::BadScale(alpha))
        }
    }

    pub fn sum(left: FuncExpr, right: FuncExpr) -> Self {
        FuncExpr::Sum(Box::new(left), Box::new(right))
    }

    pub fn product(left: FuncExpr, right: FuncExpr) -> Self {
        FuncExpr::Product(Box::new(left), Box::new(right))
    }

    pub fn compose(outer: FuncExpr, inner: FuncExpr) -> Self {
        FuncExpr::Compose(Box::new(outer), Box::new(inner))
    }

    /// Truncated series `Σ cᵢ·fᵢ` with the default term cap.
    pub fn series(pairs: Vec<(f64, FuncExpr)>) -> Result<Self, ExprError> {
        Self::series_with_cap(pairs, DEFAULT_SERIES_CAP)
    }

    /// Truncated series with an explicit cap on the number of terms.
    ///
    /// The cap is a construction-time guard only; it is not part of the
    /// tree, so structural equality and printing see just the terms kept.
    pub fn series_with_cap(pairs: Vec<(f64, FuncExpr)>, cap: usize) -> Result<Self, ExprError> {
        if pairs.is_empty() || pairs.len() > cap {
            return Err(ExprError::BadSeriesLength {
                len: pairs.len(),
                cap,
            });
        }
        let mut coeffs = Vec::with_capacity(pairs.len());
        let mut terms = Vec::with_capacity(pairs.len());
        for (c, t) in pairs {
            if !c.is_finite() {
                return Err(ExprError::BadCoefficient(c));
            }
            coeffs.push(c);
            terms.push(t);
        }
        Ok(FuncExpr::Series { coeffs, terms })
    }

    /// Checks the construction invariants over the whole tree.
    ///
    /// Trees built through the checked constructors or [`parse`] always
    /// pass; this is for trees assembled from the raw variants.
    pub fn validate(&self) -> Result<(), ExprError> {
        match self {
            FuncExpr::Identity | FuncExpr::Floor | FuncExpr::XLogX | FuncExpr::Exp => Ok(()),
            FuncExpr::Constant(c) if c.is_finite() => Ok(()),
            FuncExpr::Constant(c) => Err(ExprError::BadConstant(*c)),
            FuncExpr::Power(r) if r.is_finite() && *r > 0.0 => Ok(()),
            FuncExpr::Power(r) => Err(ExprError::BadExponent(*r)),
            FuncExpr::Sum(l, r) | FuncExpr::Product(l, r) | FuncExpr::Compose(l, r) => {
                l.validate()?;
                r.validate()
            }
            FuncExpr::Scale(a, child) => {
                if !a.is_finite() || *a == 0.0 {
                    return Err(ExprError::BadScale(*a));
                }
                child.validate()
            }
            FuncExpr::Series { coeffs, terms } => {
                if coeffs.len() != terms.len()
                    || coeffs.is_empty()
                    || coeffs.len() > DEFAULT_SERIES_CAP
                {
                    return Err(ExprError::BadSeriesLength {
                        len: coeffs.len().max(terms.len()),
                        cap: DEFAULT_SERIES_CAP,
                    });
                }
                for &c in coeffs {
                    if !c.is_finite() {
                        return Err(ExprError::BadCoefficient(c));
                    }
                }
                for t in terms {
                    t.validate()?;
                }
                Ok(())
            }
        }
    }
}

/// A validated evaluation point: finite and `≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint(f64);

impl EvalPoint {
    pub fn new(x: f64) -> Result<Self, EvalError> {
        if !x.is_finite() {
            Err(EvalError::NonFinitePoint(x))
        } else if x < 0.0 {
            Err(EvalError::NegativePoint(x))
        } else {
            Ok(EvalPoint(x))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Evaluation failures. Overflow is reported, never silently propagated.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("point {0} is outside the domain [0, inf)")]
    NegativePoint(f64),
    #[error("point {0} is not finite")]
    NonFinitePoint(f64),
    #[error("non-finite result at x = {x}")]
    NonFinite { x: f64 },
}

impl FuncExpr {
    /// Evaluates the function at a validated point.
    pub fn eval(&self, x: EvalPoint) -> Result<f64, EvalError> {
        self.eval_raw(x.0)
    }

    /// Evaluates at `x`, validating `x ≥ 0` first.
    pub fn eval_at(&self, x: f64) -> Result<f64, EvalError> {
        self.eval(EvalPoint::new(x)?)
    }

    fn eval_raw(&self, x: f64) -> Result<f64, EvalError> {
        let v = match self {
            FuncExpr::Identity => x,
            FuncExpr::Constant(c) => *c,
            FuncExpr::Power(r) => math::powf(x, *r),
            FuncExpr::Floor => math::floor(x),
            FuncExpr::XLogX => {
                if x == 0.0 {
                    0.0
                } else {
                    x * math::ln(x)
                }
            }
            FuncExpr::Exp => math::exp(x),
            FuncExpr::Sum(l, r) => l.eval_raw(x)? + r.eval_raw(x)?,
            FuncExpr::Product(l, r) => l.eval_raw(x)? * r.eval_raw(x)?,
            FuncExpr::Scale(a, child) => a * child.eval_raw(x)?,
            FuncExpr::Compose(outer, inner) => {
                let t = inner.eval_raw(x)?;
                // the inner value becomes the outer argument and must stay
                // in the domain
                if t < 0.0 {
                    return Err(EvalError::NegativePoint(t));
                }
                outer.eval_raw(t)?
            }
            FuncExpr::Series { coeffs, terms } => {
                let mut acc = 0.0;
                for (c, t) in coeffs.iter().zip(terms) {
                    acc += c * t.eval_raw(x)?;
                }
                acc
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { x })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn e(text: &str) -> FuncExpr {
        parse(text).unwrap()
    }

    #[test]
    fn xlogx_is_zero_at_zero() {
        assert_eq!(FuncExpr::XLogX.eval_at(0.0).unwrap(), 0.0);
    }

    #[test]
    fn xlogx_continuous_at_zero() {
        // x ln x -> 0 as x -> 0+
        let v = FuncExpr::XLogX.eval_at(1e-12).unwrap();
        assert!(v.abs() < 1e-9, "xlogx(1e-12) = {v}");
    }

    #[test]
    fn power_squares() {
        assert_eq!(FuncExpr::Power(2.0).eval_at(3.0).unwrap(), 9.0);
        assert_eq!(FuncExpr::Power(3.5).eval_at(0.0).unwrap(), 0.0);
    }

    #[test]
    fn exp_minus_x_minus_one_at_one() {
        // direct arithmetic oracle: e - 1 - 1
        let oracle = 1.0_f64.exp() - 2.0;
        let v = e("exp()-id()-1").eval_at(1.0).unwrap();
        assert!((v - oracle).abs() < 1e-12, "got {v}, oracle {oracle}");
        assert!((v - 0.718281828).abs() < 1e-6);
    }

    #[test]
    fn series_sums_terms() {
        let s =
            FuncExpr::series(vec![(2.0, FuncExpr::Power(2.0)), (0.5, FuncExpr::Identity)]).unwrap();
        // 2*9 + 0.5*3
        assert_eq!(s.eval_at(3.0).unwrap(), 19.5);
    }

    #[test]
    fn negative_point_rejected() {
        assert_eq!(
            FuncExpr::Identity.eval_at(-0.5),
            Err(EvalError::NegativePoint(-0.5))
        );
        assert!(EvalPoint::new(f64::NAN).is_err());
    }

    #[test]
    fn overflow_is_an_error() {
        match FuncExpr::Exp.eval_at(1e4) {
            Err(EvalError::NonFinite { x }) => assert_eq!(x, 1e4),
            other => panic!("expected overflow error, got {other:?}"),
        }
    }

    #[test]
    fn compose_rejects_negative_inner_value() {
        // inner = -x drops below the outer domain for x > 0
        let c = FuncExpr::compose(FuncExpr::Exp, e("-id()"));
        assert_eq!(c.eval_at(0.0).unwrap(), 1.0);
        assert!(matches!(
            c.eval_at(2.0),
            Err(EvalError::NegativePoint(v)) if v == -2.0
        ));
    }

    #[test]
    fn constructors_enforce_invariants() {
        assert!(FuncExpr::power(0.0).is_err());
        assert!(FuncExpr::power(-2.0).is_err());
        assert!(FuncExpr::scale(0.0, FuncExpr::Identity).is_err());
        assert!(FuncExpr::constant(f64::INFINITY).is_err());
        assert!(FuncExpr::series(vec![]).is_err());
        let many = (0..21).map(|_| (1.0, FuncExpr::Identity)).collect();
        assert!(matches!(
            FuncExpr::series(many),
            Err(ExprError::BadSeriesLength { len: 21, cap: 20 })
        ));
        assert!(FuncExpr::Power(-1.0).validate().is_err());
    }

    #[test]
    fn evaluation_is_deterministic() {
        let ex = e("compose(pow(2), floor()) + 0.5*xlogx()");
        let a = ex.eval_at(7.3).unwrap();
        let b = ex.eval_at(7.3).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
