//! Property flags and their structural propagation.
//!
//! [`propagate`] derives five per-expression properties bottom-up:
//! membership in the superadditive class, convexity, nonnegativity,
//! monotonicity, and `f(0) ≤ 0`. Closure rules mirror how the class
//! behaves under scaling, sums, products, composition, and nonnegative
//! series; anything not derivable is `Unknown` and left to the numeric
//! testers in this module.
//!
//! `Proven` always carries the rule chain that produced it; `Refuted`
//! always carries a numeric witness that re-verifies above tolerance.

mod corpus;
mod grid;
mod testers;

pub use corpus::{builtin_corpus, CorpusEntry};
pub use grid::{GridError, GridLayout, GridSpec};
pub use testers::{
    pair_violation, test_convexity, test_pairs, test_w_membership, MembershipVerdict, PairTest,
    PairWitness, PropTestError,
};

use alloc::format;
use alloc::string::String;

use crate::expr::{EvalError, FuncExpr};
use crate::tol::hybrid_tol;

/// The properties tracked for every expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Property {
    InW,
    Convex,
    Nonnegative,
    Nondecreasing,
    ZeroNonpositive,
}

/// Numeric evidence refuting a property.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum Witness {
    Point { x: f64 },
    Pair { x: f64, y: f64 },
}

/// Three-valued property status with provenance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "status", rename_all = "snake_case"))]
pub enum PropertyStatus {
    Proven { rule: String },
    Refuted { witness: Witness, violation: f64 },
    Unknown,
}

impl PropertyStatus {
    pub fn is_proven(&self) -> bool {
        matches!(self, PropertyStatus::Proven { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, PropertyStatus::Refuted { .. })
    }

    fn proven(rule: impl Into<String>) -> Self {
        PropertyStatus::Proven { rule: rule.into() }
    }

    /// Rule chain, when proven.
    pub fn rule(&self) -> Option<&str> {
        match self {
            PropertyStatus::Proven { rule } => Some(rule),
            _ => None,
        }
    }
}

/// The five property statuses of one expression.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PropertySet {
    pub in_w: PropertyStatus,
    pub convex: PropertyStatus,
    pub nonnegative: PropertyStatus,
    pub nondecreasing: PropertyStatus,
    pub f0_nonpositive: PropertyStatus,
}

impl PropertySet {
    fn unknown() -> Self {
        PropertySet {
            in_w: PropertyStatus::Unknown,
            convex: PropertyStatus::Unknown,
            nonnegative: PropertyStatus::Unknown,
            nondecreasing: PropertyStatus::Unknown,
            f0_nonpositive: PropertyStatus::Unknown,
        }
    }

    pub fn get(&self, p: Property) -> &PropertyStatus {
        match p {
            Property::InW => &self.in_w,
            Property::Convex => &self.convex,
            Property::Nonnegative => &self.nonnegative,
            Property::Nondecreasing => &self.nondecreasing,
            Property::ZeroNonpositive => &self.f0_nonpositive,
        }
    }
}

/// Recomputes the violation a refutation witness claims.
///
/// The witness shape is fixed per property: pairs for membership
/// (superadditive form), convexity (midpoint form), and monotonicity
/// (`x < y` with `f(x) > f(y)`); points for nonnegativity and the value
/// at zero. Returns the violation; a sound witness yields a positive
/// value above the hybrid tolerance of the participating values.
pub fn witness_violation(
    expr: &FuncExpr,
    property: Property,
    witness: &Witness,
) -> Result<(f64, f64), EvalError> {
    match (property, witness) {
        (Property::InW, &Witness::Pair { x, y }) => {
            let fx = expr.eval_at(x)?;
            let fy = expr.eval_at(y)?;
            let fs = expr.eval_at(x + y)?;
            Ok(((fx + fy) - fs, hybrid_tol(&[fx, fy, fs])))
        }
        (Property::Convex, &Witness::Pair { x, y }) => {
            let fx = expr.eval_at(x)?;
            let fy = expr.eval_at(y)?;
            let fm = expr.eval_at((x + y) / 2.0)?;
            Ok((fm - (fx + fy) / 2.0, hybrid_tol(&[fx, fy, fm])))
        }
        (Property::Nondecreasing, &Witness::Pair { x, y }) => {
            let fx = expr.eval_at(x)?;
            let fy = expr.eval_at(y)?;
            Ok((fx - fy, hybrid_tol(&[fx, fy])))
        }
        (Property::Nonnegative, &Witness::Point { x }) => {
            let fx = expr.eval_at(x)?;
            Ok((-fx, hybrid_tol(&[fx])))
        }
        (Property::ZeroNonpositive, &Witness::Point { x }) => {
            let fx = expr.eval_at(x)?;
            Ok((fx, hybrid_tol(&[fx])))
        }
        _ => panic!("witness shape does not match property {property:?}"),
    }
}

fn refuted(expr: &FuncExpr, property: Property, witness: Witness) -> PropertyStatus {
    let (violation, _) = witness_violation(expr, property, &witness)
        .expect("built-in refutation witnesses evaluate");
    PropertyStatus::Refuted { witness, violation }
}

/// Affine trees (`αx + c` combinations) are convex regardless of sign.
fn is_affine(e: &FuncExpr) -> bool {
    match e {
        FuncExpr::Identity | FuncExpr::Constant(_) => true,
        FuncExpr::Scale(_, child) => is_affine(child),
        FuncExpr::Sum(l, r) => is_affine(l) && is_affine(r),
        _ => false,
    }
}

fn chain1(name: &str, a: &PropertyStatus) -> String {
    format!("{name}({})", a.rule().unwrap_or("?"))
}

fn chain2(name: &str, a: &PropertyStatus, b: &PropertyStatus) -> String {
    format!(
        "{name}({}, {})",
        a.rule().unwrap_or("?"),
        b.rule().unwrap_or("?")
    )
}

/// Derives the property set of an expression bottom-up.
///
/// Never errors: anything underivable is `Unknown`, to be probed by the
/// grid testers.
pub fn propagate(expr: &FuncExpr) -> PropertySet {
    let mut ps = structural(expr);

    if !ps.convex.is_proven() && is_affine(expr) {
        ps.convex = PropertyStatus::proven("affine");
    }

    // f(0) ≤ 0 is decidable by direct evaluation at the single point 0
    if ps.f0_nonpositive == PropertyStatus::Unknown {
        if let Ok(v) = expr.eval_at(0.0) {
            ps.f0_nonpositive = if v <= hybrid_tol(&[v]) {
                PropertyStatus::proven("zero_point_value")
            } else {
                refuted(expr, Property::ZeroNonpositive, Witness::Point { x: 0.0 })
            };
        }
    }

    // convex functions with f(0) ≤ 0 are members
    if ps.convex.is_proven() && ps.f0_nonpositive.is_proven() && ps.in_w == PropertyStatus::Unknown
    {
        ps.in_w = PropertyStatus::proven(chain2(
            "convex_with_nonpositive_origin",
            &ps.convex,
            &ps.f0_nonpositive,
        ));
    }

    // members satisfy f(0) ≤ 0
    if ps.in_w.is_proven() && ps.f0_nonpositive == PropertyStatus::Unknown {
        ps.f0_nonpositive = PropertyStatus::proven(chain1("member_origin_nonpositive", &ps.in_w));
    }

    // nonnegative members are nondecreasing
    if ps.in_w.is_proven()
        && ps.nonnegative.is_proven()
        && ps.nondecreasing == PropertyStatus::Unknown
    {
        ps.nondecreasing = PropertyStatus::proven(chain2(
            "nonnegative_member_nondecreasing",
            &ps.in_w,
            &ps.nonnegative,
        ));
    }

    debug_assert!(!(ps.in_w.is_proven() && ps.f0_nonpositive.is_refuted()));
    debug_assert!(
        !(ps.in_w.is_proven() && ps.nonnegative.is_proven() && ps.nondecreasing.is_refuted())
    );
    ps
}

fn structural(expr: &FuncExpr) -> PropertySet {
    let mut ps = PropertySet::unknown();
    match expr {
        FuncExpr::Identity => {
            ps.in_w = PropertyStatus::proven("identity_additive_equality");
            ps.convex = PropertyStatus::proven("affine");
            ps.nonnegative = PropertyStatus::proven("identity_nonnegative_on_domain");
            ps.nondecreasing = PropertyStatus::proven("identity_increasing");
        }
        FuncExpr::Constant(c) => {
            ps.in_w = if *c <= 0.0 {
                PropertyStatus::proven("constant_nonpositive")
            } else {
                refuted(expr, Property::InW, Witness::Pair { x: 0.0, y: 0.0 })
            };
            ps.convex = PropertyStatus::proven("affine");
            ps.nonnegative = if *c >= 0.0 {
                PropertyStatus::proven("constant_nonnegative")
            } else {
                refuted(expr, Property::Nonnegative, Witness::Point { x: 0.0 })
            };
            ps.nondecreasing = PropertyStatus::proven("constant_flat");
        }
        FuncExpr::Power(r) => {
            if *r > 1.0 {
                ps.in_w = PropertyStatus::proven("power_superadditive");
                ps.convex = PropertyStatus::proven("power_convex");
            } else if *r == 1.0 {
                ps.in_w = PropertyStatus::proven("identity_additive_equality");
                ps.convex = PropertyStatus::proven("affine");
            }
            // exponents in (0, 1) stay Unknown; the grids refute them
            if *r > 0.0 {
                ps.nonnegative = PropertyStatus::proven("power_nonnegative");
                ps.nondecreasing = PropertyStatus::proven("power_increasing");
            }
        }
        FuncExpr::Floor => {
            ps.in_w = PropertyStatus::proven("floor_superadditive");
            ps.convex = refuted(expr, Property::Convex, Witness::Pair { x: 1.1, y: 0.9 });
            ps.nonnegative = PropertyStatus::proven("floor_nonnegative_on_domain");
            ps.nondecreasing = PropertyStatus::proven("floor_nondecreasing");
        }
        FuncExpr::XLogX => {
            ps.convex = PropertyStatus::proven("xlogx_convex");
            ps.nonnegative = refuted(expr, Property::Nonnegative, Witness::Point { x: 0.5 });
            ps.nondecreasing = refuted(
                expr,
                Property::Nondecreasing,
                Witness::Pair { x: 0.1, y: 0.2 },
            );
        }
        FuncExpr::Exp => {
            ps.in_w = refuted(expr, Property::InW, Witness::Pair { x: 0.0, y: 0.0 });
            ps.convex = PropertyStatus::proven("exp_convex");
            ps.nonnegative = PropertyStatus::proven("exp_positive");
            ps.nondecreasing = PropertyStatus::proven("exp_increasing");
        }
        FuncExpr::Scale(alpha, child) => {
            if *alpha > 0.0 {
                let c = propagate(child);
                if c.in_w.is_proven() {
                    ps.in_w = PropertyStatus::proven(chain1("positive_scaling", &c.in_w));
                }
                if c.convex.is_proven() {
                    ps.convex = PropertyStatus::proven(chain1("positive_scaling", &c.convex));
                }
                if c.nonnegative.is_proven() {
                    ps.nonnegative =
                        PropertyStatus::proven(chain1("positive_scaling", &c.nonnegative));
                }
                if c.nondecreasing.is_proven() {
                    ps.nondecreasing =
                        PropertyStatus::proven(chain1("positive_scaling", &c.nondecreasing));
                }
            }
            // negative scaling proves nothing structural; the affine rule
            // and zero-point evaluation still apply above
        }
        FuncExpr::Sum(l, r) => {
            let (a, b) = (propagate(l), propagate(r));
            if a.in_w.is_proven() && b.in_w.is_proven() {
                ps.in_w = PropertyStatus::proven(chain2("sum_of_members", &a.in_w, &b.in_w));
            }
            if a.convex.is_proven() && b.convex.is_proven() {
                ps.convex = PropertyStatus::proven(chain2("sum_of_convex", &a.convex, &b.convex));
            }
            if a.nonnegative.is_proven() && b.nonnegative.is_proven() {
                ps.nonnegative = PropertyStatus::proven(chain2(
                    "sum_of_nonnegative",
                    &a.nonnegative,
                    &b.nonnegative,
                ));
            }
            if a.nondecreasing.is_proven() && b.nondecreasing.is_proven() {
                ps.nondecreasing = PropertyStatus::proven(chain2(
                    "sum_of_nondecreasing",
                    &a.nondecreasing,
                    &b.nondecreasing,
                ));
            }
        }
        FuncExpr::Product(l, r) => {
            let (a, b) = (propagate(l), propagate(r));
            let both_nonneg = a.nonnegative.is_proven() && b.nonnegative.is_proven();
            // the product closure needs both factors nonnegative: the
            // middle step (f(x)+f(y))(g(x)+g(y)) ≥ (fg)(x)+(fg)(y) uses
            // nonnegativity of the cross terms
            if a.in_w.is_proven() && b.in_w.is_proven() && both_nonneg {
                ps.in_w = PropertyStatus::proven(chain2(
                    "product_of_nonnegative_members",
                    &a.in_w,
                    &b.in_w,
                ));
            }
            if both_nonneg {
                ps.nonnegative = PropertyStatus::proven(chain2(
                    "product_of_nonnegative",
                    &a.nonnegative,
                    &b.nonnegative,
                ));
                if a.nondecreasing.is_proven() && b.nondecreasing.is_proven() {
                    ps.nondecreasing = PropertyStatus::proven(chain2(
                        "product_of_nonnegative_nondecreasing",
                        &a.nondecreasing,
                        &b.nondecreasing,
                    ));
                }
            }
        }
        FuncExpr::Compose(outer, inner) => {
            let (o, i) = (propagate(outer), propagate(inner));
            let both_nonneg = o.nonnegative.is_proven() && i.nonnegative.is_proven();
            if o.in_w.is_proven() && i.in_w.is_proven() && both_nonneg {
                ps.in_w = PropertyStatus::proven(chain2(
                    "composition_of_nonnegative_members",
                    &o.in_w,
                    &i.in_w,
                ));
            }
            if o.convex.is_proven()
                && o.nondecreasing.is_proven()
                && i.convex.is_proven()
                && i.nonnegative.is_proven()
            {
                ps.convex = PropertyStatus::proven(chain2(
                    "composition_convex_nondecreasing",
                    &o.convex,
                    &i.convex,
                ));
            }
            if both_nonneg {
                ps.nonnegative = PropertyStatus::proven(chain2(
                    "composition_nonnegative",
                    &o.nonnegative,
                    &i.nonnegative,
                ));
            }
            if o.nondecreasing.is_proven()
                && i.nondecreasing.is_proven()
                && i.nonnegative.is_proven()
            {
                ps.nondecreasing = PropertyStatus::proven(chain2(
                    "composition_nondecreasing",
                    &o.nondecreasing,
                    &i.nondecreasing,
                ));
            }
        }
        FuncExpr::Series { coeffs, terms } => {
            if coeffs.iter().all(|&c| c >= 0.0) {
                let children: alloc::vec::Vec<PropertySet> = terms.iter().map(propagate).collect();
                let all = |f: fn(&PropertySet) -> &PropertyStatus| {
                    children.iter().all(|c| f(c).is_proven())
                };
                if all(|c| &c.in_w) {
                    ps.in_w = PropertyStatus::proven("nonnegative_series_of_members");
                }
                if all(|c| &c.convex) {
                    ps.convex = PropertyStatus::proven("nonnegative_series_of_convex");
                }
                if all(|c| &c.nonnegative) {
                    ps.nonnegative = PropertyStatus::proven("nonnegative_series_of_nonnegative");
                }
                if all(|c| &c.nondecreasing) {
                    ps.nondecreasing =
                        PropertyStatus::proven("nonnegative_series_of_nondecreasing");
                }
            }
        }
    }
    ps
}
