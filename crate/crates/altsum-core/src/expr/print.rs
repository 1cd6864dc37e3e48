//! Canonical printing. `parse(e.to_string())` reconstructs `e` exactly,
//! so the printer chooses subtraction forms and parentheses carefully:
//! a bare number followed by `*` would reparse as a `Scale` node, so
//! `Constant` operands of products and scales are parenthesized.

use core::fmt;

use super::FuncExpr;

impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(self, f)
    }
}

fn write_sum(e: &FuncExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        FuncExpr::Sum(l, r) => {
            write_sum(l, f)?;
            match negated_head(r) {
                Some(flipped) => {
                    write!(f, " - ")?;
                    write_term(&flipped, f)
                }
                None => {
                    write!(f, " + ")?;
                    write_term(r, f)
                }
            }
        }
        _ => write_term(e, f),
    }
}

/// Right summands with a negative head print as subtraction. Returns the
/// sign-flipped tree to print after the minus sign.
fn negated_head(e: &FuncExpr) -> Option<FuncExpr> {
    match e {
        FuncExpr::Constant(c) if *c < 0.0 => Some(FuncExpr::Constant(-c)),
        FuncExpr::Scale(a, child) if *a < 0.0 => {
            // `- child` reparses as Scale(-1, child) only when the parser's
            // minus desugaring wraps instead of folding, i.e. the child is
            // neither a constant nor a scale itself
            if *a == -1.0 && !matches!(**child, FuncExpr::Constant(_) | FuncExpr::Scale(..)) {
                Some((**child).clone())
            } else {
                Some(FuncExpr::Scale(-a, child.clone()))
            }
        }
        _ => None,
    }
}

fn write_term(e: &FuncExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        FuncExpr::Sum(..) => write_parens(e, f),
        FuncExpr::Product(l, r) => {
            match &**l {
                // products associate left, so a left product stays bare
                FuncExpr::Product(..) => write_term(l, f)?,
                FuncExpr::Sum(..) | FuncExpr::Constant(_) => write_parens(l, f)?,
                other => write_factor(other, f)?,
            }
            write!(f, " * ")?;
            match &**r {
                FuncExpr::Sum(..) | FuncExpr::Product(..) | FuncExpr::Constant(_) => {
                    write_parens(r, f)
                }
                other => write_factor(other, f),
            }
        }
        _ => write_factor(e, f),
    }
}

fn write_factor(e: &FuncExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        FuncExpr::Identity => write!(f, "id()"),
        FuncExpr::Floor => write!(f, "floor()"),
        FuncExpr::XLogX => write!(f, "xlogx()"),
        FuncExpr::Exp => write!(f, "exp()"),
        FuncExpr::Power(r) => write!(f, "pow({r})"),
        FuncExpr::Constant(c) => write!(f, "{c}"),
        FuncExpr::Scale(a, child) => {
            if *a < 0.0 {
                write!(f, "-")?;
                write_positive_scale(-a, child, true, f)
            } else {
                write_positive_scale(*a, child, false, f)
            }
        }
        FuncExpr::Compose(outer, inner) => {
            write!(f, "compose(")?;
            write_sum(outer, f)?;
            write!(f, ", ")?;
            write_sum(inner, f)?;
            write!(f, ")")
        }
        FuncExpr::Series { coeffs, terms } => {
            write!(f, "series(")?;
            for (i, (c, t)) in coeffs.iter().zip(terms).enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}, ")?;
                write_sum(t, f)?;
            }
            write!(f, ")")
        }
        FuncExpr::Sum(..) | FuncExpr::Product(..) => write_parens(e, f),
    }
}

fn write_positive_scale(
    a: f64,
    child: &FuncExpr,
    after_minus: bool,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    debug_assert!(a > 0.0);
    // `-child` reparses as Scale(-1, child), so the unit factor can be
    // dropped after a minus sign (but only there, and only when the
    // parser's minus wraps instead of folding)
    if after_minus && a == 1.0 && !matches!(child, FuncExpr::Constant(_) | FuncExpr::Scale(..)) {
        return write_scale_child(child, f);
    }
    write!(f, "{a}*")?;
    write_scale_child(child, f)
}

fn write_scale_child(child: &FuncExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match child {
        FuncExpr::Sum(..) | FuncExpr::Product(..) | FuncExpr::Constant(_) => write_parens(child, f),
        other => write_factor(other, f),
    }
}

fn write_parens(e: &FuncExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "(")?;
    write_sum(e, f)?;
    write!(f, ")")
}

#[cfg(test)]
mod tests {
    use super::super::{parse, FuncExpr};
    use alloc::string::ToString;
    use alloc::vec;

    fn roundtrip(e: &FuncExpr) {
        let text = e.to_string();
        let back = parse(&text).unwrap_or_else(|err| panic!("reparse of {text:?} failed: {err}"));
        assert_eq!(&back, e, "canonical text was {text:?}");
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(FuncExpr::Power(2.0).to_string(), "pow(2)");
        assert_eq!(
            FuncExpr::scale(0.5, FuncExpr::Power(3.0))
                .unwrap()
                .to_string(),
            "0.5*pow(3)"
        );
        assert_eq!(
            FuncExpr::sum(FuncExpr::Power(2.0), FuncExpr::Power(4.0)).to_string(),
            "pow(2) + pow(4)"
        );
    }

    #[test]
    fn subtraction_form_is_stable() {
        let e = parse("exp() - id() - 1").unwrap();
        assert_eq!(e.to_string(), "exp() - id() - 1");
        roundtrip(&e);
    }

    #[test]
    fn product_with_constant_operands() {
        let e = FuncExpr::product(FuncExpr::Constant(2.0), FuncExpr::Power(2.0));
        assert_eq!(e.to_string(), "(2) * pow(2)");
        roundtrip(&e);

        let e = FuncExpr::product(
            FuncExpr::product(FuncExpr::Floor, FuncExpr::Constant(3.0)),
            FuncExpr::Identity,
        );
        roundtrip(&e);
    }

    #[test]
    fn scale_of_constant_and_nested_scales() {
        roundtrip(&FuncExpr::scale(2.0, FuncExpr::Constant(3.0)).unwrap());
        roundtrip(&FuncExpr::scale(-1.0, FuncExpr::Constant(3.0)).unwrap());
        roundtrip(
            &FuncExpr::scale(2.0, FuncExpr::scale(-3.0, FuncExpr::Identity).unwrap()).unwrap(),
        );
        roundtrip(&FuncExpr::scale(-2.5, FuncExpr::Floor).unwrap());
        roundtrip(&FuncExpr::scale(1.0, FuncExpr::Identity).unwrap());
        roundtrip(
            &FuncExpr::scale(-1.0, FuncExpr::scale(2.0, FuncExpr::Identity).unwrap()).unwrap(),
        );
        roundtrip(
            &FuncExpr::scale(1.0, FuncExpr::scale(2.0, FuncExpr::Identity).unwrap()).unwrap(),
        );
    }

    #[test]
    fn right_nested_structures_need_parens() {
        let e = FuncExpr::sum(
            FuncExpr::Exp,
            FuncExpr::sum(FuncExpr::Identity, FuncExpr::Floor),
        );
        assert_eq!(e.to_string(), "exp() + (id() + floor())");
        roundtrip(&e);

        let e = FuncExpr::product(
            FuncExpr::Exp,
            FuncExpr::product(FuncExpr::Identity, FuncExpr::Floor),
        );
        roundtrip(&e);
    }

    #[test]
    fn series_and_compose_print() {
        let e = FuncExpr::series(vec![
            (1.0, FuncExpr::Power(2.0)),
            (
                -0.5,
                FuncExpr::sum(FuncExpr::Identity, FuncExpr::Constant(-1.0)),
            ),
        ])
        .unwrap();
        assert_eq!(e.to_string(), "series(1, pow(2), -0.5, id() - 1)");
        roundtrip(&e);

        let e = FuncExpr::compose(
            FuncExpr::sum(FuncExpr::Power(2.0), FuncExpr::Constant(-1.0)),
            FuncExpr::Floor,
        );
        roundtrip(&e);
    }

    #[test]
    fn negative_scale_inside_sums_and_products() {
        let e = FuncExpr::sum(
            FuncExpr::Exp,
            FuncExpr::scale(-1.0, FuncExpr::sum(FuncExpr::Identity, FuncExpr::Exp)).unwrap(),
        );
        roundtrip(&e);

        let e = FuncExpr::product(
            FuncExpr::scale(-1.0, FuncExpr::Identity).unwrap(),
            FuncExpr::Exp,
        );
        roundtrip(&e);

        let e = FuncExpr::sum(
            FuncExpr::Floor,
            FuncExpr::scale(-2.0, FuncExpr::Constant(-3.0)).unwrap(),
        );
        roundtrip(&e);
    }
}
