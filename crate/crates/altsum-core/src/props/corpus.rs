//! Built-in expression corpus used by the consistency suites.
//!
//! Ten expressions spanning every interesting classification: members
//! and non-members, convex and non-convex, with leaves and closures
//! (scale, sum, product, composition) all represented.

use alloc::vec::Vec;

use crate::expr::{parse, FuncExpr};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    pub expr: FuncExpr,
}

const CORPUS_TEXTS: [(&str, &str); 10] = [
    ("identity", "id()"),
    ("negative_constant", "-1"),
    ("square", "pow(2)"),
    ("fractional_power", "pow(1.5)"),
    ("floor", "floor()"),
    ("xlogx", "xlogx()"),
    ("exp", "exp()"),
    ("exp_remainder", "exp() - id() - 1"),
    ("even_power_sum", "pow(2) + pow(4) + pow(6)"),
    ("floor_square_product", "compose(pow(2), floor()) * pow(2)"),
];

/// The ten-expression corpus, parsed from its DSL texts.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    CORPUS_TEXTS
        .iter()
        .map(|&(name, text)| CorpusEntry {
            name,
            text,
            expr: parse(text).expect("corpus texts parse"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn corpus_has_ten_entries_and_roundtrips() {
        let corpus = builtin_corpus();
        assert_eq!(corpus.len(), 10);
        for entry in &corpus {
            let canonical = entry.expr.to_string();
            assert_eq!(parse(&canonical).unwrap(), entry.expr, "{}", entry.name);
        }
    }
}
