//! Verification and falsification of alternating-sign inequalities over
//! nonincreasing nonnegative sequences.
//!
//! The crate revolves around four pieces:
//!
//! * [`expr`] — a small expression language for functions on `[0, ∞)`,
//!   with a text DSL, evaluation, and canonical printing.
//! * [`props`] — structural propagation of superadditivity, convexity,
//!   and monotonicity facts over expression trees, plus numeric grid
//!   testers that hunt for counterexamples to those properties.
//! * [`ineq`] — admissible sequences `a₁ ≥ … ≥ a_m ≥ 0` and the
//!   alternating-sum checks (generalized, power-function, odd-length).
//! * [`search`] — seeded, reproducible counterexample search over the
//!   space of admissible sequences.
//!
//! The crate is `no_std`-compatible (`alloc` required): disable default
//! features and enable `libm` to build without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod expr;
pub mod ineq;
mod math;
pub mod props;
pub mod search;
pub mod tol;

pub use expr::{parse, EvalError, EvalPoint, FuncExpr, ParseError};
pub use ineq::{
    alt_f_sum, alt_sum, check_generalized, check_szego, check_weinberger, AltSequence, CheckError,
    CheckKind, CheckResult, SequenceError,
};
pub use props::{
    builtin_corpus, pair_violation, propagate, test_convexity, test_pairs, test_w_membership,
    witness_violation, CorpusEntry, GridLayout, GridSpec, MembershipVerdict, PairTest, PairWitness,
    PropTestError, Property, PropertySet, PropertyStatus, Witness,
};
pub use search::{sample_sequences, search_violation, SearchConfig, SearchOutcome, SearchStrategy};
pub use tol::{hybrid_tol, TOL_BASE};
