//! Std companion to `altsum-core`: the JSON report schema, sequence file
//! format, the rayon-backed parallel search driver, and the replication
//! suite behind the `altsum replicate` subcommand.

pub mod parallel;
pub mod replicate;
pub mod report;
pub mod seqfile;
