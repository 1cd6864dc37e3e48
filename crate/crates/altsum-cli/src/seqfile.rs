//! Sequence inputs: comma-separated decimals, one sequence per line in
//! files, with `#` comments.

use std::path::Path;

use altsum_core::AltSequence;
use anyhow::{bail, Context, Result};

/// Parses one comma-separated sequence like `"4.6, 3.1, 2.8, 1.2"`.
pub fn parse_sequence(text: &str) -> Result<AltSequence> {
    let mut values = Vec::new();
    for (i, field) in text.split(',').enumerate() {
        let field = field.trim();
        if field.is_empty() {
            bail!("entry {i} is empty");
        }
        let v: f64 = field
            .parse()
            .with_context(|| format!("entry {i} ({field:?}) is not a number"))?;
        values.push(v);
    }
    AltSequence::new(values).map_err(|e| anyhow::anyhow!("inadmissible sequence: {e}"))
}

/// Loads sequences from a file: one per line, `#` starts a comment,
/// blank lines are skipped.
pub fn load_sequences(path: &Path) -> Result<Vec<AltSequence>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut sequences = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let seq =
            parse_sequence(line).with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        sequences.push(seq);
    }
    Ok(sequences)
}
