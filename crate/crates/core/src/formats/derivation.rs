//! Derivation chains. The first line is the start word; every further line
//! is one rewrite step:
//!
//! ```text
//! a0 a0 v
//! -> rel=0 dir=L2R at=1 => a0 v
//! -> rel=0 dir=L2R at=0 => v
//! ```
//!
//! Relation indices and positions are 0-based.

use super::{numbered_lines, tokens, FormatError, SourceLocation};
use crate::postmarkov::{Derivation, Direction, Presentation, RewriteStep, Word};

pub fn emit_derivation(d: &Derivation, p: &Presentation) -> String {
    let mut out = p.format_word(&d.start);
    out.push('\n');
    for s in &d.steps {
        out.push_str(&format!(
            "-> rel={} dir={} at={} => {}\n",
            s.relation,
            s.direction.label(),
            s.position,
            p.format_word(&s.result)
        ));
    }
    out
}

fn word(p: &Presentation, toks: &[(usize, &str)], line: usize) -> Result<Word, FormatError> {
    let gens = toks
        .iter()
        .map(|&(col, t)| {
            p.gen_by_name(t).ok_or_else(|| FormatError::UnknownGenerator {
                at: SourceLocation::new(line, col),
                name: t.to_owned(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Word::new(gens).map_err(|_| FormatError::MalformedStep {
        at: SourceLocation::new(line, 1),
        message: "empty word".into(),
    })
}

/// Parses a derivation. Positions are checked against the previous word's
/// length; whether each step really applies is left to
/// [`crate::postmarkov::verify_derivation`].
pub fn parse_derivation(text: &str, p: &Presentation) -> Result<Derivation, FormatError> {
    let mut start: Option<Word> = None;
    let mut steps: Vec<RewriteStep> = Vec::new();
    for (n, line) in numbered_lines(text) {
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let Some(first) = &start else {
            start = Some(word(p, &toks, n)?);
            continue;
        };
        let at = SourceLocation::new(n, toks[0].0);
        let bad = |message: &str| FormatError::MalformedStep {
            at,
            message: message.to_owned(),
        };
        if toks.len() < 6 || toks[0].1 != "->" || toks[4].1 != "=>" {
            return Err(bad("expected `-> rel=<n> dir=<L2R|R2L> at=<n> => <word>`"));
        }
        let field = |idx: usize, key: &str| {
            toks[idx]
                .1
                .strip_prefix(key)
                .ok_or_else(|| bad(&format!("expected `{key}...`")))
        };
        let relation: usize = field(1, "rel=")?.parse().map_err(|_| bad("bad relation index"))?;
        let direction = match field(2, "dir=")? {
            "L2R" => Direction::LeftToRight,
            "R2L" => Direction::RightToLeft,
            _ => return Err(bad("direction must be L2R or R2L")),
        };
        let position: usize = field(3, "at=")?.parse().map_err(|_| bad("bad position"))?;
        let prev_len = steps.last().map(|s| s.result.len()).unwrap_or(first.len());
        if position >= prev_len {
            return Err(FormatError::PositionOutOfRange {
                at: SourceLocation::new(n, toks[3].0),
                position,
                len: prev_len,
            });
        }
        let result = word(p, &toks[5..], n)?;
        steps.push(RewriteStep {
            relation,
            direction,
            position,
            result,
        });
    }
    let start = start.ok_or(FormatError::MalformedStep {
        at: SourceLocation::new(1, 1),
        message: "missing start word".into(),
    })?;
    Ok(Derivation { start, steps })
}
