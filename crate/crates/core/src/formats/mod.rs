//! Text formats for every on-disk artifact. All formats are line oriented,
//! UTF-8, `\n`-terminated, and every parser reports the 1-based line and
//! column of the first problem it finds.

mod derivation;
mod dimacs;
mod machine;
mod presentation;
mod solution;
mod varmap;

use std::fmt;

use thiserror::Error;

pub use derivation::{emit_derivation, parse_derivation};
pub use dimacs::{emit_dimacs, emit_dimacs_annotated, parse_dimacs};
pub use machine::{emit_machine, parse_machine};
pub use presentation::{emit_presentation, parse_presentation};
pub use solution::{emit_solution, parse_solution};
pub use varmap::{emit_varmap, parse_varmap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceLocation {
    pub line: usize,
    pub column: usize,
}

impl SourceLocation {
    pub fn new(line: usize, column: usize) -> SourceLocation {
        SourceLocation { line, column }
    }
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("{at}: syntax error: {message}")]
    Syntax { at: SourceLocation, message: String },
    #[error("{at}: unknown symbol `{name}`")]
    UnknownSymbol { at: SourceLocation, name: String },
    #[error("{at}: duplicate state `{name}`")]
    DuplicateState { at: SourceLocation, name: String },
    #[error("missing section `{0}`")]
    MissingSection(&'static str),
    #[error("{at}: the blank symbol cannot be an input symbol")]
    BlankInInputAlphabet { at: SourceLocation },
    #[error("{at}: {message}")]
    InvalidMachine { at: SourceLocation, message: String },
    #[error("{at}: malformed header: {message}")]
    MalformedHeader { at: SourceLocation, message: String },
    #[error("{at}: literal {literal} out of range 1..={nvars}")]
    LiteralOutOfRange {
        at: SourceLocation,
        literal: i64,
        nvars: u32,
    },
    #[error("{at}: clause is not terminated by 0")]
    MissingTerminator { at: SourceLocation },
    #[error("{at}: header declares {declared} clauses, found {found}")]
    ClauseCount {
        at: SourceLocation,
        declared: usize,
        found: usize,
    },
    #[error("{at}: duplicate variable number {var}")]
    DuplicateVarnum { at: SourceLocation, var: u32 },
    #[error("{at}: duplicate coordinate {coord}")]
    DuplicateCoordinate { at: SourceLocation, coord: String },
    #[error("{at}: malformed line: {message}")]
    MalformedLine { at: SourceLocation, message: String },
    #[error("{at}: relation side is empty")]
    EmptyRelationSide { at: SourceLocation },
    #[error("{at}: unknown generator `{name}`")]
    UnknownGenerator { at: SourceLocation, name: String },
    #[error("{at}: malformed step: {message}")]
    MalformedStep { at: SourceLocation, message: String },
    #[error("{at}: position {position} out of range for a word of length {len}")]
    PositionOutOfRange {
        at: SourceLocation,
        position: usize,
        len: usize,
    },
}

/// Splits a line into whitespace-separated tokens with their 1-based columns.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..idx]));
                start = None;
            }
            (false, None) => start = Some(idx),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

/// Lines with their 1-based numbers.
pub(crate) fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l))
}
