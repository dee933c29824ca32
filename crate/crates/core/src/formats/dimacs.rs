//! DIMACS CNF: `p cnf <nvars> <nclauses>`, then one clause per line as
//! signed literals terminated by ` 0`. Comment lines start with `c`.

use super::{numbered_lines, tokens, FormatError, SourceLocation};
use crate::cnf::{Clause, CnfInstance, Literal};

pub fn emit_dimacs(f: &CnfInstance) -> String {
    emit_dimacs_annotated(f, &[])
}

/// DIMACS with `c <comment>` lines ahead of the header.
pub fn emit_dimacs_annotated(f: &CnfInstance, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("c ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!("p cnf {} {}\n", f.nvars(), f.len()));
    for clause in f.clauses() {
        for l in clause.literals() {
            out.push_str(&l.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<CnfInstance, FormatError> {
    let mut header: Option<(u32, usize, SourceLocation)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut pending_at = SourceLocation::new(1, 1);
    let mut last = SourceLocation::new(1, 1);
    for (n, line) in numbered_lines(text) {
        let toks = tokens(line);
        let Some(&(col, first)) = toks.first() else {
            continue;
        };
        let at = SourceLocation::new(n, col);
        last = SourceLocation::new(n, line.chars().count() + 1);
        if first.starts_with('c') {
            continue;
        }
        if first == "p" {
            if header.is_some() {
                return Err(FormatError::MalformedHeader {
                    at,
                    message: "second header line".into(),
                });
            }
            let fields: Vec<&str> = toks.iter().map(|t| t.1).collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", nv, nc] => nv.parse::<u32>().ok().zip(nc.parse::<usize>().ok()),
                _ => None,
            };
            let Some((nvars, nclauses)) = parsed else {
                return Err(FormatError::MalformedHeader {
                    at,
                    message: "expected `p cnf <nvars> <nclauses>`".into(),
                });
            };
            header = Some((nvars, nclauses, at));
            continue;
        }
        let Some((nvars, _, _)) = header else {
            return Err(FormatError::MalformedHeader {
                at,
                message: "clause before the `p cnf` header".into(),
            });
        };
        for &(col, tok) in &toks {
            let at = SourceLocation::new(n, col);
            let value: i64 = tok.parse().map_err(|_| FormatError::Syntax {
                at,
                message: format!("expected an integer literal, found `{tok}`"),
            })?;
            if value == 0 {
                clauses.push(Clause::new(pending.drain(..)));
                continue;
            }
            if pending.is_empty() {
                pending_at = at;
            }
            if value.unsigned_abs() > nvars as u64 {
                return Err(FormatError::LiteralOutOfRange {
                    at,
                    literal: value,
                    nvars,
                });
            }
            pending.push(Literal::from_dimacs(value).expect("nonzero literal"));
        }
    }
    let Some((nvars, declared, header_at)) = header else {
        return Err(FormatError::MalformedHeader {
            at: last,
            message: "missing `p cnf` header".into(),
        });
    };
    if !pending.is_empty() {
        return Err(FormatError::MissingTerminator { at: pending_at });
    }
    if clauses.len() != declared {
        return Err(FormatError::ClauseCount {
            at: header_at,
            declared,
            found: clauses.len(),
        });
    }
    Ok(CnfInstance::new(nvars, clauses).expect("literals checked against the header"))
}
