//! Variable catalog sidecar: one line per variable, ordered by number.
//!
//! ```text
//! 1 Q 0 0
//! 5 H 0 -1
//! 13 S 0 -1 0
//! ```
//!
//! The tableau bounds are recovered from the largest time, state and symbol
//! indices present.

use super::{numbered_lines, tokens, FormatError, SourceLocation};
use crate::cnf::{Coord, VarCatalog};

pub fn emit_varmap(cat: &VarCatalog) -> String {
    let mut out = String::new();
    for (n, c) in cat.coords().iter().enumerate() {
        let line = match *c {
            Coord::Q { i, k } => format!("{} Q {i} {k}\n", n + 1),
            Coord::H { i, j } => format!("{} H {i} {j}\n", n + 1),
            Coord::S { i, j, k } => format!("{} S {i} {j} {k}\n", n + 1),
        };
        out.push_str(&line);
    }
    out
}

pub fn parse_varmap(text: &str) -> Result<VarCatalog, FormatError> {
    let mut entries: Vec<(u32, Coord, SourceLocation)> = Vec::new();
    for (n, line) in numbered_lines(text) {
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let at = SourceLocation::new(n, toks[0].0);
        let malformed = |message: &str| FormatError::MalformedLine {
            at,
            message: message.to_owned(),
        };
        let fields: Vec<&str> = toks.iter().map(|t| t.1).collect();
        let num = |s: &str| s.parse::<u32>().map_err(|_| malformed("expected a natural number"));
        let cell = |s: &str| s.parse::<i64>().map_err(|_| malformed("expected a cell index"));
        let (var, coord) = match fields.as_slice() {
            [v, "Q", i, k] => (num(v)?, Coord::Q { i: num(i)?, k: num(k)? }),
            [v, "H", i, j] => (num(v)?, Coord::H { i: num(i)?, j: cell(j)? }),
            [v, "S", i, j, k] => (
                num(v)?,
                Coord::S {
                    i: num(i)?,
                    j: cell(j)?,
                    k: num(k)?,
                },
            ),
            _ => return Err(malformed("expected `<var> Q i k`, `<var> H i j` or `<var> S i j k`")),
        };
        if var == 0 {
            return Err(malformed("variable numbers start at 1"));
        }
        entries.push((var, coord, at));
    }
    let (mut p, mut r, mut v) = (0u32, 0u32, 0u32);
    for (_, c, _) in &entries {
        match *c {
            Coord::Q { i, k } => {
                p = p.max(i);
                r = r.max(k);
            }
            Coord::H { i, .. } => p = p.max(i),
            Coord::S { i, k, .. } => {
                p = p.max(i);
                v = v.max(k);
            }
        }
    }
    let mut slots: Vec<Option<Coord>> = vec![None; entries.len()];
    let mut seen = std::collections::HashSet::new();
    for &(var, coord, at) in &entries {
        let Some(slot) = slots.get_mut(var as usize - 1) else {
            return Err(FormatError::MalformedLine {
                at,
                message: format!("variable {var} leaves a gap in 1..={}", entries.len()),
            });
        };
        if slot.is_some() {
            return Err(FormatError::DuplicateVarnum { at, var });
        }
        if !seen.insert(coord) {
            return Err(FormatError::DuplicateCoordinate {
                at,
                coord: coord.to_string(),
            });
        }
        *slot = Some(coord);
    }
    let coords: Vec<Coord> = slots.into_iter().map(|c| c.expect("every slot filled")).collect();
    VarCatalog::from_coords(p, r, v, coords).map_err(|e| {
        let at = entries.first().map(|e| e.2).unwrap_or(SourceLocation::new(1, 1));
        FormatError::MalformedLine {
            at,
            message: e.to_string(),
        }
    })
}
