//! Solver output: `s SATISFIABLE` or `s UNSATISFIABLE`, then for a model
//! `v` lines of signed literals, the last one terminated by `0`.

use super::{numbered_lines, tokens, FormatError, SourceLocation};
use crate::cnf::Assignment;

const PER_LINE: usize = 10;

pub fn emit_solution(model: Option<&Assignment>) -> String {
    let Some(model) = model else {
        return "s UNSATISFIABLE\n".to_owned();
    };
    let mut out = String::from("s SATISFIABLE\n");
    let lits: Vec<String> = model.literals().map(|l| l.to_dimacs().to_string()).collect();
    for chunk in lits.chunks(PER_LINE) {
        out.push_str("v ");
        out.push_str(&chunk.join(" "));
        out.push('\n');
    }
    out.push_str("v 0\n");
    out
}

/// Returns `None` for an unsatisfiable verdict.
pub fn parse_solution(text: &str) -> Result<Option<Assignment>, FormatError> {
    let mut verdict: Option<bool> = None;
    let mut values: Vec<Option<bool>> = Vec::new();
    let mut terminated = false;
    let mut last = SourceLocation::new(1, 1);
    for (n, line) in numbered_lines(text) {
        let toks = tokens(line);
        let Some(&(col, key)) = toks.first() else {
            continue;
        };
        let at = SourceLocation::new(n, col);
        last = at;
        match key {
            "c" => {}
            "s" => {
                let v = match toks.get(1).map(|t| t.1) {
                    Some("SATISFIABLE") if toks.len() == 2 => true,
                    Some("UNSATISFIABLE") if toks.len() == 2 => false,
                    _ => {
                        return Err(FormatError::MalformedLine {
                            at,
                            message: "expected `s SATISFIABLE` or `s UNSATISFIABLE`".into(),
                        })
                    }
                };
                if verdict.replace(v).is_some() {
                    return Err(FormatError::MalformedLine {
                        at,
                        message: "second status line".into(),
                    });
                }
            }
            "v" if verdict == Some(true) && !terminated => {
                for &(c, t) in &toks[1..] {
                    let at = SourceLocation::new(n, c);
                    let lit: i64 = t.parse().map_err(|_| FormatError::MalformedLine {
                        at,
                        message: format!("bad literal `{t}`"),
                    })?;
                    if lit == 0 {
                        terminated = true;
                        continue;
                    }
                    let var = lit.unsigned_abs() as usize;
                    if values.len() < var {
                        values.resize(var, None);
                    }
                    if values[var - 1].replace(lit > 0).is_some() {
                        return Err(FormatError::DuplicateVarnum { at, var: var as u32 });
                    }
                }
            }
            _ => {
                return Err(FormatError::MalformedLine {
                    at,
                    message: format!("unexpected line starting with `{key}`"),
                })
            }
        }
    }
    match verdict {
        None => Err(FormatError::MalformedLine {
            at: last,
            message: "missing status line".into(),
        }),
        Some(false) => Ok(None),
        Some(true) => {
            if !terminated {
                return Err(FormatError::MissingTerminator { at: last });
            }
            let values = values
                .into_iter()
                .enumerate()
                .map(|(i, v)| {
                    v.ok_or(FormatError::MalformedLine {
                        at: last,
                        message: format!("variable {} has no value", i + 1),
                    })
                })
                .collect::<Result<Vec<bool>, _>>()?;
            Ok(Some(Assignment::from_values(values)))
        }
    }
}
