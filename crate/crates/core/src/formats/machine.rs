//! Machine descriptions.
//!
//! ```text
//! states: q0 qY qN
//! input_alphabet: 1 0
//! tape_alphabet: _ 1 0
//! blank: _
//! initial: q0
//! accept: qY
//! reject: qN
//! trans: q0 1 -> qY 1 R
//! ```
//!
//! Header sections may come in any order, each exactly once. Repeated
//! `trans` lines with the same state and symbol make the machine
//! nondeterministic. Blank lines and lines starting with `#` are ignored.
//! The blank is moved to the front of the tape alphabet.

use std::collections::BTreeMap;

use super::{numbered_lines, tokens, FormatError, SourceLocation};
use crate::machine::{Action, Machine, Move, StateId, Symbol};

const SECTIONS: [&str; 7] = [
    "states",
    "input_alphabet",
    "tape_alphabet",
    "blank",
    "initial",
    "accept",
    "reject",
];

struct Line<'a> {
    at: SourceLocation,
    values: Vec<(usize, &'a str)>,
    line: usize,
}

impl Line<'_> {
    fn loc(&self, column: usize) -> SourceLocation {
        SourceLocation::new(self.line, column)
    }

    fn single(&self, section: &str) -> Result<(usize, &str), FormatError> {
        match self.values.as_slice() {
            [one] => Ok(*one),
            _ => Err(FormatError::Syntax {
                at: self.at,
                message: format!("`{section}` takes exactly one name"),
            }),
        }
    }
}

pub fn parse_machine(text: &str) -> Result<Machine, FormatError> {
    let mut sections: BTreeMap<&str, Line> = BTreeMap::new();
    let mut trans_lines = Vec::new();
    for (n, raw) in numbered_lines(text) {
        let toks = tokens(raw);
        let Some(&(col, first)) = toks.first() else {
            continue;
        };
        if first.starts_with('#') {
            continue;
        }
        let at = SourceLocation::new(n, col);
        let Some(key) = first.strip_suffix(':') else {
            return Err(FormatError::Syntax {
                at,
                message: format!("expected `<section>:`, found `{first}`"),
            });
        };
        let line = Line {
            at,
            values: toks[1..].to_vec(),
            line: n,
        };
        if key == "trans" {
            trans_lines.push(line);
        } else if SECTIONS.contains(&key) {
            if sections.contains_key(key) {
                return Err(FormatError::Syntax {
                    at,
                    message: format!("section `{key}` repeated"),
                });
            }
            sections.insert(SECTIONS.iter().find(|s| **s == key).unwrap(), line);
        } else {
            return Err(FormatError::Syntax {
                at,
                message: format!("unknown section `{key}`"),
            });
        }
    }
    let section = |name: &'static str| sections.get(name).ok_or(FormatError::MissingSection(name));

    let states_line = section("states")?;
    let mut states: Vec<String> = Vec::new();
    for &(col, name) in &states_line.values {
        check_name(states_line.loc(col), name)?;
        if states.iter().any(|s| s == name) {
            return Err(FormatError::DuplicateState {
                at: states_line.loc(col),
                name: name.to_owned(),
            });
        }
        states.push(name.to_owned());
    }
    if states.is_empty() {
        return Err(FormatError::Syntax {
            at: states_line.at,
            message: "no states declared".into(),
        });
    }

    let tape_line = section("tape_alphabet")?;
    let mut tape: Vec<String> = Vec::new();
    for &(col, name) in &tape_line.values {
        check_name(tape_line.loc(col), name)?;
        if tape.iter().any(|s| s == name) {
            return Err(FormatError::Syntax {
                at: tape_line.loc(col),
                message: format!("duplicate tape symbol `{name}`"),
            });
        }
        tape.push(name.to_owned());
    }
    let blank_line = section("blank")?;
    let (blank_col, blank) = blank_line.single("blank")?;
    let Some(blank_pos) = tape.iter().position(|s| s == blank) else {
        return Err(FormatError::UnknownSymbol {
            at: blank_line.loc(blank_col),
            name: blank.to_owned(),
        });
    };
    let blank_name = tape.remove(blank_pos);
    tape.insert(0, blank_name);

    let symbol = |at: SourceLocation, name: &str| {
        tape.iter()
            .position(|s| s == name)
            .map(Symbol)
            .ok_or_else(|| FormatError::UnknownSymbol {
                at,
                name: name.to_owned(),
            })
    };
    let state = |at: SourceLocation, name: &str| {
        states
            .iter()
            .position(|s| s == name)
            .map(StateId)
            .ok_or_else(|| FormatError::UnknownSymbol {
                at,
                name: name.to_owned(),
            })
    };

    let input_line = section("input_alphabet")?;
    let mut input = Vec::new();
    for &(col, name) in &input_line.values {
        let at = input_line.loc(col);
        let s = symbol(at, name)?;
        if s.is_blank() {
            return Err(FormatError::BlankInInputAlphabet { at });
        }
        if input.contains(&s) {
            return Err(FormatError::Syntax {
                at,
                message: format!("duplicate input symbol `{name}`"),
            });
        }
        input.push(s);
    }

    let role = |name: &'static str| -> Result<(StateId, SourceLocation), FormatError> {
        let line = section(name)?;
        let (col, value) = line.single(name)?;
        Ok((state(line.loc(col), value)?, line.loc(col)))
    };
    let (initial, initial_at) = role("initial")?;
    let (accept, _) = role("accept")?;
    let (reject, reject_at) = role("reject")?;
    if accept == reject {
        return Err(FormatError::InvalidMachine {
            at: reject_at,
            message: "accept and reject must be different states".into(),
        });
    }
    if initial == accept || initial == reject {
        return Err(FormatError::InvalidMachine {
            at: initial_at,
            message: "the initial state cannot be a halting state".into(),
        });
    }

    let mut transitions: BTreeMap<(StateId, Symbol), Vec<Action>> = BTreeMap::new();
    for line in &trans_lines {
        let v = &line.values;
        if v.len() != 6 || v[2].1 != "->" {
            return Err(FormatError::Syntax {
                at: line.at,
                message: "expected `trans: <state> <symbol> -> <state> <symbol> <L|R|S>`".into(),
            });
        }
        let from = state(line.loc(v[0].0), v[0].1)?;
        let read = symbol(line.loc(v[1].0), v[1].1)?;
        let next = state(line.loc(v[3].0), v[3].1)?;
        let write = symbol(line.loc(v[4].0), v[4].1)?;
        let movement = match v[5].1 {
            "L" => Move::Left,
            "R" => Move::Right,
            "S" => Move::Stay,
            other => {
                return Err(FormatError::Syntax {
                    at: line.loc(v[5].0),
                    message: format!("move must be L, R or S, found `{other}`"),
                })
            }
        };
        if from == accept || from == reject {
            return Err(FormatError::InvalidMachine {
                at: line.loc(v[0].0),
                message: format!("halting state `{}` cannot have transitions", v[0].1),
            });
        }
        let action = Action {
            next,
            write,
            movement,
        };
        let entry = transitions.entry((from, read)).or_default();
        if entry.contains(&action) {
            return Err(FormatError::InvalidMachine {
                at: line.at,
                message: "duplicate transition".into(),
            });
        }
        entry.push(action);
    }

    Machine::new(tape, input, states, initial, accept, reject, transitions).map_err(|e| {
        FormatError::InvalidMachine {
            at: states_line.at,
            message: e.to_string(),
        }
    })
}

fn check_name(at: SourceLocation, name: &str) -> Result<(), FormatError> {
    if name == "->" || name.ends_with(':') || name.starts_with('#') {
        return Err(FormatError::Syntax {
            at,
            message: format!("`{name}` cannot be used as a name"),
        });
    }
    Ok(())
}

fn section_line(out: &mut String, key: &str, names: impl IntoIterator<Item = impl AsRef<str>>) {
    out.push_str(key);
    out.push(':');
    for n in names {
        out.push(' ');
        out.push_str(n.as_ref());
    }
    out.push('\n');
}

pub fn emit_machine(m: &Machine) -> String {
    let mut out = String::new();
    section_line(&mut out, "states", m.states());
    section_line(
        &mut out,
        "input_alphabet",
        m.input_alphabet().iter().map(|&s| m.symbol_name(s)),
    );
    section_line(&mut out, "tape_alphabet", m.tape_alphabet());
    section_line(&mut out, "blank", [m.symbol_name(Symbol::BLANK)]);
    section_line(&mut out, "initial", [m.state_name(m.initial())]);
    section_line(&mut out, "accept", [m.state_name(m.accept())]);
    section_line(&mut out, "reject", [m.state_name(m.reject())]);
    for (&(state, read), actions) in m.transitions() {
        for a in actions {
            out.push_str(&format!(
                "trans: {} {} -> {} {} {}\n",
                m.state_name(state),
                m.symbol_name(read),
                m.state_name(a.next),
                m.symbol_name(a.write),
                a.movement.letter()
            ));
        }
    }
    out
}
