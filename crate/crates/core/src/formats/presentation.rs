//! Semigroup presentations.
//!
//! ```text
//! generators: a0 a1 v
//! rel: a0 v == v
//! ```

use super::{numbered_lines, tokens, FormatError, SourceLocation};
use crate::postmarkov::{CalculusError, Gen, Presentation, Word};

pub fn emit_presentation(p: &Presentation) -> String {
    let mut out = String::from("generators:");
    for g in p.generators() {
        out.push(' ');
        out.push_str(&g.name);
    }
    out.push('\n');
    for r in p.relations() {
        out.push_str(&format!("rel: {} == {}\n", p.format_word(&r.lhs), p.format_word(&r.rhs)));
    }
    out
}

pub fn parse_presentation(text: &str) -> Result<Presentation, FormatError> {
    let mut names: Option<(Vec<String>, SourceLocation)> = None;
    let mut relations = Vec::new();
    for (n, line) in numbered_lines(text) {
        let toks = tokens(line);
        let Some(&(col, key)) = toks.first() else {
            continue;
        };
        let at = SourceLocation::new(n, col);
        match (key, &names) {
            ("generators:", None) => {
                names = Some((toks[1..].iter().map(|t| t.1.to_owned()).collect(), at));
            }
            ("generators:", Some(_)) => {
                return Err(FormatError::Syntax {
                    at,
                    message: "second `generators:` line".into(),
                })
            }
            ("rel:", Some((gens, _))) => {
                let body = &toks[1..];
                let eq: Vec<usize> = body
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| t.1 == "==")
                    .map(|(i, _)| i)
                    .collect();
                let [split] = eq.as_slice() else {
                    return Err(FormatError::Syntax {
                        at,
                        message: "a relation needs exactly one `==`".into(),
                    });
                };
                let side = |part: &[(usize, &str)], at_side: SourceLocation| -> Result<Word, FormatError> {
                    if part.is_empty() {
                        return Err(FormatError::EmptyRelationSide { at: at_side });
                    }
                    let gens = part
                        .iter()
                        .map(|&(c, t)| {
                            gens.iter().position(|g| g == t).map(Gen).ok_or_else(|| {
                                FormatError::UnknownGenerator {
                                    at: SourceLocation::new(n, c),
                                    name: t.to_owned(),
                                }
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(Word::new(gens).expect("non-empty side"))
                };
                let eq_at = SourceLocation::new(n, body[*split].0);
                let lhs = side(&body[..*split], eq_at)?;
                let rhs = side(&body[split + 1..], eq_at)?;
                relations.push((lhs, rhs));
            }
            ("rel:", None) => {
                return Err(FormatError::Syntax {
                    at,
                    message: "relation before the `generators:` line".into(),
                })
            }
            _ => {
                return Err(FormatError::Syntax {
                    at,
                    message: format!("expected `generators:` or `rel:`, found `{key}`"),
                })
            }
        }
    }
    let Some((gens, at)) = names else {
        return Err(FormatError::Syntax {
            at: SourceLocation::new(1, 1),
            message: "missing `generators:` line".into(),
        });
    };
    Presentation::new(gens, relations).map_err(|e| match e {
        CalculusError::BadGeneratorName(name) => FormatError::Syntax {
            at,
            message: format!("invalid or repeated generator `{name}`"),
        },
        other => FormatError::Syntax {
            at,
            message: other.to_string(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::postmarkov::{build_calculus, RelationTag};

    #[test]
    fn padding_presentation() {
        let p = parse_presentation("generators: a0 v\nrel: a0 v == v\n").unwrap();
        assert_eq!(p.generators().len(), 2);
        assert_eq!(p.relations().len(), 1);
        assert_eq!(p.relations()[0].tag, RelationTag::BlankPadding);
    }

    #[test]
    fn empty_side() {
        assert!(matches!(
            parse_presentation("generators: a0 v\nrel: a0 v ==\n"),
            Err(FormatError::EmptyRelationSide { .. })
        ));
        assert!(matches!(
            parse_presentation("generators: a0 v\nrel: == v\n"),
            Err(FormatError::EmptyRelationSide { .. })
        ));
    }

    #[test]
    fn unknown_generator() {
        match parse_presentation("generators: a0 v\nrel: a0 x == v\n") {
            Err(FormatError::UnknownGenerator { at, name }) => {
                assert_eq!(name, "x");
                assert_eq!(at, SourceLocation::new(2, 9));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn calculus_round_trip() {
        let p = build_calculus(&corpus::parity()).unwrap();
        let text = emit_presentation(&p);
        assert_eq!(parse_presentation(&text).unwrap(), p);
    }

    #[test]
    fn malformed() {
        assert!(parse_presentation("rel: a == b\n").is_err());
        assert!(parse_presentation("generators: a v\nrel: a v v\n").is_err());
        assert!(parse_presentation("generators: a a v\n").is_err());
        assert!(parse_presentation("").is_err());
    }
}
