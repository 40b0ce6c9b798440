//! `.eq` and `.nar` text formats.
//!
//! Both formats are line based. `#` starts a comment that runs to the end of
//! the line, blank lines are ignored and CRLF line endings are accepted.
//! Serialization emits LF and single spaces between terms.

use crate::error::Error;
use crate::word::{Equation, Narrowing, NarrowingProgram, Term, Var, Word};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Lines with comments removed, numbered from 1, blank ones dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        let line = line.strip_suffix('\r').unwrap_or(line);
        (!line.trim().is_empty()).then_some((i + 1, line))
    })
}

/// Parses one equation per line.
pub fn parse_system(text: &str) -> Result<Vec<Equation>, Error> {
    let mut system = Vec::new();
    for (line_no, line) in content_lines(text) {
        system.push(parse_equation_line(line_no, line)?);
    }
    if system.is_empty() {
        return Err(parse_error(1, 1, "no equation found"));
    }
    Ok(system)
}

fn parse_equation_line(line_no: usize, line: &str) -> Result<Equation, Error> {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    let mut seen_eq = false;
    for (i, c) in line.chars().enumerate() {
        let column = i + 1;
        if c.is_whitespace() {
            continue;
        }
        if c == '=' {
            if seen_eq {
                return Err(parse_error(line_no, column, "duplicate '='"));
            }
            seen_eq = true;
            continue;
        }
        let term = Term::from_char(c)
            .ok_or_else(|| parse_error(line_no, column, format!("illegal character '{c}'")))?;
        if seen_eq {
            rhs.push(term);
        } else {
            lhs.push(term);
        }
    }
    if !seen_eq {
        let column = line.chars().count() + 1;
        return Err(parse_error(line_no, column, "missing '='"));
    }
    Ok(Equation::new(Word::from_terms(lhs), Word::from_terms(rhs)))
}

/// Parses one narrowing per line: `x ->`, `x -> A x` or `x -> y x`.
pub fn parse_program(text: &str) -> Result<NarrowingProgram, Error> {
    content_lines(text)
        .map(|(line_no, line)| parse_narrowing_line(line_no, line))
        .collect::<Result<Vec<_>, _>>()
        .map(NarrowingProgram::new)
}

fn parse_narrowing_line(line_no: usize, line: &str) -> Result<Narrowing, Error> {
    let Some(arrow) = line.find("->") else {
        let column = line.chars().take_while(|c| c.is_whitespace()).count() + 1;
        return Err(parse_error(line_no, column, "expected '->'"));
    };
    let head = match terms_of(line_no, line, 0, arrow)?.as_slice() {
        [(_, Term::Var(x))] => *x,
        _ => {
            return Err(parse_error(
                line_no,
                1,
                "left of '->' must be a single variable",
            ))
        }
    };
    let tail = terms_of(line_no, line, arrow + 2, line.len())?;
    match tail.as_slice() {
        [] => Ok(Narrowing::to_eps(head)),
        [(_, first), (column, last)] => {
            if *last != Term::Var(head) {
                return Err(parse_error(
                    line_no,
                    *column,
                    format!("trailing term must be the head variable '{head}'"),
                ));
            }
            match *first {
                Term::Letter(a) => Ok(Narrowing::to_letter(head, a)),
                Term::Var(y) if y == head => Err(parse_error(
                    line_no,
                    tail[0].0,
                    format!("'{head} -> {head} {head}' prepends a variable to itself"),
                )),
                Term::Var(y) => Narrowing::to_var(head, y),
            }
        }
        _ => {
            let column = line[..arrow].chars().count() + 3;
            Err(parse_error(
                line_no,
                column,
                "right of '->' must be empty or two terms",
            ))
        }
    }
}

/// Terms of `line[from..to]` with their 1-based columns.
fn terms_of(
    line_no: usize,
    line: &str,
    from: usize,
    to: usize,
) -> Result<Vec<(usize, Term)>, Error> {
    let base = line[..from].chars().count() + 1;
    line[from..to]
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| {
            Term::from_char(c)
                .map(|t| (base + i, t))
                .ok_or_else(|| parse_error(line_no, base + i, format!("illegal character '{c}'")))
        })
        .collect()
}

pub fn serialize_system(system: &[Equation]) -> String {
    system
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn serialize_program(program: &NarrowingProgram) -> String {
    program.to_string()
}

/// Parses a single variable name such as `x`.
pub fn parse_var(text: &str) -> Result<Var, Error> {
    let mut chars = text.trim().chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Var::new(c),
        _ => Err(Error::InvalidTerm(text.chars().next().unwrap_or(' '))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Letter;

    fn eq(l: &str, r: &str) -> Equation {
        Equation::parse(l, r).unwrap()
    }

    #[test]
    fn parses_equations() {
        assert_eq!(
            parse_system("x A y = y A x").unwrap(),
            vec![eq("xAy", "yAx")]
        );
        assert_eq!(parse_system("=").unwrap(), vec![Equation::trivial()]);
        assert_eq!(
            parse_system("# header\r\n\r\nxy = yx # tail\r\nA=A\r\n").unwrap(),
            vec![eq("xy", "yx"), eq("A", "A")]
        );
    }

    #[test]
    fn reports_positions() {
        let err = parse_system("x$y = y").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 1,
                column: 2,
                message: "illegal character '$'".into()
            }
        );

        match parse_system("x = y\n\nxy yx").unwrap_err() {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("missing"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_system("x = y = z").unwrap_err() {
            Error::Parse {
                line: 1,
                column: 7,
                message,
            } => assert!(message.contains("duplicate")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_system("# only a comment\n\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse_system(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn parses_programs() {
        let x = Var::new('x').unwrap();
        let y = Var::new('y').unwrap();
        let a = Letter::new('A').unwrap();
        assert_eq!(
            parse_program("x -> A x\nx ->").unwrap(),
            NarrowingProgram::new(vec![Narrowing::to_letter(x, a), Narrowing::to_eps(x)])
        );
        assert_eq!(
            parse_program("y -> x y").unwrap(),
            NarrowingProgram::new(vec![Narrowing::to_var(y, x).unwrap()])
        );
        assert_eq!(
            parse_program("# nothing\n").unwrap(),
            NarrowingProgram::default()
        );
    }

    #[test]
    fn rejects_bad_programs() {
        for bad in [
            "x -> x x",
            "x => A x",
            "x -> A y",
            "x -> A",
            "X -> A X",
            "xy -> A x",
            "x -> A B x",
            "x -> $ x",
        ] {
            assert!(
                matches!(parse_program(bad), Err(Error::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn serializes_canonically() {
        assert_eq!(serialize_system(&[Equation::trivial()]), "=");
        assert_eq!(
            serialize_system(&[eq("yBz", "zy"), eq("xxA", "Axx")]),
            "y B z = z y\nx x A = A x x"
        );
        let x = Var::new('x').unwrap();
        assert_eq!(
            serialize_program(&NarrowingProgram::new(vec![Narrowing::to_eps(x)])),
            "x ->"
        );
    }

    #[test]
    fn round_trips_fixed_values() {
        let sys = vec![eq("", "AB"), eq("xy", ""), eq("xAy", "yAx")];
        assert_eq!(parse_system(&serialize_system(&sys)).unwrap(), sys);
        let text = "x  A= y\n";
        let once = serialize_system(&parse_system(text).unwrap());
        assert_eq!(serialize_system(&parse_system(&once).unwrap()), once);
    }
}
