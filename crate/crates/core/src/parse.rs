//! Text formats.
//!
//! Monomials: `1`, or factors `name` / `name^k` (`k ≥ 1`) joined by `*`,
//! each variable at most once, e.g. `x1^2*x3`.
//!
//! Ideal files: a `ring <n>` header, then one monomial per line. `#` starts
//! a comment that runs to the end of the line; blank lines are ignored. A
//! file with no generator lines is the zero ideal.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::{Monomial, RingContext};
use crate::Exponent;

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, at: usize, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.col0 + at + 1, message)
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.text[start..self.pos]
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn parse_monomial_at(ring: &RingContext, text: &str, line: usize, col0: usize) -> Result<Monomial> {
    let mut cur = Cursor {
        text,
        pos: 0,
        line,
        col0,
    };
    cur.skip_ws();
    if cur.at_end() {
        return Err(cur.err(0, "expected a monomial"));
    }
    let mut exps: Vec<Exponent> = vec![0; ring.nvars()];
    if cur.peek() == Some('1') {
        let start = cur.pos;
        cur.pos += 1;
        cur.skip_ws();
        if !cur.at_end() {
            return Err(cur.err(start, "the unit monomial `1` must stand alone"));
        }
        return Ok(Monomial::new(exps));
    }
    loop {
        cur.skip_ws();
        let start = cur.pos;
        match cur.peek() {
            Some(c) if is_ident_start(c) => {}
            Some(c) => return Err(cur.err(start, format!("expected a variable, found `{c}`"))),
            None => return Err(cur.err(start, "expected a variable after `*`")),
        }
        let name = cur.take_while(is_ident);
        let Some(index) = ring.var_index(name) else {
            return Err(cur.err(start, format!("unknown variable `{name}`")));
        };
        if exps[index - 1] != 0 {
            return Err(cur.err(start, format!("variable `{name}` appears twice")));
        }
        cur.skip_ws();
        let mut power: Exponent = 1;
        if cur.peek() == Some('^') {
            cur.pos += 1;
            cur.skip_ws();
            let at = cur.pos;
            let digits = cur.take_while(|c| c.is_ascii_digit());
            power = match digits.parse::<Exponent>() {
                Ok(p) if p >= 1 => p,
                _ => {
                    let shown = if digits.is_empty() {
                        cur.peek()
                            .map_or("end of line".to_string(), |c| format!("`{c}`"))
                    } else {
                        format!("`{digits}`")
                    };
                    return Err(cur.err(
                        at,
                        format!("malformed exponent {shown}: expected a positive integer"),
                    ));
                }
            };
            cur.skip_ws();
        }
        exps[index - 1] = power;
        match cur.peek() {
            None => break,
            Some('*') => cur.pos += 1,
            Some(c) => return Err(cur.err(cur.pos, format!("unexpected `{c}`"))),
        }
    }
    Ok(Monomial::new(exps))
}

pub fn parse_monomial(ring: &RingContext, text: &str) -> Result<Monomial> {
    parse_monomial_at(ring, text, 1, 0)
}

/// Parses the ideal file format into a minimalized ideal.
pub fn parse_ideal(text: &str) -> Result<MonomialIdeal> {
    let mut ring: Option<Arc<RingContext>> = None;
    let mut gens = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        let indent = content.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        let is_header =
            trimmed == "ring" || trimmed.starts_with("ring ") || trimmed.starts_with("ring\t");
        if is_header {
            if ring.is_some() {
                return Err(Error::parse(line, indent + 1, "duplicate ring header"));
            }
            let arg = trimmed["ring".len()..].trim();
            let arg_col = indent + trimmed.find(arg).unwrap_or(4) + 1;
            let n: usize = arg.parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
                Error::parse(
                    line,
                    arg_col,
                    format!("expected a variable count >= 1, found `{arg}`"),
                )
            })?;
            ring = Some(Arc::new(RingContext::new(n)?));
            continue;
        }
        let Some(r) = &ring else {
            return Err(Error::parse(
                line,
                indent + 1,
                "expected `ring <n>` before the first generator",
            ));
        };
        gens.push(parse_monomial_at(r, trimmed, line, indent)?);
    }
    let ring =
        ring.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `ring <n>` header"))?;
    Ok(MonomialIdeal::minimalize(ring, gens))
}

/// Renders an ideal in the ideal file format.
pub fn ideal_to_file_string(ideal: &MonomialIdeal) -> String {
    let mut out = format!("ring {}\n", ideal.nvars());
    if ideal.is_zero() {
        return out;
    }
    for g in ideal.gen_strings() {
        out.push_str(&g);
        out.push('\n');
    }
    out
}

/// JSON form of an ideal.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IdealJson {
    pub ring: usize,
    pub variables: Vec<String>,
    pub generators: Vec<String>,
}

impl IdealJson {
    pub fn new(ideal: &MonomialIdeal) -> Self {
        IdealJson {
            ring: ideal.nvars(),
            variables: ideal.ring().names().to_vec(),
            generators: if ideal.is_zero() {
                Vec::new()
            } else {
                ideal.gen_strings()
            },
        }
    }

    pub fn to_ideal(&self) -> Result<MonomialIdeal> {
        let ring = RingContext::with_names(self.variables.clone())?;
        if ring.nvars() != self.ring {
            return Err(Error::InvalidRing(format!(
                "ring {} does not match {} variable names",
                self.ring,
                ring.nvars()
            )));
        }
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| parse_monomial_at(&ring, g, k + 1, 0))
            .collect::<Result<Vec<_>>>()?;
        Ok(MonomialIdeal::minimalize(Arc::new(ring), gens))
    }
}

pub fn ideal_to_json(ideal: &MonomialIdeal) -> serde_json::Value {
    serde_json::to_value(IdealJson::new(ideal)).expect("plain data serializes")
}

pub fn ideal_from_json(value: &serde_json::Value) -> Result<MonomialIdeal> {
    let parsed: IdealJson = serde_json::from_value(value.clone())
        .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
    parsed.to_ideal()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_examples() {
        let i = parse_ideal("ring 2\nx1^2\nx1*x2").unwrap();
        assert_eq!(i, MonomialIdeal::from_exponents(2, &[&[2, 0], &[1, 1]]));
        let i = parse_ideal("ring 3\n# comment\nx2*x3^2").unwrap();
        assert_eq!(i, MonomialIdeal::from_exponents(3, &[&[0, 1, 2]]));
        match parse_ideal("ring 2\nx5") {
            Err(Error::Parse {
                line,
                column,
                message,
            }) => {
                assert_eq!((line, column), (2, 1));
                assert!(message.contains("unknown variable"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn error_positions() {
        let cases = [
            ("ring 2\nx1^0", 2, 4, "malformed exponent"),
            ("ring 2\nx1^", 2, 4, "malformed exponent"),
            ("ring 2\nx1^a", 2, 4, "malformed exponent"),
            ("ring 2\n  x1*x1", 2, 6, "appears twice"),
            ("ring 2\nring 3", 2, 1, "duplicate ring header"),
            ("x1", 1, 1, "before the first generator"),
            ("", 1, 1, "missing"),
            ("ring 0", 1, 6, "variable count"),
            ("ring 2\nx1 x2", 2, 4, "unexpected"),
            ("ring 2\nx1*", 2, 4, "expected a variable"),
            ("ring 2\n1*x1", 2, 1, "must stand alone"),
        ];
        for (text, line, column, needle) in cases {
            match parse_ideal(text) {
                Err(Error::Parse {
                    line: l,
                    column: c,
                    message,
                }) => {
                    assert_eq!((l, c), (line, column), "{text:?}: {message}");
                    assert!(message.contains(needle), "{text:?}: {message}");
                }
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn zero_and_unit_files() {
        let z = parse_ideal("ring 3\n# nothing\n\n").unwrap();
        assert!(z.is_zero());
        let s = parse_ideal("ring 2\n1\nx1").unwrap();
        assert!(s.is_improper());
        let i = parse_ideal("ring 2 # two vars\n x1 ^ 2 * x2  # tail\n").unwrap();
        assert_eq!(i, MonomialIdeal::from_exponents(2, &[&[2, 1]]));
    }

    #[test]
    fn writer_round_trip() {
        let i = MonomialIdeal::from_exponents(3, &[&[2, 0, 0], &[1, 1, 0], &[0, 0, 4]]);
        let text = ideal_to_file_string(&i);
        assert_eq!(text, "ring 3\nx1^2\nx1*x2\nx3^4\n");
        assert_eq!(parse_ideal(&text).unwrap(), i);
        let z = MonomialIdeal::from_exponents(2, &[]);
        assert_eq!(parse_ideal(&ideal_to_file_string(&z)).unwrap(), z);
    }

    #[test]
    fn json_round_trip() {
        let i = MonomialIdeal::from_exponents(2, &[&[2, 0], &[1, 1]]);
        let v = ideal_to_json(&i);
        assert_eq!(v["generators"], serde_json::json!(["x1^2", "x1*x2"]));
        assert_eq!(ideal_from_json(&v).unwrap(), i);
        let bad = serde_json::json!({"ring": 3, "variables": ["x1", "x2"], "generators": []});
        assert!(ideal_from_json(&bad).is_err());
    }
}
