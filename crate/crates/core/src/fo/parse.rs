//! Prefix syntax:
//!
//! ```text
//! formula := true | false
//!          | (= x y) | (E x y) | (distle x y d) | (NAME x)
//!          | (not formula) | (and formula*) | (or formula*)
//!          | (exists x+ formula) | (forall x+ formula)
//! ```
//!
//! `NAME` is any other identifier, read as a unary predicate (`P0`, `Q2_1`).
//! `;` starts a comment running to the end of the line.

use num_bigint::BigUint;

use super::Formula;
use crate::graph::{GraphError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Word(String),
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.split(';').next().unwrap_or("");
        let mut word = String::new();
        let flush = |word: &mut String, out: &mut Vec<(Token, usize)>| {
            if !word.is_empty() {
                out.push((Token::Word(std::mem::take(word)), line_no));
            }
        };
        for ch in line.chars() {
            match ch {
                '(' | ')' => {
                    flush(&mut word, &mut out);
                    out.push((if ch == '(' { Token::Open } else { Token::Close }, line_no));
                }
                c if c.is_whitespace() => flush(&mut word, &mut out),
                c if c.is_alphanumeric() || "_'=".contains(c) => word.push(c),
                c => {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        }
        flush(&mut word, &mut out);
    }
    Ok(out)
}

const KEYWORDS: [&str; 9] = ["true", "false", "=", "E", "distle", "not", "and", "or", "exists"];

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
        && !KEYWORDS.contains(&s)
        && s != "forall"
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map_or(1, |t| t.1)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(GraphError::Parse {
            line: self.line(),
            message: message.into(),
        })
    }

    fn next(&mut self) -> Result<Token> {
        match self.tokens.get(self.pos) {
            Some((t, _)) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => self.error("unexpected end of input"),
        }
    }

    fn peek_close(&self) -> bool {
        matches!(self.tokens.get(self.pos), Some((Token::Close, _)))
    }

    fn word(&mut self) -> Result<String> {
        match self.next()? {
            Token::Word(w) => Ok(w),
            _ => self.error("expected a name"),
        }
    }

    fn var(&mut self) -> Result<String> {
        let w = self.word()?;
        if !is_identifier(&w) {
            return self.error(format!("`{w}` is not a variable name"));
        }
        Ok(w)
    }

    fn close(&mut self) -> Result<()> {
        match self.next()? {
            Token::Close => Ok(()),
            _ => self.error("expected `)`"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.next()? {
            Token::Word(w) if w == "true" => Ok(Formula::truth()),
            Token::Word(w) if w == "false" => Ok(Formula::falsity()),
            Token::Word(w) => self.error(format!("unexpected `{w}`")),
            Token::Close => self.error("unexpected `)`"),
            Token::Open => {
                let head = self.word()?;
                let f = match head.as_str() {
                    "=" => Formula::Eq(self.var()?, self.var()?),
                    "E" => Formula::Edge(self.var()?, self.var()?),
                    "distle" => {
                        let (x, y) = (self.var()?, self.var()?);
                        let d = self.word()?;
                        let Ok(d) = d.parse::<BigUint>() else {
                            return self.error(format!("`{d}` is not a distance"));
                        };
                        Formula::DistLe(x, y, d)
                    }
                    "not" => Formula::not(self.formula()?),
                    "and" | "or" => {
                        let mut items = Vec::new();
                        while !self.peek_close() {
                            items.push(self.formula()?);
                        }
                        if head == "and" {
                            Formula::and(items)
                        } else {
                            Formula::or(items)
                        }
                    }
                    "exists" | "forall" => {
                        let mut vars = vec![self.var()?];
                        while matches!(self.tokens.get(self.pos), Some((Token::Word(w), _)) if is_identifier(w)) {
                            vars.push(self.var()?);
                        }
                        let mut body = self.formula()?;
                        for v in vars.iter().rev() {
                            body = if head == "exists" {
                                Formula::exists(v, body)
                            } else {
                                Formula::forall(v, body)
                            };
                        }
                        body
                    }
                    name if is_identifier(name) => Formula::Pred(name.to_string(), self.var()?),
                    other => return self.error(format!("unknown operator `{other}`")),
                };
                self.close()?;
                Ok(f)
            }
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if p.pos < p.tokens.len() {
        return p.error("trailing input after formula");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_documented_example() {
        let f = parse_formula("(exists x (and (E x y) (distle x y 4)))").unwrap();
        assert_eq!(
            f,
            Formula::exists("x", Formula::and([Formula::edge("x", "y"), Formula::dist_le("x", "y", 4u32)]))
        );
        assert_eq!(f.to_string(), "(exists x (and (E x y) (distle x y 4)))");
    }

    #[test]
    fn sugar_and_comments() {
        let f = parse_formula("; dominating pair\n(forall y\n  (or (= x1 y) (= x2 y) (E x1 y) (E x2 y)))").unwrap();
        assert_eq!(f.quantifier_rank(), 1);
        let g = parse_formula("(exists x y (P3 x))").unwrap();
        assert_eq!(g, Formula::exists("x", Formula::exists("y", Formula::pred("P3", "x"))));
        assert_eq!(parse_formula("true").unwrap(), Formula::truth());
        assert_eq!(parse_formula("(or)").unwrap().to_string(), "false");
        let big = parse_formula("(distle a b 123456789012345678901234567890)").unwrap();
        assert_eq!(parse_formula(&big.to_string()).unwrap(), big);
    }

    #[test]
    fn errors_carry_lines() {
        assert!(matches!(parse_formula("(and\n(E x))"), Err(GraphError::Parse { line: 2, .. })));
        assert!(parse_formula("(exists (E x y))").is_err());
        assert!(parse_formula("(E x y) (E y x)").is_err());
        assert!(parse_formula("(distle x y -1)").is_err());
        assert!(matches!(parse_formula("(E x #)"), Err(GraphError::Parse { line: 1, .. })));
        assert!(parse_formula("(and").is_err());
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let var = prop::sample::select(vec!["x", "y", "z"]);
        let leaf = prop_oneof![
            (var.clone(), var.clone()).prop_map(|(a, b)| Formula::eq(a, b)),
            (var.clone(), var.clone()).prop_map(|(a, b)| Formula::edge(a, b)),
            (0u32..3, var.clone()).prop_map(|(p, a)| Formula::pred(&format!("P{p}"), a)),
            (var.clone(), var.clone(), 0u64..100).prop_map(|(a, b, d)| Formula::dist_le(a, b, d)),
        ];
        leaf.prop_recursive(4, 24, 4, move |inner| {
            let var = prop::sample::select(vec!["x", "y", "z"]);
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                prop::collection::vec(inner.clone(), 0..4).prop_map(Formula::and),
                prop::collection::vec(inner.clone(), 0..4).prop_map(Formula::or),
                (var.clone(), inner.clone()).prop_map(|(v, f)| Formula::exists(v, f)),
                (var, inner).prop_map(|(v, f)| Formula::forall(v, f)),
            ]
        })
    }

    proptest! {
        #[test]
        fn printing_round_trips(f in arb_formula()) {
            let text = f.to_string();
            let back = parse_formula(&text).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
