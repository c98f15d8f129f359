//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr    := diff ( "|" diff )*       union, lowest precedence, left-assoc
//! diff    := isect ( "-" isect )*     set difference (sugar: E-F = E & !F)
//! isect   := concat ( "&" concat )*   intersection (sugar via De Morgan)
//! concat  := postfix+                 juxtaposition, folded to the right
//! postfix := atom ( "*" )*
//! atom    := "0" | "1" | 'a'..'z' | "!" atom | "(" expr ")"
//! ```
//!
//! Whitespace between tokens is ignored. `&` and `-` are desugared while
//! parsing, so the resulting tree only contains the seven node kinds.

use thiserror::Error;

use super::{Alphabet, Expr, GenExpr, Letter};

/// A syntax or unknown-letter error, with the character offset at which
/// it was detected.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

/// Parse `text` into an expression tree built with the smart
/// constructors. Literals must belong to `alphabet`.
pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Expr, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        alphabet,
    };
    let e = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(e),
        Some(c) => Err(ParseError::new(p.pos, format!("unexpected '{c}'"))),
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.diff()?;
        while self.eat('|') {
            e = GenExpr::union(e, self.diff()?);
        }
        Ok(e)
    }

    fn diff(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.isect()?;
        while self.eat('-') {
            e = GenExpr::difference(e, self.isect()?);
        }
        Ok(e)
    }

    fn isect(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.concat()?;
        while self.eat('&') {
            e = GenExpr::intersect(e, self.concat()?);
        }
        Ok(e)
    }

    fn concat(&mut self) -> Result<Expr, ParseError> {
        let mut items = vec![self.postfix()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c == '0' || c == '1' || c == '!' || c == '(' || c.is_ascii_lowercase() => {
                    items.push(self.postfix()?);
                }
                _ => break,
            }
        }
        let mut iter = items.into_iter().rev();
        let mut acc = iter.next().expect("at least one item");
        for e in iter {
            acc = GenExpr::concat(e, acc);
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.atom()?;
        while self.eat('*') {
            e = GenExpr::star(e);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('0') => {
                self.bump();
                Ok(GenExpr::empty())
            }
            Some('1') => {
                self.bump();
                Ok(GenExpr::epsilon())
            }
            Some('!') => {
                self.bump();
                Ok(GenExpr::complement(self.atom()?))
            }
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                if self.eat(')') {
                    Ok(e)
                } else {
                    Err(ParseError::new(self.pos, "expected ')'"))
                }
            }
            Some(c) if c.is_ascii_lowercase() => {
                let x = Letter::new(c).expect("lowercase");
                if !self.alphabet.contains(x) {
                    return Err(ParseError::new(
                        self.pos,
                        format!("letter '{c}' is not in alphabet {}", self.alphabet),
                    ));
                }
                self.bump();
                Ok(GenExpr::lit(x))
            }
            Some(c) => Err(ParseError::new(self.pos, format!("unexpected '{c}'"))),
            None => Err(ParseError::new(self.pos, "expected an expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        "ab".parse().unwrap()
    }

    fn lit(c: char) -> Expr {
        GenExpr::lit(Letter::new(c).unwrap())
    }

    #[test]
    fn parses_factor_exclusion_shape() {
        let e = parse("!(!0 aa !0)", &ab()).unwrap();
        let expected = GenExpr::complement(GenExpr::concat(
            GenExpr::universe(),
            GenExpr::concat(lit('a'), GenExpr::concat(lit('a'), GenExpr::universe())),
        ));
        assert_eq!(*e, *expected);
    }

    #[test]
    fn star_binds_tighter_than_union() {
        let e = parse("a|b*", &ab()).unwrap();
        assert_eq!(*e, *GenExpr::union(lit('a'), GenExpr::star(lit('b'))));
    }

    #[test]
    fn union_is_left_associative() {
        let e = parse("a|b|ab", &ab()).unwrap();
        let expected = GenExpr::union(
            GenExpr::union(lit('a'), lit('b')),
            GenExpr::concat(lit('a'), lit('b')),
        );
        assert_eq!(*e, *expected);
    }

    #[test]
    fn intersection_desugars_through_de_morgan() {
        let e = parse("a&b", &ab()).unwrap();
        let expected = GenExpr::complement(GenExpr::union(
            GenExpr::complement(lit('a')),
            GenExpr::complement(lit('b')),
        ));
        assert_eq!(*e, *expected);
    }

    #[test]
    fn disjoint_letters_intersect_to_the_empty_language() {
        let e = parse("a&b", &ab()).unwrap();
        let words = crate::lang::enumerate(&e, &ab(), 3).unwrap();
        assert!(words.is_empty());
    }

    #[test]
    fn difference_desugars_to_intersection_with_complement() {
        let e = parse("!0 - (!0 a !0)", &ab()).unwrap();
        let removed = GenExpr::concat(
            GenExpr::universe(),
            GenExpr::concat(lit('a'), GenExpr::universe()),
        );
        let expected = GenExpr::intersect(GenExpr::universe(), GenExpr::complement(removed));
        assert_eq!(*e, *expected);
    }

    #[test]
    fn reports_offsets_and_unknown_letters() {
        let err = parse("a|", &ab()).unwrap_err();
        assert_eq!(err.offset, 2);

        let err = parse("a c", &ab()).unwrap_err();
        assert_eq!(err.offset, 2);
        assert!(err.message.contains("'c'"), "message: {}", err.message);

        let err = parse("(ab", &ab()).unwrap_err();
        assert!(err.message.contains(")"));
    }

    #[test]
    fn rejects_trailing_input() {
        let err = parse("a)b", &ab()).unwrap_err();
        assert_eq!(err.offset, 1);
    }
}
