//! Text front end for words and loop-algebra expressions.
//!
//! Words: `word := atom | '(' word ')' | word '*' word` with `*` left
//! associative, `atom := 'e' | 'x' digits | atom '^-1'`. Inverses are applied
//! eagerly, so a parsed [`Word`] never carries an inverse above a leaf.
//!
//! Expressions extend the word grammar with rational coefficients and `+`/`-`,
//! e.g. `3*(x1*x2) - 1/2*x3 + 1`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::WordError;
use crate::word::{Generator, Literal, Word};

/// Parse tree of a loop-algebra expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(BigRational),
    Identity,
    Literal(Literal),
    Inverse(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

pub fn parse_word(text: &str) -> Result<Word, WordError> {
    let mut p = Parser::new(text);
    let w = p.word()?;
    p.expect_end()?;
    Ok(w)
}

pub fn parse_expr(text: &str) -> Result<Expr, WordError> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax(&self, offset: usize, message: impl Into<String>) -> WordError {
        WordError::Syntax { offset, message: message.into() }
    }

    fn unexpected(&mut self, expected: &str) -> WordError {
        match self.peek() {
            None => self.syntax(self.pos, format!("expected {expected}, found end of input")),
            Some(_) => {
                let found = self.text[self.pos..].chars().next().unwrap_or('?');
                if found.is_ascii_punctuation() || found.is_ascii_alphanumeric() {
                    self.syntax(self.pos, format!("expected {expected}, found {found:?}"))
                } else {
                    WordError::UnknownToken { offset: self.pos, found }
                }
            }
        }
    }

    fn expect_end(&mut self) -> Result<(), WordError> {
        if self.peek().is_none() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn digits(&mut self) -> Option<(usize, &'a str)> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| (start, &self.text[start..self.pos]))
    }

    /// `'x' digits`, cursor on the `x`.
    fn generator(&mut self) -> Result<Generator, WordError> {
        let at = self.pos;
        self.pos += 1;
        let Some((start, digits)) = self.digits() else {
            return Err(self.syntax(self.pos, "expected generator index after 'x'"));
        };
        let index: u32 = digits.parse().map_err(|_| self.syntax(start, "generator index too large"))?;
        Generator::new(index).map_err(|_| self.syntax(at, format!("generator index {index} outside 1..=127")))
    }

    fn inverse_suffixes(&mut self) -> Result<usize, WordError> {
        let mut n = 0;
        while self.peek() == Some(b'^') {
            let at = self.pos;
            if self.text[at..].starts_with("^-1") {
                self.pos += 3;
                n += 1;
            } else {
                return Err(self.syntax(at, "expected '^-1'"));
            }
        }
        Ok(n)
    }

    fn word(&mut self) -> Result<Word, WordError> {
        let mut acc = self.word_primary()?;
        while self.eat(b'*') {
            let rhs = self.word_primary()?;
            acc = Word::product(&acc, &rhs);
        }
        Ok(acc)
    }

    fn word_primary(&mut self) -> Result<Word, WordError> {
        let base = match self.peek() {
            Some(b'e') => {
                self.pos += 1;
                Word::empty()
            }
            Some(b'x') => Word::literal(Literal::new(self.generator()?, false)),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.word()?;
                if !self.eat(b')') {
                    return Err(self.unexpected("')'"));
                }
                inner
            }
            _ => return Err(self.unexpected("word")),
        };
        let n = self.inverse_suffixes()?;
        Ok(if n % 2 == 1 { base.invert() } else { base })
    }

    fn expr(&mut self) -> Result<Expr, WordError> {
        let mut acc = if self.eat(b'-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(b'-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, WordError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, WordError> {
        let base = match self.peek() {
            Some(b'e') => {
                self.pos += 1;
                Expr::Identity
            }
            Some(b'x') => Expr::Literal(Literal::new(self.generator()?, false)),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.unexpected("')'"));
                }
                inner
            }
            Some(c) if c.is_ascii_digit() => {
                let (_, num) = self.digits().expect("digit present");
                let num: BigInt = num.parse().expect("decimal digits");
                let value = if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let Some((at, den)) = self.digits() else {
                        return Err(self.syntax(self.pos, "expected denominator"));
                    };
                    let den: BigInt = den.parse().expect("decimal digits");
                    if den == BigInt::from(0) {
                        return Err(self.syntax(at, "zero denominator"));
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from_integer(num)
                };
                Expr::Number(value)
            }
            _ => return Err(self.unexpected("term")),
        };
        let n = self.inverse_suffixes()?;
        Ok(match (base, n % 2) {
            (Expr::Literal(l), 1) => Expr::Literal(l.inverted()),
            (b, 1) => Expr::Inverse(Box::new(b)),
            (b, _) => b,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_literal() {
        assert_eq!(parse_word("x1").unwrap(), Word::gen(1));
        assert_eq!(parse_word(" x12 ^-1 ").unwrap(), Word::gen_inv(12));
    }

    #[test]
    fn product_inverse_is_applied_eagerly() {
        let w = parse_word("(x1*x2)^-1").unwrap();
        assert_eq!(w, Word::product(&Word::gen_inv(2), &Word::gen_inv(1)));
        assert_eq!(parse_word("x1^-1^-1").unwrap(), Word::gen(1));
    }

    #[test]
    fn star_is_left_associative() {
        let w = parse_word("x1*x2*x3").unwrap();
        assert_eq!(w.to_string(), "((x1*x2)*x3)");
    }

    #[test]
    fn empty_word_token() {
        assert_eq!(parse_word("e").unwrap(), Word::empty());
        assert_eq!(parse_word("e*x2").unwrap(), Word::gen(2));
    }

    #[test]
    fn trailing_star_reports_offset() {
        match parse_word("x1*") {
            Err(WordError::Syntax { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_word("x0"), Err(WordError::Syntax { offset: 0, .. })));
        assert!(matches!(parse_word("(x1"), Err(WordError::Syntax { offset: 3, .. })));
        assert!(matches!(parse_word("x1 x2"), Err(WordError::Syntax { offset: 3, .. })));
        assert!(matches!(parse_word("y1"), Err(WordError::Syntax { offset: 0, .. })));
        assert!(matches!(parse_word("x1*§"), Err(WordError::UnknownToken { offset: 3, .. })));
        assert!(matches!(parse_word("x1^2"), Err(WordError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn serialization_round_trips() {
        for text in ["x1", "((x1*x2)*x1^-1)", "(x3^-1*(x2*(x1*x3)))", "e"] {
            let w = parse_word(text).unwrap();
            assert_eq!(w.to_string(), text);
            assert_eq!(parse_word(&w.to_string()).unwrap(), w);
        }
    }

    #[test]
    fn expressions() {
        let e = parse_expr("3*(x1*x2) - 1/2*x3 + 1").unwrap();
        assert!(matches!(e, Expr::Add(_, _)));
        assert!(parse_expr("0").is_ok());
        assert!(parse_expr("-x1 + (x1*x2)^-1").is_ok());
        assert!(matches!(parse_expr("1/0*x1"), Err(WordError::Syntax { offset: 2, .. })));
        assert!(parse_expr("x1 +").is_err());
    }
}
