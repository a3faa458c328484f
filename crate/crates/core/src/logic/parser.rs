//! Recursive-descent parser for the formula grammar
//!
//! ```text
//! F := const | d(T, T) | half(F) | neg(F)
//!    | (sub|min|max|absdiff|add)(F, F) | (sup|inf) var . F
//! T := e | var | T * T | T ^-1 | (T)
//! const := 0 | 1 | k/N | k/2^m      (dyadic, at most 1)
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ast::{Formula, Term};
use crate::error::{Error, Result};
use crate::scalar::Rational;

const KEYWORDS: &[&str] = &["d", "half", "sub", "min", "max", "absdiff", "neg", "add", "sup", "inf", "e"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    End,
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(usize, Tok)> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            return Ok((start, Tok::Ident(self.text[start..self.pos].to_string())));
        }
        if c.is_ascii_digit() {
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let value = self.text[start..self.pos].parse::<BigInt>().expect("digits");
            return Ok((start, Tok::Int(value)));
        }
        if "().,*^-/".contains(c as char) {
            self.pos += 1;
            return Ok((start, Tok::Sym(c as char)));
        }
        Err(Error::Syntax { offset: start, message: format!("unexpected character {:?}", c as char) })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: (usize, Tok),
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Syntax { offset, message: message.into() })
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self> {
        let mut lexer = Lexer { text, pos: 0 };
        let peeked = lexer.next()?;
        Ok(Parser { lexer, peeked })
    }

    fn bump(&mut self) -> Result<(usize, Tok)> {
        let next = self.lexer.next()?;
        Ok(std::mem::replace(&mut self.peeked, next))
    }

    fn expect(&mut self, sym: char) -> Result<()> {
        match self.bump()? {
            (_, Tok::Sym(c)) if c == sym => Ok(()),
            (offset, tok) => err(offset, format!("expected '{sym}', found {}", describe(&tok))),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let (offset, tok) = self.bump()?;
        match tok {
            Tok::Int(k) => self.constant(offset, k),
            Tok::Ident(name) => match name.as_str() {
                "d" => {
                    self.expect('(')?;
                    let a = self.term()?;
                    self.expect(',')?;
                    let b = self.term()?;
                    self.expect(')')?;
                    Ok(Formula::Dist(a, b))
                }
                "half" | "neg" => {
                    self.expect('(')?;
                    let a = Box::new(self.formula()?);
                    self.expect(')')?;
                    Ok(if name == "half" { Formula::Half(a) } else { Formula::Neg(a) })
                }
                "sub" | "min" | "max" | "absdiff" | "add" => {
                    self.expect('(')?;
                    let a = Box::new(self.formula()?);
                    self.expect(',')?;
                    let b = Box::new(self.formula()?);
                    self.expect(')')?;
                    Ok(match name.as_str() {
                        "sub" => Formula::Sub(a, b),
                        "min" => Formula::Min(a, b),
                        "max" => Formula::Max(a, b),
                        "absdiff" => Formula::AbsDiff(a, b),
                        _ => Formula::Add(a, b),
                    })
                }
                "sup" | "inf" => {
                    let var = self.variable()?;
                    self.expect('.')?;
                    let body = Box::new(self.formula()?);
                    Ok(if name == "sup" { Formula::Sup(var, body) } else { Formula::Inf(var, body) })
                }
                _ => err(offset, format!("expected a formula, found identifier {name:?}")),
            },
            other => err(offset, format!("expected a formula, found {}", describe(&other))),
        }
    }

    fn constant(&mut self, offset: usize, numer: BigInt) -> Result<Formula> {
        let value = if self.peeked.1 == Tok::Sym('/') {
            self.bump()?;
            let denom = match self.bump()? {
                (_, Tok::Int(d)) => d,
                (o, tok) => return err(o, format!("expected a denominator, found {}", describe(&tok))),
            };
            let denom = if self.peeked.1 == Tok::Sym('^') {
                self.bump()?;
                let (o, tok) = self.bump()?;
                let exp = match tok {
                    Tok::Int(m) => m,
                    other => return err(o, format!("expected an exponent, found {}", describe(&other))),
                };
                let exp: u32 = exp
                    .try_into()
                    .ok()
                    .filter(|&m| m <= 4096)
                    .ok_or_else(|| Error::Syntax { offset: o, message: "exponent too large".into() })?;
                num_traits::pow(denom, exp as usize)
            } else {
                denom
            };
            if denom.is_zero() {
                return err(offset, "zero denominator");
            }
            Rational::new(numer, denom)
        } else {
            Rational::from_integer(numer)
        };
        let denom = value.denom();
        if (denom & (denom - BigInt::one())) != BigInt::zero() {
            return err(offset, format!("constant {value} is not dyadic"));
        }
        if value > Rational::one() {
            return err(offset, format!("constant {value} exceeds 1"));
        }
        Ok(Formula::Const(value))
    }

    fn variable(&mut self) -> Result<String> {
        match self.bump()? {
            (offset, Tok::Ident(name)) => {
                if KEYWORDS.contains(&name.as_str()) {
                    err(offset, format!("{name:?} is reserved and cannot be a variable"))
                } else {
                    Ok(name)
                }
            }
            (offset, tok) => err(offset, format!("expected a variable, found {}", describe(&tok))),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut acc = self.postfix_term()?;
        while self.peeked.1 == Tok::Sym('*') {
            self.bump()?;
            let rhs = self.postfix_term()?;
            acc = Term::mul(acc, rhs);
        }
        Ok(acc)
    }

    fn postfix_term(&mut self) -> Result<Term> {
        let mut t = self.primary_term()?;
        while self.peeked.1 == Tok::Sym('^') {
            self.bump()?;
            self.expect('-')?;
            match self.bump()? {
                (_, Tok::Int(one)) if one.is_one() => t = Term::inv(t),
                (o, tok) => return err(o, format!("expected ^-1, found {}", describe(&tok))),
            }
        }
        Ok(t)
    }

    fn primary_term(&mut self) -> Result<Term> {
        match self.bump()? {
            (_, Tok::Ident(name)) if name == "e" => Ok(Term::Identity),
            (offset, Tok::Ident(name)) => {
                if KEYWORDS.contains(&name.as_str()) {
                    err(offset, format!("{name:?} is reserved and cannot be a variable"))
                } else {
                    Ok(Term::Var(name))
                }
            }
            (_, Tok::Sym('(')) => {
                let t = self.term()?;
                self.expect(')')?;
                Ok(t)
            }
            (offset, tok) => err(offset, format!("expected a term, found {}", describe(&tok))),
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("{s:?}"),
        Tok::Int(k) => k.to_string(),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::End => "end of input".to_string(),
    }
}

/// Parses a formula; errors carry the byte offset of the offending token.
pub fn parse(text: &str) -> Result<Formula> {
    let mut parser = Parser::new(text)?;
    let f = parser.formula()?;
    match &parser.peeked {
        (_, Tok::End) => Ok(f),
        (offset, tok) => err(*offset, format!("trailing input starting at {}", describe(tok))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn parses_sup_binder() {
        let f = parse("sup x. d(x*x^-1, e)").unwrap();
        let expected = Formula::Sup(
            "x".into(),
            Box::new(Formula::Dist(Term::mul(Term::var("x"), Term::inv(Term::var("x"))), Term::Identity)),
        );
        assert_eq!(f, expected);
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn parses_constants() {
        assert_eq!(parse("3/4").unwrap(), Formula::Const(ratio(3, 4)));
        assert_eq!(parse("3/2^2").unwrap(), Formula::Const(ratio(3, 4)));
        assert_eq!(parse("1").unwrap(), Formula::Const(ratio(1, 1)));
        assert_eq!(parse("0").unwrap(), Formula::Const(ratio(0, 1)));
    }

    #[test]
    fn rejects_non_dyadic_and_large_constants() {
        assert!(matches!(parse("1/3"), Err(Error::Syntax { offset: 0, .. })));
        assert!(parse("5/4").is_err());
        assert!(parse("2").is_err());
    }

    #[test]
    fn unterminated_atom_reports_offset() {
        match parse("sup x d(x") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("unexpected {other:?}"),
        }
        match parse("sup x. d(x") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 10),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn term_precedence() {
        let f = parse("d(x*y^-1*z, (x*y)^-1)").unwrap();
        let Formula::Dist(a, b) = &f else { panic!() };
        assert_eq!(
            *a,
            Term::mul(Term::mul(Term::var("x"), Term::inv(Term::var("y"))), Term::var("z"))
        );
        assert_eq!(*b, Term::inv(Term::mul(Term::var("x"), Term::var("y"))));
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn right_nested_products_keep_parentheses() {
        let f = parse("d(x*(y*z), e)").unwrap();
        assert_eq!(f.to_string(), "d(x*(y*z), e)");
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn keywords_are_not_variables() {
        assert!(parse("sup d. d(d, e)").is_err());
        assert!(parse("d(sup, e)").is_err());
    }

    #[test]
    fn trailing_garbage() {
        assert!(matches!(parse("d(e,e) x"), Err(Error::Syntax { offset: 7, .. })));
    }
}
