//! Text syntax: `3/2*x1^2*x2 - x2 + 1`, with `(...)` grouping, decimal or
//! `p/q` constants, and non-negative integer exponents.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalars::{Ring, Q};

use super::monomial::{deformation_names, variable_names, Monomial};
use super::polynomial::Polynomial;

/// Accepted variable spellings, mapped to positions in `n + m` variables.
///
/// Polynomial variables are `x1..xn` (plus `x, y, z` when `n <= 3`) and
/// deformation variables `v1..vm` (plus `v` when `m == 1`).
#[derive(Clone, Debug)]
pub struct VarTable {
    nvars: usize,
    ndeform: usize,
    names: HashMap<String, usize>,
}

impl VarTable {
    pub fn new(nvars: usize, ndeform: usize) -> Self {
        let mut names = HashMap::new();
        for i in 0..nvars {
            names.insert(format!("x{}", i + 1), i);
        }
        if nvars <= 3 {
            for (i, s) in variable_names(nvars).into_iter().enumerate() {
                names.insert(s, i);
            }
        }
        for j in 0..ndeform {
            names.insert(format!("v{}", j + 1), nvars + j);
        }
        if ndeform == 1 {
            names.insert(deformation_names(1)[0].clone(), nvars);
        }
        VarTable { nvars, ndeform, names }
    }

    pub fn total(&self) -> usize {
        self.nvars + self.ndeform
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ndeform(&self) -> usize {
        self.ndeform
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(text: &str, line: usize) -> Result<Lexer> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            toks.push((Tok::Num(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(Error::Parse {
                line,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(Lexer {
        toks,
        end: chars.len() + 1,
    })
}

struct Parser<'a> {
    lexer: Lexer,
    pos: usize,
    line: usize,
    vars: &'a VarTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.lexer.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.lexer.toks.get(self.pos).map_or(self.lexer.end, |(_, c)| *c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            column: self.column(),
            message: message.into(),
        })
    }

    fn zero(&self) -> Polynomial<Q> {
        Polynomial::zero(self.vars.total(), &())
    }

    fn expr(&mut self) -> Result<Polynomial<Q>> {
        let mut acc = self.zero();
        let mut sign = match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Tok::Op('+')) => sign = 1,
                Some(Tok::Op('-')) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial<Q>> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let d = match self.peek() {
                        Some(Tok::Num(s)) => {
                            let s = s.clone();
                            self.number(&s)?
                        }
                        _ => return self.error("division is only allowed by a numeric constant"),
                    };
                    if d.is_zero() {
                        return self.error("division by zero");
                    }
                    self.pos += 1;
                    acc = acc.scale(&Q(BigRational::from_integer(BigInt::from(1)) / d.0));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial<Q>> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Num(s)) if s.chars().all(|c| c.is_ascii_digit()) => match s.parse::<u32>() {
                    Ok(e) => e,
                    Err(_) => return self.error(format!("exponent `{s}` out of range")),
                },
                Some(Tok::Num(s)) => return self.error(format!("exponent `{s}` must be a non-negative integer")),
                Some(Tok::Op('-')) => return self.error("negative exponent"),
                _ => return self.error("expected a non-negative integer exponent"),
            };
            self.pos += 1;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn number(&self, s: &str) -> Result<Q> {
        if s.matches('.').count() > 1 || s == "." {
            return self.error(format!("malformed number `{s}`"));
        }
        s.parse::<Q>().or_else(|m| self.error(m))
    }

    fn atom(&mut self) -> Result<Polynomial<Q>> {
        let n = self.vars.total();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                let q = self.number(&s)?;
                self.pos += 1;
                Ok(Polynomial::constant(n, q))
            }
            Some(Tok::Ident(name)) => match self.vars.names.get(&name) {
                Some(&i) => {
                    self.pos += 1;
                    Ok(Polynomial::monomial(Monomial::var(n, i), Q::int(1)))
                }
                None => self.error(format!("unknown variable `{name}`")),
            },
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.error("expected `)`"),
                }
            }
            Some(Tok::Op(c)) => self.error(format!("unexpected `{c}`")),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parse one polynomial in `vars.total()` variables; `line` is reported in errors.
pub fn parse_polynomial(text: &str, vars: &VarTable, line: usize) -> Result<Polynomial<Q>> {
    let lexer = lex(text, line)?;
    if lexer.toks.is_empty() {
        return Err(Error::Parse {
            line,
            column: 1,
            message: "empty polynomial".into(),
        });
    }
    let mut p = Parser {
        lexer,
        pos: 0,
        line,
        vars,
    };
    let out = p.expr()?;
    if p.pos != p.lexer.toks.len() {
        return p.error("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_canonical() {
        let vars = VarTable::new(2, 0);
        let p = parse_polynomial("3/2*x^2*y - y + 1", &vars, 1).unwrap();
        assert_eq!(p.to_string(), "3/2*x^2*y - y + 1");
        let q = parse_polynomial("3/2*x1^2*x2 - x2 + 1", &vars, 1).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn grouping_and_decimals() {
        let vars = VarTable::new(1, 0);
        let p = parse_polynomial("(x - 1)^2 - 0.5*x/2", &vars, 1).unwrap();
        assert_eq!(p.to_string(), "x^2 - 9/4*x + 1");
    }

    #[test]
    fn deformation_variables() {
        let vars = VarTable::new(1, 1);
        let p = parse_polynomial("x^2 - x^3 - v", &vars, 2).unwrap();
        assert_eq!(p.nvars(), 2);
        assert_eq!(p.len(), 3);
        let vars = VarTable::new(2, 2);
        assert!(parse_polynomial("x^2 - y^3 + v1", &vars, 1).is_ok());
    }

    #[test]
    fn negative_exponent_location() {
        let vars = VarTable::new(1, 0);
        match parse_polynomial("x^-1", &vars, 3) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_variable() {
        let vars = VarTable::new(2, 0);
        assert!(matches!(
            parse_polynomial("x + z", &vars, 1),
            Err(Error::Parse { column: 5, .. })
        ));
        let vars = VarTable::new(4, 0);
        assert!(parse_polynomial("x4 - x", &vars, 1).is_err());
    }
}
