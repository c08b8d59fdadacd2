use std::str::FromStr;

use num::{BigInt, BigRational, Zero};

use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Theta,
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut v: u64 = 0;
            while i < cs.len() && cs[i].is_ascii_digit() {
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(cs[i] as u64 - '0' as u64))
                    .ok_or_else(|| Error::Parse(format!("number too large in {s:?}")))?;
                i += 1;
            }
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_alphabetic() {
                i += 1;
            }
            let w: String = cs[start..i].iter().collect();
            match w.as_str() {
                "theta" | "t" | "T" => out.push(Tok::Theta),
                _ => return Err(Error::Parse(format!("unknown symbol {w:?}"))),
            }
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    p: u32,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = if self.eat('-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                acc = acc.div(&self.power()?).map_err(|_| Error::Parse("division by zero".into()))?;
            } else if matches!(self.peek(), Some(Tok::Theta) | Some(Tok::Op('('))) {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    let mut r = RatFunc::from_poly(Poly::one(self.p));
                    for _ in 0..k {
                        r = r.mul(&base);
                    }
                    Ok(r)
                }
                _ => Err(Error::Parse("exponent must be a non-negative integer".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(RatFunc::from_poly(Poly::constant(self.p, (v % self.p as u64) as u32)))
            }
            Some(Tok::Theta) => {
                self.pos += 1;
                Ok(RatFunc::from_poly(Poly::theta(self.p)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.atom()?.neg())
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses an element of F_p(θ) such as `1/(theta+1)` or `theta^2+2*theta`.
pub fn parse_ratfunc(p: u32, s: &str) -> Result<RatFunc> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut ps = Parser { toks, pos: 0, p };
    let r = ps.expr()?;
    if ps.pos != ps.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(r)
}

/// Parses a polynomial in coefficient form `c0,c1,...` or human form `theta^2+theta+1`.
pub fn parse_poly(p: u32, s: &str) -> Result<Poly> {
    let s = s.trim();
    if s.contains(',') || (!s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '-')) {
        let cs = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coefficient {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Poly::from_i64(p, &cs));
    }
    let r = parse_ratfunc(p, s)?;
    if !r.is_integral() {
        return Err(Error::Parse(format!("{s:?} is not a polynomial")));
    }
    Ok(r.num().clone())
}

/// Parses a rational number `a`, `a/b`, or `-a/b`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let r = if let Some((a, b)) = s.split_once('/') {
        let a = BigInt::from_str(a.trim_start_matches('+')).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let b = BigInt::from_str(b).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if b.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        BigRational::new(a, b)
    } else {
        BigRational::from_integer(
            BigInt::from_str(s.trim_start_matches('+')).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?,
        )
    };
    Ok(r)
}
