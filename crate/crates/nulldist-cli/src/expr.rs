//! Minimal arithmetic expression grammar for scenario-supplied warpings
//! and time reshapings: `+ - * / ^`, the variable `t`, numeric constants,
//! `min(...)`, `max(...)`, and `piecewise(cond, value, ..., default)`
//! with comparison conditions (`< <= > >=`). `^` is right-associative.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    T,
    Ident(Func),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func {
    Min,
    Max,
    Piecewise,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone)]
pub enum Expr {
    Num(f64),
    T,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
    Cmp(CmpOpPub, Box<Expr>, Box<Expr>),
    Piecewise(Vec<(Expr, Expr)>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CmpOpPub {
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expression error: {}", self.0)
    }
}

impl std::error::Error for ParseError {}

fn lex(src: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push(Tok::Le);
                    i += 2;
                } else {
                    toks.push(Tok::Lt);
                    i += 1;
                }
            }
            '>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push(Tok::Ge);
                    i += 2;
                } else {
                    toks.push(Tok::Gt);
                    i += 1;
                }
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_digit()
                        || bytes[i] == b'.'
                        || bytes[i] == b'e'
                        || bytes[i] == b'E'
                        || ((bytes[i] == b'+' || bytes[i] == b'-')
                            && i > start
                            && (bytes[i - 1] == b'e' || bytes[i - 1] == b'E')))
                {
                    i += 1;
                }
                let s = &src[start..i];
                let v: f64 = s
                    .parse()
                    .map_err(|_| ParseError(format!("bad number literal '{s}'")))?;
                toks.push(Tok::Num(v));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &src[start..i] {
                    "t" => toks.push(Tok::T),
                    "min" => toks.push(Tok::Ident(Func::Min)),
                    "max" => toks.push(Tok::Ident(Func::Max)),
                    "piecewise" => toks.push(Tok::Ident(Func::Piecewise)),
                    other => return Err(ParseError(format!("unknown identifier '{other}'"))),
                }
            }
            // handle multi-byte '−' (U+2212) which the byte match above missed
            _ if src[i..].starts_with('−') => {
                toks.push(Tok::Minus);
                i += '−'.len_utf8();
            }
            other => return Err(ParseError(format!("unexpected character '{other}'"))),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        match self.bump() {
            Some(got) if got == t => Ok(()),
            got => Err(ParseError(format!("expected {t:?}, found {got:?}"))),
        }
    }

    /// Comparison or sum; comparisons are only legal inside piecewise
    /// condition slots, which the validator enforces afterwards.
    fn comparison(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.sum()?;
        let op = match self.peek() {
            Some(Tok::Lt) => CmpOpPub::Lt,
            Some(Tok::Le) => CmpOpPub::Le,
            Some(Tok::Gt) => CmpOpPub::Gt,
            Some(Tok::Ge) => CmpOpPub::Ge,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.sum()?;
        Ok(Expr::Cmp(op, Box::new(lhs), Box::new(rhs)))
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    e = Expr::Add(Box::new(e), Box::new(self.product()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    e = Expr::Sub(Box::new(e), Box::new(self.product()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    e = Expr::Mul(Box::new(e), Box::new(self.power()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    e = Expr::Div(Box::new(e), Box::new(self.power()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if self.peek() == Some(Tok::Caret) {
            self.bump();
            let exp = self.power()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut out = vec![self.comparison()?];
        while self.peek() == Some(Tok::Comma) {
            self.bump();
            out.push(self.comparison()?);
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::T) => Ok(Expr::T),
            Some(Tok::LParen) => {
                let e = self.comparison()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(f)) => {
                let args = self.args()?;
                match f {
                    Func::Min => {
                        if args.len() < 2 {
                            return Err(ParseError("min needs at least 2 arguments".into()));
                        }
                        Ok(Expr::Min(args))
                    }
                    Func::Max => {
                        if args.len() < 2 {
                            return Err(ParseError("max needs at least 2 arguments".into()));
                        }
                        Ok(Expr::Max(args))
                    }
                    Func::Piecewise => {
                        if args.len() < 3 || args.len() % 2 == 0 {
                            return Err(ParseError(
                                "piecewise needs (cond, value)... pairs plus a default".into(),
                            ));
                        }
                        let default = args.last().unwrap().clone();
                        let mut branches = Vec::new();
                        for pair in args[..args.len() - 1].chunks(2) {
                            branches.push((pair[0].clone(), pair[1].clone()));
                        }
                        Ok(Expr::Piecewise(branches, Box::new(default)))
                    }
                }
            }
            got => Err(ParseError(format!("unexpected token {got:?}"))),
        }
    }
}

fn validate(e: &Expr, cond_position: bool) -> Result<(), ParseError> {
    match e {
        Expr::Cmp(_, a, b) => {
            if !cond_position {
                return Err(ParseError(
                    "comparison outside a piecewise condition".into(),
                ));
            }
            validate(a, false)?;
            validate(b, false)
        }
        Expr::Num(_) | Expr::T => Ok(()),
        Expr::Neg(a) => validate(a, false),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
            validate(a, false)?;
            validate(b, false)
        }
        Expr::Min(args) | Expr::Max(args) => args.iter().try_for_each(|a| validate(a, false)),
        Expr::Piecewise(branches, default) => {
            for (c, v) in branches {
                match c {
                    Expr::Cmp(..) => validate(c, true)?,
                    _ => {
                        return Err(ParseError(
                            "piecewise condition must be a comparison".into(),
                        ))
                    }
                }
                validate(v, false)?;
            }
            validate(default, false)
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        let toks = lex(src)?;
        let mut p = Parser {
            toks: &toks,
            pos: 0,
        };
        let e = p.comparison()?;
        if p.pos != toks.len() {
            return Err(ParseError(format!(
                "trailing tokens starting at {:?}",
                p.peek()
            )));
        }
        validate(&e, false)?;
        Ok(e)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::T => t,
            Expr::Add(a, b) => a.eval(t) + b.eval(t),
            Expr::Sub(a, b) => a.eval(t) - b.eval(t),
            Expr::Mul(a, b) => a.eval(t) * b.eval(t),
            Expr::Div(a, b) => a.eval(t) / b.eval(t),
            Expr::Pow(a, b) => a.eval(t).powf(b.eval(t)),
            Expr::Neg(a) => -a.eval(t),
            Expr::Min(args) => args.iter().map(|a| a.eval(t)).fold(f64::INFINITY, f64::min),
            Expr::Max(args) => args
                .iter()
                .map(|a| a.eval(t))
                .fold(f64::NEG_INFINITY, f64::max),
            Expr::Cmp(..) => f64::NAN,
            Expr::Piecewise(branches, default) => {
                for (c, v) in branches {
                    if let Expr::Cmp(op, a, b) = c {
                        let (x, y) = (a.eval(t), b.eval(t));
                        let holds = match op {
                            CmpOpPub::Lt => x < y,
                            CmpOpPub::Le => x <= y,
                            CmpOpPub::Gt => x > y,
                            CmpOpPub::Ge => x >= y,
                        };
                        if holds {
                            return v.eval(t);
                        }
                    }
                }
                default.eval(t)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let e = Expr::parse("t^2 + 1").unwrap();
        assert_eq!(e.eval(2.0), 5.0);
        let e = Expr::parse("2 * t - 1 / 2").unwrap();
        assert_eq!(e.eval(1.0), 1.5);
        let e = Expr::parse("2^3^2").unwrap(); // right-assoc: 2^(3^2)
        assert_eq!(e.eval(0.0), 512.0);
        let e = Expr::parse("-t^2").unwrap(); // -(t^2)
        assert_eq!(e.eval(2.0), -4.0);
    }

    #[test]
    fn min_max_piecewise() {
        let e = Expr::parse("min(t, 1, max(0, t - 2))").unwrap();
        assert_eq!(e.eval(0.5), 0.0);
        let e = Expr::parse("piecewise(t < 0.5, 2, t < 1, 1 + t, 3)").unwrap();
        assert_eq!(e.eval(0.2), 2.0);
        assert_eq!(e.eval(0.7), 1.7);
        assert_eq!(e.eval(1.5), 3.0);
    }

    #[test]
    fn rejects_bad_syntax() {
        assert!(Expr::parse("t +").is_err());
        assert!(Expr::parse("foo(t)").is_err());
        assert!(Expr::parse("t < 1").is_err()); // comparison outside piecewise
        assert!(Expr::parse("piecewise(t, 1, 2)").is_err()); // condition not a comparison
        assert!(Expr::parse("min(t)").is_err());
    }
}
