//! Tiny expression language for elements and operator combinations.
//! Precedence: `^` (wedge) over `*` (scalar multiple) over `+`/`-`.
//! Scalars are `p`, `p/q`, `i`, `p i`, `p/q i` (written `3/2i` etc.).

use bvhycom::cdga::{Element, Presentation};
use bvhycom::matrix::Matrix;
use bvhycom::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
        }
    }
}

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn lex(src: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut it = src.chars().peekable();
    while let Some(&c) = it.peek() {
        let (l0, c0) = (line, col);
        let bump = |ch: char, line: &mut usize, col: &mut usize| {
            if ch == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                it.next();
                bump(c, &mut line, &mut col);
            }
            '+' | '-' | '*' | '^' | '/' | '(' | ')' => {
                it.next();
                bump(c, &mut line, &mut col);
                let t = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push((t, l0, c0));
            }
            '0'..='9' => {
                let mut n = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_digit() {
                        n.push(d);
                        it.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                let v = n.parse().map_err(|_| ParseError {
                    line: l0,
                    col: c0,
                    msg: format!("integer literal `{n}` out of range"),
                })?;
                out.push((Tok::Int(v), l0, c0));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(d);
                        it.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), l0, c0));
            }
            other => {
                return Err(ParseError {
                    line: l0,
                    col: c0,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or((1, 1), |&(_, l, c)| (l, c))
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, msg: msg.into() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> Result<(), ParseError> {
        match self.next() {
            Some(ref got) if got == t => Ok(()),
            Some(got) => Err(ParseError {
                line: self.toks[self.pos - 1].1,
                col: self.toks[self.pos - 1].2,
                msg: format!("expected {t}, found {got}"),
            }),
            None => Err(self.err(format!("expected {t}, found end of input"))),
        }
    }

    /// `rational ['i'] | 'i'`; returns None (without consuming) if the next
    /// token cannot start a scalar.
    fn try_scalar(&mut self) -> Result<Option<Scalar>, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "i" => {
                self.next();
                Ok(Some(Scalar::i()))
            }
            Some(Tok::Int(_)) => {
                let Some(Tok::Int(num)) = self.next() else { unreachable!() };
                let mut den = 1;
                if self.peek() == Some(&Tok::Slash) {
                    self.next();
                    match self.next() {
                        Some(Tok::Int(d)) if d != 0 => den = d,
                        Some(Tok::Int(_)) => return Err(self.err("zero denominator")),
                        _ => return Err(self.err("expected an integer after `/`")),
                    }
                }
                let imaginary = matches!(self.peek(), Some(Tok::Ident(s)) if s == "i");
                if imaginary {
                    self.next();
                    Ok(Some(Scalar::gauss(0, num, den)))
                } else {
                    Ok(Some(Scalar::from_ratio(num, den)))
                }
            }
            _ => Ok(None),
        }
    }
}

pub struct ParsedElement {
    pub element: Element,
    pub warnings: Vec<String>,
}

/// Parse an element expression over the presentation's generators.
pub fn parse_element(pres: &Arc<Presentation>, src: &str) -> Result<ParsedElement, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let mut warnings = Vec::new();
    let element = element_expr(&mut p, pres, &mut warnings)?;
    if p.peek().is_some() {
        return Err(p.err("trailing input after expression"));
    }
    Ok(ParsedElement { element, warnings })
}

fn element_expr(
    p: &mut Parser,
    pres: &Arc<Presentation>,
    warn: &mut Vec<String>,
) -> Result<Element, ParseError> {
    let mut neg = false;
    if p.peek() == Some(&Tok::Minus) {
        p.next();
        neg = true;
    }
    let mut acc = element_term(p, pres, warn)?;
    if neg {
        acc = acc.scale(&-Scalar::one());
    }
    loop {
        match p.peek() {
            Some(Tok::Plus) => {
                p.next();
                let t = element_term(p, pres, warn)?;
                acc = acc.add(&t).map_err(|e| p.err(e.to_string()))?;
            }
            Some(Tok::Minus) => {
                p.next();
                let t = element_term(p, pres, warn)?;
                acc = acc.sub(&t).map_err(|e| p.err(e.to_string()))?;
            }
            _ => return Ok(acc),
        }
    }
}

fn element_term(
    p: &mut Parser,
    pres: &Arc<Presentation>,
    warn: &mut Vec<String>,
) -> Result<Element, ParseError> {
    // scalar-first only when the ident really is a scalar; a generator named
    // by a plain word falls through to the wedge branch
    let save = p.pos;
    if let Some(c) = p.try_scalar()? {
        if p.peek() == Some(&Tok::Star) {
            p.next();
            let w = element_wedge(p, pres, warn)?;
            return Ok(w.scale(&c));
        }
        if p.peek().is_none() || matches!(p.peek(), Some(Tok::Plus | Tok::Minus | Tok::RParen)) {
            return Ok(Element::one(pres).scale(&c));
        }
        // e.g. `i` shadowed by a generator name: backtrack
        p.pos = save;
    }
    element_wedge(p, pres, warn)
}

fn element_wedge(
    p: &mut Parser,
    pres: &Arc<Presentation>,
    warn: &mut Vec<String>,
) -> Result<Element, ParseError> {
    let mut acc = element_atom(p, pres, warn)?;
    while p.peek() == Some(&Tok::Caret) {
        p.next();
        let rhs = element_atom(p, pres, warn)?;
        let prod = acc.wedge(&rhs).map_err(|e| p.err(e.to_string()))?;
        if prod.is_zero() && !acc.is_zero() && !rhs.is_zero() {
            warn.push("wedge of repeated odd generators is zero".into());
        }
        acc = prod;
    }
    Ok(acc)
}

fn element_atom(
    p: &mut Parser,
    pres: &Arc<Presentation>,
    warn: &mut Vec<String>,
) -> Result<Element, ParseError> {
    match p.next() {
        Some(Tok::Ident(name)) => {
            let k = pres
                .gens()
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| p.err(format!("undeclared generator `{name}`")))?;
            Ok(Element::generator(pres, k))
        }
        Some(Tok::LParen) => {
            let e = element_expr(p, pres, warn)?;
            p.eat(&Tok::RParen)?;
            Ok(e)
        }
        Some(t) => Err(p.err(format!("expected a generator or `(`, found {t}"))),
        None => Err(p.err("expected a generator, found end of input")),
    }
}

/// Parse an operator expression over named matrices: names, `adj(..)`,
/// scalar multiples, sums and differences.
pub fn parse_operator(
    ops: &BTreeMap<String, Matrix>,
    src: &str,
) -> Result<Matrix, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let m = operator_expr(&mut p, ops)?;
    if p.peek().is_some() {
        return Err(p.err("trailing input after expression"));
    }
    Ok(m)
}

fn operator_expr(p: &mut Parser, ops: &BTreeMap<String, Matrix>) -> Result<Matrix, ParseError> {
    let mut neg = false;
    if p.peek() == Some(&Tok::Minus) {
        p.next();
        neg = true;
    }
    let mut acc = operator_term(p, ops)?;
    if neg {
        acc = -&acc;
    }
    loop {
        match p.peek() {
            Some(Tok::Plus) => {
                p.next();
                let t = operator_term(p, ops)?;
                acc = &acc + &t;
            }
            Some(Tok::Minus) => {
                p.next();
                let t = operator_term(p, ops)?;
                acc = &acc - &t;
            }
            _ => return Ok(acc),
        }
    }
}

fn operator_term(p: &mut Parser, ops: &BTreeMap<String, Matrix>) -> Result<Matrix, ParseError> {
    let save = p.pos;
    if let Some(c) = p.try_scalar()? {
        if p.peek() == Some(&Tok::Star) {
            p.next();
            let f = operator_factor(p, ops)?;
            return Ok(f.scale(&c));
        }
        p.pos = save; // a name like `i` would be ambiguous; treat as factor
    }
    operator_factor(p, ops)
}

fn operator_factor(p: &mut Parser, ops: &BTreeMap<String, Matrix>) -> Result<Matrix, ParseError> {
    match p.next() {
        Some(Tok::Ident(name)) if name == "adj" => {
            p.eat(&Tok::LParen)?;
            let inner = operator_expr(p, ops)?;
            p.eat(&Tok::RParen)?;
            Ok(inner.dagger())
        }
        Some(Tok::Ident(name)) => ops
            .get(&name)
            .cloned()
            .ok_or_else(|| p.err(format!("unknown operator `{name}`"))),
        Some(Tok::LParen) => {
            let m = operator_expr(p, ops)?;
            p.eat(&Tok::RParen)?;
            Ok(m)
        }
        Some(t) => Err(p.err(format!("expected an operator name, found {t}"))),
        None => Err(p.err("expected an operator, found end of input")),
    }
}
