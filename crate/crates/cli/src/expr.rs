//! Expressions over exact rationals: lexer, precedence-climbing parser,
//! evaluator and printer.
//!
//! Precedence from loosest to tightest: `+ -`, `* /`, unary minus, `^`
//! (right associative). A literal written `a/b` with no spaces around the
//! slash is a single rational literal, so `2^1/2` is `2^(1/2)` while
//! `2^1 / 2` is `(2^1) / 2`.

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;
use treearith::arith::{self, ArithError};
use treearith::bridge::term;
use treearith::rational::{
    from_fraq, radd, rdivide, rmultiply, ropposite, rsub, Fraction, RationalError,
};
use treearith::{Ord3, Term, PQ, Q};

/// Half-open byte range into the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn join(self, other: Span) -> Span {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

/// Integer functions of two arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Gcd,
    Lcm,
    Div,
    Mod,
    Cmp,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Gcd, Func::Lcm, Func::Div, Func::Mod, Func::Cmp];

    pub fn name(self) -> &'static str {
        match self {
            Func::Gcd => "gcd",
            Func::Lcm => "lcm",
            Func::Div => "div",
            Func::Mod => "mod",
            Func::Cmp => "cmp",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    Nat(BigUint),
    /// `a/b` written as one token; not reduced, and `b` may be zero.
    Rat(BigUint, BigUint),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>, Box<Expr>),
    Group(Box<Expr>),
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

/// Structural equality; spans are ignored.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Nat(a), Nat(b)) => a == b,
            (Rat(a, b), Rat(c, d)) => a == c && b == d,
            (Neg(a), Neg(b)) | (Group(a), Group(b)) => a == b,
            (Binary(o, a, b), Binary(p, c, d)) => o == p && a == c && b == d,
            (Call(f, a, b), Call(g, c, d)) => f == g && a == c && b == d,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl Expr {
    /// Builds an expression with an empty span, for programmatic use.
    pub fn new(kind: ExprKind) -> Expr {
        Expr {
            kind,
            span: Span { start: 0, end: 0 },
        }
    }

    pub fn nat(n: impl Into<BigUint>) -> Expr {
        Expr::new(ExprKind::Nat(n.into()))
    }

    pub fn rat(n: impl Into<BigUint>, d: impl Into<BigUint>) -> Expr {
        Expr::new(ExprKind::Rat(n.into(), d.into()))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::new(ExprKind::Neg(Box::new(e)))
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::new(ExprKind::Binary(op, Box::new(l), Box::new(r)))
    }

    pub fn call(f: Func, a: Expr, b: Expr) -> Expr {
        Expr::new(ExprKind::Call(f, Box::new(a), Box::new(b)))
    }

    pub fn group(e: Expr) -> Expr {
        Expr::new(ExprKind::Group(Box::new(e)))
    }

    /// The same tree with every parenthesized group replaced by its content.
    pub fn without_groups(&self) -> Expr {
        let kind = match &self.kind {
            ExprKind::Group(e) => return e.without_groups(),
            ExprKind::Nat(_) | ExprKind::Rat(..) => self.kind.clone(),
            ExprKind::Neg(e) => ExprKind::Neg(Box::new(e.without_groups())),
            ExprKind::Binary(op, l, r) => ExprKind::Binary(
                *op,
                Box::new(l.without_groups()),
                Box::new(r.without_groups()),
            ),
            ExprKind::Call(f, a, b) => ExprKind::Call(
                *f,
                Box::new(a.without_groups()),
                Box::new(b.without_groups()),
            ),
        };
        Expr {
            kind,
            span: self.span,
        }
    }

    fn prec(&self) -> u8 {
        match &self.kind {
            ExprKind::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            ExprKind::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            ExprKind::Neg(_) => 3,
            ExprKind::Binary(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write_at(0, f)?;
            return f.write_str(")");
        }
        match &self.kind {
            ExprKind::Nat(n) => write!(f, "{n}"),
            ExprKind::Rat(n, d) => write!(f, "{n}/{d}"),
            ExprKind::Neg(e) => {
                f.write_str("-")?;
                e.write_at(3, f)
            }
            ExprKind::Binary(BinOp::Pow, l, r) => {
                l.write_at(5, f)?;
                f.write_str("^")?;
                r.write_at(3, f)
            }
            ExprKind::Binary(op, l, r) => {
                let p = self.prec();
                l.write_at(p, f)?;
                write!(f, " {} ", op.symbol())?;
                r.write_at(p + 1, f)
            }
            ExprKind::Call(func, a, b) => {
                write!(f, "{}(", func.name())?;
                a.write_at(0, f)?;
                f.write_str(", ")?;
                b.write_at(0, f)?;
                f.write_str(")")
            }
            ExprKind::Group(e) => {
                f.write_str("(")?;
                e.write_at(0, f)?;
                f.write_str(")")
            }
        }
    }
}

/// Prints with the fewest parentheses that parse back to the same tree,
/// keeping every explicit group.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(0, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: expected {}", list(expected))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
}

fn list(items: &[&str]) -> String {
    match items {
        [] => "nothing".to_string(),
        [one] => one.to_string(),
        [init @ .., last] => format!("{} or {}", init.join(", "), last),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigUint),
    Frac(BigUint, BigUint),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Bad,
    End,
}

fn lex(src: &str) -> Vec<(Tok, Span)> {
    let bytes = src.as_bytes();
    let digits_from = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let (tok, end) = if c.is_ascii_digit() {
            let end = digits_from(start);
            let n: BigUint = src[start..end].parse().expect("ascii digits");
            let frac_end = if bytes.get(end) == Some(&b'/') {
                digits_from(end + 1)
            } else {
                end
            };
            if frac_end > end + 1 {
                let d = src[end + 1..frac_end].parse().expect("ascii digits");
                (Tok::Frac(n, d), frac_end)
            } else {
                (Tok::Num(n), end)
            }
        } else if c.is_ascii_alphabetic() {
            let mut end = start;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            (Tok::Ident(src[start..end].to_string()), end)
        } else {
            let tok = match c {
                '+' => Tok::Plus,
                '-' | '−' => Tok::Minus,
                '*' | '×' => Tok::Star,
                '/' | '÷' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                _ => Tok::Bad,
            };
            (tok, start + c.len_utf8())
        };
        out.push((tok, Span { start, end }));
        while chars.peek().is_some_and(|&(i, _)| i < end) {
            chars.next();
        }
    }
    out.push((
        Tok::End,
        Span {
            start: src.len(),
            end: src.len(),
        },
    ));
    out
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    // What the parser has tried to match at the current token.
    expected: Vec<&'static str>,
    depth: usize,
}

/// Deepest nesting of unary minus, powers and parentheses the parser accepts;
/// evaluation and printing recurse on the tree.
pub const MAX_DEPTH: usize = 256;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Span {
        let span = self.span();
        self.pos += 1;
        self.expected.clear();
        span
    }

    fn expect(&mut self, what: &'static str) {
        if !self.expected.contains(&what) {
            self.expected.push(what);
        }
    }

    fn eat(&mut self, tok: Tok, what: &'static str) -> Option<Span> {
        if *self.peek() == tok {
            Some(self.bump())
        } else {
            self.expect(what);
            None
        }
    }

    fn fail<T>(&mut self) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.span().start,
            expected: std::mem::take(&mut self.expected),
        })
    }

    fn require(&mut self, tok: Tok, what: &'static str) -> Result<Span, ParseError> {
        match self.eat(tok, what) {
            Some(s) => Ok(s),
            None => self.fail(),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let op = if self.eat(Tok::Plus, "'+'").is_some() {
                BinOp::Add
            } else if self.eat(Tok::Minus, "'-'").is_some() {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.product()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(Tok::Star, "'*'").is_some() {
                BinOp::Mul
            } else if self.eat(Tok::Slash, "'/'").is_some() {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.depth == MAX_DEPTH {
            self.expected = vec!["shallower nesting"];
            return self.fail();
        }
        self.depth += 1;
        let e = self.unary_inner();
        self.depth -= 1;
        e
    }

    fn unary_inner(&mut self) -> Result<Expr, ParseError> {
        if let Some(start) = self.eat(Tok::Minus, "'-'") {
            let e = self.unary()?;
            let span = start.join(e.span);
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(e)),
                span,
            });
        }
        let base = self.atom()?;
        if self.eat(Tok::Caret, "'^'").is_some() {
            let exp = self.unary()?;
            return Ok(binary(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                ExprKind::Nat(n)
            }
            Tok::Frac(n, d) => {
                self.bump();
                ExprKind::Rat(n, d)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                let close = self.require(Tok::RParen, "')'")?;
                return Ok(Expr {
                    kind: ExprKind::Group(Box::new(inner)),
                    span: span.join(close),
                });
            }
            Tok::Ident(name) => {
                let Some(func) = Func::from_name(&name) else {
                    self.expect("function name");
                    return self.fail();
                };
                self.bump();
                self.require(Tok::LParen, "'('")?;
                let a = self.sum()?;
                self.require(Tok::Comma, "','")?;
                let b = self.sum()?;
                let close = self.require(Tok::RParen, "')'")?;
                return Ok(Expr {
                    kind: ExprKind::Call(func, Box::new(a), Box::new(b)),
                    span: span.join(close),
                });
            }
            _ => {
                for what in ["number", "'('", "function name"] {
                    self.expect(what);
                }
                return self.fail();
            }
        };
        Ok(Expr { kind, span })
    }
}

fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
    let span = l.span.join(r.span);
    Expr {
        kind: ExprKind::Binary(op, Box::new(l), Box::new(r)),
        span,
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src),
        pos: 0,
        expected: Vec::new(),
        depth: 0,
    };
    let e = p.sum()?;
    p.require(Tok::End, "end of input")?;
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalErrorKind {
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent must be a non-negative integer")]
    BadExponent,
    #[error("argument must be a non-negative integer")]
    NotNatural,
    #[error("{0}")]
    Arithmetic(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{op}: {kind} at bytes {}..{}", span.start, span.end)]
pub struct EvalError {
    /// Name of the failing operation, e.g. `divide` or `gcd`.
    pub op: &'static str,
    pub kind: EvalErrorKind,
    pub span: Span,
}

fn rational_error(op: &'static str, span: Span) -> impl Fn(RationalError) -> EvalError {
    move |e| {
        let kind = match e {
            RationalError::DivisionByZero | RationalError::ZeroComponent => {
                EvalErrorKind::DivisionByZero
            }
            other => EvalErrorKind::Arithmetic(other.to_string()),
        };
        EvalError { op, kind, span }
    }
}

fn arith_error(op: &'static str, span: Span) -> impl Fn(ArithError) -> EvalError {
    move |e| {
        let kind = match e {
            ArithError::DivisionByZero => EvalErrorKind::DivisionByZero,
            ArithError::Underflow => EvalErrorKind::Arithmetic(e.to_string()),
        };
        EvalError { op, kind, span }
    }
}

fn natural(q: &Q, op: &'static str, e: &Expr, kind: EvalErrorKind) -> Result<Term, EvalError> {
    q.as_natural().ok_or(EvalError {
        op,
        kind,
        span: e.span,
    })
}

fn power(base: &Q, exp: &Term) -> Q {
    let raise = |pq: &PQ| {
        let num = arith::pow(pq.num(), exp);
        let den = arith::pow(pq.den(), exp);
        PQ::new(num, den).expect("powers of positive terms are positive")
    };
    match base {
        Q::Z if exp.is_t() => Q::P(PQ::one()),
        Q::Z => Q::Z,
        Q::P(pq) => Q::P(raise(pq)),
        Q::M(pq) if exp.is_odd() => Q::M(raise(pq)),
        Q::M(pq) => Q::P(raise(pq)),
    }
}

pub fn eval(e: &Expr) -> Result<Q, EvalError> {
    match &e.kind {
        ExprKind::Nat(n) => Ok(Q::from_term(&term(n))),
        ExprKind::Rat(n, d) => {
            let f = Fraction::new(n.clone().into(), d.clone().into())
                .map_err(rational_error("literal", e.span))?;
            from_fraq(&f).map_err(rational_error("literal", e.span))
        }
        ExprKind::Group(inner) => eval(inner),
        ExprKind::Neg(inner) => Ok(ropposite(&eval(inner)?)),
        ExprKind::Binary(op, l, r) => {
            let (a, b) = (eval(l)?, eval(r)?);
            match op {
                BinOp::Add => Ok(radd(&a, &b)),
                BinOp::Sub => Ok(rsub(&a, &b)),
                BinOp::Mul => Ok(rmultiply(&a, &b)),
                BinOp::Div => rdivide(&a, &b).map_err(rational_error("divide", e.span)),
                BinOp::Pow => {
                    let exp = natural(&b, "pow", r, EvalErrorKind::BadExponent)?;
                    Ok(power(&a, &exp))
                }
            }
        }
        ExprKind::Call(func, l, r) => {
            let op = func.name();
            let x = natural(&eval(l)?, op, l, EvalErrorKind::NotNatural)?;
            let y = natural(&eval(r)?, op, r, EvalErrorKind::NotNatural)?;
            let t = match func {
                Func::Gcd => arith::gcd(&x, &y),
                Func::Lcm => arith::lcm(&x, &y).map_err(arith_error(op, e.span))?,
                Func::Div => arith::divide(&x, &y).map_err(arith_error(op, e.span))?,
                Func::Mod => arith::remainder(&x, &y).map_err(arith_error(op, e.span))?,
                Func::Cmp => {
                    return Ok(match arith::cmp(&x, &y) {
                        Ord3::Lt => Q::M(PQ::one()),
                        Ord3::Eq => Q::Z,
                        Ord3::Gt => Q::P(PQ::one()),
                    })
                }
            };
            Ok(Q::from_term(&t))
        }
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(src: &str) -> Result<Q, Error> {
    Ok(eval(&parse(src)?)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
