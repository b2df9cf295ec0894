//! A small expression language for transform functions `g(i, j)`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?            right-associative
//! atom   := number | name | name '(' expr ')' | '(' expr ')'
//! ```
//!
//! `i` and `j` are the 1-based row and column indices; every other name is a
//! parameter that must be bound before evaluation. Exponentiation binds
//! tighter than unary minus, so `(-1)^j` needs its parentheses while `-1^j`
//! means `-(1^j)`. Functions: `sin`, `cos`, `exp`, `abs`.
//!
//! Expressions evaluate in two domains: IEEE doubles, and exact big rationals
//! for the subset free of transcendental calls (a negative base requires an
//! integer exponent in both domains and flips the sign exactly).

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexVar {
    I,
    J,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Abstract syntax tree of a transform expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Param(String),
    Var(IndexVar),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: found {found}, expected {}", expected.join(" or "))]
    Unexpected { pos: usize, found: String, expected: Vec<String> },
    #[error("unknown function `{name}` at position {pos}")]
    UnknownFunction { pos: usize, name: String },
    #[error("invalid number literal at position {pos}")]
    BadNumber { pos: usize },
    #[error("empty expression")]
    Empty,
    #[error("expression nests deeper than {} levels at position {pos}", 256)]
    TooDeep { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalErrorKind {
    UnboundParam(String),
    NegativeBasePow { base: f64, exponent: f64 },
    DivisionByZero,
    NonFinite,
    ZeroDivisor,
    NotExact(&'static str),
    ExponentNotInteger,
    ExponentTooLarge,
    ZeroToNegativePower,
}

impl fmt::Display for EvalErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalErrorKind::UnboundParam(p) => write!(f, "parameter `{p}` is not bound"),
            EvalErrorKind::NegativeBasePow { base, exponent } => {
                write!(f, "negative base {base} with non-integer exponent {exponent}")
            }
            EvalErrorKind::DivisionByZero => write!(f, "division by zero"),
            EvalErrorKind::NonFinite => write!(f, "result is not finite"),
            EvalErrorKind::ZeroDivisor => write!(f, "transform value is zero where a divisor is required"),
            EvalErrorKind::NotExact(what) => write!(f, "`{what}` has no exact rational value"),
            EvalErrorKind::ExponentNotInteger => write!(f, "exponent is not an integer"),
            EvalErrorKind::ExponentTooLarge => write!(f, "exponent magnitude too large"),
            EvalErrorKind::ZeroToNegativePower => write!(f, "zero raised to a negative power"),
        }
    }
}

/// Evaluation failure, tagged with the offending 1-based grid point.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("evaluation failed at (i={i}, j={j}): {kind}")]
pub struct EvalError {
    pub i: usize,
    pub j: usize,
    pub kind: EvalErrorKind,
}

#[derive(Debug, Error)]
pub enum GfdslError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("parameter `{0}` is not bound")]
    UnboundParam(String),
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number `{x}`"),
            Tok::Ident(s) => format!("name `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => k += 1,
            '+' => {
                out.push((k, Tok::Plus));
                k += 1;
            }
            '-' => {
                out.push((k, Tok::Minus));
                k += 1;
            }
            '*' => {
                out.push((k, Tok::Star));
                k += 1;
            }
            '/' => {
                out.push((k, Tok::Slash));
                k += 1;
            }
            '^' => {
                out.push((k, Tok::Caret));
                k += 1;
            }
            '(' => {
                out.push((k, Tok::LParen));
                k += 1;
            }
            ')' => {
                out.push((k, Tok::RParen));
                k += 1;
            }
            '0'..='9' | '.' => {
                let start = k;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                if k < bytes.len() && bytes[k] == b'.' {
                    k += 1;
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                }
                if k < bytes.len() && (bytes[k] == b'e' || bytes[k] == b'E') {
                    let mut j = k + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        k = j;
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                    }
                }
                let text = &src[start..k];
                let value: f64 = text.parse().map_err(|_| ParseError::BadNumber { pos: start })?;
                out.push((start, Tok::Num(value)));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = k;
                while k < bytes.len()
                    && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_')
                {
                    k += 1;
                }
                out.push((start, Tok::Ident(src[start..k].to_string())));
            }
            _ => {
                return Err(ParseError::Unexpected {
                    pos: k,
                    found: format!("`{c}`"),
                    expected: vec!["a token".into()],
                })
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    depth: usize,
}

// Nesting bound: parentheses, unary minus chains and exponent towers all
// recurse, and inputs come from the command line.
const MAX_DEPTH: usize = 256;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn found(&self) -> String {
        self.toks.get(self.pos).map_or("end of input".into(), |(_, t)| t.describe())
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::Unexpected {
                pos: self.here(),
                found: self.found(),
                expected: vec![what.to_string()],
            })
        }
    }

    fn descend(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::TooDeep { pos: self.here() });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.descend()?;
        let result = self.expr_inner();
        self.depth -= 1;
        result
    }

    fn expr_inner(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            self.descend()?;
            let inner = self.unary();
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            // Right-associative; the exponent may carry a unary minus.
            self.descend()?;
            let exp = self.unary();
            self.depth -= 1;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Num(x)) => Ok(Expr::Number(x)),
            Some(Tok::Ident(name)) => {
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let func = match name.as_str() {
                        "sin" => Func::Sin,
                        "cos" => Func::Cos,
                        "exp" => Func::Exp,
                        "abs" => Func::Abs,
                        _ => return Err(ParseError::UnknownFunction { pos, name }),
                    };
                    let arg = self.expr()?;
                    self.expect(&Tok::RParen, "`)`")?;
                    Ok(Expr::Call(func, Box::new(arg)))
                } else {
                    match name.as_str() {
                        "i" => Ok(Expr::Var(IndexVar::I)),
                        "j" => Ok(Expr::Var(IndexVar::J)),
                        _ => Ok(Expr::Param(name)),
                    }
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => Err(ParseError::Unexpected {
                pos,
                found: other.map_or("end of input".into(), |t| t.describe()),
                expected: vec!["number".into(), "name".into(), "`(`".into(), "`-`".into()],
            }),
        }
    }
}

/// Parses a transform expression source string.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    if src.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let toks = tokenize(src)?;
    let mut p = Parser { toks: &toks, pos: 0, end: src.len(), depth: 0 };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(ParseError::Unexpected {
            pos: p.here(),
            found: p.found(),
            expected: vec!["end of input".into(), "an operator".into()],
        });
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Printing (inverse of parse up to redundant parentheses)
// ---------------------------------------------------------------------------

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 10,
        Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 20,
        Expr::Neg(_) => 30,
        Expr::Number(x) if *x < 0.0 => 30,
        Expr::Binary(BinOp::Pow, ..) => 40,
        _ => 50,
    }
}

fn write_prec(e: &Expr, ctx: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let own = prec(e);
    if own < ctx {
        write!(f, "(")?;
        write_prec(e, 0, f)?;
        return write!(f, ")");
    }
    match e {
        Expr::Number(x) => write!(f, "{x}"),
        Expr::Param(name) => write!(f, "{name}"),
        Expr::Var(IndexVar::I) => write!(f, "i"),
        Expr::Var(IndexVar::J) => write!(f, "j"),
        Expr::Neg(inner) => {
            write!(f, "-")?;
            write_prec(inner, 31, f)
        }
        Expr::Binary(op, l, r) => {
            let (sym, lp, rp) = match op {
                BinOp::Add => ("+", 10, 11),
                BinOp::Sub => ("-", 10, 11),
                BinOp::Mul => ("*", 20, 21),
                BinOp::Div => ("/", 20, 21),
                BinOp::Pow => ("^", 41, 40),
            };
            write_prec(l, lp, f)?;
            write!(f, "{sym}")?;
            write_prec(r, rp, f)
        }
        Expr::Call(func, arg) => {
            write!(f, "{}(", func.name())?;
            write_prec(arg, 0, f)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, 0, f)
    }
}

impl Expr {
    /// Names of all parameters referenced by the expression.
    pub fn params(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_params(&self, out: &mut Vec<String>) {
        match self {
            Expr::Param(name) => out.push(name.clone()),
            Expr::Neg(inner) | Expr::Call(_, inner) => inner.collect_params(out),
            Expr::Binary(_, l, r) => {
                l.collect_params(out);
                r.collect_params(out);
            }
            Expr::Number(_) | Expr::Var(_) => {}
        }
    }

    fn eval_f64(&self, i: f64, j: f64, params: &BTreeMap<String, f64>) -> Result<f64, EvalErrorKind> {
        match self {
            Expr::Number(x) => Ok(*x),
            Expr::Param(name) => params
                .get(name)
                .copied()
                .ok_or_else(|| EvalErrorKind::UnboundParam(name.clone())),
            Expr::Var(IndexVar::I) => Ok(i),
            Expr::Var(IndexVar::J) => Ok(j),
            Expr::Neg(inner) => Ok(-inner.eval_f64(i, j, params)?),
            Expr::Binary(op, l, r) => {
                let a = l.eval_f64(i, j, params)?;
                let b = r.eval_f64(i, j, params)?;
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => {
                        if b == 0.0 {
                            Err(EvalErrorKind::DivisionByZero)
                        } else {
                            Ok(a / b)
                        }
                    }
                    BinOp::Pow => pow_f64(a, b),
                }
            }
            Expr::Call(func, arg) => {
                let x = arg.eval_f64(i, j, params)?;
                Ok(match func {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Abs => x.abs(),
                })
            }
        }
    }

    fn eval_exact(
        &self,
        i: &BigRational,
        j: &BigRational,
        params: &BTreeMap<String, BigRational>,
    ) -> Result<BigRational, EvalErrorKind> {
        match self {
            Expr::Number(x) => {
                BigRational::from_float(*x).ok_or(EvalErrorKind::NonFinite)
            }
            Expr::Param(name) => params
                .get(name)
                .cloned()
                .ok_or_else(|| EvalErrorKind::UnboundParam(name.clone())),
            Expr::Var(IndexVar::I) => Ok(i.clone()),
            Expr::Var(IndexVar::J) => Ok(j.clone()),
            Expr::Neg(inner) => Ok(-inner.eval_exact(i, j, params)?),
            Expr::Binary(op, l, r) => {
                let a = l.eval_exact(i, j, params)?;
                let b = r.eval_exact(i, j, params)?;
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => {
                        if b.is_zero() {
                            Err(EvalErrorKind::DivisionByZero)
                        } else {
                            Ok(a / b)
                        }
                    }
                    BinOp::Pow => pow_exact(&a, &b),
                }
            }
            Expr::Call(func, arg) => {
                let x = arg.eval_exact(i, j, params)?;
                match func {
                    Func::Abs => Ok(x.abs()),
                    other => Err(EvalErrorKind::NotExact(other.name())),
                }
            }
        }
    }
}

fn pow_f64(base: f64, exponent: f64) -> Result<f64, EvalErrorKind> {
    if base < 0.0 {
        let r = exponent.round();
        if (exponent - r).abs() > 1e-9 {
            return Err(EvalErrorKind::NegativeBasePow { base, exponent });
        }
        // Integer exponent on a negative base: exact sign flip.
        let odd = (r.abs() % 2.0) == 1.0;
        let mag = (-base).powf(r);
        Ok(if odd { -mag } else { mag })
    } else {
        Ok(base.powf(exponent))
    }
}

fn pow_exact(base: &BigRational, exponent: &BigRational) -> Result<BigRational, EvalErrorKind> {
    if !exponent.is_integer() {
        return Err(EvalErrorKind::ExponentNotInteger);
    }
    let k = exponent.to_integer().to_i64().ok_or(EvalErrorKind::ExponentTooLarge)?;
    if k.unsigned_abs() > 1_000_000 {
        return Err(EvalErrorKind::ExponentTooLarge);
    }
    if base.is_zero() {
        if k < 0 {
            return Err(EvalErrorKind::ZeroToNegativePower);
        }
        return Ok(if k == 0 { BigRational::one() } else { BigRational::zero() });
    }
    let mag = k.unsigned_abs() as u32;
    let p = BigRational::new(base.numer().pow(mag), base.denom().pow(mag));
    Ok(if k < 0 { p.recip() } else { p })
}

// ---------------------------------------------------------------------------
// TransformFn: an expression with bound parameters
// ---------------------------------------------------------------------------

/// An evaluable transform function `g(i, j)` with parameter bindings.
///
/// Parameters are stored both as doubles and as the exact rationals those
/// doubles denote, so the same binding drives float grids and exact-arithmetic
/// transforms. Indices are 1-based.
#[derive(Debug, Clone)]
pub struct TransformFn {
    expr: Expr,
    fparams: BTreeMap<String, f64>,
    xparams: BTreeMap<String, BigRational>,
}

impl TransformFn {
    /// Parses `src` and binds the given parameters.
    pub fn parse(src: &str, params: &[(&str, f64)]) -> Result<Self, GfdslError> {
        let expr = parse(src)?;
        Self::from_expr(expr, params)
    }

    pub fn from_expr(expr: Expr, params: &[(&str, f64)]) -> Result<Self, GfdslError> {
        let fparams: BTreeMap<String, f64> =
            params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let xparams = fparams
            .iter()
            .map(|(k, v)| (k.clone(), BigRational::from_float(*v).unwrap_or_else(BigRational::zero)))
            .collect();
        let tf = TransformFn { expr, fparams, xparams };
        tf.check_bound()?;
        Ok(tf)
    }

    /// Binds exact rational parameters (the float mirror is the nearest double).
    pub fn from_expr_rational(expr: Expr, params: &[(&str, BigRational)]) -> Result<Self, GfdslError> {
        let xparams: BTreeMap<String, BigRational> =
            params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        let fparams = xparams
            .iter()
            .map(|(k, v)| (k.clone(), v.to_f64().unwrap_or(f64::NAN)))
            .collect();
        let tf = TransformFn { expr, fparams, xparams };
        tf.check_bound()?;
        Ok(tf)
    }

    pub fn parse_rational(src: &str, params: &[(&str, BigRational)]) -> Result<Self, GfdslError> {
        let expr = parse(src)?;
        Self::from_expr_rational(expr, params)
    }

    fn check_bound(&self) -> Result<(), GfdslError> {
        for p in self.expr.params() {
            if !self.fparams.contains_key(&p) {
                return Err(GfdslError::UnboundParam(p));
            }
        }
        Ok(())
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.fparams
    }

    /// Evaluates at the 1-based grid point `(i, j)`; the result is finite.
    pub fn evaluate(&self, i: usize, j: usize) -> Result<f64, EvalError> {
        let wrap = |kind| EvalError { i, j, kind };
        let v = self
            .expr
            .eval_f64(i as f64, j as f64, &self.fparams)
            .map_err(wrap)?;
        if !v.is_finite() {
            return Err(wrap(EvalErrorKind::NonFinite));
        }
        Ok(v)
    }

    /// Exact rational evaluation at `(i, j)`. Fails with `NotExact` when the
    /// expression involves `sin`, `cos` or `exp`, or a fractional exponent.
    pub fn evaluate_exact(&self, i: usize, j: usize) -> Result<BigRational, EvalError> {
        let wrap = |kind| EvalError { i, j, kind };
        let iv = BigRational::from_integer((i as i64).into());
        let jv = BigRational::from_integer((j as i64).into());
        self.expr.eval_exact(&iv, &jv, &self.xparams).map_err(wrap)
    }

    /// Checks that the transform is finite (and nonzero, when `require_nonzero`)
    /// at every point of the 1-based `n x m` grid.
    pub fn check_grid(&self, n: usize, m: usize, require_nonzero: bool) -> Result<(), EvalError> {
        for i in 1..=n {
            for j in 1..=m {
                let v = self.evaluate(i, j)?;
                if require_nonzero && v == 0.0 {
                    return Err(EvalError { i, j, kind: EvalErrorKind::ZeroDivisor });
                }
            }
        }
        Ok(())
    }
}

/// Pre-packaged transform families with documented source strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinKind {
    /// `c` — constant rescaling.
    Constant,
    /// `1/(f+i^2)` — depends only on the row index.
    RowOnly,
    /// `1/(f+j^2)^0.5` — depends only on the column index.
    ColOnly,
    /// `f^(i-j)` — the geometric clockwork family.
    GeometricCw,
    /// `q^((-1)^j*j)` — alternating column rescaling.
    AlternatingCol,
    /// `sin(2*a*i)` — sinusoidal row factor.
    SineRow,
}

impl BuiltinKind {
    pub fn source(self) -> &'static str {
        match self {
            BuiltinKind::Constant => "c",
            BuiltinKind::RowOnly => "1/(f+i^2)",
            BuiltinKind::ColOnly => "1/(f+j^2)^0.5",
            BuiltinKind::GeometricCw => "f^(i-j)",
            BuiltinKind::AlternatingCol => "q^((-1)^j*j)",
            BuiltinKind::SineRow => "sin(2*a*i)",
        }
    }
}

/// Builds a builtin transform; behaviour is identical to parsing its
/// documented source string with the same bindings.
pub fn builtin(kind: BuiltinKind, params: &[(&str, f64)]) -> Result<TransformFn, GfdslError> {
    TransformFn::parse(kind.source(), params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn parses_geometric_transform() {
        let e = parse("q^(i-j)").unwrap();
        assert_eq!(
            e,
            Expr::Binary(
                BinOp::Pow,
                b(Expr::Param("q".into())),
                b(Expr::Binary(BinOp::Sub, b(Expr::Var(IndexVar::I)), b(Expr::Var(IndexVar::J)))),
            )
        );
    }

    #[test]
    fn parses_literal() {
        assert_eq!(parse("1").unwrap(), Expr::Number(1.0));
    }

    #[test]
    fn parses_sine_alternating_product() {
        let e = parse("sin(2*a*i)*a^((-1)^j*j)").unwrap();
        let Expr::Binary(BinOp::Mul, l, r) = e else { panic!("expected product") };
        assert!(matches!(*l, Expr::Call(Func::Sin, _)));
        let Expr::Binary(BinOp::Pow, base, exp) = *r else { panic!("expected power") };
        assert_eq!(*base, Expr::Param("a".into()));
        // Exponent is (-1)^j * j with the nested power intact.
        let Expr::Binary(BinOp::Mul, inner, jv) = *exp else { panic!("expected product exponent") };
        assert!(matches!(*inner, Expr::Binary(BinOp::Pow, _, _)));
        assert_eq!(*jv, Expr::Var(IndexVar::J));
    }

    #[test]
    fn unary_minus_binds_below_power() {
        // -1^j is -(1^j), which differs from (-1)^j at even j.
        let tf = TransformFn::parse("-1^j", &[]).unwrap();
        assert_eq!(tf.evaluate(1, 2).unwrap(), -1.0);
        let tf = TransformFn::parse("(-1)^j", &[]).unwrap();
        assert_eq!(tf.evaluate(1, 2).unwrap(), 1.0);
    }

    #[test]
    fn evaluation_examples() {
        let tf = TransformFn::parse("q^(i-j)", &[("q", 2.0)]).unwrap();
        assert_eq!(tf.evaluate(3, 1).unwrap(), 4.0);

        let tf = TransformFn::parse("q^((-1)^j*j)", &[("q", 2.0)]).unwrap();
        assert_eq!(tf.evaluate(1, 2).unwrap(), 4.0);

        let tf = TransformFn::parse("sin(2*a*i)", &[("a", 1.0)]).unwrap();
        assert!((tf.evaluate(1, 1).unwrap() - 2f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn evaluation_is_bit_deterministic() {
        let tf = TransformFn::parse("sin(2*a*i)*a^((-1)^j*j)", &[("a", 1.5)]).unwrap();
        for i in 1..10 {
            for j in 1..10 {
                assert_eq!(tf.evaluate(i, j).unwrap().to_bits(), tf.evaluate(i, j).unwrap().to_bits());
            }
        }
    }

    #[test]
    fn exact_evaluation() {
        let tf = TransformFn::parse("q^(i-j)", &[("q", 2.0)]).unwrap();
        let v = tf.evaluate_exact(1, 3).unwrap();
        assert_eq!(v, BigRational::new(1.into(), 4.into()));

        // 0.5 is dyadic, hence exact.
        let tf = TransformFn::parse("0.5*i", &[]).unwrap();
        assert_eq!(tf.evaluate_exact(3, 1).unwrap(), BigRational::new(3.into(), 2.into()));

        let tf = TransformFn::parse("sin(i)", &[]).unwrap();
        assert!(matches!(
            tf.evaluate_exact(1, 1).unwrap_err().kind,
            EvalErrorKind::NotExact("sin")
        ));

        // (-1)^j flips sign exactly.
        let tf = TransformFn::parse("(-1)^j", &[]).unwrap();
        assert_eq!(tf.evaluate_exact(1, 3).unwrap(), BigRational::from_integer((-1).into()));
    }

    #[test]
    fn negative_base_requires_integer_exponent() {
        let tf = TransformFn::parse("(-2)^x", &[("x", 0.5)]).unwrap();
        assert!(matches!(
            tf.evaluate(1, 1).unwrap_err().kind,
            EvalErrorKind::NegativeBasePow { .. }
        ));
    }

    #[test]
    fn error_positions() {
        let err = parse("q^^2").unwrap_err();
        assert!(matches!(err, ParseError::Unexpected { pos: 2, .. }), "{err:?}");
        let err = parse("foo(i)").unwrap_err();
        assert_eq!(err, ParseError::UnknownFunction { pos: 0, name: "foo".into() });
        assert_eq!(parse("  ").unwrap_err(), ParseError::Empty);
    }

    #[test]
    fn unbound_parameter_rejected_at_bind_time() {
        assert!(matches!(
            TransformFn::parse("q^(i-j)", &[]),
            Err(GfdslError::UnboundParam(p)) if p == "q"
        ));
    }

    #[test]
    fn print_reparse_round_trip() {
        for src in [
            "q^(i-j)",
            "sin(2*a*i)*a^((-1)^j*j)",
            "1/(f+i^2)",
            "1/(f+j^2)^0.5",
            "f+i-j",
            "-1^j",
            "2^-3",
            "a-(b-c)",
            "a^b^c",
        ] {
            let ast = parse(src).unwrap();
            let printed = ast.to_string();
            let reparsed = parse(&printed).unwrap();
            assert_eq!(ast, reparsed, "{src} -> {printed}");
        }
    }

    #[test]
    fn builtins_match_their_sources() {
        let cases: Vec<(BuiltinKind, Vec<(&str, f64)>)> = vec![
            (BuiltinKind::Constant, vec![("c", 1.0)]),
            (BuiltinKind::RowOnly, vec![("f", 1.0)]),
            (BuiltinKind::ColOnly, vec![("f", 1.0)]),
            (BuiltinKind::GeometricCw, vec![("f", 3.0)]),
            (BuiltinKind::AlternatingCol, vec![("q", 2.0)]),
            (BuiltinKind::SineRow, vec![("a", 1.0)]),
        ];
        for (kind, params) in cases {
            let built = builtin(kind, &params).unwrap();
            let parsed = TransformFn::parse(kind.source(), &params).unwrap();
            for i in 1..=64 {
                for j in 1..=64 {
                    assert_eq!(
                        built.evaluate(i, j).unwrap().to_bits(),
                        parsed.evaluate(i, j).unwrap().to_bits()
                    );
                }
            }
        }
    }

    #[test]
    fn builtin_geometric_example() {
        let g = builtin(BuiltinKind::GeometricCw, &[("f", 3.0)]).unwrap();
        assert_eq!(g.evaluate(2, 1).unwrap(), 3.0);
        let c = builtin(BuiltinKind::Constant, &[("c", 1.0)]).unwrap();
        assert_eq!(c.evaluate(7, 13).unwrap(), 1.0);
        assert!(matches!(
            builtin(BuiltinKind::GeometricCw, &[]),
            Err(GfdslError::UnboundParam(_))
        ));
    }

    #[test]
    fn nesting_depth_is_bounded() {
        let deep_ok = format!("{}1{}", "(".repeat(200), ")".repeat(200));
        assert!(parse(&deep_ok).is_ok());
        let too_deep = format!("{}1{}", "(".repeat(50_000), ")".repeat(50_000));
        assert!(matches!(parse(&too_deep), Err(ParseError::TooDeep { .. })));
        let minus_chain = format!("{}x", "-".repeat(50_000));
        assert!(matches!(parse(&minus_chain), Err(ParseError::TooDeep { .. })));
    }

    #[test]
    fn zero_divisor_flagged_with_position() {
        let g = TransformFn::parse("i-j", &[]).unwrap();
        let err = g.check_grid(3, 3, true).unwrap_err();
        assert_eq!((err.i, err.j), (1, 1));
        assert_eq!(err.kind, EvalErrorKind::ZeroDivisor);
    }
}
