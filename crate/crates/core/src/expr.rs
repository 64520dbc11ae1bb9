//! A small real-analytic expression language with interchangeable
//! evaluation backends.
//!
//! Grammar (left-associative, whitespace insignificant):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | atom ('^' signed_number)?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Numbers are integers or decimals; a quotient of two number literals
//! folds into a single rational literal, so `1/2` and `3.5` both parse to
//! exact rationals. Exponents are integer or rational literals. Negation
//! applies to a whole factor, so `-x^2` is `-(x^2)`.
//!
//! The same tree evaluates over exact rationals, over the rational-function
//! field (where `x` can be bound to an infinitesimal), or over truncated
//! series (where the reserved symbol `e` denotes `ε` and `O(e^k)` marks a
//! truncation window).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ratfunc::RatFunc;
use crate::rational::Rational;
use crate::series::{
    extend_analytic, extend_pow_rational, AnalyticFn, Coeff, Mode, SeriesCtx, SeriesElem,
};

/// Function names admitted by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuncName {
    Exp,
    Sin,
    Cos,
    Log,
    Sqrt,
    Atan,
    Abs,
    /// `O(e^k)`: truncation marker, meaningful only on the series backend.
    WindowCap,
}

impl FuncName {
    pub fn parse(name: &str) -> Option<FuncName> {
        Some(match name {
            "exp" => FuncName::Exp,
            "sin" => FuncName::Sin,
            "cos" => FuncName::Cos,
            "log" | "ln" => FuncName::Log,
            "sqrt" => FuncName::Sqrt,
            "atan" => FuncName::Atan,
            "abs" => FuncName::Abs,
            "O" => FuncName::WindowCap,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            FuncName::Exp => "exp",
            FuncName::Sin => "sin",
            FuncName::Cos => "cos",
            FuncName::Log => "log",
            FuncName::Sqrt => "sqrt",
            FuncName::Atan => "atan",
            FuncName::Abs => "abs",
            FuncName::WindowCap => "O",
        }
    }

    fn analytic(self) -> Option<AnalyticFn> {
        Some(match self {
            FuncName::Exp => AnalyticFn::Exp,
            FuncName::Sin => AnalyticFn::Sin,
            FuncName::Cos => AnalyticFn::Cos,
            FuncName::Log => AnalyticFn::Log,
            FuncName::Sqrt => AnalyticFn::Sqrt,
            FuncName::Atan => AnalyticFn::Atan,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Exponentiation; the right child is always a literal.
    Pow,
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(Rational),
    Var(String),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(FuncName, Box<Expr>),
}

impl Expr {
    pub fn literal(r: Rational) -> Expr {
        // Negative constants are kept as negations of nonnegative literals
        // so the canonical printer round-trips; pow exponents are the one
        // place a negative literal appears directly.
        if r.is_negative() {
            Expr::Unary(UnOp::Neg, Box::new(Expr::Literal(-r)))
        } else {
            Expr::Literal(r)
        }
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Literal(_) => {}
            Expr::Var(v) => out.push(v.clone()),
            Expr::Unary(_, a) => a.collect_vars(out),
            Expr::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Call(_, a) => a.collect_vars(out),
        }
    }

    /// True when no transcendental call appears (window caps excluded).
    pub fn is_rational_only(&self) -> bool {
        match self {
            Expr::Literal(_) | Expr::Var(_) => true,
            Expr::Unary(_, a) => a.is_rational_only(),
            Expr::Binary(BinOp::Pow, a, b) => {
                let int_exp = matches!(&**b, Expr::Literal(r) if r.is_integer())
                    || matches!(&**b, Expr::Unary(UnOp::Neg, inner)
                        if matches!(&**inner, Expr::Literal(r) if r.is_integer()));
                int_exp && a.is_rational_only()
            }
            Expr::Binary(_, a, b) => a.is_rational_only() && b.is_rational_only(),
            Expr::Call(_, _) => false,
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(r) => format!("number `{r}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(Error::SyntaxError {
                            offset: i,
                            expected: "digit after decimal point".into(),
                            found: "end of number".into(),
                        });
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &src[start..i];
                let value = Rational::parse(text)?;
                out.push((Tok::Number(value), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::SyntaxError {
                    offset: i,
                    expected: "number, identifier or operator".into(),
                    found: format!("`{}`", &src[i..i + 1]),
                })
            }
        }
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        if self.pos + 1 < self.toks.len() {
            &self.toks[self.pos + 1].0
        } else {
            &Tok::Eof
        }
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> Error {
        Error::SyntaxError {
            offset: self.offset(),
            expected: expected.into(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.err(expected))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            acc = Expr::Binary(op, Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            acc = fold_binary(op, acc, rhs)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.factor()?;
            return Ok(Expr::Unary(UnOp::Neg, Box::new(inner)));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let e = self.signed_number()?;
            return Ok(Expr::Binary(
                BinOp::Pow,
                Box::new(base),
                Box::new(Expr::Literal(e)),
            ));
        }
        Ok(base)
    }

    /// Exponent literal: optionally signed integer or `p/q`.
    fn signed_number(&mut self) -> Result<Rational> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let Tok::Number(n) = self.peek().clone() else {
            return Err(self.err("integer or rational exponent"));
        };
        self.bump();
        let mut value = n;
        if *self.peek() == Tok::Slash {
            if let Tok::Number(_) = self.peek2() {
                self.bump();
                let Tok::Number(d) = self.bump() else {
                    unreachable!("peeked number")
                };
                value = (&value / &d).map_err(|_| Error::Parse("zero exponent denominator".into()))?;
            }
        }
        Ok(if negative { -value } else { value })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Number(n) => {
                self.bump();
                Ok(Expr::Literal(n))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    let Some(func) = FuncName::parse(&name) else {
                        return Err(Error::UnknownFunction(name));
                    };
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::Call(func, Box::new(arg)))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.err("number, identifier or `(`")),
        }
    }
}

/// Quotients of two literals fold into one rational literal, implementing
/// `p/q` number syntax without whitespace sensitivity.
fn fold_binary(op: BinOp, lhs: Expr, rhs: Expr) -> Result<Expr> {
    if op == BinOp::Div {
        if let (Expr::Literal(a), Expr::Literal(b)) = (&lhs, &rhs) {
            if b.is_zero() {
                return Err(Error::Parse("literal with zero denominator".into()));
            }
            return Ok(Expr::Literal((a / b)?));
        }
    }
    Ok(Expr::Binary(op, Box::new(lhs), Box::new(rhs)))
}

/// Parses source text into an expression tree.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("end of input"));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Canonical printer
// ---------------------------------------------------------------------------

// Precedence contexts: 1 sum, 2 product, 3 negation operand, 4 pow base.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        // A fractional literal prints as `p/q`, which reads as a quotient.
        Expr::Literal(r) if !r.is_integer() => 2,
        Expr::Unary(..) | Expr::Binary(BinOp::Pow, ..) => 3,
        Expr::Literal(_) | Expr::Var(_) | Expr::Call(..) => 4,
    }
}

fn render_into(e: &Expr, min_prec: u8, out: &mut String) {
    let p = prec(e);
    let need_parens = p < min_prec;
    if need_parens {
        out.push('(');
    }
    match e {
        Expr::Literal(r) => out.push_str(&r.to_string()),
        Expr::Var(v) => out.push_str(v),
        Expr::Unary(UnOp::Neg, a) => {
            out.push('-');
            render_into(a, 3, out);
        }
        Expr::Binary(BinOp::Pow, base, e) => {
            render_into(base, 4, out);
            out.push('^');
            if let Expr::Literal(r) = &**e {
                out.push_str(&r.to_string());
            } else {
                // Unreachable for parsed trees; kept total for hand-built ones.
                render_into(e, 4, out);
            }
        }
        Expr::Binary(op, a, b) => {
            let (sym, level) = match op {
                BinOp::Add => ("+", 1),
                BinOp::Sub => ("-", 1),
                BinOp::Mul => ("*", 2),
                BinOp::Div => ("/", 2),
                BinOp::Pow => unreachable!("handled above"),
            };
            render_into(a, level, out);
            out.push_str(sym);
            // Right operands must bind tighter to keep left associativity on
            // reparse. A `/` directly after a pow exponent would re-lex as a
            // rational exponent (`x^2/3` means `x^(2/3)`), so that right
            // operand is parenthesized unconditionally.
            if *op == BinOp::Div && ends_with_pow_exponent(a) {
                out.push('(');
                render_into(b, 0, out);
                out.push(')');
            } else {
                render_into(b, level + 1, out);
            }
        }
        Expr::Call(f, a) => {
            out.push_str(f.name());
            out.push('(');
            render_into(a, 0, out);
            out.push(')');
        }
    }
    if need_parens {
        out.push(')');
    }
}

/// True when the node's printed form ends in a bare pow exponent, i.e. in
/// digits that a following `/ number` would capture.
fn ends_with_pow_exponent(e: &Expr) -> bool {
    match e {
        // Fractional exponents already carry their slash; only a bare
        // integer exponent can capture a following `/ number`.
        Expr::Binary(BinOp::Pow, _, exp) => {
            matches!(&**exp, Expr::Literal(r) if r.is_integer())
        }
        // The tail belongs to the right child only when the renderer leaves
        // it unparenthesized at that position.
        Expr::Binary(BinOp::Add | BinOp::Sub, _, b) => {
            prec(b) >= 2 && ends_with_pow_exponent(b)
        }
        Expr::Binary(BinOp::Mul | BinOp::Div, _, b) => {
            prec(b) >= 3 && ends_with_pow_exponent(b)
        }
        Expr::Unary(_, a) => prec(a) >= 3 && ends_with_pow_exponent(a),
        _ => false,
    }
}

/// Canonical printer; `parse(render(e)) == e` structurally.
pub fn render(e: &Expr) -> String {
    let mut out = String::new();
    render_into(e, 0, &mut out);
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(self))
    }
}

// ---------------------------------------------------------------------------
// Evaluation backends
// ---------------------------------------------------------------------------

/// One evaluation domain: a value type plus the field operations on it.
pub trait Backend {
    type Value: Clone;

    fn backend_name(&self) -> &'static str;
    fn literal(&self, r: &Rational) -> Result<Self::Value>;
    /// Backend-reserved symbols resolved before the binding map.
    fn builtin_var(&self, _name: &str) -> Option<Self::Value> {
        None
    }
    fn neg(&self, v: &Self::Value) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn pow(&self, v: &Self::Value, e: &Rational) -> Result<Self::Value>;
    fn call(&self, f: FuncName, arg: &Self::Value) -> Result<Self::Value>;
}

/// Structural-recursion evaluator over any backend.
pub fn eval<B: Backend>(
    e: &Expr,
    backend: &B,
    bindings: &BTreeMap<String, B::Value>,
) -> Result<B::Value> {
    match e {
        Expr::Literal(r) => backend.literal(r),
        Expr::Var(name) => {
            if let Some(v) = bindings.get(name) {
                return Ok(v.clone());
            }
            backend
                .builtin_var(name)
                .ok_or_else(|| Error::UnboundVariable(name.clone()))
        }
        Expr::Unary(UnOp::Neg, a) => {
            let v = eval(a, backend, bindings)?;
            backend.neg(&v)
        }
        Expr::Binary(BinOp::Pow, base, e) => {
            let Expr::Literal(r) = &**e else {
                return Err(Error::NonIntegerExponent(format!("{e}")));
            };
            let v = eval(base, backend, bindings)?;
            backend.pow(&v, r)
        }
        Expr::Binary(op, a, b) => {
            let va = eval(a, backend, bindings)?;
            let vb = eval(b, backend, bindings)?;
            match op {
                BinOp::Add => backend.add(&va, &vb),
                BinOp::Sub => backend.sub(&va, &vb),
                BinOp::Mul => backend.mul(&va, &vb),
                BinOp::Div => backend.div(&va, &vb),
                BinOp::Pow => unreachable!("handled above"),
            }
        }
        Expr::Call(f, a) => {
            let v = eval(a, backend, bindings)?;
            backend.call(*f, &v)
        }
    }
}

/// Exact rational arithmetic; `abs` and exactly-representable roots only.
pub struct RealBackend;

impl Backend for RealBackend {
    type Value = Rational;

    fn backend_name(&self) -> &'static str {
        "real"
    }

    fn literal(&self, r: &Rational) -> Result<Rational> {
        Ok(r.clone())
    }

    fn neg(&self, v: &Rational) -> Result<Rational> {
        Ok(-v)
    }

    fn add(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        Ok(a + b)
    }

    fn sub(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        Ok(a - b)
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        Ok(a * b)
    }

    fn div(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        a / b
    }

    fn pow(&self, v: &Rational, e: &Rational) -> Result<Rational> {
        if e.is_integer() {
            let k = e
                .numer()
                .to_i64()
                .ok_or_else(|| Error::DomainError(format!("exponent {e} too large")))?;
            return v.pow_int(k);
        }
        v.pow_rational_exact(e).ok_or_else(|| {
            Error::ModeError(format!("{v}^({e}) is not an exact rational"))
        })
    }

    fn call(&self, f: FuncName, arg: &Rational) -> Result<Rational> {
        match f {
            FuncName::Abs => Ok(arg.abs()),
            FuncName::Sqrt => arg
                .sqrt_exact()
                .ok_or_else(|| Error::ModeError(format!("sqrt({arg}) is not an exact rational"))),
            other => Err(Error::FunctionUnavailable {
                func: other.name().into(),
                backend: self.backend_name(),
            }),
        }
    }
}

/// The rational-function field; `x` is usually bound to the infinitesimal
/// generator. No transcendentals live here.
pub struct RatFuncBackend;

impl Backend for RatFuncBackend {
    type Value = RatFunc;

    fn backend_name(&self) -> &'static str {
        "ratfunc"
    }

    fn literal(&self, r: &Rational) -> Result<RatFunc> {
        Ok(RatFunc::from_rational(r.clone()))
    }

    fn builtin_var(&self, name: &str) -> Option<RatFunc> {
        (name == "x").then(RatFunc::x)
    }

    fn neg(&self, v: &RatFunc) -> Result<RatFunc> {
        Ok(-v)
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        Ok(a + b)
    }

    fn sub(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        Ok(a - b)
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        Ok(a * b)
    }

    fn div(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        a.div(b)
    }

    fn pow(&self, v: &RatFunc, e: &Rational) -> Result<RatFunc> {
        if !e.is_integer() {
            return Err(Error::NonIntegerExponent(e.to_string()));
        }
        let k = e
            .numer()
            .to_i64()
            .ok_or_else(|| Error::DomainError(format!("exponent {e} too large")))?;
        v.pow_int(k)
    }

    fn call(&self, f: FuncName, _arg: &RatFunc) -> Result<RatFunc> {
        Err(Error::FunctionUnavailable {
            func: f.name().into(),
            backend: self.backend_name(),
        })
    }
}

/// A series-backend value: an element, or a pending `O(e^k)` marker that
/// truncates whatever it is added to.
#[derive(Debug, Clone)]
pub enum SeriesVal {
    Elem(SeriesElem),
    WindowMark(i64),
}

impl SeriesVal {
    pub fn into_elem(self) -> Result<SeriesElem> {
        match self {
            SeriesVal::Elem(s) => Ok(s),
            SeriesVal::WindowMark(k) => Ok(SeriesElem::zero_up_to(Mode::Exact, k)),
        }
    }
}

/// Truncated-series arithmetic with explicit mode and window configuration.
pub struct SeriesBackend {
    pub mode: Mode,
    pub ctx: SeriesCtx,
}

impl SeriesBackend {
    pub fn new(mode: Mode, ctx: SeriesCtx) -> SeriesBackend {
        SeriesBackend { mode, ctx }
    }

    fn want_elem<'v>(&self, v: &'v SeriesVal) -> Result<&'v SeriesElem> {
        match v {
            SeriesVal::Elem(s) => Ok(s),
            SeriesVal::WindowMark(_) => Err(Error::Parse(
                "O(...) may only be added to a series".into(),
            )),
        }
    }
}

impl Backend for SeriesBackend {
    type Value = SeriesVal;

    fn backend_name(&self) -> &'static str {
        "series"
    }

    fn literal(&self, r: &Rational) -> Result<SeriesVal> {
        Ok(SeriesVal::Elem(SeriesElem::from_rational(
            r, self.mode, &self.ctx,
        )))
    }

    fn builtin_var(&self, name: &str) -> Option<SeriesVal> {
        (name == "e").then(|| SeriesVal::Elem(SeriesElem::epsilon(self.mode)))
    }

    fn neg(&self, v: &SeriesVal) -> Result<SeriesVal> {
        Ok(SeriesVal::Elem(self.want_elem(v)?.neg()))
    }

    fn add(&self, a: &SeriesVal, b: &SeriesVal) -> Result<SeriesVal> {
        match (a, b) {
            (SeriesVal::Elem(x), SeriesVal::Elem(y)) => {
                Ok(SeriesVal::Elem(x.add(y, &self.ctx)?))
            }
            (SeriesVal::Elem(x), SeriesVal::WindowMark(k))
            | (SeriesVal::WindowMark(k), SeriesVal::Elem(x)) => {
                Ok(SeriesVal::Elem(x.truncate_to(*k)))
            }
            (SeriesVal::WindowMark(a), SeriesVal::WindowMark(b)) => {
                Ok(SeriesVal::WindowMark(*a.min(b)))
            }
        }
    }

    fn sub(&self, a: &SeriesVal, b: &SeriesVal) -> Result<SeriesVal> {
        match b {
            SeriesVal::WindowMark(_) => self.add(a, b),
            SeriesVal::Elem(y) => self.add(a, &SeriesVal::Elem(y.neg())),
        }
    }

    fn mul(&self, a: &SeriesVal, b: &SeriesVal) -> Result<SeriesVal> {
        let x = self.want_elem(a)?;
        let y = self.want_elem(b)?;
        Ok(SeriesVal::Elem(x.mul(y, &self.ctx)?))
    }

    fn div(&self, a: &SeriesVal, b: &SeriesVal) -> Result<SeriesVal> {
        let x = self.want_elem(a)?;
        let y = self.want_elem(b)?;
        Ok(SeriesVal::Elem(x.div(y, &self.ctx)?))
    }

    fn pow(&self, v: &SeriesVal, e: &Rational) -> Result<SeriesVal> {
        let x = self.want_elem(v)?;
        Ok(SeriesVal::Elem(extend_pow_rational(x, e, &self.ctx)?))
    }

    fn call(&self, f: FuncName, arg: &SeriesVal) -> Result<SeriesVal> {
        if f == FuncName::WindowCap {
            // O(e^k): the argument must be a plain power of e.
            let s = self.want_elem(arg)?;
            let lead = s.lead_exponent().ok_or_else(|| {
                Error::Parse("O(...) expects a power of e".into())
            })?;
            let ok = s.coeff_at(lead).is_some_and(|c| match c {
                Coeff::Exact(r) => r.is_one(),
                Coeff::Approx(d) => d.cmp(&crate::decimal::Decimal::one()).is_eq(),
            });
            if !ok {
                return Err(Error::Parse("O(...) expects a power of e".into()));
            }
            return Ok(SeriesVal::WindowMark(lead));
        }
        let Some(analytic) = f.analytic() else {
            return Err(Error::FunctionUnavailable {
                func: f.name().into(),
                backend: self.backend_name(),
            });
        };
        let s = self.want_elem(arg)?;
        Ok(SeriesVal::Elem(extend_analytic(analytic, s, &self.ctx)?))
    }
}

/// Convenience wrappers for the three backends.
pub fn eval_real(e: &Expr, bindings: &BTreeMap<String, Rational>) -> Result<Rational> {
    eval(e, &RealBackend, bindings)
}

pub fn eval_ratfunc(e: &Expr, bindings: &BTreeMap<String, RatFunc>) -> Result<RatFunc> {
    eval(e, &RatFuncBackend, bindings)
}

pub fn eval_series(
    e: &Expr,
    backend: &SeriesBackend,
    bindings: &BTreeMap<String, SeriesElem>,
) -> Result<SeriesElem> {
    let wrapped: BTreeMap<String, SeriesVal> = bindings
        .iter()
        .map(|(k, v)| (k.clone(), SeriesVal::Elem(v.clone())))
        .collect();
    eval(e, backend, &wrapped)?.into_elem()
}

// ---------------------------------------------------------------------------
// Symbolic differentiation (test oracle)
// ---------------------------------------------------------------------------

fn lit_i(n: i64) -> Expr {
    Expr::Literal(Rational::from_int(n))
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Literal(r) if r.is_zero())
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Literal(r) if r.is_one())
}

fn smart_add(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        return b;
    }
    if is_zero(&b) {
        return a;
    }
    if let (Expr::Literal(x), Expr::Literal(y)) = (&a, &b) {
        return Expr::literal(x + y);
    }
    Expr::Binary(BinOp::Add, Box::new(a), Box::new(b))
}

fn smart_sub(a: Expr, b: Expr) -> Expr {
    if is_zero(&b) {
        return a;
    }
    if let (Expr::Literal(x), Expr::Literal(y)) = (&a, &b) {
        return Expr::literal(x - y);
    }
    Expr::Binary(BinOp::Sub, Box::new(a), Box::new(b))
}

fn smart_mul(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) || is_zero(&b) {
        return lit_i(0);
    }
    if is_one(&a) {
        return b;
    }
    if is_one(&b) {
        return a;
    }
    if let (Expr::Literal(x), Expr::Literal(y)) = (&a, &b) {
        return Expr::literal(x * y);
    }
    Expr::Binary(BinOp::Mul, Box::new(a), Box::new(b))
}

fn smart_div(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        return lit_i(0);
    }
    if is_one(&b) {
        return a;
    }
    // A quotient of two literals is a literal in this language.
    if let (Expr::Literal(x), Expr::Literal(y)) = (&a, &b) {
        if !y.is_zero() {
            return Expr::literal((x / y).expect("nonzero"));
        }
    }
    Expr::Binary(BinOp::Div, Box::new(a), Box::new(b))
}

fn pow_lit(base: Expr, e: Rational) -> Expr {
    if e.is_zero() {
        return lit_i(1);
    }
    if e.is_one() {
        return base;
    }
    Expr::Binary(BinOp::Pow, Box::new(base), Box::new(Expr::Literal(e)))
}

/// Derivative by the standard rules; folds constants but does not simplify
/// further.
pub fn symbolic_diff(e: &Expr, var: &str) -> Result<Expr> {
    Ok(match e {
        Expr::Literal(_) => lit_i(0),
        Expr::Var(v) => {
            if v == var {
                lit_i(1)
            } else {
                lit_i(0)
            }
        }
        Expr::Unary(UnOp::Neg, a) => {
            let da = symbolic_diff(a, var)?;
            if is_zero(&da) {
                lit_i(0)
            } else {
                Expr::Unary(UnOp::Neg, Box::new(da))
            }
        }
        Expr::Binary(BinOp::Add, a, b) => {
            smart_add(symbolic_diff(a, var)?, symbolic_diff(b, var)?)
        }
        Expr::Binary(BinOp::Sub, a, b) => {
            smart_sub(symbolic_diff(a, var)?, symbolic_diff(b, var)?)
        }
        Expr::Binary(BinOp::Mul, a, b) => {
            let da = symbolic_diff(a, var)?;
            let db = symbolic_diff(b, var)?;
            smart_add(
                smart_mul(da, (**b).clone()),
                smart_mul((**a).clone(), db),
            )
        }
        Expr::Binary(BinOp::Div, a, b) => {
            let da = symbolic_diff(a, var)?;
            let db = symbolic_diff(b, var)?;
            let num = smart_sub(
                smart_mul(da, (**b).clone()),
                smart_mul((**a).clone(), db),
            );
            let den = pow_lit((**b).clone(), Rational::from_int(2));
            smart_div(num, den)
        }
        Expr::Binary(BinOp::Pow, base, exp) => {
            let Expr::Literal(r) = &**exp else {
                return Err(Error::NonIntegerExponent(format!("{exp}")));
            };
            let dbase = symbolic_diff(base, var)?;
            let down = pow_lit((**base).clone(), r - &Rational::one());
            smart_mul(smart_mul(Expr::literal(r.clone()), down), dbase)
        }
        Expr::Call(f, a) => {
            let da = symbolic_diff(a, var)?;
            let outer = match f {
                FuncName::Exp => Expr::Call(FuncName::Exp, a.clone()),
                FuncName::Sin => Expr::Call(FuncName::Cos, a.clone()),
                FuncName::Cos => {
                    Expr::Unary(UnOp::Neg, Box::new(Expr::Call(FuncName::Sin, a.clone())))
                }
                FuncName::Log => smart_div(lit_i(1), (**a).clone()),
                FuncName::Sqrt => smart_div(
                    lit_i(1),
                    smart_mul(lit_i(2), Expr::Call(FuncName::Sqrt, a.clone())),
                ),
                FuncName::Atan => smart_div(
                    lit_i(1),
                    smart_add(lit_i(1), pow_lit((**a).clone(), Rational::from_int(2))),
                ),
                FuncName::Abs | FuncName::WindowCap => {
                    return Err(Error::NonDifferentiableNode(f.name().into()))
                }
            };
            smart_mul(outer, da)
        }
    })
}
