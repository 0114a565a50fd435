//! Scalar expressions in `t`, `y`, `v` with exact symbolic partial derivatives.
//!
//! Grammar (standard precedence, `^` binds tighter than unary minus and is
//! right associative):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' factor)?
//! base   := number | var | func '(' expr ')' | '(' expr ')' | '-' factor
//! func   := sin | cos | exp | log | sqrt
//! ```
//!
//! Powers whose exponent is not constant are rewritten as `exp(b * log(a))`
//! while parsing, so every `Pow` node has a constant exponent.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: expected {expected}, found {found}")]
    Syntax { offset: usize, expected: String, found: String },

    #[error("unknown identifier '{name}' at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("cannot evaluate {op} at (t, y, v) = ({t}, {y}, {v})")]
    Eval { op: &'static str, t: f64, y: f64, v: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    Y,
    V,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::Y => "y",
            Var::V => "v",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Call(Func, Box<Expr>),
}

// Constructors with constant folding and the usual 0/1 identities.
fn num(x: f64) -> Expr {
    Expr::Num(x)
}

fn fold(x: f64, otherwise: impl FnOnce() -> Expr) -> Expr {
    if x.is_finite() {
        Expr::Num(x)
    } else {
        otherwise()
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => num(-x),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => fold(x + y, || Expr::Add(Box::new(a.clone()), Box::new(b.clone()))),
        (Expr::Num(x), _) if *x == 0.0 => b,
        (_, Expr::Num(y)) if *y == 0.0 => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => fold(x - y, || Expr::Sub(Box::new(a.clone()), Box::new(b.clone()))),
        (Expr::Num(x), _) if *x == 0.0 => neg(b),
        (_, Expr::Num(y)) if *y == 0.0 => a,
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => fold(x * y, || Expr::Mul(Box::new(a.clone()), Box::new(b.clone()))),
        (Expr::Num(x), _) | (_, Expr::Num(x)) if *x == 0.0 => num(0.0),
        (Expr::Num(x), _) if *x == 1.0 => b,
        (_, Expr::Num(y)) if *y == 1.0 => a,
        (Expr::Num(x), _) if *x == -1.0 => neg(b),
        (_, Expr::Num(y)) if *y == -1.0 => neg(a),
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) if *y != 0.0 => {
            fold(x / y, || Expr::Div(Box::new(a.clone()), Box::new(b.clone())))
        }
        (Expr::Num(x), _) if *x == 0.0 => num(0.0),
        (_, Expr::Num(y)) if *y == 1.0 => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn pow(a: Expr, c: f64) -> Expr {
    if c == 0.0 {
        return num(1.0);
    }
    if c == 1.0 {
        return a;
    }
    match a {
        Expr::Num(x) => fold(powi_or_f(x, c), || Expr::Pow(Box::new(Expr::Num(x)), c)),
        a => Expr::Pow(Box::new(a), c),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    if let Expr::Num(x) = a {
        let folded = match f {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Exp => x.exp(),
            Func::Log if x > 0.0 => x.ln(),
            Func::Sqrt if x >= 0.0 => x.sqrt(),
            _ => f64::NAN,
        };
        return fold(folded, || Expr::Call(f, Box::new(Expr::Num(x))));
    }
    Expr::Call(f, Box::new(a))
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ExprError> {
        Parser::new(text).parse_all()
    }

    /// Value of an expression free of `t`, `y` and `v`, when it evaluates to a finite number.
    pub fn constant_value(&self) -> Option<f64> {
        if [Var::T, Var::Y, Var::V].iter().any(|&v| self.depends_on(v)) {
            return None;
        }
        self.eval(0.0, 0.0, 0.0).ok().filter(|x| x.is_finite())
    }

    pub fn depends_on(&self, var: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(v) => *v == var,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.depends_on(var),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on(var) || b.depends_on(var)
            }
        }
    }

    /// Exact partial derivative with respect to `var`.
    pub fn differentiate(&self, var: Var) -> Expr {
        match self {
            Expr::Num(_) => num(0.0),
            Expr::Var(v) => num(if *v == var { 1.0 } else { 0.0 }),
            Expr::Neg(a) => neg(a.differentiate(var)),
            Expr::Add(a, b) => add(a.differentiate(var), b.differentiate(var)),
            Expr::Sub(a, b) => sub(a.differentiate(var), b.differentiate(var)),
            Expr::Mul(a, b) => add(mul(a.differentiate(var), (**b).clone()), mul((**a).clone(), b.differentiate(var))),
            Expr::Div(a, b) => {
                let da = a.differentiate(var);
                let db = b.differentiate(var);
                if matches!(db, Expr::Num(x) if x == 0.0) {
                    div(da, (**b).clone())
                } else {
                    div(sub(mul(da, (**b).clone()), mul((**a).clone(), db)), pow((**b).clone(), 2.0))
                }
            }
            Expr::Pow(a, c) => mul(mul(num(*c), pow((**a).clone(), c - 1.0)), a.differentiate(var)),
            Expr::Call(f, a) => {
                let da = a.differentiate(var);
                let inner = (**a).clone();
                let outer = match f {
                    Func::Sin => call(Func::Cos, inner),
                    Func::Cos => neg(call(Func::Sin, inner)),
                    Func::Exp => call(Func::Exp, inner),
                    Func::Log => return div(da, inner),
                    Func::Sqrt => return div(da, mul(num(2.0), call(Func::Sqrt, inner))),
                };
                mul(outer, da)
            }
        }
    }

    /// Replaces every occurrence of `var` by `with`, re-folding constants.
    pub fn substitute(&self, var: Var, with: &Expr) -> Expr {
        match self {
            Expr::Num(x) => num(*x),
            Expr::Var(v) if *v == var => with.clone(),
            Expr::Var(v) => Expr::Var(*v),
            Expr::Neg(a) => neg(a.substitute(var, with)),
            Expr::Add(a, b) => add(a.substitute(var, with), b.substitute(var, with)),
            Expr::Sub(a, b) => sub(a.substitute(var, with), b.substitute(var, with)),
            Expr::Mul(a, b) => mul(a.substitute(var, with), b.substitute(var, with)),
            Expr::Div(a, b) => div(a.substitute(var, with), b.substitute(var, with)),
            Expr::Pow(a, c) => pow(a.substitute(var, with), *c),
            Expr::Call(f, a) => call(*f, a.substitute(var, with)),
        }
    }

    pub fn eval(&self, t: f64, y: f64, v: f64) -> Result<f64, ExprError> {
        let fail = |op| ExprError::Eval { op, t, y, v };
        let r = match self {
            Expr::Num(x) => *x,
            Expr::Var(Var::T) => t,
            Expr::Var(Var::Y) => y,
            Expr::Var(Var::V) => v,
            Expr::Neg(a) => -a.eval(t, y, v)?,
            Expr::Add(a, b) => a.eval(t, y, v)? + b.eval(t, y, v)?,
            Expr::Sub(a, b) => a.eval(t, y, v)? - b.eval(t, y, v)?,
            Expr::Mul(a, b) => a.eval(t, y, v)? * b.eval(t, y, v)?,
            Expr::Div(a, b) => {
                let d = b.eval(t, y, v)?;
                if d == 0.0 {
                    return Err(fail("division by zero"));
                }
                a.eval(t, y, v)? / d
            }
            Expr::Pow(a, c) => {
                let x = a.eval(t, y, v)?;
                if x == 0.0 && *c < 0.0 {
                    return Err(fail("negative power of zero"));
                }
                if x < 0.0 && c.fract() != 0.0 {
                    return Err(fail("fractional power of a negative number"));
                }
                powi_or_f(x, *c)
            }
            Expr::Call(f, a) => {
                let x = a.eval(t, y, v)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Log if x > 0.0 => x.ln(),
                    Func::Log => return Err(fail("log of a non-positive number")),
                    Func::Sqrt if x >= 0.0 => x.sqrt(),
                    Func::Sqrt => return Err(fail("sqrt of a negative number")),
                }
            }
        };
        if r.is_finite() {
            Ok(r)
        } else {
            Err(fail("overflow"))
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Num(x) if *x < 0.0 || (*x == 0.0 && x.is_sign_negative()) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn powi_or_f(x: f64, c: f64) -> f64 {
    if c.fract() == 0.0 && c.abs() <= i32::MAX as f64 {
        x.powi(c as i32)
    } else {
        x.powf(c)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, 4)
            }
            Expr::Add(a, b) => {
                wrap(f, a, 1)?;
                f.write_str(" + ")?;
                wrap(f, b, 2)
            }
            Expr::Sub(a, b) => {
                wrap(f, a, 1)?;
                f.write_str(" - ")?;
                wrap(f, b, 2)
            }
            Expr::Mul(a, b) => {
                wrap(f, a, 2)?;
                f.write_str("*")?;
                wrap(f, b, 3)
            }
            Expr::Div(a, b) => {
                wrap(f, a, 2)?;
                f.write_str("/")?;
                wrap(f, b, 3)
            }
            Expr::Pow(a, c) => {
                wrap(f, a, 5)?;
                if *c < 0.0 {
                    write!(f, "^({c})")
                } else {
                    write!(f, "^{c}")
                }
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(x) => write!(f, "number {x}"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Op(c) => write!(f, "'{c}'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    tok: Tok,
    tok_start: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0, tok: Tok::End, tok_start: 0 }
    }

    fn error<T>(&self, expected: &str) -> Result<T, ExprError> {
        Err(ExprError::Syntax { offset: self.tok_start, expected: expected.to_string(), found: self.tok.to_string() })
    }

    fn advance(&mut self) -> Result<(), ExprError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_start = self.pos;
        if self.pos >= bytes.len() {
            self.tok = Tok::End;
            return Ok(());
        }
        let c = bytes[self.pos];
        if c.is_ascii_digit() || c == b'.' {
            let start = self.pos;
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_digit() || bytes[self.pos] == b'.') {
                self.pos += 1;
            }
            if self.pos < bytes.len() && matches!(bytes[self.pos], b'e' | b'E') {
                let mut p = self.pos + 1;
                if p < bytes.len() && matches!(bytes[p], b'+' | b'-') {
                    p += 1;
                }
                if p < bytes.len() && bytes[p].is_ascii_digit() {
                    while p < bytes.len() && bytes[p].is_ascii_digit() {
                        p += 1;
                    }
                    self.pos = p;
                }
            }
            let text = &self.src[start..self.pos];
            return match text.parse::<f64>() {
                Ok(x) => {
                    self.tok = Tok::Num(x);
                    Ok(())
                }
                Err(_) => {
                    Err(ExprError::Syntax { offset: start, expected: "a number".into(), found: format!("'{text}'") })
                }
            };
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            self.tok = Tok::Ident(self.src[start..self.pos].to_string());
            return Ok(());
        }
        let ch = self.src[self.pos..].chars().next().unwrap_or('\0');
        self.pos += ch.len_utf8();
        self.tok = Tok::Op(ch);
        Ok(())
    }

    fn parse_all(mut self) -> Result<Expr, ExprError> {
        self.advance()?;
        let e = self.expr()?;
        if self.tok != Tok::End {
            return self.error("an operator or end of input");
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.tok {
                Tok::Op('+') => {
                    self.advance()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.advance()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.tok {
                Tok::Op('*') => {
                    self.advance()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Op('/') => {
                    self.advance()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.base()?;
        if self.tok != Tok::Op('^') {
            return Ok(base);
        }
        self.advance()?;
        let exponent = self.factor()?;
        Ok(match exponent.constant_value() {
            Some(c) => Expr::Pow(Box::new(base), c),
            None => Expr::Call(
                Func::Exp,
                Box::new(Expr::Mul(Box::new(exponent), Box::new(Expr::Call(Func::Log, Box::new(base))))),
            ),
        })
    }

    fn base(&mut self) -> Result<Expr, ExprError> {
        match self.tok.clone() {
            Tok::Num(x) => {
                self.advance()?;
                Ok(num(x))
            }
            Tok::Op('-') => {
                self.advance()?;
                Ok(match self.factor()? {
                    Expr::Num(x) => Expr::Num(-x),
                    e => Expr::Neg(Box::new(e)),
                })
            }
            Tok::Op('(') => {
                self.advance()?;
                let e = self.expr()?;
                self.expect_close()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let offset = self.tok_start;
                match name.as_str() {
                    "t" => {
                        self.advance()?;
                        Ok(Expr::Var(Var::T))
                    }
                    "y" => {
                        self.advance()?;
                        Ok(Expr::Var(Var::Y))
                    }
                    "v" => {
                        self.advance()?;
                        Ok(Expr::Var(Var::V))
                    }
                    _ => {
                        let Some(func) = Func::from_name(&name) else {
                            return Err(ExprError::UnknownIdentifier { name, offset });
                        };
                        self.advance()?;
                        if self.tok != Tok::Op('(') {
                            return self.error("'('");
                        }
                        self.advance()?;
                        let arg = self.expr()?;
                        self.expect_close()?;
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                }
            }
            _ => self.error("a number, variable, function or '('"),
        }
    }

    fn expect_close(&mut self) -> Result<(), ExprError> {
        if self.tok != Tok::Op(')') {
            return self.error("')'");
        }
        self.advance()
    }
}

/// Values of a Lagrangian's first and second partials in `y` and `v` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub dy: f64,
    pub dv: f64,
    pub dyy: f64,
    pub dyv: f64,
    pub dvv: f64,
}

/// `L(t, y, v)` together with its symbolic partial derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct Lagrangian {
    pub l: Expr,
    /// `∂₁L`, unused by the Euler–Lagrange residual.
    pub dt: Expr,
    /// `∂₂L`
    pub dy: Expr,
    /// `∂₃L`
    pub dv: Expr,
    pub dyy: Expr,
    pub dyv: Expr,
    pub dvv: Expr,
    source: String,
}

impl Lagrangian {
    pub fn new(l: Expr) -> Self {
        let source = l.to_string();
        Self::with_source(l, source)
    }

    fn with_source(l: Expr, source: String) -> Self {
        let dy = l.differentiate(Var::Y);
        let dv = l.differentiate(Var::V);
        Self {
            dt: l.differentiate(Var::T),
            dyy: dy.differentiate(Var::Y),
            dyv: dy.differentiate(Var::V),
            dvv: dv.differentiate(Var::V),
            dy,
            dv,
            l,
            source,
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn value(&self, t: f64, y: f64, v: f64) -> Result<f64, ExprError> {
        self.l.eval(t, y, v)
    }

    pub fn partials(&self, t: f64, y: f64, v: f64) -> Result<Partials, ExprError> {
        Ok(Partials {
            dy: self.dy.eval(t, y, v)?,
            dv: self.dv.eval(t, y, v)?,
            dyy: self.dyy.eval(t, y, v)?,
            dyv: self.dyv.eval(t, y, v)?,
            dvv: self.dvv.eval(t, y, v)?,
        })
    }

    /// True when `L` depends on neither `y` nor `v`.
    pub fn is_trajectory_independent(&self) -> bool {
        !self.l.depends_on(Var::Y) && !self.l.depends_on(Var::V)
    }
}

impl FromStr for Lagrangian {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self::with_source(Expr::parse(s)?, s.trim().to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn grammar_cases() {
        assert_eq!(p("v^2"), Expr::Pow(Box::new(Expr::Var(Var::V)), 2.0));
        assert_eq!(
            p("v^2 + t*y"),
            Expr::Add(
                Box::new(Expr::Pow(Box::new(Expr::Var(Var::V)), 2.0)),
                Box::new(Expr::Mul(Box::new(Expr::Var(Var::T)), Box::new(Expr::Var(Var::Y)))),
            )
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let at = |s: &str| p(s).eval(2.0, 3.0, 5.0).unwrap();
        assert_eq!(at("1 - 2 - 3"), -4.0);
        assert_eq!(at("8 / 4 / 2"), 1.0);
        assert_eq!(at("2^3^2"), 512.0);
        assert_eq!(at("-2^2"), -4.0);
        assert_eq!(at("t + y * v"), 17.0);
        assert_eq!(at("(t + y) * v"), 25.0);
        assert_eq!(at("2 * -y"), -6.0);
        assert_eq!(at("1.5e1 + .5"), 15.5);
        assert!((at("t^y") - 8.0).abs() < 1e-12);
    }

    #[test]
    fn syntax_error_offsets() {
        match Expr::parse("sin(t*") {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("unexpected {other:?}"),
        }
        match Expr::parse("v + * 2") {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Expr::parse("(v"), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(Expr::parse("v)"), Err(ExprError::Syntax { offset: 1, .. })));
        assert!(matches!(Expr::parse(""), Err(ExprError::Syntax { offset: 0, .. })));
        assert!(matches!(Expr::parse("sin t"), Err(ExprError::Syntax { offset: 4, .. })));
    }

    #[test]
    fn unknown_identifiers() {
        assert_eq!(Expr::parse("v + x"), Err(ExprError::UnknownIdentifier { name: "x".into(), offset: 4 }));
        assert!(matches!(Expr::parse("tan(t)"), Err(ExprError::UnknownIdentifier { .. })));
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("v^2").differentiate(Var::V), p("2*v"));
        assert_eq!(p("t*y").differentiate(Var::Y), p("t"));
        assert_eq!(p("sin(t)*v").differentiate(Var::T), p("cos(t)*v"));
        assert_eq!(p("v^2 + y^2").differentiate(Var::Y), p("2*y"));
        assert_eq!(p("exp(t)").differentiate(Var::Y), p("0"));
    }

    #[test]
    fn evaluation() {
        assert_eq!(p("v^2").eval(0.0, 0.0, 3.0).unwrap(), 9.0);
        assert_eq!(p("t*y").eval(2.0, 5.0, 0.0).unwrap(), 10.0);
        assert!(matches!(p("log(y)").eval(0.0, -1.0, 0.0), Err(ExprError::Eval { .. })));
        assert!(matches!(p("sqrt(y)").eval(0.0, -1.0, 0.0), Err(ExprError::Eval { .. })));
        assert!(matches!(p("1/y").eval(0.0, 0.0, 0.0), Err(ExprError::Eval { .. })));
        let err = p("log(y)").eval(1.0, -2.0, 3.0).unwrap_err();
        assert_eq!(err, ExprError::Eval { op: "log of a non-positive number", t: 1.0, y: -2.0, v: 3.0 });
    }

    #[test]
    fn parsing_keeps_structure_derivatives_fold() {
        assert_eq!(p("2*3 + 1").to_string(), "2*3 + 1");
        assert_eq!(p("v^(1/2)"), Expr::Pow(Box::new(Expr::Var(Var::V)), 0.5));
        // -(t*0) is -0 for negative t; folding would lose the sign
        assert!(p("-(t*log(1))").eval(-1.0, 0.0, 0.0).unwrap().is_sign_positive());
        assert!(p("0*log(y)").eval(0.0, -1.0, 0.0).is_err());
        assert_eq!(p("0*y + v*1").differentiate(Var::V), Expr::Num(1.0));
        assert_eq!(p("3*v^2").differentiate(Var::Y), Expr::Num(0.0));
    }

    #[test]
    fn variable_exponent_is_rewritten() {
        let e = p("y^v");
        assert!(matches!(e, Expr::Call(Func::Exp, _)));
        assert!((e.eval(0.0, 2.0, 3.0).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "v^2 + t*y",
            "-(t - y)^3 / (1 + v^2)",
            "exp(-t) * sin(y)^2 - sqrt(1 + v*v)",
            "y - (t - v)",
            "2^(-1) * (-y)^2",
            "t / (y / v)",
        ] {
            let e = p(s);
            let printed = e.to_string();
            let back = p(&printed);
            for &(t, y, v) in &[(0.3, 1.2, -0.7), (1.1, -0.4, 2.0)] {
                assert_eq!(e.eval(t, y, v).unwrap(), back.eval(t, y, v).unwrap(), "{s} -> {printed}");
            }
        }
    }

    #[test]
    fn lagrangian_partials() {
        let l: Lagrangian = "v^2 + y^2 + t*y*v".parse().unwrap();
        let pd = l.partials(2.0, 3.0, 5.0).unwrap();
        assert_eq!(pd.dy, 2.0 * 3.0 + 2.0 * 5.0);
        assert_eq!(pd.dv, 2.0 * 5.0 + 2.0 * 3.0);
        assert_eq!(pd.dyy, 2.0);
        assert_eq!(pd.dyv, 2.0);
        assert_eq!(pd.dvv, 2.0);
        assert_eq!(l.dt.eval(2.0, 3.0, 5.0).unwrap(), 15.0);
        assert_eq!(l.source(), "v^2 + y^2 + t*y*v");
        assert!(!l.is_trajectory_independent());
        assert!("t^2 + 1".parse::<Lagrangian>().unwrap().is_trajectory_independent());
    }
}
