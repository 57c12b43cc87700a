//! Rate functions `ψ: [1, ∞) → [1, ∞)` written as small expressions in `t`,
//! e.g. `sqrt(log(t+4)*loglog(t+4))`.
//!
//! Grammar: numbers, `t`, `+ - * / ^`, unary minus, parentheses and the
//! functions `log`, `loglog`, `sqrt`, `exp`, `max`, `min`. Evaluation runs in
//! [`Ext`], which switches to a sign-and-logarithm form when values leave the
//! double range, so `ψ(bʲ)` stays computable for `j` far beyond `10³⁰⁰`.
//!
//! The evaluated function is clamped below by 1: `ψ̂(t) = max{1, ψ(t)}`.

use std::cmp::Ordering;
use std::fmt;

/// Number of grid points checked at construction.
pub const VALIDATION_POINTS: usize = 10_000;
/// Upper end of the validation grid.
pub const VALIDATION_T_MAX: f64 = 1e300;
/// Relative slack when checking monotonicity on the grid.
const MONOTONE_SLACK: f64 = 1e-12;

/// Values beyond this magnitude are kept in log form.
const PLAIN_LIMIT: f64 = 1e300;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RateError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expression is not finite at t = {t}")]
    NotFinite { t: f64 },
    #[error("expression decreases near t = {t}")]
    Decreasing { t: f64 },
}

/// A real number that may be astronomically large or small.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ext {
    Plain(f64),
    /// `sign · e^ln_abs`.
    Log { sign: i8, ln_abs: f64 },
}

impl Ext {
    pub fn from_ln(ln_abs: f64) -> Self {
        Ext::Log { sign: 1, ln_abs }.normalize()
    }

    fn normalize(self) -> Self {
        match self {
            Ext::Log { sign, ln_abs } => {
                if sign == 0 || ln_abs == f64::NEG_INFINITY {
                    Ext::Plain(0.0)
                } else if ln_abs.is_nan() {
                    Ext::Plain(f64::NAN)
                } else if ln_abs.abs() < 690.0 {
                    Ext::Plain(sign as f64 * ln_abs.exp())
                } else {
                    self
                }
            }
            Ext::Plain(v) if v.is_finite() && v.abs() > PLAIN_LIMIT => {
                Ext::Log { sign: if v > 0.0 { 1 } else { -1 }, ln_abs: v.abs().ln() }
            }
            p => p,
        }
    }

    fn parts(self) -> (i8, f64) {
        match self {
            Ext::Plain(v) if v.is_nan() => (0, f64::NAN),
            Ext::Plain(v) => {
                let s = if v > 0.0 {
                    1
                } else if v < 0.0 {
                    -1
                } else {
                    0
                };
                (s, v.abs().ln())
            }
            Ext::Log { sign, ln_abs } => (sign, ln_abs),
        }
    }

    pub fn is_nan(self) -> bool {
        match self {
            Ext::Plain(v) => v.is_nan(),
            Ext::Log { ln_abs, .. } => ln_abs.is_nan(),
        }
    }

    /// Nearest double (saturating to ±∞ or 0).
    pub fn to_f64(self) -> f64 {
        match self {
            Ext::Plain(v) => v,
            Ext::Log { sign, ln_abs } => sign as f64 * ln_abs.exp(),
        }
    }

    /// `ln |x|`.
    pub fn ln_abs(self) -> f64 {
        self.parts().1
    }

    pub fn signum(self) -> i8 {
        self.parts().0
    }

    fn add(self, o: Ext) -> Ext {
        if let (Ext::Plain(a), Ext::Plain(b)) = (self, o) {
            return Ext::Plain(a + b).normalize();
        }
        let (sa, la) = self.parts();
        let (sb, lb) = o.parts();
        if la.is_nan() || lb.is_nan() {
            return Ext::Plain(f64::NAN);
        }
        if sa == 0 {
            return o;
        }
        if sb == 0 {
            return self;
        }
        let (s_big, l_big, s_small, l_small) = if la >= lb { (sa, la, sb, lb) } else { (sb, lb, sa, la) };
        let r = (l_small - l_big).exp();
        let factor = if s_big == s_small { 1.0 + r } else { 1.0 - r };
        if factor == 0.0 {
            return Ext::Plain(0.0);
        }
        Ext::Log { sign: s_big, ln_abs: l_big + factor.ln() }.normalize()
    }

    fn neg(self) -> Ext {
        match self {
            Ext::Plain(v) => Ext::Plain(-v),
            Ext::Log { sign, ln_abs } => Ext::Log { sign: -sign, ln_abs },
        }
    }

    fn mul(self, o: Ext) -> Ext {
        if let (Ext::Plain(a), Ext::Plain(b)) = (self, o) {
            let p = a * b;
            if p.is_finite() && (p != 0.0 || a == 0.0 || b == 0.0) {
                return Ext::Plain(p).normalize();
            }
        }
        let (sa, la) = self.parts();
        let (sb, lb) = o.parts();
        Ext::Log { sign: sa * sb, ln_abs: la + lb }.normalize()
    }

    fn recip(self) -> Ext {
        match self {
            Ext::Plain(v) => Ext::Plain(1.0 / v).normalize(),
            Ext::Log { sign, ln_abs } => Ext::Log { sign, ln_abs: -ln_abs }.normalize(),
        }
    }

    fn pow(self, e: Ext) -> Ext {
        let ef = e.to_f64();
        if let Ext::Plain(a) = self {
            let p = a.powf(ef);
            if p.is_finite() && p != 0.0 {
                return Ext::Plain(p).normalize();
            }
            if a == 0.0 || p.is_nan() {
                return Ext::Plain(p);
            }
        }
        let (s, l) = self.parts();
        let sign = if s >= 0 {
            1
        } else if ef.fract() == 0.0 {
            if (ef / 2.0).fract() == 0.0 {
                1
            } else {
                -1
            }
        } else {
            return Ext::Plain(f64::NAN);
        };
        Ext::Log { sign, ln_abs: l * ef }.normalize()
    }

    fn ln(self) -> Ext {
        match self.parts() {
            (1, l) => Ext::Plain(l),
            (0, _) if !self.is_nan() => Ext::Plain(f64::NEG_INFINITY),
            _ => Ext::Plain(f64::NAN),
        }
    }

    fn exp(self) -> Ext {
        match self {
            Ext::Plain(v) => Ext::from_ln(v),
            Ext::Log { sign: 1, .. } => Ext::Plain(f64::INFINITY),
            Ext::Log { .. } => Ext::Plain(0.0),
        }
    }

    fn sqrt(self) -> Ext {
        match self {
            Ext::Plain(v) => Ext::Plain(v.sqrt()),
            Ext::Log { sign: 1, ln_abs } => Ext::from_ln(ln_abs / 2.0),
            Ext::Log { .. } => Ext::Plain(f64::NAN),
        }
    }

    fn total_cmp(self, o: Ext) -> Ordering {
        let (sa, la) = self.parts();
        let (sb, lb) = o.parts();
        match sa.cmp(&sb) {
            Ordering::Equal => match sa {
                0 => Ordering::Equal,
                1 => la.total_cmp(&lb),
                _ => lb.total_cmp(&la),
            },
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    T,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Log,
    LogLog,
    Sqrt,
    Exp,
    Max,
    Min,
}

impl Func {
    fn from_name(name: &str) -> Option<(Func, usize)> {
        Some(match name {
            "log" | "ln" => (Func::Log, 1),
            "loglog" => (Func::LogLog, 1),
            "sqrt" => (Func::Sqrt, 1),
            "exp" => (Func::Exp, 1),
            "max" => (Func::Max, 2),
            "min" => (Func::Min, 2),
            _ => return None,
        })
    }
}

impl Expr {
    pub fn eval(&self, t: Ext) -> Ext {
        match self {
            Expr::Num(v) => Ext::Plain(*v),
            Expr::T => t,
            Expr::Neg(a) => a.eval(t).neg(),
            Expr::Add(a, b) => a.eval(t).add(b.eval(t)),
            Expr::Sub(a, b) => a.eval(t).add(b.eval(t).neg()),
            Expr::Mul(a, b) => a.eval(t).mul(b.eval(t)),
            Expr::Div(a, b) => a.eval(t).mul(b.eval(t).recip()),
            Expr::Pow(a, b) => a.eval(t).pow(b.eval(t)),
            Expr::Call(f, args) => {
                let x = args[0].eval(t);
                match f {
                    Func::Log => x.ln(),
                    Func::LogLog => x.ln().ln(),
                    Func::Sqrt => x.sqrt(),
                    Func::Exp => x.exp(),
                    Func::Max | Func::Min => {
                        let y = args[1].eval(t);
                        if x.is_nan() || y.is_nan() {
                            return Ext::Plain(f64::NAN);
                        }
                        let x_wins = x.total_cmp(y) == Ordering::Greater;
                        if x_wins == (*f == Func::Max) {
                            x
                        } else {
                            y
                        }
                    }
                }
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, RateError> {
        Err(RateError::Parse { pos: self.pos, msg: msg.into() })
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, RateError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, RateError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, RateError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, RateError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            // right associative, binds tighter than unary minus on the left
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, RateError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if name == "t" {
                    return Ok(Expr::T);
                }
                let Some((f, arity)) = Func::from_name(name) else {
                    self.pos = start;
                    return self.err(format!("unknown name {name:?}"));
                };
                if !self.eat(b'(') {
                    return self.err(format!("expected '(' after {name}"));
                }
                let mut args = vec![self.expr()?];
                while self.eat(b',') {
                    args.push(self.expr()?);
                }
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                if args.len() != arity {
                    return self.err(format!("{name} takes {arity} argument(s)"));
                }
                Ok(Expr::Call(f, args))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<Expr, RateError> {
        let start = self.pos;
        let bytes = self.src;
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let text = std::str::from_utf8(&bytes[start..end]).expect("ascii");
        match text.parse::<f64>() {
            Ok(v) => {
                self.pos = end;
                Ok(Expr::Num(v))
            }
            Err(_) => self.err(format!("bad number {text:?}")),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, RateError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// A validated, non-decreasing rate function.
#[derive(Clone, Debug, PartialEq)]
pub struct RateFunction {
    source: String,
    expr: Expr,
}

impl fmt::Display for RateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl std::str::FromStr for RateFunction {
    type Err = RateError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RateFunction::parse(s)
    }
}

impl RateFunction {
    /// Parses and validates on [`VALIDATION_POINTS`] log-spaced points of
    /// `[1, 10³⁰⁰]`: the clamped values must be finite and non-decreasing.
    pub fn parse(src: &str) -> Result<Self, RateError> {
        let f = Self { source: src.trim().to_string(), expr: parse_expr(src)? };
        f.validate()?;
        Ok(f)
    }

    pub fn constant(c: f64) -> Self {
        Self::parse(&format!("{c:?}")).expect("constants are valid rate functions")
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    fn validate(&self) -> Result<(), RateError> {
        let ln_max = VALIDATION_T_MAX.ln();
        let mut prev: Option<Ext> = None;
        for i in 0..VALIDATION_POINTS {
            let ln_t = ln_max * i as f64 / (VALIDATION_POINTS - 1) as f64;
            let t = if i == 0 { 1.0 } else { ln_t.exp() };
            let v = self.eval_ext(Ext::Plain(t));
            if v.is_nan() || v.to_f64() == f64::INFINITY && matches!(v, Ext::Plain(_)) {
                return Err(RateError::NotFinite { t });
            }
            if let Some(p) = prev {
                let (lp, lv) = (p.ln_abs(), v.ln_abs());
                if lv < lp - MONOTONE_SLACK * lp.abs().max(1.0) {
                    return Err(RateError::Decreasing { t });
                }
            }
            prev = Some(v);
        }
        Ok(())
    }

    /// `max{1, ψ(t)}` in extended range.
    pub fn eval_ext(&self, t: Ext) -> Ext {
        let v = self.expr.eval(t);
        if v.is_nan() {
            return v;
        }
        if v.total_cmp(Ext::Plain(1.0)) == Ordering::Less {
            Ext::Plain(1.0)
        } else {
            v
        }
    }

    /// `ψ̂(t) = max{1, ψ(t)}` (may be `+∞` when the value overflows a double).
    pub fn eval(&self, t: f64) -> f64 {
        self.eval_ext(Ext::Plain(t)).to_f64()
    }

    /// `ln ψ̂(t)` given `ln t`, usable for `t` far beyond the double range.
    pub fn ln_eval_at_ln(&self, ln_t: f64) -> f64 {
        self.eval_ext(Ext::from_ln(ln_t)).ln_abs()
    }

    /// `ψ²` as a rate function.
    pub fn squared(&self) -> RateFunction {
        RateFunction {
            source: format!("({})^2", self.source),
            expr: Expr::Pow(Box::new(self.expr.clone()), Box::new(Expr::Num(2.0))),
        }
    }

    /// `c·ψ` for a constant `c ≥ 1`.
    pub fn scaled(&self, c: f64) -> RateFunction {
        RateFunction {
            source: format!("{c:?}*({})", self.source),
            expr: Expr::Mul(Box::new(Expr::Num(c)), Box::new(self.expr.clone())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_evaluates() {
        let f = RateFunction::parse("sqrt(log(t+4)*loglog(t+4))").unwrap();
        let t: f64 = 100.0;
        let want = ((t + 4.0).ln() * (t + 4.0).ln().ln()).sqrt();
        assert!((f.eval(t) - want).abs() < 1e-14);
        assert_eq!(RateFunction::parse("2").unwrap().eval(7.0), 2.0);
        assert_eq!(RateFunction::parse("t^2").unwrap().eval(3.0), 9.0);
        assert_eq!(RateFunction::parse("-2^2+10").unwrap().eval(1.0), 6.0);
        assert_eq!(RateFunction::parse("max(t, 5)").unwrap().eval(2.0), 5.0);
    }

    #[test]
    fn clamps_below_one() {
        let f = RateFunction::parse("log(t)").unwrap();
        assert_eq!(f.eval(1.0), 1.0);
        assert_eq!(f.eval(2.0), 1.0);
        assert!((f.eval(100.0) - 100f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_expr("log(t"), Err(RateError::Parse { .. })));
        assert!(matches!(parse_expr("foo(t)"), Err(RateError::Parse { .. })));
        assert!(matches!(parse_expr("t t"), Err(RateError::Parse { .. })));
        assert!(matches!(RateFunction::parse("1/t+1"), Err(RateError::Decreasing { .. })));
        assert!(matches!(RateFunction::parse("sqrt(1-t)"), Err(RateError::NotFinite { .. })));
        assert!(matches!(RateFunction::parse("max(t)"), Err(RateError::Parse { .. })));
    }

    #[test]
    fn evaluates_far_beyond_double_range() {
        let f = RateFunction::parse("sqrt(log(t+4)*loglog(t+4))").unwrap();
        let ln_t: f64 = 1e200;
        let want = 0.5 * (ln_t.ln() + ln_t.ln().ln());
        assert!((f.ln_eval_at_ln(ln_t) - want).abs() < 1e-12 * want);
        let sq = RateFunction::parse("t^0.5").unwrap();
        assert!((sq.ln_eval_at_ln(1e250) - 0.5e250).abs() < 1e235);
        assert_eq!(RateFunction::parse("1").unwrap().ln_eval_at_ln(1e250), 0.0);
    }

    #[test]
    fn ext_arithmetic() {
        let big = Ext::from_ln(1000.0);
        assert_eq!(big.add(Ext::Plain(4.0)).ln_abs(), 1000.0);
        assert!(big.mul(big.recip()).to_f64() - 1.0 < 1e-12);
        assert_eq!(big.add(big.neg()).to_f64(), 0.0);
        assert_eq!(Ext::Plain(2.0).pow(Ext::Plain(3.0)), Ext::Plain(8.0));
        assert_eq!(big.total_cmp(Ext::Plain(1e300)), Ordering::Greater);
        assert_eq!(big.neg().total_cmp(Ext::Plain(-1.0)), Ordering::Less);
    }
}
