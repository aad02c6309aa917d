//! The expression surface: a small language of exact rational function
//! terms over `[0, 1]`, with a parser, a printer, a total rational
//! interpreter, and a compiler to budgeted interval evaluators.
//!
//! All literals are rational (no decimals), so every threshold written on
//! the command line stays exact. `step` and `stair` are the only
//! discontinuous constructs; the compiled evaluator reads an argument
//! enclosure that still straddles a breakpoint at the precision cap as
//! denoting the breakpoint itself and returns the upper branch there.

use std::fmt;
use std::str::FromStr;

use dichotomy_core::functions::{unit_domain, RationalFn, RealFn};
use dichotomy_core::outcome::Outcome;
use dichotomy_core::rational::Rational;
use dichotomy_core::RatInterval;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Lit(Rational),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Abs(Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    /// The hat bump `max(0, 1 - |x - center|/width)`.
    Spike { center: Rational, width: Rational },
    /// `low` strictly below `at`, `high` at and above it.
    Step { at: Rational, low: Rational, high: Rational },
    /// Sum of steps: each `(c, j)` adds `j` once `x >= c`. Breakpoints
    /// strictly increasing.
    Stair { jumps: Vec<(Rational, Rational)> },
    Scale { factor: Rational, inner: Box<Expr> },
}

/// A parse failure with the byte position and the token classes that would
/// have been accepted there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at byte {}: expected {}, found {}",
            self.position,
            self.expected.join(" | "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    Semi,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(s) => format!("number `{s}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            b';' => {
                toks.push((Tok::Semi, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((Tok::Num(text[start..i].to_string()), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    position: i,
                    expected: vec!["number", "identifier", "operator", "`(`"],
                    found: format!("`{}`", &text[i..i + 1]),
                })
            }
        }
    }
    toks.push((Tok::End, bytes.len()));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: Vec<&'static str>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.here(),
            expected,
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(vec![name])
        }
    }

    fn integer(&mut self) -> Result<Rational, ParseError> {
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                Ok(Rational::from_str(&s).expect("lexer produced a valid integer"))
            }
            _ => self.fail(vec!["number"]),
        }
    }

    /// `int ('/' posint)?` — the unsigned rational of the grammar.
    fn rational(&mut self) -> Result<Rational, ParseError> {
        let n = self.integer()?;
        if *self.peek() == Tok::Slash {
            self.bump();
            let d = self.integer()?;
            if d.is_zero() {
                return Err(ParseError {
                    position: self.here(),
                    expected: vec!["positive denominator"],
                    found: "zero".into(),
                });
            }
            Ok(&n / &d)
        } else {
            Ok(n)
        }
    }

    /// A rational with an optional leading sign, for argument positions.
    fn signed_rational(&mut self) -> Result<Rational, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            Ok(-&self.rational()?)
        } else {
            self.rational()
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    e = Expr::Add(Box::new(e), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    e = Expr::Sub(Box::new(e), Box::new(self.term()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            e = Expr::Mul(Box::new(e), Box::new(self.factor()?));
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(_) => Ok(Expr::Lit(self.rational()?)),
            Tok::Minus => {
                self.bump();
                match self.factor()? {
                    Expr::Lit(q) => Ok(Expr::Lit(-&q)),
                    e => Ok(Expr::Neg(Box::new(e))),
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "x" => Ok(Expr::Var),
                    "abs" => {
                        self.expect(Tok::LParen, "`(`")?;
                        let e = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::Abs(Box::new(e)))
                    }
                    "min" | "max" => {
                        self.expect(Tok::LParen, "`(`")?;
                        let a = self.expr()?;
                        self.expect(Tok::Comma, "`,`")?;
                        let b = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        if name == "min" {
                            Ok(Expr::Min(Box::new(a), Box::new(b)))
                        } else {
                            Ok(Expr::Max(Box::new(a), Box::new(b)))
                        }
                    }
                    "spike" => {
                        self.expect(Tok::LParen, "`(`")?;
                        let center = self.signed_rational()?;
                        self.expect(Tok::Semi, "`;`")?;
                        let width = self.signed_rational()?;
                        if !width.is_positive() {
                            return Err(ParseError {
                                position: self.here(),
                                expected: vec!["positive spike width"],
                                found: format!("{width}"),
                            });
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::Spike { center, width })
                    }
                    "step" => {
                        self.expect(Tok::LParen, "`(`")?;
                        let at = self.signed_rational()?;
                        self.expect(Tok::Semi, "`;`")?;
                        let low = self.signed_rational()?;
                        self.expect(Tok::Comma, "`,`")?;
                        let high = self.signed_rational()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::Step { at, low, high })
                    }
                    "stair" => {
                        self.expect(Tok::LParen, "`(`")?;
                        let mut jumps = Vec::new();
                        loop {
                            self.expect(Tok::LParen, "`(`")?;
                            let c = self.signed_rational()?;
                            self.expect(Tok::Comma, "`,`")?;
                            let j = self.signed_rational()?;
                            self.expect(Tok::RParen, "`)`")?;
                            if let Some((prev, _)) = jumps.last() {
                                if prev >= &c {
                                    return Err(ParseError {
                                        position: self.here(),
                                        expected: vec!["strictly increasing breakpoints"],
                                        found: format!("{c}"),
                                    });
                                }
                            }
                            jumps.push((c, j));
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::Stair { jumps })
                    }
                    "scale" => {
                        self.expect(Tok::LParen, "`(`")?;
                        let factor = self.signed_rational()?;
                        self.expect(Tok::Comma, "`,`")?;
                        let inner = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::Scale {
                            factor,
                            inner: Box::new(inner),
                        })
                    }
                    _ => Err(ParseError {
                        position: self.here(),
                        expected: vec!["x", "abs", "min", "max", "spike", "step", "stair", "scale"],
                        found: format!("`{name}`"),
                    }),
                }
            }
            _ => self.fail(vec!["number", "x", "`-`", "function", "`(`"]),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(vec!["`+`", "`-`", "`*`", "end of input"]);
    }
    Ok(e)
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let me = self.precedence();
        if me < min {
            write!(f, "(")?;
        }
        match self {
            Expr::Lit(q) => write!(f, "{q}")?,
            Expr::Var => write!(f, "x")?,
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " * ")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 3)?;
            }
            Expr::Abs(e) => {
                write!(f, "abs(")?;
                e.fmt_prec(f, 1)?;
                write!(f, ")")?;
            }
            Expr::Min(a, b) => {
                write!(f, "min(")?;
                a.fmt_prec(f, 1)?;
                write!(f, ", ")?;
                b.fmt_prec(f, 1)?;
                write!(f, ")")?;
            }
            Expr::Max(a, b) => {
                write!(f, "max(")?;
                a.fmt_prec(f, 1)?;
                write!(f, ", ")?;
                b.fmt_prec(f, 1)?;
                write!(f, ")")?;
            }
            Expr::Spike { center, width } => write!(f, "spike({center}; {width})")?,
            Expr::Step { at, low, high } => write!(f, "step({at}; {low}, {high})")?,
            Expr::Stair { jumps } => {
                write!(f, "stair(")?;
                for (i, (c, j)) in jumps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "({c}, {j})")?;
                }
                write!(f, ")")?;
            }
            Expr::Scale { factor, inner } => {
                write!(f, "scale({factor}, ")?;
                inner.fmt_prec(f, 1)?;
                write!(f, ")")?;
            }
        }
        if me < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

fn hat_value(center: &Rational, width: &Rational, x: &Rational) -> Rational {
    let d = (x - center).abs();
    if d >= *width {
        return Rational::from_int(0);
    }
    &Rational::from_int(1) - &(&d / width)
}

fn stair_value(jumps: &[(Rational, Rational)], x: &Rational) -> Rational {
    let mut v = Rational::from_int(0);
    for (c, j) in jumps {
        if c <= x {
            v = &v + j;
        }
    }
    v
}

/// The total rational semantics: every construct is exactly computable at
/// a rational point.
pub fn interpret(e: &Expr, x: &Rational) -> Rational {
    match e {
        Expr::Lit(q) => q.clone(),
        Expr::Var => x.clone(),
        Expr::Add(a, b) => &interpret(a, x) + &interpret(b, x),
        Expr::Sub(a, b) => &interpret(a, x) - &interpret(b, x),
        Expr::Mul(a, b) => &interpret(a, x) * &interpret(b, x),
        Expr::Neg(a) => -&interpret(a, x),
        Expr::Abs(a) => interpret(a, x).abs(),
        Expr::Min(a, b) => interpret(a, x).min(interpret(b, x)),
        Expr::Max(a, b) => interpret(a, x).max(interpret(b, x)),
        Expr::Spike { center, width } => hat_value(center, width, x),
        Expr::Step { at, low, high } => {
            if x >= at {
                high.clone()
            } else {
                low.clone()
            }
        }
        Expr::Stair { jumps } => stair_value(jumps, x),
        Expr::Scale { factor, inner } => factor * &interpret(inner, x),
    }
}

fn iv(lo: Rational, hi: Rational) -> RatInterval {
    if lo <= hi {
        RatInterval::new(lo, hi)
    } else {
        RatInterval::new(hi, lo)
    }
}

fn imul(a: &RatInterval, b: &RatInterval) -> RatInterval {
    let products = [
        a.lo() * b.lo(),
        a.lo() * b.hi(),
        a.hi() * b.lo(),
        a.hi() * b.hi(),
    ];
    let mut lo = products[0].clone();
    let mut hi = products[0].clone();
    for p in &products[1..] {
        if p < &lo {
            lo = p.clone();
        }
        if p > &hi {
            hi = p.clone();
        }
    }
    RatInterval::new(lo, hi)
}

/// An exact enclosure of the expression's value set over the argument
/// interval. With `resolve_steps`, an interval crossing a `step`/`stair`
/// breakpoint is read as denoting the breakpoint and takes the upper
/// branch — the privileged interpretation applied only at the precision
/// cap.
pub fn enclose(e: &Expr, arg: &RatInterval, resolve_steps: bool) -> RatInterval {
    match e {
        Expr::Lit(q) => RatInterval::point(q.clone()),
        Expr::Var => arg.clone(),
        Expr::Add(a, b) => {
            let (u, v) = (enclose(a, arg, resolve_steps), enclose(b, arg, resolve_steps));
            RatInterval::new(u.lo() + v.lo(), u.hi() + v.hi())
        }
        Expr::Sub(a, b) => {
            let (u, v) = (enclose(a, arg, resolve_steps), enclose(b, arg, resolve_steps));
            RatInterval::new(u.lo() - v.hi(), u.hi() - v.lo())
        }
        Expr::Mul(a, b) => imul(
            &enclose(a, arg, resolve_steps),
            &enclose(b, arg, resolve_steps),
        ),
        Expr::Neg(a) => {
            let u = enclose(a, arg, resolve_steps);
            RatInterval::new(-u.hi(), -u.lo())
        }
        Expr::Abs(a) => enclose(a, arg, resolve_steps).abs(),
        Expr::Min(a, b) => {
            let (u, v) = (enclose(a, arg, resolve_steps), enclose(b, arg, resolve_steps));
            iv(
                u.lo().clone().min(v.lo().clone()),
                u.hi().clone().min(v.hi().clone()),
            )
        }
        Expr::Max(a, b) => {
            let (u, v) = (enclose(a, arg, resolve_steps), enclose(b, arg, resolve_steps));
            iv(
                u.lo().clone().max(v.lo().clone()),
                u.hi().clone().max(v.hi().clone()),
            )
        }
        Expr::Spike { center, width } => {
            let dist = arg
                .clone()
                .abs_distance(center);
            let one = Rational::from_int(1);
            let zero = Rational::from_int(0);
            let tmax = (&one - &(dist.lo() / width)).max(zero.clone());
            let tmin = (&one - &(dist.hi() / width)).max(zero);
            iv(tmin, tmax)
        }
        Expr::Step { at, low, high } => {
            let crosses = arg.lo() < at && arg.hi() >= at;
            if !crosses {
                let v = if arg.lo() >= at { high } else { low };
                RatInterval::point(v.clone())
            } else if resolve_steps {
                RatInterval::point(high.clone())
            } else {
                iv(low.clone(), high.clone())
            }
        }
        Expr::Stair { jumps } => {
            let crosses = jumps
                .iter()
                .any(|(c, _)| arg.lo() < c && arg.hi() >= c);
            if !crosses {
                RatInterval::point(stair_value(jumps, arg.lo()))
            } else if resolve_steps {
                RatInterval::point(stair_value(jumps, arg.hi()))
            } else {
                let mut candidates = vec![stair_value(jumps, arg.lo())];
                for (c, _) in jumps {
                    if arg.lo() < c && arg.hi() >= c {
                        candidates.push(stair_value(jumps, c));
                    }
                }
                let lo = candidates.iter().cloned().reduce(Rational::min).unwrap();
                let hi = candidates.into_iter().reduce(Rational::max).unwrap();
                RatInterval::new(lo, hi)
            }
        }
        Expr::Scale { factor, inner } => {
            let u = enclose(inner, arg, resolve_steps);
            let (a, b) = (factor * u.lo(), factor * u.hi());
            iv(a, b)
        }
    }
}

trait AbsDistance {
    fn abs_distance(self, q: &Rational) -> RatInterval;
}

impl AbsDistance for RatInterval {
    /// The interval of `|x - q|` for `x` in `self`.
    fn abs_distance(self, q: &Rational) -> RatInterval {
        RatInterval::new(self.lo() - q, self.hi() - q).abs()
    }
}

pub fn has_steps(e: &Expr) -> bool {
    match e {
        Expr::Step { .. } | Expr::Stair { .. } => true,
        Expr::Lit(_) | Expr::Var | Expr::Spike { .. } => false,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Min(a, b) | Expr::Max(a, b) => {
            has_steps(a) || has_steps(b)
        }
        Expr::Neg(a) | Expr::Abs(a) => has_steps(a),
        Expr::Scale { inner, .. } => has_steps(inner),
    }
}

fn sup_abs(e: &Expr, domain: &RatInterval) -> Rational {
    let r = enclose(e, domain, false);
    r.lo().abs().max(r.hi().abs())
}

/// A structural Lipschitz constant over the domain; `None` as soon as a
/// discontinuous construct appears.
pub fn lipschitz_bound(e: &Expr, domain: &RatInterval) -> Option<Rational> {
    match e {
        Expr::Lit(_) => Some(Rational::from_int(0)),
        Expr::Var => Some(Rational::from_int(1)),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            Some(&lipschitz_bound(a, domain)? + &lipschitz_bound(b, domain)?)
        }
        Expr::Mul(a, b) => {
            let (la, lb) = (lipschitz_bound(a, domain)?, lipschitz_bound(b, domain)?);
            Some(&(&la * &sup_abs(b, domain)) + &(&lb * &sup_abs(a, domain)))
        }
        Expr::Neg(a) | Expr::Abs(a) => lipschitz_bound(a, domain),
        Expr::Min(a, b) | Expr::Max(a, b) => {
            Some(lipschitz_bound(a, domain)?.max(lipschitz_bound(b, domain)?))
        }
        Expr::Spike { width, .. } => Some(&Rational::from_int(1) / width),
        Expr::Step { .. } | Expr::Stair { .. } => None,
        Expr::Scale { factor, inner } => {
            Some(&factor.abs() * &lipschitz_bound(inner, domain)?)
        }
    }
}

/// Compiles to the total rational evaluator on the unit interval.
pub fn to_rational_fn(e: &Expr) -> RationalFn {
    let e = e.clone();
    RationalFn::from_rational_values(unit_domain(), move |q| interpret(&e, q))
}

/// Compiles to a budgeted interval evaluator on the unit interval. The
/// enclosure is refined by escalating the argument precision; only an
/// enclosure that still crosses a step breakpoint at the precision cap is
/// resolved by the upper-branch convention.
pub fn to_real_fn(e: &Expr) -> RealFn {
    let e = e.clone();
    RealFn::new(unit_domain(), move |x, p, meter| {
        if meter.spend(1).is_err() || meter.request_precision(p).is_err() {
            return meter.exhausted(None);
        }
        let target = Rational::pow2(-(p as i64));
        let cap = meter.precision_cap();
        let mut q = p.max(4);
        loop {
            if meter.spend(1).is_err() {
                return meter.exhausted(None);
            }
            let arg = x.approximate(q);
            let r = enclose(&e, &arg, q >= cap);
            if r.width() <= target {
                return Outcome::Decided(r);
            }
            if q >= cap {
                return meter.exhausted(Some(r));
            }
            q = (q * 2).min(cap);
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dichotomy_core::rational::rat;
    use dichotomy_core::Budget;

    fn roundtrip(e: &Expr) {
        let printed = e.to_string();
        let reparsed = parse(&printed).unwrap_or_else(|err| {
            panic!("reparse of `{printed}` failed: {err}");
        });
        assert_eq!(&reparsed, e, "printed form: {printed}");
    }

    #[test]
    fn parses_the_reference_forms() {
        assert_eq!(
            parse("x - 1/2").unwrap(),
            Expr::Sub(Box::new(Expr::Var), Box::new(Expr::Lit(rat(1, 2))))
        );
        assert_eq!(
            parse("spike(1/2; 1/4)").unwrap(),
            Expr::Spike {
                center: rat(1, 2),
                width: rat(1, 4)
            }
        );
        assert_eq!(
            parse("min(x, 1 - x) * 2").unwrap(),
            Expr::Mul(
                Box::new(Expr::Min(
                    Box::new(Expr::Var),
                    Box::new(Expr::Sub(Box::new(Expr::Lit(rat(1, 1))), Box::new(Expr::Var)))
                )),
                Box::new(Expr::Lit(rat(2, 1)))
            )
        );
    }

    #[test]
    fn reports_position_and_expectations() {
        let err = parse("min(x 1)").unwrap_err();
        assert_eq!(err.position, 6);
        assert!(err.expected.contains(&"`,`"));
        let err = parse("spike(1/2, 1/4)").unwrap_err();
        assert!(err.expected.contains(&"`;`"));
        let err = parse("2 + ").unwrap_err();
        assert_eq!(err.found, "end of input");
    }

    #[test]
    fn rejects_malformed_stairs() {
        let err = parse("stair((1/2, 1), (1/4, 1))").unwrap_err();
        assert!(err.expected.contains(&"strictly increasing breakpoints"));
        assert!(parse("stair((1/4, 1), (1/2, 1))").is_ok());
    }

    #[test]
    fn printer_round_trips_handwritten_cases() {
        for text in [
            "x - 1/2",
            "min(x, 1 - x) * 2",
            "abs(x - 1/3) + spike(1/2; 1/8)",
            "-x * 2 + step(1/3; -1, 1)",
            "stair((1/4, 1/2), (3/4, 1/8)) - scale(2, x)",
            "(x + 1) * (x - 1)",
            "x - (x - 1/2)",
        ] {
            let e = parse(text).unwrap();
            roundtrip(&e);
        }
    }

    #[test]
    fn interpreter_matches_closed_forms() {
        let e = parse("spike(1/2; 1/4)").unwrap();
        assert_eq!(interpret(&e, &rat(5, 8)), rat(1, 2));
        assert_eq!(interpret(&e, &rat(1, 2)), rat(1, 1));
        assert_eq!(interpret(&e, &rat(3, 4)), rat(0, 1));
        let s = parse("step(1/3; -1, 1)").unwrap();
        assert_eq!(interpret(&s, &rat(1, 3)), rat(1, 1));
        assert_eq!(interpret(&s, &rat(1, 4)), rat(-1, 1));
        let q = parse("x*x").unwrap();
        assert_eq!(interpret(&q, &rat(3, 4)), rat(9, 16));
    }

    #[test]
    fn compiled_evaluator_encloses_the_interpreter() {
        let mut meter = Budget::new(1 << 20, 128).meter();
        for text in ["x*x", "min(x, 1 - x) * 2", "abs(x - 1/3)", "spike(1/2; 1/4)"] {
            let e = parse(text).unwrap();
            let f = to_real_fn(&e);
            for i in 0..=16i64 {
                let q = rat(i, 16);
                let expect = interpret(&e, &q);
                let got = f
                    .eval_at_rational(&q, 40, &mut meter)
                    .expect_decided("compiled evaluation");
                assert!(got.contains(&expect), "{text} at {q}");
                assert!(got.width() <= Rational::pow2(-40));
            }
        }
    }

    #[test]
    fn step_boundary_takes_the_upper_branch() {
        let e = parse("step(1/3; -1, 1)").unwrap();
        let f = to_rational_fn(&e);
        let v = f.eval(&rat(1, 3)).approximate(8);
        assert!(v.contains(&rat(1, 1)));
    }

    #[test]
    fn lipschitz_bounds_are_conservative() {
        let d = unit_domain();
        let e = parse("min(x, 1 - x) * 2").unwrap();
        let l = lipschitz_bound(&e, &d).unwrap();
        assert!(l >= rat(2, 1));
        let s = parse("spike(1/2; 1/8)").unwrap();
        assert_eq!(lipschitz_bound(&s, &d).unwrap(), rat(8, 1));
        assert!(lipschitz_bound(&parse("step(1/2; 0, 1)").unwrap(), &d).is_none());
        assert!(has_steps(&parse("x + stair((1/2, 1))").unwrap()));
    }
}
