//! Expression surface syntax:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ['^' int]
//! base   := var | int | 't' | '(' expr ')' | '[' expr (',' expr)+ ']'
//! var    := 'x' int
//! ```
//!
//! Whitespace is insignificant. Brackets are left-normed commutators. The
//! symbol `t` denotes the adjoined root of the reduction polynomial and is
//! only meaningful over proper extension fields. Scalars are integers
//! reduced into the prime subfield, so coefficient sums like `1+2*t` work
//! through the ordinary expression grammar.

use std::fmt;

use grasspi_core::field::FieldConfig;
use grasspi_core::freealg::{left_normed, FreePoly};

#[derive(Clone, Debug)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

/// Surface syntax tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    Var(u32),
    Int(u64),
    AdjoinedRoot,
    Group(Expr),
    Commutator(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub base: Base,
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub negated: bool,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            got => Err(self.error(format!(
                "expected '{}', found {}",
                c as char,
                got.map(|g| format!("'{}'", g as char)).unwrap_or_else(|| "end of input".into())
            ))),
        }
    }

    fn error(&self, msg: String) -> ParseError {
        ParseError { pos: self.pos, msg }
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer".into()));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer too large".into()))
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut c = Cursor { text: text.as_bytes(), pos: 0 };
    let expr = parse_expr(&mut c)?;
    if let Some(extra) = c.peek() {
        return Err(c.error(format!("unexpected trailing input '{}'", extra as char)));
    }
    Ok(expr)
}

fn parse_expr(c: &mut Cursor) -> Result<Expr, ParseError> {
    let mut terms = Vec::new();
    let mut negated = match c.peek() {
        Some(b'-') => {
            c.bump();
            true
        }
        Some(b'+') => {
            c.bump();
            false
        }
        _ => false,
    };
    loop {
        terms.push(parse_term(c, negated)?);
        match c.peek() {
            Some(b'+') => {
                c.bump();
                negated = false;
            }
            Some(b'-') => {
                c.bump();
                negated = true;
            }
            _ => break,
        }
    }
    Ok(Expr { terms })
}

fn parse_term(c: &mut Cursor, negated: bool) -> Result<Term, ParseError> {
    let mut factors = vec![parse_factor(c)?];
    while c.peek() == Some(b'*') {
        c.bump();
        factors.push(parse_factor(c)?);
    }
    Ok(Term { negated, factors })
}

fn parse_factor(c: &mut Cursor) -> Result<Factor, ParseError> {
    let base = parse_base(c)?;
    let exponent = if c.peek() == Some(b'^') {
        c.bump();
        let e = c.integer()?;
        if e == 0 {
            return Err(c.error("exponents must be >= 1".into()));
        }
        u32::try_from(e).map_err(|_| c.error("exponent too large".into()))?
    } else {
        1
    };
    Ok(Factor { base, exponent })
}

fn parse_base(c: &mut Cursor) -> Result<Base, ParseError> {
    match c.peek() {
        Some(b'x') => {
            c.bump();
            let idx = c.integer()?;
            if idx == 0 {
                return Err(c.error("variable indices start at 1".into()));
            }
            let idx = u32::try_from(idx).map_err(|_| c.error("variable index too large".into()))?;
            Ok(Base::Var(idx))
        }
        Some(b't') => {
            c.bump();
            Ok(Base::AdjoinedRoot)
        }
        Some(b'(') => {
            c.bump();
            let inner = parse_expr(c)?;
            c.expect(b')')?;
            Ok(Base::Group(inner))
        }
        Some(b'[') => {
            c.bump();
            let mut entries = vec![parse_expr(c)?];
            while c.peek() == Some(b',') {
                c.bump();
                entries.push(parse_expr(c)?);
            }
            c.expect(b']')?;
            if entries.len() < 2 {
                return Err(c.error("a commutator bracket needs at least two entries".into()));
            }
            Ok(Base::Commutator(entries))
        }
        Some(d) if d.is_ascii_digit() => Ok(Base::Int(c.integer()?)),
        Some(other) => Err(c.error(format!("unexpected character '{}'", other as char))),
        None => Err(c.error("unexpected end of input".into())),
    }
}

/// Lowers the syntax tree into an exact free polynomial over the field.
pub fn lower(expr: &Expr, cfg: &FieldConfig) -> Result<FreePoly, ParseError> {
    let mut acc = FreePoly::zero(cfg);
    for term in &expr.terms {
        let mut prod = FreePoly::one(cfg);
        for factor in &term.factors {
            let base = lower_base(&factor.base, cfg)?;
            prod = prod.mul(&base.pow(factor.exponent));
        }
        if term.negated {
            prod = prod.neg();
        }
        acc = acc.add(&prod);
    }
    Ok(acc)
}

fn lower_base(base: &Base, cfg: &FieldConfig) -> Result<FreePoly, ParseError> {
    match base {
        Base::Var(i) => Ok(FreePoly::variable(cfg, *i)),
        Base::Int(n) => Ok(FreePoly::scalar(cfg, cfg.elem(*n as i64))),
        Base::AdjoinedRoot => match cfg.generator_t() {
            Ok(t) => Ok(FreePoly::scalar(cfg, t)),
            Err(_) => Err(ParseError {
                pos: 0,
                msg: format!("unknown scalar symbol 't' over the prime field F_{}", cfg.p()),
            }),
        },
        Base::Group(e) => lower(e, cfg),
        Base::Commutator(entries) => {
            let parts: Vec<FreePoly> =
                entries.iter().map(|e| lower(e, cfg)).collect::<Result<_, _>>()?;
            Ok(left_normed(&parts))
        }
    }
}

/// Parses straight into a polynomial.
pub fn parse_poly(text: &str, cfg: &FieldConfig) -> Result<FreePoly, ParseError> {
    lower(&parse(text)?, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldConfig {
        FieldConfig::prime(3).unwrap()
    }

    #[test]
    fn parses_powers_and_differences() {
        let cfg = f3();
        let f = parse_poly("x1^9 - x1^3", &cfg).unwrap();
        let x1 = FreePoly::variable(&cfg, 1);
        assert_eq!(f, x1.pow(9).sub(&x1.pow(3)));
    }

    #[test]
    fn parses_left_normed_brackets() {
        let cfg = f3();
        let f = parse_poly("[x1,x2,x3]", &cfg).unwrap();
        let xs: Vec<FreePoly> = (1..=3).map(|i| FreePoly::variable(&cfg, i)).collect();
        assert_eq!(f, left_normed(&xs));
    }

    #[test]
    fn parses_mixed_products() {
        let cfg = f3();
        let f = parse_poly("2*x1*[x2,x3]*x2^2", &cfg).unwrap();
        let x1 = FreePoly::variable(&cfg, 1);
        let x2 = FreePoly::variable(&cfg, 2);
        let x3 = FreePoly::variable(&cfg, 3);
        let expect = x1.mul(&x2.commutator(&x3)).mul(&x2.pow(2)).scale(&cfg.elem(2));
        assert_eq!(f, expect);
    }

    #[test]
    fn extension_scalars() {
        let f9 = FieldConfig::with_builtin(3, 2).unwrap();
        let f = parse_poly("(1+2*t)*x1", &f9).unwrap();
        let c = f9.one().add(&f9.generator_t().unwrap().scale_int(2));
        assert_eq!(f, FreePoly::variable(&f9, 1).scale(&c));
        // 't' is unknown over a prime field
        assert!(parse_poly("t*x1", &f3()).is_err());
    }

    #[test]
    fn error_positions() {
        let cfg = f3();
        let err = parse_poly("x1 + ^2", &cfg).unwrap_err();
        assert!(err.pos >= 5, "position {} should point at the caret", err.pos);
        assert!(parse_poly("x0", &cfg).is_err());
        assert!(parse_poly("x1^0", &cfg).is_err());
        assert!(parse_poly("[x1]", &cfg).is_err());
        assert!(parse_poly("x1)", &cfg).is_err());
    }

    #[test]
    fn round_trips_canonical_text() {
        use rand::{Rng, SeedableRng};
        let cfg = f3();
        let f9 = FieldConfig::with_builtin(3, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for cfg in [cfg, f9] {
            let elements = cfg.elements();
            for _ in 0..200 {
                let mut f = FreePoly::zero(&cfg);
                for _ in 0..rng.gen_range(0..5) {
                    let len = rng.gen_range(0..5);
                    let w: Vec<u32> = (0..len).map(|_| rng.gen_range(1..4u32)).collect();
                    let c = elements[rng.gen_range(0..elements.len())].clone();
                    f.accumulate(grasspi_core::freealg::Word::new(w), c);
                }
                let text = f.to_string();
                let back = parse_poly(&text, &cfg).unwrap_or_else(|e| {
                    panic!("failed to re-parse '{text}': {e}");
                });
                assert_eq!(back, f, "round trip failed for '{text}'");
            }
        }
    }
}
