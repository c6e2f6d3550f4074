//! Parser for the textual expression grammar.
//!
//! Scalars: integers, `q`, `v` (= `q^(1/2)`), `+ - * /`, parentheses and
//! `^` with an integer or parenthesized half-integer exponent, e.g.
//! `(q^2 - 1)/(2*q^(1/2))`. Half-integer exponents apply only to bare
//! powers of q.
//!
//! Torus factors: `|1 - z2/z1 * q^(a)|^k` and `(1 - z2/z1 * q^(a))^k`, with
//! 1-based indices, combined with scalars by `*` and `/`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{FactoredExpr, HalfInt, RatFunc, TorusFactor};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Q,
    V,
    Z(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Bar,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => {}
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            '|' => out.push(Tok::Bar),
            'q' => out.push(Tok::Q),
            'v' => out.push(Tok::V),
            'z' => {
                let start = i + 1;
                let mut end = start;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let idx: usize = chars[start..end]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse(format!("expected index after 'z' in {s:?}")))?;
                if idx == 0 {
                    return Err(Error::Parse("torus indices start at 1".into()));
                }
                out.push(Tok::Z(idx - 1));
                i = end;
                continue;
            }
            d if d.is_ascii_digit() => {
                let mut end = i;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let n: BigInt = chars[i..end].iter().collect::<String>().parse().unwrap();
                out.push(Tok::Num(n));
                i = end;
                continue;
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character {other:?} in {s:?}"
                )))
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<FactoredExpr> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => 1,
                Some(Tok::Minus) => -1,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.term()?;
            if !acc.is_constant() || !rhs.is_constant() {
                return Err(Error::Parse("sums of torus factors are not expressible".into()));
            }
            let r = if sign > 0 {
                acc.scalar() + rhs.scalar()
            } else {
                acc.scalar() - rhs.scalar()
            };
            acc = FactoredExpr::constant(r);
        }
    }

    fn term(&mut self) -> Result<FactoredExpr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if rhs.scalar().is_zero() {
                        return Err(Error::Parse("division by zero".into()));
                    }
                    acc = acc.div(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<FactoredExpr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(inner.with_scalar(-inner.scalar()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<FactoredExpr> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let exp = self.exponent()?;
        if let Some(n) = exp.to_int() {
            if base.scalar().is_zero() && n < 0 {
                return Err(Error::Parse("zero to a negative power".into()));
            }
            return Ok(base.pow(n as i32));
        }
        let s = base.scalar();
        let bare_power = base.is_constant()
            && s.coefficient().is_one()
            && s.cyclotomic_exponents().is_empty()
            && s.has_trivial_residual();
        if !bare_power {
            return Err(Error::Parse(
                "half-integer exponents apply only to powers of q".into(),
            ));
        }
        let twice = s.v_power() * exp.doubled();
        if twice % 2 != 0 {
            return Err(Error::Parse("exponent leaves the half-integer powers of q".into()));
        }
        Ok(FactoredExpr::constant(RatFunc::v_pow(twice / 2)))
    }

    fn exponent(&mut self) -> Result<HalfInt> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(HalfInt::from_int(to_i64(&n)?)),
            Some(Tok::LParen) => {
                let neg = if self.peek() == Some(&Tok::Minus) {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let n = match self.next() {
                    Some(Tok::Num(n)) => to_i64(&n)?,
                    t => return Err(Error::Parse(format!("bad exponent token {t:?}"))),
                };
                let h = if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.next() {
                        Some(Tok::Num(d)) if d == BigInt::from(2) => HalfInt::from_doubled(n),
                        Some(Tok::Num(d)) if d == BigInt::from(1) => HalfInt::from_int(n),
                        t => {
                            return Err(Error::Parse(format!(
                                "exponent denominator must be 1 or 2, found {t:?}"
                            )))
                        }
                    }
                } else {
                    HalfInt::from_int(n)
                };
                self.expect(Tok::RParen)?;
                Ok(if neg { -h } else { h })
            }
            Some(Tok::Minus) => match self.next() {
                Some(Tok::Num(n)) => Ok(HalfInt::from_int(-to_i64(&n)?)),
                t => Err(Error::Parse(format!("bad exponent token {t:?}"))),
            },
            t => Err(Error::Parse(format!("bad exponent token {t:?}"))),
        }
    }

    fn atom(&mut self) -> Result<FactoredExpr> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(FactoredExpr::constant(RatFunc::from_rational(
                BigRational::from_integer(n),
            ))),
            Some(Tok::Q) => Ok(FactoredExpr::constant(RatFunc::q())),
            Some(Tok::V) => Ok(FactoredExpr::constant(RatFunc::v_pow(1))),
            Some(Tok::Bar) => {
                let (i, j, a) = self.torus_base()?;
                self.expect(Tok::Bar)?;
                Ok(FactoredExpr::abs_sq(i, j, a, 1))
            }
            Some(Tok::LParen) => {
                if self.at_torus_base() {
                    let (i, j, a) = self.torus_base()?;
                    self.expect(Tok::RParen)?;
                    return Ok(FactoredExpr::new(
                        RatFunc::one(),
                        [TorusFactor::new(i, j, a, 1)],
                    ));
                }
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }

    fn at_torus_base(&self) -> bool {
        matches!(
            (self.peek(), self.peek_at(1), self.peek_at(2)),
            (Some(Tok::Num(_)), Some(Tok::Minus), Some(Tok::Z(_)))
        )
    }

    /// `1 - zJ/zI [* q^(a)]`, returning 0-based `(i, j, a)`.
    fn torus_base(&mut self) -> Result<(usize, usize, HalfInt)> {
        match self.next() {
            Some(Tok::Num(n)) if n.is_one() => {}
            t => return Err(Error::Parse(format!("expected '1 - z..', found {t:?}"))),
        }
        self.expect(Tok::Minus)?;
        let j = match self.next() {
            Some(Tok::Z(j)) => j,
            t => return Err(Error::Parse(format!("expected z index, found {t:?}"))),
        };
        self.expect(Tok::Slash)?;
        let i = match self.next() {
            Some(Tok::Z(i)) => i,
            t => return Err(Error::Parse(format!("expected z index, found {t:?}"))),
        };
        if i == j {
            return Err(Error::Parse("torus factor needs distinct indices".into()));
        }
        let mut a = HalfInt::ZERO;
        if self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            self.expect(Tok::Q)?;
            if self.peek() == Some(&Tok::Caret) {
                self.pos += 1;
                a = self.exponent()?;
            } else {
                a = HalfInt::from_int(1);
            }
        }
        Ok((i, j, a))
    }
}

fn to_i64(n: &BigInt) -> Result<i64> {
    i64::try_from(n).map_err(|_| Error::Parse(format!("exponent {n} out of range")))
}

/// Parse a scalar expression in q.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    let e = parse_factored(s)?;
    if !e.is_constant() {
        return Err(Error::Parse(format!("{s:?} contains torus factors")));
    }
    Ok(e.scalar().clone())
}

/// Parse a full factored expression.
pub fn parse_factored(s: &str) -> Result<FactoredExpr> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let toks = fold_squared_bars(toks)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {} in {s:?}",
            p.pos
        )));
    }
    Ok(e)
}

/// `|B|^k` must carry an even exponent `k`; rewrite it to `|B|^(k/2)` so the
/// bar atom (which yields the conjugate pair, i.e. the square) composes
/// with ordinary integer powers.
fn fold_squared_bars(toks: Vec<Tok>) -> Result<Vec<Tok>> {
    let mut out = Vec::with_capacity(toks.len());
    let mut i = 0;
    let mut open = false;
    while i < toks.len() {
        let t = toks[i].clone();
        if t == Tok::Bar {
            if !open {
                open = true;
                out.push(t);
                i += 1;
                continue;
            }
            open = false;
            out.push(t);
            i += 1;
            if toks.get(i) != Some(&Tok::Caret) {
                return Err(Error::Parse("|..| must be raised to an even power".into()));
            }
            out.push(Tok::Caret);
            i += 1;
            match toks.get(i) {
                Some(Tok::Num(n)) => {
                    let k = to_i64(n)?;
                    if k % 2 != 0 {
                        return Err(Error::Parse("|..| must be raised to an even power".into()));
                    }
                    out.push(Tok::Num(BigInt::from(k / 2)));
                    i += 1;
                }
                Some(Tok::LParen) => {
                    let neg = toks.get(i + 1) == Some(&Tok::Minus);
                    let at = if neg { i + 2 } else { i + 1 };
                    let Some(Tok::Num(n)) = toks.get(at) else {
                        return Err(Error::Parse("bad exponent on |..|".into()));
                    };
                    if toks.get(at + 1) != Some(&Tok::RParen) {
                        return Err(Error::Parse("bad exponent on |..|".into()));
                    }
                    let k = to_i64(n)?;
                    if k % 2 != 0 {
                        return Err(Error::Parse("|..| must be raised to an even power".into()));
                    }
                    out.push(Tok::LParen);
                    if neg {
                        out.push(Tok::Minus);
                    }
                    out.push(Tok::Num(BigInt::from(k / 2)));
                    out.push(Tok::RParen);
                    i = at + 2;
                }
                _ => return Err(Error::Parse("bad exponent on |..|".into())),
            }
            continue;
        }
        out.push(t);
        i += 1;
    }
    if open {
        return Err(Error::Parse("unclosed '|'".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::HalfPowerPoly;

    #[test]
    fn scalars() {
        let g = parse_ratfunc("(q + 1)/q").unwrap();
        assert_eq!(g, &(&RatFunc::q() + &RatFunc::one()) / &RatFunc::q());
        let h = parse_ratfunc("(q^2 - 1)/(2*q^(1/2))").unwrap();
        assert_eq!(h.to_string(), "(q^2 - 1)/(2*q^(1/2))");
        assert_eq!(parse_ratfunc("v^2").unwrap(), RatFunc::q());
        assert_eq!(parse_ratfunc("q^(-3/2)").unwrap(), RatFunc::v_pow(-3));
        assert_eq!(parse_ratfunc("-3/4").unwrap(), RatFunc::ratio(-3, 4));
        assert_eq!(
            parse_ratfunc("q^2 - 2*q + 1").unwrap(),
            RatFunc::from_poly(&HalfPowerPoly::from_q_coeffs(&[1, -2, 1]))
        );
    }

    #[test]
    fn errors() {
        assert!(parse_ratfunc("(q+1)^(1/2)").is_err());
        assert!(parse_ratfunc("q +").is_err());
        assert!(parse_ratfunc("1/0").is_err());
        assert!(parse_ratfunc("x").is_err());
        assert!(parse_factored("|1 - z2/z1|^3").is_err());
    }

    #[test]
    fn factored_round_trip() {
        let e = FactoredExpr::abs_sq(0, 1, HalfInt::ZERO, 1)
            .mul(&FactoredExpr::abs_sq(0, 1, HalfInt::from_int(-1), -1))
            .mul(&FactoredExpr::new(
                RatFunc::one(),
                [TorusFactor::new(2, 0, HalfInt::from_doubled(3), -2)],
            ))
            .scale(&parse_ratfunc("(q + 1)/q").unwrap());
        let s = e.to_string();
        assert_eq!(parse_factored(&s).unwrap(), e, "{s}");
    }
}
