//! Laurent polynomials in `v` with rational coefficients, where `v² = q`.
//!
//! Integer powers of `q` live on even exponents of `v`; the odd exponents
//! carry the half-integral powers `q^{k/2}` that appear for segments of even
//! length.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::HalfInt;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HalfPowerPoly {
    /// exponent of v -> nonzero coefficient
    terms: BTreeMap<i64, BigRational>,
}

impl HalfPowerPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    /// `c · v^exp`
    pub fn monomial(c: BigRational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        HalfPowerPoly { terms }
    }

    /// The variable `v = q^{1/2}`.
    pub fn v() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    /// The variable `q = v²`.
    pub fn q() -> Self {
        Self::q_pow(HalfInt::from_int(1))
    }

    pub fn q_pow(e: HalfInt) -> Self {
        Self::monomial(BigRational::one(), e.doubled())
    }

    /// Build `Σ coeffs[i] q^i` from integer coefficients.
    pub fn from_q_coeffs(coeffs: &[i64]) -> Self {
        let mut p = Self::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(2 * i as i64, BigRational::from_integer(c.into()));
        }
        p
    }

    /// `q^a - 1` for any integer `a`.
    pub fn q_pow_minus_one(a: i64) -> Self {
        Self::q_pow(HalfInt::from_int(a)) - Self::one()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigRational)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Highest exponent of v, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest exponent of v, `None` for the zero polynomial.
    pub fn low_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.values().next_back()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// True when every exponent is even, i.e. the value is a Laurent
    /// polynomial in q.
    pub fn is_in_q(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    fn add_term(&mut self, exp: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        HalfPowerPoly {
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HalfPowerPoly {
            terms: self.terms.iter().map(|(&e, x)| (e, x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitute `v -> v^k`. With `k = -1` this maps `X` to `X⁻¹`; with
    /// `k = r` it maps `q` to `q^r`.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k != 0, "substitution v -> v^0 collapses the variable");
        HalfPowerPoly {
            terms: self.terms.iter().map(|(&e, c)| (e * k, c.clone())).collect(),
        }
    }

    /// Evaluate at `v`, as a float.
    pub fn eval_v(&self, v: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&e, c)| c.to_f64().unwrap_or(f64::NAN) * v.powi(e as i32))
            .sum()
    }

    /// Evaluate at `q` (so `v = √q`).
    pub fn eval_q(&self, q: f64) -> f64 {
        self.eval_v(q.sqrt())
    }

    pub fn eval_v_complex(&self, v: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&e, c)| v.powi(e as i32) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// Exact evaluation at a rational value of v.
    pub fn eval_v_exact(&self, v: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&e, c) in &self.terms {
            acc += c * pow_rational(v, e);
        }
        acc
    }

    /// Least common multiple of the coefficient denominators divided by the
    /// gcd of the numerators, signed so the leading coefficient of the
    /// primitive part is positive. `self = content · primitive`.
    pub fn content(&self) -> BigRational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return BigRational::one();
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading_coeff().is_some_and(|c| c.is_negative()) {
            content = -content;
        }
        content
    }

    /// Integer-coefficient polynomial with positive leading coefficient and
    /// coprime coefficients.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        self.scale(&c.recip())
    }

    /// Polynomial division in `v` for two polynomials with non-negative
    /// exponents. Returns `(quotient, remainder)`.
    fn poly_div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d_deg = divisor.degree().expect("division by zero polynomial");
        let d_lead = divisor.leading_coeff().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(r_deg) = rem.degree() {
            if r_deg < d_deg {
                break;
            }
            let c = rem.leading_coeff().unwrap() / &d_lead;
            let shift = r_deg - d_deg;
            for (&e, dc) in &divisor.terms {
                rem.add_term(e + shift, -(dc * &c));
            }
            quot.add_term(shift, c);
        }
        (quot, rem)
    }

    /// Exact division in the Laurent ring; `None` when `divisor` does not
    /// divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let d_low = divisor.low_degree()?;
        let Some(s_low) = self.low_degree() else {
            return Some(Self::zero());
        };
        let a = self.shift(-s_low);
        let b = divisor.shift(-d_low);
        let (q, r) = a.poly_div_rem(&b);
        r.is_zero().then(|| q.shift(s_low - d_low))
    }

    /// Monic greatest common divisor of two polynomials in v, after both
    /// have been shifted to have non-zero constant terms.
    pub fn gcd(&self, other: &Self) -> Self {
        let norm = |p: &Self| -> Self {
            match p.low_degree() {
                Some(l) => p.shift(-l),
                None => Self::zero(),
            }
        };
        let mut a = norm(self);
        let mut b = norm(other);
        while !b.is_zero() {
            let (_, r) = a.poly_div_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        match a.leading_coeff() {
            None => Self::zero(),
            Some(lc) => {
                let inv = lc.recip();
                a.scale(&inv)
            }
        }
    }
}

pub(crate) fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

impl Add<&HalfPowerPoly> for &HalfPowerPoly {
    type Output = HalfPowerPoly;
    fn add(self, rhs: &HalfPowerPoly) -> HalfPowerPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for HalfPowerPoly {
    type Output = HalfPowerPoly;
    fn add(mut self, rhs: HalfPowerPoly) -> HalfPowerPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&HalfPowerPoly> for HalfPowerPoly {
    fn add_assign(&mut self, rhs: &HalfPowerPoly) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl Neg for &HalfPowerPoly {
    type Output = HalfPowerPoly;
    fn neg(self) -> HalfPowerPoly {
        HalfPowerPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for HalfPowerPoly {
    type Output = HalfPowerPoly;
    fn neg(self) -> HalfPowerPoly {
        -&self
    }
}

impl Sub<&HalfPowerPoly> for &HalfPowerPoly {
    type Output = HalfPowerPoly;
    fn sub(self, rhs: &HalfPowerPoly) -> HalfPowerPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Sub for HalfPowerPoly {
    type Output = HalfPowerPoly;
    fn sub(self, rhs: HalfPowerPoly) -> HalfPowerPoly {
        &self - &rhs
    }
}

impl Mul<&HalfPowerPoly> for &HalfPowerPoly {
    type Output = HalfPowerPoly;
    fn mul(self, rhs: &HalfPowerPoly) -> HalfPowerPoly {
        let mut out = HalfPowerPoly::zero();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for HalfPowerPoly {
    type Output = HalfPowerPoly;
    fn mul(self, rhs: HalfPowerPoly) -> HalfPowerPoly {
        &self * &rhs
    }
}

impl fmt::Display for HalfPowerPoly {
    /// Renders in q, descending powers, half powers as `q^(k/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in self.terms.iter().rev() {
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let mono = render_q_power(HalfInt::from_doubled(e));
            match (mono, mag.is_one()) {
                (None, _) => write!(f, "{}", mag)?,
                (Some(m), true) => write!(f, "{}", m)?,
                (Some(m), false) => write!(f, "{}*{}", mag, m)?,
            }
        }
        Ok(())
    }
}

/// `q`, `q^3`, `q^(1/2)`, `q^(-2)`; `None` for `q^0`.
pub fn render_q_power(e: HalfInt) -> Option<String> {
    if e == HalfInt::ZERO {
        None
    } else if e == HalfInt::from_int(1) {
        Some("q".to_string())
    } else if e.is_integer() && e.is_positive() {
        Some(format!("q^{}", e))
    } else {
        Some(format!("q^({})", e))
    }
}
