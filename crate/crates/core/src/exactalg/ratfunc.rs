//! Exact rational functions of `v = q^{1/2}`.
//!
//! Every constant produced by the formulas in this crate is a product of a
//! rational number, a power of v and factors `v^a - 1`, so values are kept in
//! the unique factorization
//!
//! ```text
//!     c · v^k · Π_k Φ_k(v)^{n_k} · R_num(v) / R_den(v)
//! ```
//!
//! where `Φ_k` are cyclotomic polynomials and the residual pair `R_num/R_den`
//! is coprime, primitive, free of cyclotomic factors and of the factor v.
//! The residual is `1/1` for everything except user-supplied expressions
//! such as `q + 2`. Because the factorization is unique, structural equality
//! is equality of rational functions and multiplication is exponent
//! arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclotomic::{self, cyclotomic_poly, eval_cyclotomic, extract_cyclotomic};
use super::{HalfInt, HalfPowerPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    coeff: BigRational,
    v_pow: i64,
    cyclo: BTreeMap<u64, i64>,
    res_num: HalfPowerPoly,
    res_den: HalfPowerPoly,
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::one()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(c: BigRational) -> Self {
        RatFunc {
            coeff: c,
            v_pow: 0,
            cyclo: BTreeMap::new(),
            res_num: HalfPowerPoly::one(),
            res_den: HalfPowerPoly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_rational(BigRational::from_integer(c.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `v^k = q^{k/2}`
    pub fn v_pow(k: i64) -> Self {
        let mut out = Self::one();
        out.v_pow = k;
        out
    }

    pub fn q() -> Self {
        Self::v_pow(2)
    }

    pub fn q_pow(e: HalfInt) -> Self {
        Self::v_pow(e.doubled())
    }

    pub fn q_pow_int(e: i64) -> Self {
        Self::v_pow(2 * e)
    }

    /// `Φ_k(v)`
    pub fn cyclotomic(k: u64) -> Self {
        assert!(k >= 1);
        let mut out = Self::one();
        out.cyclo.insert(k, 1);
        out
    }

    /// `v^a - 1` for any integer `a`; zero when `a = 0`.
    pub fn v_pow_minus_one(a: i64) -> Self {
        if a == 0 {
            return Self::zero();
        }
        let mut out = Self::one();
        out.cyclo = cyclotomic::v_pow_minus_one(a.unsigned_abs());
        if a < 0 {
            // v^{-b} - 1 = -v^{-b} (v^b - 1)
            out.coeff = -out.coeff;
            out.v_pow = a;
        }
        out
    }

    /// `q^a - 1` for any integer `a`; zero when `a = 0`.
    pub fn q_pow_minus_one(a: i64) -> Self {
        Self::v_pow_minus_one(2 * a)
    }

    pub fn from_poly(p: &HalfPowerPoly) -> Self {
        Self::from_polys(p, &HalfPowerPoly::one()).expect("denominator is one")
    }

    /// Normalize `num / den`. `None` when `den` is zero.
    pub fn from_polys(num: &HalfPowerPoly, den: &HalfPowerPoly) -> Option<Self> {
        let d_low = den.low_degree()?;
        let Some(n_low) = num.low_degree() else {
            return Some(Self::zero());
        };
        let n = num.shift(-n_low);
        let d = den.shift(-d_low);
        let g = n.gcd(&d);
        let n = n.div_exact(&g).expect("gcd divides");
        let d = d.div_exact(&g).expect("gcd divides");
        let n_content = n.content();
        let d_content = d.content();
        let (n_cyc, n_rest) = extract_cyclotomic(&n.scale(&n_content.recip()));
        let (d_cyc, d_rest) = extract_cyclotomic(&d.scale(&d_content.recip()));
        let mut cyclo = n_cyc;
        for (k, e) in d_cyc {
            *cyclo.entry(k).or_insert(0) -= e;
        }
        cyclo.retain(|_, e| *e != 0);
        let mut out = RatFunc {
            coeff: n_content / d_content,
            v_pow: n_low - d_low,
            cyclo,
            res_num: HalfPowerPoly::one(),
            res_den: HalfPowerPoly::one(),
        };
        out.set_residual(n_rest, d_rest);
        Some(out)
    }

    /// Install a coprime, cyclotomic-free residual pair, moving contents into
    /// the coefficient.
    fn set_residual(&mut self, num: HalfPowerPoly, den: HalfPowerPoly) {
        let nc = num.content();
        let dc = den.content();
        self.coeff = &self.coeff * &nc / &dc;
        self.res_num = num.scale(&nc.recip());
        self.res_den = den.scale(&dc.recip());
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|c| c.is_one())
    }

    /// The value as a rational number, when it is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        (self.v_pow == 0 && self.cyclo.is_empty() && self.has_trivial_residual())
            .then(|| self.coeff.clone())
    }

    pub fn has_trivial_residual(&self) -> bool {
        self.res_num.is_one() && self.res_den.is_one()
    }

    /// Leading rational coefficient `c` of the factorization.
    pub fn coefficient(&self) -> &BigRational {
        &self.coeff
    }

    /// Exponent `k` of the monomial `v^k`.
    pub fn v_power(&self) -> i64 {
        self.v_pow
    }

    /// Exponents of the cyclotomic factors `Φ_k(v)`.
    pub fn cyclotomic_exponents(&self) -> &BTreeMap<u64, i64> {
        &self.cyclo
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatFunc {
            coeff: self.coeff.recip(),
            v_pow: -self.v_pow,
            cyclo: self.cyclo.iter().map(|(&k, &e)| (k, -e)).collect(),
            res_num: self.res_den.clone(),
            res_den: self.res_num.clone(),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        (!other.is_zero()).then(|| self * &other.inv())
    }

    pub fn pow(&self, n: i64) -> Self {
        if n == 0 {
            return Self::one();
        }
        if self.is_zero() {
            assert!(n > 0, "zero to a negative power");
            return Self::zero();
        }
        let base = if n < 0 { self.inv() } else { self.clone() };
        let m = n.unsigned_abs();
        let mut out = RatFunc {
            coeff: num_traits::pow(base.coeff.clone(), m as usize),
            v_pow: base.v_pow * m as i64,
            cyclo: base.cyclo.iter().map(|(&k, &e)| (k, e * m as i64)).collect(),
            res_num: HalfPowerPoly::one(),
            res_den: HalfPowerPoly::one(),
        };
        if !base.has_trivial_residual() {
            out.set_residual(base.res_num.pow(m as u32), base.res_den.pow(m as u32));
        }
        out
    }

    /// Expanded numerator with integer coefficients. Together with
    /// [`RatFunc::denominator`] this is the reduced fraction; the
    /// denominator has positive leading coefficient.
    pub fn numerator(&self) -> HalfPowerPoly {
        if self.is_zero() {
            return HalfPowerPoly::zero();
        }
        let mut p = HalfPowerPoly::constant(BigRational::from_integer(self.coeff.numer().clone()))
            .shift(self.v_pow.max(0));
        for (&k, &e) in &self.cyclo {
            if e > 0 {
                p = &p * &cyclotomic_poly(k).pow(e as u32);
            }
        }
        &p * &self.res_num
    }

    pub fn denominator(&self) -> HalfPowerPoly {
        if self.is_zero() {
            return HalfPowerPoly::one();
        }
        let mut p = HalfPowerPoly::constant(BigRational::from_integer(self.coeff.denom().clone()))
            .shift((-self.v_pow).max(0));
        for (&k, &e) in &self.cyclo {
            if e < 0 {
                p = &p * &cyclotomic_poly(k).pow((-e) as u32);
            }
        }
        &p * &self.res_den
    }

    /// Numeric value at `q` (with `v = √q`).
    pub fn eval(&self, q: f64) -> f64 {
        self.eval_v(q.sqrt())
    }

    pub fn eval_v(&self, v: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let mut acc = self.coeff.to_f64().unwrap_or(f64::NAN) * v.powi(self.v_pow as i32);
        for (&k, &e) in &self.cyclo {
            acc *= eval_cyclotomic(k, v).powi(e as i32);
        }
        if !self.has_trivial_residual() {
            acc *= self.res_num.eval_v(v) / self.res_den.eval_v(v);
        }
        acc
    }

    /// Exact value at a rational `v`; `None` at a pole.
    pub fn eval_v_exact(&self, v: &BigRational) -> Option<BigRational> {
        let den = self.denominator().eval_v_exact(v);
        (!den.is_zero()).then(|| self.numerator().eval_v_exact(v) / den)
    }

    /// Substitute `q -> q^r` (equivalently `v -> v^r`), `r ≥ 1`.
    pub fn substitute_q_power(&self, r: u64) -> Self {
        assert!(r >= 1);
        if self.is_zero() || r == 1 {
            return self.clone();
        }
        let mut cyclo = BTreeMap::new();
        for (&k, &e) in &self.cyclo {
            for (kk, m) in cyclotomic::substitute_power(k, r) {
                *cyclo.entry(kk).or_insert(0) += m * e;
            }
        }
        cyclo.retain(|_, e: &mut i64| *e != 0);
        let out = RatFunc {
            coeff: self.coeff.clone(),
            v_pow: self.v_pow * r as i64,
            cyclo,
            res_num: HalfPowerPoly::one(),
            res_den: HalfPowerPoly::one(),
        };
        if self.has_trivial_residual() {
            out
        } else {
            let res = RatFunc::from_polys(
                &self.res_num.substitute_power(r as i64),
                &self.res_den.substitute_power(r as i64),
            )
            .expect("nonzero residual denominator");
            &out * &res
        }
    }

    /// Rendering of the reduced fraction in q; see the module docs of
    /// [`crate::exactalg`] for the grammar.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        let mut cyclo = self.cyclo.clone();
        for (&k, &e) in &rhs.cyclo {
            *cyclo.entry(k).or_insert(0) += e;
        }
        cyclo.retain(|_, e| *e != 0);
        let mut out = RatFunc {
            coeff: &self.coeff * &rhs.coeff,
            v_pow: self.v_pow + rhs.v_pow,
            cyclo,
            res_num: HalfPowerPoly::one(),
            res_den: HalfPowerPoly::one(),
        };
        if !(self.has_trivial_residual() && rhs.has_trivial_residual()) {
            // Products of cyclotomic-free polynomials stay cyclotomic-free;
            // only cross cancellation is needed.
            let g1 = self.res_num.gcd(&rhs.res_den);
            let g2 = rhs.res_num.gcd(&self.res_den);
            let div = |a: &HalfPowerPoly, g: &HalfPowerPoly| a.div_exact(g).expect("gcd divides");
            let num = &div(&self.res_num, &g1) * &div(&rhs.res_num, &g2);
            let den = &div(&self.res_den, &g2) * &div(&rhs.res_den, &g1);
            out.set_residual(num, den);
        }
        out
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}

impl Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: RatFunc) -> RatFunc {
        &self / &rhs
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (an, ad) = (self.numerator(), self.denominator());
        let (bn, bd) = (rhs.numerator(), rhs.denominator());
        let num = &(&an * &bd) + &(&bn * &ad);
        RatFunc::from_polys(&num, &(&ad * &bd)).expect("nonzero denominators")
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        let mut out = self.clone();
        out.coeff = -out.coeff;
        out
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        &self - &rhs
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        RatFunc::from_int(c)
    }
}

impl From<BigRational> for RatFunc {
    fn from(c: BigRational) -> Self {
        RatFunc::from_rational(c)
    }
}

impl From<BigInt> for RatFunc {
    fn from(c: BigInt) -> Self {
        RatFunc::from_rational(BigRational::from_integer(c))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numerator();
        let den = self.denominator();
        if den.is_one() {
            return write!(f, "{}", num);
        }
        if num.num_terms() > 1 {
            write!(f, "({})", num)?;
        } else {
            write!(f, "{}", num)?;
        }
        let bare = den.is_monomial()
            && (den.low_degree() == Some(0) || den.leading_coeff().is_some_and(|c| c.is_one()));
        if bare {
            write!(f, "/{}", den)
        } else {
            write!(f, "/({})", den)
        }
    }
}

impl RatFunc {
    /// Sign of the value for all `q > 1`, when it can be read off the
    /// factorization (cyclotomic factors are positive for `v > 1`).
    pub fn sign_for_q_gt_one(&self) -> Option<i32> {
        if self.is_zero() {
            return Some(0);
        }
        if !self.has_trivial_residual() {
            return None;
        }
        Some(if self.coeff.is_positive() { 1 } else { -1 })
    }
}
