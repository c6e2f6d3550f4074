//! Formal degrees of Steinberg and generalized Steinberg representations.

use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{HalfInt, RatFunc};
use crate::groupdata::gl_order_factored;
use crate::invariants::{CuspidalDatum, FormalDegreeInput};

/// An exact rational function of q, optionally multiplied by a number that
/// is only meaningful at one value of q (user-supplied numeric degrees).
#[derive(Clone, Debug, PartialEq)]
pub struct Scalar {
    pub exact: RatFunc,
    pub numeric: Option<f64>,
}

impl Scalar {
    pub fn exact(exact: RatFunc) -> Self {
        Scalar {
            exact,
            numeric: None,
        }
    }

    pub fn one() -> Self {
        Self::exact(RatFunc::one())
    }

    pub fn is_exact(&self) -> bool {
        self.numeric.is_none()
    }

    pub fn as_exact(&self) -> Option<&RatFunc> {
        self.is_exact().then_some(&self.exact)
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.exact.eval(q) * self.numeric.unwrap_or(1.0)
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        let numeric = match (self.numeric, other.numeric) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(1.0) * b.unwrap_or(1.0)),
        };
        Scalar {
            exact: &self.exact * &other.exact,
            numeric,
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        let numeric = match (self.numeric, other.numeric) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(1.0) / b.unwrap_or(1.0)),
        };
        Scalar {
            exact: &self.exact / &other.exact,
            numeric,
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Scalar {
        Scalar {
            exact: &self.exact * c,
            numeric: self.numeric,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.numeric {
            None => write!(f, "{}", self.exact),
            Some(x) if self.exact.is_one() => write!(f, "{x}"),
            Some(x) => write!(f, "{x} * ({})", self.exact),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `d(St(l)) = (1/l) Π_{j=1}^{l-1} (q^j - 1)`.
pub fn steinberg_fd(l: u32) -> RatFunc {
    assert!(l >= 1);
    (1..l as i64).fold(RatFunc::ratio(1, l as i64), |acc, j| {
        &acc * &RatFunc::q_pow_minus_one(j)
    })
}

/// `d(St(l)) = q^{(l - l²)/2} |GL(l, q)| / (l (q^l - 1))`.
pub fn steinberg_fd_group_order(l: u32) -> RatFunc {
    let l_ = l as i64;
    let num = &gl_order_factored(l) * &RatFunc::q_pow(HalfInt::from_doubled(l_ - l_ * l_));
    &num / &(&RatFunc::q_pow_minus_one(l_) * &RatFunc::from_int(l_))
}

fn check_mer(m: u32, e: u32, r: u32) -> Result<()> {
    if m < 1 || e < 1 || r < 1 || m % r != 0 {
        return Err(Error::Input(format!(
            "need m, e, r ≥ 1 and r | m, got m={m}, e={e}, r={r}"
        )));
    }
    Ok(())
}

/// `d(π)/d(σ)^e` for `π = St(σ, e)`:
/// `(m^{e-1}/(r^{e-1} e)) q^{(e²-e)(f+r-2m²)/2} ((q^r-1)^e/(q^{er}-1)) |GL(em,q)|/|GL(m,q)|^e`.
pub fn fd_ratio(m: u32, e: u32, r: u32, f: i64) -> Result<RatFunc> {
    check_mer(m, e, r)?;
    if f < 0 {
        return Err(Error::Input(format!("conductor f = {f} is negative")));
    }
    let (m_, e_, r_) = (m as i64, e as i64, r as i64);
    let coeff = RatFunc::from_rational(BigRational::new(
        num_traits::pow(num_bigint::BigInt::from(m_), (e - 1) as usize),
        num_traits::pow(num_bigint::BigInt::from(r_), (e - 1) as usize) * e_,
    ));
    let q_exp = HalfInt::from_doubled((e_ * e_ - e_) * (f + r_ - 2 * m_ * m_));
    let torsion = &RatFunc::q_pow_minus_one(r_).pow(e_) / &RatFunc::q_pow_minus_one(e_ * r_);
    let orders = &gl_order_factored(e * m) / &gl_order_factored(m).pow(e_);
    Ok(&(&(&coeff * &RatFunc::q_pow(q_exp)) * &torsion) * &orders)
}

/// The same ratio written through Steinberg degrees:
/// `r^{1-e} ((q^{em}-1)(q^r-1)^e/((q^m-1)^e (q^{er}-1))) q^{(e²-e)(f+r-m²)/2} d(St(em))/d(St(m))^e`.
pub fn fd_ratio_steinberg_form(m: u32, e: u32, r: u32, f: i64) -> Result<RatFunc> {
    check_mer(m, e, r)?;
    let (m_, e_, r_) = (m as i64, e as i64, r as i64);
    let q_exp = HalfInt::from_doubled((e_ * e_ - e_) * (f + r_ - m_ * m_));
    Ok(&torsion_block(m, e, r, e_) * &RatFunc::q_pow(q_exp))
}

/// The ratio with `f = δ + m² - r` substituted:
/// `r^{1-e} (…) q^{(e²-e)δ/2} d(St(em))/d(St(m))^e`.
pub fn fd_ratio_delta_form(m: u32, e: u32, r: u32, delta: i64) -> Result<RatFunc> {
    check_mer(m, e, r)?;
    let e_ = e as i64;
    let q_exp = HalfInt::from_doubled((e_ * e_ - e_) * delta);
    Ok(&torsion_block(m, e, r, e_) * &RatFunc::q_pow(q_exp))
}

/// `r^{1-p} ((q^{em}-1)(q^r-1)^p/((q^m-1)^p (q^{er}-1))) d(St(em))/d(St(m))^p`.
fn torsion_block(m: u32, e: u32, r: u32, p: i64) -> RatFunc {
    let (m_, e_, r_) = (m as i64, e as i64, r as i64);
    let r_pow = RatFunc::from_int(r_).pow(1 - p);
    let num = &RatFunc::q_pow_minus_one(e_ * m_) * &RatFunc::q_pow_minus_one(r_).pow(p);
    let den = &RatFunc::q_pow_minus_one(m_).pow(p) * &RatFunc::q_pow_minus_one(e_ * r_);
    let st = &steinberg_fd(e * m) / &steinberg_fd(m).pow(p);
    &(&(&r_pow * &num) / &den) * &st
}

/// Explicit formal degree of `St(σ, e)` from `(m, r, δ)`:
/// `r (q^{em}-1)/(q^{er}-1) q^{(er-em+e²δ)/2} d(St(em))`. With `e = 1` this
/// is `d(σ)`.
pub fn fd_explicit(m: u32, r: u32, delta: i64, e: u32) -> RatFunc {
    let (m_, e_, r_) = (m as i64, e as i64, r as i64);
    let ratio = &RatFunc::q_pow_minus_one(e_ * m_) / &RatFunc::q_pow_minus_one(e_ * r_);
    let q_exp = HalfInt::from_doubled(e_ * r_ - e_ * m_ + e_ * e_ * delta);
    &(&(&RatFunc::from_int(r_) * &ratio) * &RatFunc::q_pow(q_exp)) * &steinberg_fd(e * m)
}

/// The displayed form of `d(π)/d(σ)^{e²}`:
/// `r^{1-e²} ((q^{em}-1)(q^r-1)^{e²}/((q^{er}-1)(q^m-1)^{e²})) q^{(e²-e)(m-r)/2} d(St(em))/d(St(m))^{e²}`.
pub fn fd_square_exponent_form(m: u32, r: u32, e: u32) -> RatFunc {
    let (m_, e_, r_) = (m as i64, e as i64, r as i64);
    let q_exp = HalfInt::from_doubled((e_ * e_ - e_) * (m_ - r_));
    &torsion_block(m, e, r, e_ * e_) * &RatFunc::q_pow(q_exp)
}

/// `d(St(σ, l))` for a cuspidal datum. Exact `d(σ)` goes through the ratio
/// `fd_ratio · d(σ)^l`; otherwise `δ` gives the explicit formula; a numeric
/// `d(σ)` goes through the ratio with a numeric multiplier.
pub fn fd_generalized_steinberg(c: &CuspidalDatum, l: u32) -> Result<Scalar> {
    if l < 1 {
        return Err(Error::Input("segment length must be positive".into()));
    }
    let ratio = || -> Result<RatFunc> {
        if l == 1 {
            return Ok(RatFunc::one());
        }
        let f = c.conductor().ok_or_else(|| {
            Error::MissingData("the conductor f(σ∨×σ) is needed for segments of length > 1".into())
        })?;
        fd_ratio(c.m, l, c.r, f)
    };
    match &c.d {
        FormalDegreeInput::Exact(d) => Ok(Scalar::exact(&ratio()? * &d.pow(l as i64))),
        _ if c.delta.is_some() => {
            let delta = c
                .delta_int()
                .ok_or_else(|| Error::Input("delta must be an integer".into()))?;
            check_mer(c.m, l, c.r)?;
            Ok(Scalar::exact(fd_explicit(c.m, c.r, delta, l)))
        }
        FormalDegreeInput::Numeric(d) => Ok(Scalar {
            exact: ratio()?,
            numeric: Some(d.powi(l as i32)),
        }),
        FormalDegreeInput::Derive => Err(Error::MissingData(
            "formal degree: neither d nor delta is available".into(),
        )),
    }
}

/// `d_{σ_1 ⊗ … ⊗ σ_k} = Π d_{σ_j}`.
pub fn fd_product<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
    values.into_iter().fold(Scalar::one(), |acc, v| acc.mul(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_ratfunc;

    #[test]
    fn steinberg_examples() {
        assert!(steinberg_fd(1).is_one());
        assert_eq!(steinberg_fd(2), parse_ratfunc("(q - 1)/2").unwrap());
        assert!((steinberg_fd(3).eval(2.0) - 1.0).abs() < 1e-15);
        for l in 1..=10 {
            assert_eq!(steinberg_fd(l), steinberg_fd_group_order(l));
        }
    }

    #[test]
    fn ratio_examples() {
        for (m, r, f) in [(1, 1, 0), (2, 1, 3), (4, 2, 7)] {
            assert!(fd_ratio(m, 1, r, f).unwrap().is_one());
        }
        assert_eq!(fd_ratio(1, 2, 1, 0).unwrap(), steinberg_fd(2));
        assert!(fd_ratio(3, 2, 2, 0).is_err());
    }

    #[test]
    fn steinberg_form_agrees() {
        for m in 1..=4 {
            for r in (1..=m).filter(|r| m % r == 0) {
                for e in 1..=4 {
                    for f in 0..4 {
                        assert_eq!(
                            fd_ratio(m, e, r, f).unwrap(),
                            fd_ratio_steinberg_form(m, e, r, f).unwrap(),
                            "m={m} e={e} r={r} f={f}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn generalized_steinberg_examples() {
        let triv = CuspidalDatum::new(1, 2, 1).with_delta(0);
        assert_eq!(fd_generalized_steinberg(&triv, 2).unwrap().exact, steinberg_fd(2));
        assert!(fd_generalized_steinberg(&triv, 1).unwrap().exact.is_one());
        let c = CuspidalDatum::new(2, 2, 2).with_delta(0);
        let d = fd_generalized_steinberg(&c, 2).unwrap().exact;
        assert_eq!(d, &RatFunc::from_int(2) * &steinberg_fd(4));
    }

    #[test]
    fn numeric_path() {
        let c = CuspidalDatum::new(2, 2, 2)
            .with_conductor(5)
            .with_degree(FormalDegreeInput::Numeric(3.0));
        let d1 = fd_generalized_steinberg(&c, 1).unwrap();
        assert_eq!(d1.numeric, Some(3.0));
        assert!(d1.exact.is_one());
        let d2 = fd_generalized_steinberg(&c, 2).unwrap();
        assert_eq!(d2.numeric, Some(9.0));
        assert_eq!(d2.exact, fd_ratio(2, 2, 2, 5).unwrap());
    }

    #[test]
    fn exact_and_explicit_paths_agree() {
        for (m, r, delta) in [(1, 1, 0), (2, 1, 0), (2, 2, 4), (3, 1, 2), (4, 2, 3)] {
            let derived = fd_explicit(m, r, delta, 1);
            let c_exact = CuspidalDatum::new(m, 3, r)
                .with_delta(delta)
                .with_degree(FormalDegreeInput::Exact(derived));
            let mut c_delta = c_exact.clone();
            c_delta.d = FormalDegreeInput::Derive;
            for l in 1..=3 {
                assert_eq!(
                    fd_generalized_steinberg(&c_exact, l).unwrap(),
                    fd_generalized_steinberg(&c_delta, l).unwrap(),
                    "m={m} r={r} delta={delta} l={l}"
                );
            }
        }
    }

    #[test]
    fn products() {
        assert_eq!(fd_product([]), Scalar::one());
        let a = Scalar::exact(steinberg_fd(2));
        assert_eq!(fd_product([&a]), a);
        let vals = [
            Scalar::exact(steinberg_fd(2)),
            Scalar::one(),
            Scalar::exact(parse_ratfunc("(q - 1)*(q^2 - 1)/3").unwrap()),
        ];
        let p = fd_product(&vals);
        assert_eq!(p.exact, parse_ratfunc("(q-1)^2*(q^2-1)/6").unwrap());
    }
}
