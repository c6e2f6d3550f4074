//! Fundamental invariants of a Bernstein component and their validation.

use num_rational::BigRational;
use serde::Serialize;

use crate::degrees;
use crate::error::{Error, Result};
use crate::exactalg::{HalfInt, RatFunc};

/// How the formal degree `d(σ)` of a cuspidal is supplied.
#[derive(Clone, Debug, PartialEq)]
pub enum FormalDegreeInput {
    /// An exact rational function of q.
    Exact(RatFunc),
    /// A number, meaningful only at the document's q.
    Numeric(f64),
    /// Computed from `δ`.
    Derive,
}

/// How the self-conductor `f(σ^∨ × σ)` is supplied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConductorInput {
    Given(i64),
    Derive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CuspidalDatum {
    pub m: u32,
    pub e: u32,
    pub r: u32,
    pub d: FormalDegreeInput,
    pub delta: Option<HalfInt>,
    pub f_self: Option<ConductorInput>,
}

impl CuspidalDatum {
    /// A datum with exact formal degree 1 and conductor given directly;
    /// adjust fields afterwards as needed.
    pub fn new(m: u32, e: u32, r: u32) -> Self {
        CuspidalDatum {
            m,
            e,
            r,
            d: FormalDegreeInput::Derive,
            delta: None,
            f_self: None,
        }
    }

    /// The datum of the trivial character of GL(1): `m = r = 1`, `d = 1`,
    /// `δ = 0`, `f = 0`.
    pub fn iwahori(e: u32) -> Self {
        CuspidalDatum {
            m: 1,
            e,
            r: 1,
            d: FormalDegreeInput::Exact(RatFunc::one()),
            delta: Some(HalfInt::ZERO),
            f_self: Some(ConductorInput::Given(0)),
        }
    }

    pub fn with_delta(mut self, delta: i64) -> Self {
        self.delta = Some(HalfInt::from_int(delta));
        self
    }

    pub fn with_conductor(mut self, f: i64) -> Self {
        self.f_self = Some(ConductorInput::Given(f));
        self
    }

    pub fn with_degree(mut self, d: FormalDegreeInput) -> Self {
        self.d = d;
        self
    }

    /// `δ` as an integer, when present and integral.
    pub fn delta_int(&self) -> Option<i64> {
        self.delta.and_then(HalfInt::to_int)
    }

    /// `f(σ^∨ × σ)`: the given value, else `δ + m² - r`.
    pub fn conductor(&self) -> Option<i64> {
        match self.f_self {
            Some(ConductorInput::Given(f)) => Some(f),
            _ => derive_conductor(self).ok(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalInvariants {
    pub q: u64,
    pub cuspidals: Vec<CuspidalDatum>,
    /// `f_ij` for `i ≠ j`; the diagonal is `None`.
    pub cross_conductors: Vec<Vec<Option<i64>>>,
}

impl FundamentalInvariants {
    /// Single-cuspidal invariants (no cross conductors needed).
    pub fn single(q: u64, c: CuspidalDatum) -> Self {
        FundamentalInvariants {
            q,
            cuspidals: vec![c],
            cross_conductors: vec![vec![None]],
        }
    }

    /// Invariants of the component containing `(T, 1)` in `GL(n)`.
    pub fn iwahori(q: u64, n: u32) -> Self {
        Self::single(q, CuspidalDatum::iwahori(n))
    }

    /// `n = Σ m_i e_i`.
    pub fn n(&self) -> u32 {
        self.cuspidals.iter().map(|c| c.m * c.e).sum()
    }

    pub fn cross_conductor(&self, i: usize, j: usize) -> Option<i64> {
        self.cross_conductors.get(i)?.get(j).copied().flatten()
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cuspidal: Option<usize>,
    pub message: String,
}

fn violation(code: &'static str, cuspidal: Option<usize>, message: String) -> Violation {
    Violation {
        code,
        cuspidal,
        message,
    }
}

/// Every violated invariant, in a fixed order. Never fails.
pub fn validate(inv: &FundamentalInvariants) -> Vec<Violation> {
    let mut out = Vec::new();
    if inv.q < 2 {
        out.push(violation("Q_RANGE", None, format!("q must be at least 2, got {}", inv.q)));
    }
    if inv.cuspidals.is_empty() {
        out.push(violation("NO_CUSPIDALS", None, "at least one cuspidal datum is required".into()));
    }
    for (idx, c) in inv.cuspidals.iter().enumerate() {
        let at = Some(idx);
        if c.m < 1 {
            out.push(violation("M_RANGE", at, "m must be at least 1".into()));
        }
        if c.e < 1 {
            out.push(violation("E_RANGE", at, "e must be at least 1".into()));
        }
        if c.r < 1 {
            out.push(violation("R_RANGE", at, "r must be at least 1".into()));
        } else if c.m >= 1 && c.m % c.r != 0 {
            out.push(violation(
                "R_DIVIDES_M",
                at,
                format!("torsion number r = {} must divide m = {}", c.r, c.m),
            ));
        }
        if let Some(delta) = c.delta {
            if delta.is_negative() {
                out.push(violation("DELTA_RANGE", at, format!("delta = {delta} is negative")));
            } else if !delta.is_integer() {
                out.push(violation(
                    "DELTA_EXPONENT",
                    at,
                    format!("delta = {delta} would give q-exponents outside (1/2)Z"),
                ));
            }
        }
        match (c.f_self, c.delta_int()) {
            (Some(ConductorInput::Given(f)), Some(delta)) if c.r >= 1 => {
                let expected = delta + (c.m as i64).pow(2) - c.r as i64;
                if f != expected {
                    out.push(violation(
                        "CONDUCTOR_IDENTITY",
                        at,
                        format!("f_self = {f} but delta + m^2 - r = {expected}"),
                    ));
                }
            }
            (Some(ConductorInput::Derive), None) => out.push(violation(
                "CONDUCTOR_UNDERIVABLE",
                at,
                "f_self = derive needs delta".into(),
            )),
            _ => {}
        }
        if let Some(ConductorInput::Given(f)) = c.f_self {
            if f < 0 {
                out.push(violation("CONDUCTOR_RANGE", at, format!("f_self = {f} is negative")));
            }
        }
        match &c.d {
            FormalDegreeInput::Numeric(x) if !(x.is_finite() && *x > 0.0) => out.push(violation(
                "FORMAL_DEGREE_RANGE",
                at,
                format!("numeric formal degree {x} must be positive"),
            )),
            FormalDegreeInput::Exact(d) if d.is_zero() => out.push(violation(
                "FORMAL_DEGREE_RANGE",
                at,
                "exact formal degree must be nonzero".into(),
            )),
            FormalDegreeInput::Derive if c.delta.is_none() => out.push(violation(
                "FORMAL_DEGREE_UNDERIVABLE",
                at,
                "d = derive needs delta".into(),
            )),
            _ => {}
        }
    }
    let k = inv.cuspidals.len();
    let cc = &inv.cross_conductors;
    if cc.len() != k || cc.iter().any(|row| row.len() != k) {
        if !(k == 1 && cc.is_empty()) {
            out.push(violation(
                "CROSS_SHAPE",
                None,
                format!("cross_conductors must be a {k}x{k} matrix"),
            ));
        }
        return out;
    }
    for i in 0..k {
        if cc[i][i].is_some() {
            out.push(violation(
                "CROSS_DIAGONAL",
                Some(i),
                "the diagonal of cross_conductors must be empty; use f_self".into(),
            ));
        }
        for j in 0..k {
            if i == j {
                continue;
            }
            match (cc[i][j], cc[j][i]) {
                (None, _) => out.push(violation(
                    "CROSS_MISSING",
                    Some(i),
                    format!("cross conductor f_{}{} is missing", i + 1, j + 1),
                )),
                (Some(a), Some(b)) if a != b && i < j => out.push(violation(
                    "CROSS_SYMMETRY",
                    Some(i),
                    format!("f_{}{} = {a} but f_{}{} = {b}", i + 1, j + 1, j + 1, i + 1),
                )),
                (Some(a), _) if a < 0 => out.push(violation(
                    "CROSS_RANGE",
                    Some(i),
                    format!("f_{}{} = {a} is negative", i + 1, j + 1),
                )),
                _ => {}
            }
        }
    }
    out
}

fn require_delta(c: &CuspidalDatum) -> Result<i64> {
    let delta = c
        .delta
        .ok_or_else(|| Error::MissingData("delta is required".into()))?;
    delta
        .to_int()
        .ok_or_else(|| Error::Input(format!("delta = {delta} must be an integer")))
}

/// `f(σ^∨ × σ) = δ + m² - r`.
pub fn derive_conductor(c: &CuspidalDatum) -> Result<i64> {
    let delta = require_delta(c)?;
    Ok(delta + (c.m as i64).pow(2) - c.r as i64)
}

/// `d(σ) = r (q^m - 1)/(q^r - 1) q^{(r - m + δ)/2} d(St(m))`.
pub fn derive_formal_degree(c: &CuspidalDatum) -> Result<RatFunc> {
    let delta = require_delta(c)?;
    Ok(degrees::fd_explicit(c.m, c.r, delta, 1))
}

/// `𝔠(β) = ([E:F]² / m²) δ`.
pub fn discriminant_exponent(c: &CuspidalDatum, deg_e: u32) -> Result<BigRational> {
    let delta = c
        .delta
        .ok_or_else(|| Error::MissingData("delta is required".into()))?;
    if deg_e == 0 || c.m % deg_e != 0 {
        return Err(Error::Input(format!("[E:F] = {deg_e} must divide m = {}", c.m)));
    }
    let delta = BigRational::new(delta.doubled().into(), 2.into());
    Ok(BigRational::new((deg_e as i64).pow(2).into(), (c.m as i64).pow(2).into()) * delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codes(inv: &FundamentalInvariants) -> Vec<&'static str> {
        validate(inv).iter().map(|v| v.code).collect()
    }

    #[test]
    fn iwahori_is_valid() {
        let inv = FundamentalInvariants::iwahori(3, 2);
        assert!(validate(&inv).is_empty());
    }

    #[test]
    fn r_must_divide_m() {
        let inv = FundamentalInvariants::single(3, CuspidalDatum::new(3, 1, 2).with_conductor(0).with_degree(FormalDegreeInput::Numeric(1.0)));
        assert_eq!(codes(&inv), vec!["R_DIVIDES_M"]);
    }

    #[test]
    fn conductor_identity() {
        let c = CuspidalDatum::new(2, 1, 1).with_delta(1).with_conductor(3);
        let v = validate(&FundamentalInvariants::single(3, c));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].code, "CONDUCTOR_IDENTITY");
        assert!(v[0].message.contains('4'));
    }

    #[test]
    fn half_delta_rejected() {
        let mut c = CuspidalDatum::new(2, 1, 1);
        c.delta = Some(HalfInt::from_doubled(1));
        assert_eq!(codes(&FundamentalInvariants::single(3, c)), vec!["DELTA_EXPONENT"]);
    }

    #[test]
    fn cross_matrix_checks() {
        let a = CuspidalDatum::iwahori(1);
        let mut b = CuspidalDatum::iwahori(1);
        b.m = 2;
        b.delta = None;
        b.f_self = Some(ConductorInput::Given(3));
        let mut inv = FundamentalInvariants {
            q: 2,
            cuspidals: vec![a, b],
            cross_conductors: vec![vec![None, Some(2)], vec![Some(2), None]],
        };
        assert!(validate(&inv).is_empty(), "{:?}", validate(&inv));
        inv.cross_conductors[1][0] = Some(1);
        assert_eq!(codes(&inv), vec!["CROSS_SYMMETRY"]);
        inv.cross_conductors[1][0] = None;
        assert_eq!(codes(&inv), vec!["CROSS_MISSING"]);
        inv.cross_conductors = vec![vec![None]];
        assert_eq!(codes(&inv), vec!["CROSS_SHAPE"]);
    }

    #[test]
    fn conductors() {
        assert_eq!(derive_conductor(&CuspidalDatum::new(1, 1, 1).with_delta(0)), Ok(0));
        assert_eq!(derive_conductor(&CuspidalDatum::new(2, 1, 1).with_delta(0)), Ok(3));
        assert_eq!(derive_conductor(&CuspidalDatum::new(2, 1, 2).with_delta(4)), Ok(6));
        assert!(matches!(
            derive_conductor(&CuspidalDatum::new(2, 1, 2)),
            Err(Error::MissingData(_))
        ));
    }

    #[test]
    fn formal_degrees() {
        assert!(derive_formal_degree(&CuspidalDatum::new(1, 1, 1).with_delta(0))
            .unwrap()
            .is_one());
        let d = derive_formal_degree(&CuspidalDatum::new(2, 1, 1).with_delta(0)).unwrap();
        assert_eq!(d.to_string(), "(q^2 - 1)/(2*q^(1/2))");
        let d = derive_formal_degree(&CuspidalDatum::new(2, 1, 2).with_delta(0)).unwrap();
        assert_eq!(d.to_string(), "q - 1");
    }

    #[test]
    fn discriminants() {
        let c = |m, delta| CuspidalDatum::new(m, 1, 1).with_delta(delta);
        assert_eq!(discriminant_exponent(&c(2, 0), 2).unwrap(), BigRational::from_integer(0.into()));
        assert_eq!(discriminant_exponent(&c(2, 4), 2).unwrap(), BigRational::from_integer(4.into()));
        assert_eq!(discriminant_exponent(&c(4, 8), 2).unwrap(), BigRational::from_integer(2.into()));
        assert!(discriminant_exponent(&c(4, 8), 3).is_err());
    }
}
