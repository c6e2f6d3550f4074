//! Scalars times products of torus factors `(1 - z_j z_i^{-1} q^a)^e`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::laurent::render_q_power;
use super::{HalfInt, RatFunc};
use crate::error::{Error, Result};

/// `(1 - z_j z_i^{-1} q^a)^e` with 0-based torus indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusFactor {
    pub i: usize,
    pub j: usize,
    pub a: HalfInt,
    pub e: i32,
}

impl TorusFactor {
    pub fn new(i: usize, j: usize, a: HalfInt, e: i32) -> Self {
        assert_ne!(i, j, "torus factor needs distinct indices");
        TorusFactor { i, j, a, e }
    }

    pub fn eval(&self, q: f64, point: &[Complex64]) -> Complex64 {
        let w = point[self.j] / point[self.i];
        let base = Complex64::new(1.0, 0.0) - w * q.powf(self.a.to_f64());
        base.powi(self.e)
    }
}

/// Serializable view of one factor (1-based indices as rendered).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub i: usize,
    pub j: usize,
    pub a: String,
    pub e: i32,
    pub paired: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredExpr {
    scalar: RatFunc,
    factors: Vec<TorusFactor>,
}

impl Default for FactoredExpr {
    fn default() -> Self {
        Self::one()
    }
}

impl FactoredExpr {
    pub fn one() -> Self {
        Self::constant(RatFunc::one())
    }

    pub fn constant(scalar: RatFunc) -> Self {
        FactoredExpr {
            scalar,
            factors: Vec::new(),
        }
    }

    /// Builds the canonical form: sorted by `(i, j, a)`, equal keys merged,
    /// zero exponents dropped.
    pub fn new(scalar: RatFunc, factors: impl IntoIterator<Item = TorusFactor>) -> Self {
        let mut merged: BTreeMap<(usize, usize, HalfInt), i32> = BTreeMap::new();
        for f in factors {
            assert_ne!(f.i, f.j, "torus factor needs distinct indices");
            *merged.entry((f.i, f.j, f.a)).or_insert(0) += f.e;
        }
        let factors = merged
            .into_iter()
            .filter(|&(_, e)| e != 0)
            .map(|((i, j, a), e)| TorusFactor { i, j, a, e })
            .collect();
        FactoredExpr { scalar, factors }
    }

    /// `|1 - z_j z_i^{-1} q^a|^{2e}`, stored as the two conjugate factors.
    pub fn abs_sq(i: usize, j: usize, a: HalfInt, e: i32) -> Self {
        Self::new(
            RatFunc::one(),
            [TorusFactor::new(i, j, a, e), TorusFactor::new(j, i, a, e)],
        )
    }

    pub fn scalar(&self) -> &RatFunc {
        &self.scalar
    }

    pub fn factors(&self) -> &[TorusFactor] {
        &self.factors
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    /// One more than the largest torus index used, 0 if there are no factors.
    pub fn arity(&self) -> usize {
        self.factors.iter().map(|f| f.i.max(f.j) + 1).max().unwrap_or(0)
    }

    pub fn torus_part(&self) -> FactoredExpr {
        FactoredExpr {
            scalar: RatFunc::one(),
            factors: self.factors.clone(),
        }
    }

    pub fn with_scalar(&self, scalar: RatFunc) -> FactoredExpr {
        FactoredExpr {
            scalar,
            factors: self.factors.clone(),
        }
    }

    pub fn scale(&self, c: &RatFunc) -> FactoredExpr {
        self.with_scalar(&self.scalar * c)
    }

    pub fn mul(&self, other: &FactoredExpr) -> FactoredExpr {
        Self::new(
            &self.scalar * &other.scalar,
            self.factors.iter().chain(other.factors.iter()).copied(),
        )
    }

    pub fn inv(&self) -> FactoredExpr {
        Self::new(
            self.scalar.inv(),
            self.factors.iter().map(|f| TorusFactor { e: -f.e, ..*f }),
        )
    }

    pub fn div(&self, other: &FactoredExpr) -> FactoredExpr {
        self.mul(&other.inv())
    }

    pub fn pow(&self, n: i32) -> FactoredExpr {
        Self::new(
            self.scalar.pow(n as i64),
            self.factors.iter().map(|f| TorusFactor { e: f.e * n, ..*f }),
        )
    }

    /// Rename torus indices through `map` (old index -> new index).
    pub fn relabel(&self, map: &[usize]) -> FactoredExpr {
        Self::new(
            self.scalar.clone(),
            self.factors.iter().map(|f| TorusFactor {
                i: map[f.i],
                j: map[f.j],
                ..*f
            }),
        )
    }

    /// Substitute `q -> q^r` in the scalar and in every factor exponent.
    pub fn substitute_q_power(&self, r: u64) -> FactoredExpr {
        Self::new(
            self.scalar.substitute_q_power(r),
            self.factors.iter().map(|f| TorusFactor {
                a: f.a * r as i64,
                ..*f
            }),
        )
    }

    /// Form in which every conjugate pair with `a > 0` is rewritten through
    /// `|1 - w q^a|^2 = q^{2a} |1 - w q^{-a}|^2`, which holds on the torus.
    /// Two expressions that agree as functions on the torus for all `q`
    /// have the same normal form.
    pub fn torus_normal_form(&self) -> FactoredExpr {
        let mut scalar = self.scalar.clone();
        let mut out: Vec<TorusFactor> = Vec::new();
        let mut pending: BTreeMap<(usize, usize, HalfInt), i32> = self
            .factors
            .iter()
            .map(|f| ((f.i, f.j, f.a), f.e))
            .collect();
        let keys: Vec<_> = pending.keys().copied().collect();
        for (i, j, a) in keys {
            if i > j || !a.is_positive() {
                continue;
            }
            let e = pending[&(i, j, a)];
            let Some(&e2) = pending.get(&(j, i, a)) else {
                continue;
            };
            let shared = if e > 0 && e2 > 0 {
                e.min(e2)
            } else if e < 0 && e2 < 0 {
                e.max(e2)
            } else {
                0
            };
            if shared == 0 {
                continue;
            }
            *pending.get_mut(&(i, j, a)).unwrap() -= shared;
            *pending.get_mut(&(j, i, a)).unwrap() -= shared;
            scalar = &scalar * &RatFunc::q_pow(a * 2).pow(shared as i64);
            out.push(TorusFactor::new(i, j, -a, shared));
            out.push(TorusFactor::new(j, i, -a, shared));
        }
        out.extend(
            pending
                .into_iter()
                .map(|((i, j, a), e)| TorusFactor { i, j, a, e }),
        );
        Self::new(scalar, out)
    }

    /// Equality as functions on the torus: scalars equal as rational
    /// functions of v and factor multisets equal after pairing
    /// normalization.
    pub fn exact_eq(&self, other: &FactoredExpr) -> bool {
        self == other || self.torus_normal_form() == other.torus_normal_form()
    }

    /// Numeric value at `q` and a point on the unit torus.
    pub fn eval(&self, q: f64, point: &[Complex64]) -> Result<Complex64> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::Domain(format!("q must be positive, got {q}")));
        }
        if point.len() < self.arity() {
            return Err(Error::Domain(format!(
                "point has {} coordinates, expression uses {}",
                point.len(),
                self.arity()
            )));
        }
        for (idx, z) in point.iter().enumerate() {
            if (z.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::Domain(format!(
                    "coordinate {} has modulus {}, expected 1",
                    idx + 1,
                    z.norm()
                )));
            }
        }
        let mut acc = Complex64::new(self.scalar.eval(q), 0.0);
        for f in &self.factors {
            let w = point[f.j] / point[f.i];
            let base = Complex64::new(1.0, 0.0) - w * q.powf(f.a.to_f64());
            if f.e < 0 && base.norm() < 1e-14 {
                return Err(Error::Singularity(format!(
                    "factor 1 - z{}/z{} * q^({}) vanishes",
                    f.j + 1,
                    f.i + 1,
                    f.a
                )));
            }
            acc *= base.powi(f.e);
        }
        Ok(acc)
    }

    /// Torus part only, without validity checks. Used by the quadrature
    /// inner loop, where the point is known to lie on the torus.
    pub fn eval_torus_unchecked(&self, q: f64, point: &[Complex64]) -> f64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for f in &self.factors {
            acc *= f.eval(q, point);
        }
        acc.re
    }

    /// Factors grouped for display: conjugate pairs with equal exponent
    /// print as squared moduli, the rest as raw factors. Numerator factors
    /// come first.
    pub fn records(&self) -> Vec<FactorRecord> {
        self.display_groups()
            .into_iter()
            .map(|(f, paired)| FactorRecord {
                i: f.i + 1,
                j: f.j + 1,
                a: f.a.to_string(),
                e: f.e,
                paired,
            })
            .collect()
    }

    fn display_groups(&self) -> Vec<(TorusFactor, bool)> {
        let lookup: BTreeMap<(usize, usize, HalfInt), i32> = self
            .factors
            .iter()
            .map(|f| ((f.i, f.j, f.a), f.e))
            .collect();
        let mut out = Vec::new();
        for f in &self.factors {
            let partner = lookup.get(&(f.j, f.i, f.a)).copied();
            match partner {
                Some(e2) if e2 == f.e => {
                    if f.i < f.j {
                        out.push((*f, true));
                    }
                }
                _ => out.push((*f, false)),
            }
        }
        out.sort_by_key(|(f, _)| f.e < 0);
        out
    }

    /// Rendering of the torus part only, `1` when empty.
    pub fn render_factors(&self) -> String {
        let groups = self.display_groups();
        if groups.is_empty() {
            return "1".to_string();
        }
        groups
            .iter()
            .map(|(f, paired)| render_factor(f, *paired))
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

fn render_factor(f: &TorusFactor, paired: bool) -> String {
    let mut base = format!("1 - z{}/z{}", f.j + 1, f.i + 1);
    if let Some(p) = render_q_power(f.a) {
        base.push_str(" * ");
        base.push_str(&p);
    }
    let (open, close) = if paired { ("|", "|") } else { ("(", ")") };
    let exp = if paired { 2 * f.e } else { f.e };
    if exp == 1 {
        format!("{open}{base}{close}")
    } else if exp > 0 {
        format!("{open}{base}{close}^{exp}")
    } else {
        format!("{open}{base}{close}^({exp})")
    }
}

impl fmt::Display for FactoredExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.scalar.to_string();
        if self.factors.is_empty() {
            return write!(f, "{s}");
        }
        if self.scalar.is_one() {
            write!(f, "{}", self.render_factors())
        } else if s.contains(['+', '/']) || s[1..].contains('-') {
            write!(f, "({s}) * {}", self.render_factors())
        } else {
            write!(f, "{s} * {}", self.render_factors())
        }
    }
}
