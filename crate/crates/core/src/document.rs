//! JSON input documents and serializable output records.
//!
//! Input shape:
//!
//! ```json
//! {"q": 3,
//!  "cuspidals": [{"m": 1, "e": 2, "r": 1, "d": "1", "delta": 0, "f_self": 0}],
//!  "cross_conductors": [[null]]}
//! ```
//!
//! `d` is an exact expression in q (string), a number, or `"derive"`;
//! `f_self` is an integer or `"derive"`. Missing fields mean `derive`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::combinatorics::CentralizerData;
use crate::error::{Error, Result};
use crate::exactalg::{parse_ratfunc, FactorRecord, HalfInt};
use crate::invariants::{ConductorInput, CuspidalDatum, FormalDegreeInput, FundamentalInvariants};
use crate::plancherel::{ComponentSpec, DensityReport};

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    q: u64,
    cuspidals: Vec<RawCuspidal>,
    #[serde(default)]
    cross_conductors: Option<Vec<Vec<Option<i64>>>>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawCuspidal {
    m: u32,
    e: u32,
    r: u32,
    #[serde(default)]
    d: Option<Value>,
    #[serde(default)]
    delta: Option<HalfInt>,
    #[serde(default)]
    f_self: Option<Value>,
}

fn parse_degree(v: Option<&Value>, idx: usize) -> Result<FormalDegreeInput> {
    let bad = |what: &str| Error::Parse(format!("cuspidal {}: d {what}", idx + 1));
    match v {
        None | Some(Value::Null) => Ok(FormalDegreeInput::Derive),
        Some(Value::String(s)) if s.trim() == "derive" => Ok(FormalDegreeInput::Derive),
        Some(Value::String(s)) => parse_ratfunc(s)
            .map(FormalDegreeInput::Exact)
            .map_err(|e| bad(&format!("is not an expression in q: {e}"))),
        Some(Value::Number(n)) => n
            .as_f64()
            .map(FormalDegreeInput::Numeric)
            .ok_or_else(|| bad("is not a finite number")),
        Some(_) => Err(bad("must be a string, a number or \"derive\"")),
    }
}

fn parse_conductor(v: Option<&Value>, idx: usize) -> Result<Option<ConductorInput>> {
    match v {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) if s.trim() == "derive" => Ok(Some(ConductorInput::Derive)),
        Some(Value::Number(n)) if n.is_i64() => Ok(Some(ConductorInput::Given(n.as_i64().unwrap()))),
        Some(_) => Err(Error::Parse(format!(
            "cuspidal {}: f_self must be an integer or \"derive\"",
            idx + 1
        ))),
    }
}

/// Parse a JSON document. Structural problems are `Parse` errors; range
/// and consistency checks are left to `validate`.
pub fn parse_invariants(text: &str) -> Result<FundamentalInvariants> {
    let raw: RawDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid document: {e}")))?;
    let cuspidals = raw
        .cuspidals
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            Ok(CuspidalDatum {
                m: c.m,
                e: c.e,
                r: c.r,
                d: parse_degree(c.d.as_ref(), idx)?,
                delta: c.delta,
                f_self: parse_conductor(c.f_self.as_ref(), idx)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let k = cuspidals.len();
    let cross_conductors = raw
        .cross_conductors
        .unwrap_or_else(|| vec![vec![None; k]; k]);
    Ok(FundamentalInvariants {
        q: raw.q,
        cuspidals,
        cross_conductors,
    })
}

/// The inverse of [`parse_invariants`].
pub fn invariants_to_json(inv: &FundamentalInvariants) -> Value {
    let cuspidals = inv
        .cuspidals
        .iter()
        .map(|c| RawCuspidal {
            m: c.m,
            e: c.e,
            r: c.r,
            d: Some(match &c.d {
                FormalDegreeInput::Exact(x) => Value::String(x.to_string()),
                FormalDegreeInput::Numeric(x) => serde_json::json!(x),
                FormalDegreeInput::Derive => Value::String("derive".into()),
            }),
            delta: c.delta,
            f_self: c.f_self.map(|f| match f {
                ConductorInput::Given(v) => serde_json::json!(v),
                ConductorInput::Derive => Value::String("derive".into()),
            }),
        })
        .collect();
    serde_json::to_value(RawDocument {
        q: inv.q,
        cuspidals,
        cross_conductors: Some(inv.cross_conductors.clone()),
    })
    .expect("plain data")
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentRecord {
    pub selector: String,
    pub partitions: Vec<Vec<u32>>,
    pub torus_dim: usize,
    pub centralizer: Vec<CentralizerData>,
    pub centralizer_order: u64,
    pub effective_quotient_order: u64,
    pub levi: Vec<u32>,
    pub canonical_mass: String,
}

impl ComponentRecord {
    pub fn new(spec: &ComponentSpec) -> Self {
        let (order, effective) = spec.centralizer_orders();
        ComponentRecord {
            selector: spec.selector(),
            partitions: spec.partitions.iter().map(|p| p.parts().to_vec()).collect(),
            torus_dim: spec.torus_dim(),
            centralizer: spec.partitions.iter().map(|p| p.centralizer_data()).collect(),
            centralizer_order: order,
            effective_quotient_order: effective,
            levi: spec.levi().blocks,
            canonical_mass: spec.canonical_mass().to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointValue {
    pub point: Vec<[f64; 2]>,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericSection {
    pub q: f64,
    pub constant: f64,
    pub formal_degree: f64,
    pub values: Vec<PointValue>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityDocument {
    pub selector: String,
    pub levi: Vec<u32>,
    pub segments: Vec<SegmentRecord>,
    pub constant: String,
    pub factors: String,
    pub factor_records: Vec<FactorRecord>,
    /// `μ_{G|M}` on the component's torus.
    pub mu: String,
    pub formal_degree: String,
    /// `constant · d(ω) · factors` with the exact part of `d(ω)`.
    pub density: String,
    /// Numeric multiplier of `density`, present when a formal degree was
    /// given as a number.
    pub numeric_multiplier: Option<f64>,
    pub canonical_mass: String,
    pub centralizer_order: u64,
    pub effective_quotient_order: u64,
    pub stab_order: u64,
    pub torus_dim: usize,
    pub numeric: Option<NumericSection>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SegmentRecord {
    pub cuspidal: usize,
    pub length: u32,
    pub torus_index: usize,
}

impl DensityDocument {
    pub fn new(report: &DensityReport) -> Self {
        DensityDocument {
            selector: report.selector.clone(),
            levi: report.levi.blocks.clone(),
            segments: report
                .segments
                .iter()
                .map(|s| SegmentRecord {
                    cuspidal: s.cuspidal_index + 1,
                    length: s.seg.l,
                    torus_index: s.torus_index + 1,
                })
                .collect(),
            constant: report.constant.to_string(),
            factors: report.factors.render_factors(),
            factor_records: report.factors.records(),
            mu: report.mu.to_string(),
            formal_degree: report.formal_degree.to_string(),
            density: report.density_expr().to_string(),
            numeric_multiplier: report.formal_degree.numeric,
            canonical_mass: report.canonical_mass.to_string(),
            centralizer_order: report.centralizer_order,
            effective_quotient_order: report.effective_quotient_order,
            stab_order: report.stab_order,
            torus_dim: report.torus_dim,
            numeric: None,
        }
    }

    /// Add numeric values at `q` and the given torus points.
    pub fn with_numeric(
        mut self,
        report: &DensityReport,
        q: f64,
        points: &[Vec<Complex64>],
    ) -> Result<Self> {
        let values = points
            .iter()
            .map(|p| {
                Ok(PointValue {
                    point: p.iter().map(|z| [z.re, z.im]).collect(),
                    value: report.eval(q, p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.numeric = Some(NumericSection {
            q,
            constant: report.constant.eval(q),
            formal_degree: report.formal_degree.eval(q),
            values,
        });
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::RatFunc;
    use crate::plancherel::{density, select_component};

    #[test]
    fn parse_minimal() {
        let inv = parse_invariants(
            r#"{"q": 3, "cuspidals": [{"m": 1, "e": 2, "r": 1, "d": "1", "delta": 0, "f_self": 0}]}"#,
        )
        .unwrap();
        assert_eq!(inv, FundamentalInvariants::iwahori(3, 2));
        assert!(inv.validate().is_empty());
    }

    #[test]
    fn parse_modes() {
        let inv = parse_invariants(
            r#"{"q": 2, "cuspidals": [
                {"m": 2, "e": 1, "r": 2, "d": 3.5, "f_self": "derive", "delta": "3/2"},
                {"m": 1, "e": 1, "r": 1, "d": "(q^2 - 1)/(2*q^(1/2))"}],
                "cross_conductors": [[null, 2], [2, null]]}"#,
        )
        .unwrap();
        assert_eq!(inv.cuspidals[0].d, FormalDegreeInput::Numeric(3.5));
        assert_eq!(inv.cuspidals[0].delta, Some(HalfInt::from_doubled(3)));
        assert_eq!(inv.cuspidals[0].f_self, Some(ConductorInput::Derive));
        assert_eq!(inv.cuspidals[1].f_self, None);
        assert_eq!(inv.cross_conductor(0, 1), Some(2));
        let back = parse_invariants(&invariants_to_json(&inv).to_string()).unwrap();
        assert_eq!(back, inv);
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "not json",
            r#"{"q": 2}"#,
            r#"{"q": 2, "cuspidals": [{"m": 1, "e": 1, "r": 1, "d": "q +"}]}"#,
            r#"{"q": 2, "cuspidals": [{"m": 1, "e": 1, "r": 1, "f_self": 1.5}]}"#,
            r#"{"q": 2, "cuspidals": [{"m": 1, "e": 1, "r": 1, "colour": 1}]}"#,
        ] {
            assert!(matches!(parse_invariants(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn density_document_fields() {
        let spec = select_component(&FundamentalInvariants::iwahori(2, 2), "1+1").unwrap();
        let r = density(&spec).unwrap();
        let doc = DensityDocument::new(&r)
            .with_numeric(&r, 2.0, &[vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]])
            .unwrap();
        assert_eq!(doc.constant, "(q + 1)/q");
        assert_eq!(doc.factors, "|1 - z2/z1|^2 * |1 - z2/z1 * q^(-1)|^(-2)");
        let num = doc.numeric.unwrap();
        assert!((num.values[0].value - 8.0 / 3.0).abs() < 1e-12);
        assert_eq!(RatFunc::one().to_string(), doc.formal_degree);
    }
}
