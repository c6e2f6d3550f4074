//! Plancherel densities on the components `X^γ/Z(γ)` of the tempered dual,
//! the Hecke algebra density, the Macdonald form, and quadrature.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{partitions_of, Partition};
use crate::degrees::{fd_generalized_steinberg, fd_product, steinberg_fd, Scalar};
use crate::error::{Error, Result};
use crate::exactalg::{FactoredExpr, HalfInt, RatFunc};
use crate::groupdata::{gamma_factor, iwahori_volume, LeviShape};
use crate::invariants::FundamentalInvariants;
use crate::mu::{conductor_pair, mu_levi, SegmentInstance};

/// One component: a partition of `e_i` for every cuspidal.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentSpec {
    pub inv: FundamentalInvariants,
    pub partitions: Vec<Partition>,
    pub segments: Vec<SegmentInstance>,
}

impl ComponentSpec {
    pub fn new(inv: FundamentalInvariants, partitions: Vec<Partition>) -> Result<Self> {
        if partitions.len() != inv.cuspidals.len() {
            return Err(Error::Input(format!(
                "{} partitions given for {} cuspidals",
                partitions.len(),
                inv.cuspidals.len()
            )));
        }
        for (idx, (p, c)) in partitions.iter().zip(&inv.cuspidals).enumerate() {
            if p.total() != c.e {
                return Err(Error::Input(format!(
                    "partition {p} of cuspidal {} does not sum to e = {}",
                    idx + 1,
                    c.e
                )));
            }
        }
        let mut segments = Vec::new();
        for (idx, p) in partitions.iter().enumerate() {
            for &l in p.parts() {
                segments.push(SegmentInstance::new(idx, l, segments.len()));
            }
        }
        Ok(ComponentSpec {
            inv,
            partitions,
            segments,
        })
    }

    /// `"2+1|3"`: partitions joined by `|` in cuspidal order.
    pub fn selector(&self) -> String {
        self.partitions
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn torus_dim(&self) -> usize {
        self.segments.len()
    }

    /// Blocks `l · m` of the Levi, in segment order.
    pub fn levi(&self) -> LeviShape {
        let blocks = self
            .segments
            .iter()
            .map(|s| s.seg.l * self.inv.cuspidals[s.cuspidal_index].m)
            .collect();
        LeviShape::new(blocks).expect("segments are nonempty")
    }

    /// `Π l m / r` over segments.
    pub fn canonical_mass(&self) -> BigRational {
        self.segments.iter().fold(BigRational::from_integer(1.into()), |acc, s| {
            let c = &self.inv.cuspidals[s.cuspidal_index];
            acc * BigRational::new((s.seg.l * c.m).into(), c.r.into())
        })
    }

    /// `(|Z(γ)|, Π a_d!)`, multiplied over cuspidals.
    pub fn centralizer_orders(&self) -> (u64, u64) {
        self.partitions.iter().fold((1, 1), |(o, e), p| {
            let c = p.centralizer_data();
            (o * c.order, e * c.effective_perm_group_order)
        })
    }

    /// Number of permutations of the segments preserving cuspidal and
    /// length, i.e. the coordinate permutations fixing the orbit.
    pub fn stab_order(&self) -> u64 {
        let mut groups: BTreeMap<(usize, u32), u64> = BTreeMap::new();
        for s in &self.segments {
            *groups.entry((s.cuspidal_index, s.seg.l)).or_insert(0) += 1;
        }
        groups.values().map(|&n| (1..=n).product::<u64>()).product()
    }
}

/// Every component of the Bernstein component, one per tuple of partitions.
pub fn enumerate_components(inv: &FundamentalInvariants) -> Result<Vec<ComponentSpec>> {
    let mut tuples: Vec<Vec<Partition>> = vec![Vec::new()];
    for c in &inv.cuspidals {
        let options = partitions_of(c.e)?;
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                options.iter().map(move |p| {
                    let mut t = t.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    tuples
        .into_iter()
        .map(|t| ComponentSpec::new(inv.clone(), t))
        .collect()
}

/// Parse a selector like `"2+1|3"` and build the component. Parts within a
/// partition may be given in any order.
pub fn select_component(inv: &FundamentalInvariants, selector: &str) -> Result<ComponentSpec> {
    let parts: Vec<&str> = selector.split('|').collect();
    if parts.len() != inv.cuspidals.len() {
        return Err(Error::Index(format!(
            "selector {selector:?} names {} partitions, input has {} cuspidals",
            parts.len(),
            inv.cuspidals.len()
        )));
    }
    let partitions = parts
        .iter()
        .map(|s| {
            s.parse::<Partition>()
                .map_err(|_| Error::Index(format!("bad selector {selector:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    ComponentSpec::new(inv.clone(), partitions)
        .map_err(|e| Error::Index(format!("selector {selector:?} names no component: {e}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub selector: String,
    pub levi: LeviShape,
    pub segments: Vec<SegmentInstance>,
    /// `γ(G|M) Π_{pairs} q^{l l' f}`
    #[serde(serialize_with = "ser_display")]
    pub constant: RatFunc,
    /// Torus part `Π |…|²`.
    #[serde(serialize_with = "ser_display")]
    pub factors: FactoredExpr,
    /// `μ_{G|M}` as a function on the torus.
    #[serde(serialize_with = "ser_display")]
    pub mu: FactoredExpr,
    pub formal_degree: Scalar,
    #[serde(serialize_with = "ser_display")]
    pub canonical_mass: BigRational,
    pub centralizer_order: u64,
    pub effective_quotient_order: u64,
    pub stab_order: u64,
    pub torus_dim: usize,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl DensityReport {
    /// `constant · d(ω) · Π |…|²` with the exact part of `d(ω)`.
    pub fn density_expr(&self) -> FactoredExpr {
        self.factors
            .with_scalar(&self.constant * &self.formal_degree.exact)
    }

    /// Density value at `q` and a torus point, including any numeric
    /// multiplier of the formal degree.
    pub fn eval(&self, q: f64, point: &[Complex64]) -> Result<f64> {
        let v = self.density_expr().eval(q, point)?;
        Ok(v.re * self.formal_degree.numeric.unwrap_or(1.0))
    }

    pub fn mass_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.canonical_mass).unwrap_or(f64::NAN)
    }
}

/// `dν = γ(G|M) · Π_{pairs} q^{l l' f} · d(ω) · Π |…|² · dω`.
pub fn density(spec: &ComponentSpec) -> Result<DensityReport> {
    let levi = spec.levi();
    let segs = &spec.segments;
    let mut constant = gamma_factor(&levi);
    for (i, a) in segs.iter().enumerate() {
        for b in &segs[i + 1..] {
            let la = a.seg.l as i64;
            let lb = b.seg.l as i64;
            let f = if a.cuspidal_index == b.cuspidal_index {
                // l l' f(σ^∨×σ), i.e. the pair conductor without its r-part.
                conductor_pair(a, b, &spec.inv)?
                    - spec.inv.cuspidals[a.cuspidal_index].r as i64 * (la * lb - la.min(lb))
            } else {
                conductor_pair(a, b, &spec.inv)?
            };
            constant = &constant * &RatFunc::q_pow_int(f);
        }
    }
    let degrees = segs
        .iter()
        .map(|s| fd_generalized_steinberg(&spec.inv.cuspidals[s.cuspidal_index], s.seg.l))
        .collect::<Result<Vec<_>>>()?;
    let mu = mu_levi(segs, &spec.inv)?;
    let (centralizer_order, effective) = spec.centralizer_orders();
    Ok(DensityReport {
        selector: spec.selector(),
        levi,
        segments: segs.clone(),
        constant,
        factors: mu.torus_part(),
        mu,
        formal_degree: fd_product(&degrees),
        canonical_mass: spec.canonical_mass(),
        centralizer_order,
        effective_quotient_order: effective,
        stab_order: spec.stab_order(),
        torus_dim: spec.torus_dim(),
    })
}

/// The two displays of the Hecke algebra density on one component.
#[derive(Clone, Debug)]
pub struct HeckeDensity {
    /// `μ(I) · γ(G|M) · d(ω) · Π |…|²`
    pub structural: FactoredExpr,
    /// `Π_i q^{(l_i²-l_i)/2}(q-1)^{l_i}/(l_i(q^{l_i}-1)) · q^{(n-n²)/2} · Π |…|²`
    pub explicit: FactoredExpr,
    pub report: DensityReport,
}

impl HeckeDensity {
    pub fn forms_agree(&self) -> bool {
        self.structural.exact_eq(&self.explicit)
    }
}

pub fn hecke_density(n: u32, p: &Partition) -> Result<HeckeDensity> {
    if p.total() != n {
        return Err(Error::Input(format!("partition {p} does not sum to {n}")));
    }
    let spec = ComponentSpec::new(FundamentalInvariants::iwahori(2, n), vec![p.clone()])?;
    let report = density(&spec)?;
    let structural = report
        .density_expr()
        .scale(&iwahori_volume(n));
    let n_ = n as i64;
    let mut scalar = RatFunc::q_pow(HalfInt::from_doubled(n_ - n_ * n_));
    for &l in p.parts() {
        let l = l as i64;
        let term = &(&RatFunc::q_pow(HalfInt::from_doubled(l * l - l))
            * &RatFunc::q_pow_minus_one(1).pow(l))
            / &(&RatFunc::from_int(l) * &RatFunc::q_pow_minus_one(l));
        scalar = &scalar * &term;
    }
    let explicit = report.factors.with_scalar(scalar);
    Ok(HeckeDensity {
        structural,
        explicit,
        report,
    })
}

/// `Π_{i<j} |1 - z_j z_i^{-1}|² / |1 - z_j z_i^{-1} q^{-1}|²`.
pub fn macdonald_form(n: u32) -> FactoredExpr {
    let n = n as usize;
    let mut out = FactoredExpr::one();
    for i in 0..n {
        for j in i + 1..n {
            out = out
                .mul(&FactoredExpr::abs_sq(i, j, HalfInt::ZERO, 1))
                .mul(&FactoredExpr::abs_sq(i, j, HalfInt::from_int(-1), -1));
        }
    }
    out
}

/// The constant accompanying [`macdonald_form`] on the all-ones Iwahori
/// component, as assembled here: `γ(G|T)`.
pub fn macdonald_constant(n: u32) -> RatFunc {
    gamma_factor(&LeviShape::new(vec![1; n as usize]).expect("n ≥ 1"))
}

#[derive(Clone, Debug, Serialize)]
pub struct Integration {
    pub value: f64,
    pub grid: usize,
    /// Result at `grid / 2`.
    pub coarse: f64,
    /// `|value - coarse|`.
    pub delta: f64,
}

/// Total mass of the density over `X^γ/Z(γ)`:
/// `constant · d(ω) / Π a_d! · mass · (average of the torus part)`.
pub fn integrate(report: &DensityReport, q: f64, grid: usize) -> Result<f64> {
    if !(q.is_finite() && q > 1.0) {
        return Err(Error::Singularity(format!("quadrature needs q > 1, got {q}")));
    }
    if grid < 8 {
        return Err(Error::Input(format!("grid must be at least 8, got {grid}")));
    }
    let prefactor = report.constant.eval(q) * report.formal_degree.eval(q) * report.mass_f64()
        / report.effective_quotient_order as f64;
    Ok(prefactor * torus_average(&report.factors, report.torus_dim, q, grid))
}

pub fn integrate_with_check(report: &DensityReport, q: f64, grid: usize) -> Result<Integration> {
    let value = integrate(report, q, grid)?;
    let coarse = integrate(report, q, (grid / 2).max(8))?;
    Ok(Integration {
        value,
        grid,
        coarse,
        delta: (value - coarse).abs(),
    })
}

/// Tensor trapezoid average over `grid^k` equispaced points of `T^k`.
/// The torus part only depends on ratios `z_j/z_i`, so `z_1 = 1` is fixed
/// and the remaining `grid^{k-1}` points are summed. Rows of the first free
/// coordinate are summed in parallel and combined in index order.
pub fn torus_average(expr: &FactoredExpr, k: usize, q: f64, grid: usize) -> f64 {
    if expr.is_constant() || k < 2 {
        return expr.scalar().eval(q);
    }
    let roots: Vec<Complex64> = (0..grid)
        .map(|t| Complex64::from_polar(1.0, std::f64::consts::TAU * t as f64 / grid as f64))
        .collect();
    let factors: Vec<(usize, usize, f64, i32)> = expr
        .factors()
        .iter()
        .map(|f| (f.i, f.j, q.powf(f.a.to_f64()), f.e))
        .collect();
    let scalar = expr.scalar().eval(q);
    let free = k - 1;
    let inner_count = grid.pow(free as u32 - 1);
    let rows: Vec<f64> = (0..grid)
        .into_par_iter()
        .map(|first| {
            let mut idx = vec![0usize; k];
            idx[1] = first;
            let mut sum = 0.0;
            for rest in 0..inner_count {
                let mut r = rest;
                for slot in idx.iter_mut().skip(2) {
                    *slot = r % grid;
                    r /= grid;
                }
                let mut acc = Complex64::new(1.0, 0.0);
                for &(i, j, qa, e) in &factors {
                    let w = roots[(idx[j] + grid - idx[i]) % grid];
                    acc *= (Complex64::new(1.0, 0.0) - w * qa).powi(e);
                }
                sum += acc.re;
            }
            sum
        })
        .collect();
    let total: f64 = rows.iter().sum();
    scalar * total / (grid as f64).powi(free as i32)
}

/// `d(St(l))` used by the Steinberg circle of `GL(l)`: the exact mass of
/// the partition `(l)` of the Iwahori component is `l · d(St(l))`.
pub fn steinberg_circle_mass(l: u32) -> RatFunc {
    &RatFunc::from_int(l as i64) * &steinberg_fd(l)
}
