//! The Harish-Chandra μ-function on Levi subgroups of GL(n), conductors of
//! pairs of generalized Steinberg representations, and the j-function.

use serde::Serialize;

use crate::combinatorics::{pair_range, Segment};
use crate::error::{Error, Result};
use crate::exactalg::{FactoredExpr, HalfInt, RatFunc};
use crate::groupdata::{gamma_factor, LeviShape};
use crate::invariants::{CuspidalDatum, FundamentalInvariants};

/// `St(σ_c, l)` sitting at torus coordinate `torus_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SegmentInstance {
    pub cuspidal_index: usize,
    pub seg: Segment,
    pub torus_index: usize,
}

impl SegmentInstance {
    pub fn new(cuspidal_index: usize, l: u32, torus_index: usize) -> Self {
        SegmentInstance {
            cuspidal_index,
            seg: Segment::new(l),
            torus_index,
        }
    }
}

fn cuspidal<'a>(inv: &'a FundamentalInvariants, s: &SegmentInstance) -> Result<&'a CuspidalDatum> {
    inv.cuspidals.get(s.cuspidal_index).ok_or_else(|| {
        Error::Index(format!(
            "cuspidal index {} out of range ({} cuspidals)",
            s.cuspidal_index,
            inv.cuspidals.len()
        ))
    })
}

fn self_conductor(c: &CuspidalDatum, idx: usize) -> Result<i64> {
    c.conductor().ok_or_else(|| {
        Error::MissingData(format!(
            "cuspidal {} has neither f_self nor delta",
            idx + 1
        ))
    })
}

fn check_pair(a: &SegmentInstance, b: &SegmentInstance) -> Result<()> {
    if a.torus_index == b.torus_index {
        return Err(Error::Index(format!(
            "segments share torus index {}",
            a.torus_index
        )));
    }
    Ok(())
}

/// `f(π_a^∨ × π_b)`: `l_a l_b f_ij` across cuspidals, and
/// `l_a l_b f + r (l_a l_b - min(l_a, l_b))` on one cuspidal.
pub fn conductor_pair(
    a: &SegmentInstance,
    b: &SegmentInstance,
    inv: &FundamentalInvariants,
) -> Result<i64> {
    check_pair(a, b)?;
    let ca = cuspidal(inv, a)?;
    cuspidal(inv, b)?;
    let (la, lb) = (a.seg.l as i64, b.seg.l as i64);
    if a.cuspidal_index != b.cuspidal_index {
        let f = cross_conductor(inv, a.cuspidal_index, b.cuspidal_index)?;
        return Ok(la * lb * f);
    }
    let f = self_conductor(ca, a.cuspidal_index)?;
    Ok(la * lb * f + ca.r as i64 * (la * lb - la.min(lb)))
}

fn cross_conductor(inv: &FundamentalInvariants, i: usize, j: usize) -> Result<i64> {
    inv.cross_conductor(i, j)
        .or_else(|| inv.cross_conductor(j, i))
        .ok_or_else(|| Error::MissingData(format!("cross conductor f_{}{} is missing", i + 1, j + 1)))
}

/// γ of the maximal Levi `GL(l_a m_a) × GL(l_b m_b)` in `GL(l_a m_a + l_b m_b)`.
fn pair_gamma(a: &SegmentInstance, b: &SegmentInstance, inv: &FundamentalInvariants) -> Result<RatFunc> {
    let na = a.seg.l * cuspidal(inv, a)?.m;
    let nb = b.seg.l * cuspidal(inv, b)?.m;
    Ok(gamma_factor(&LeviShape::new(vec![na, nb])?))
}

/// `μ` on the maximal Levi attached to two segments, as a function of
/// `z_a, z_b`.
pub fn mu_pair(
    a: &SegmentInstance,
    b: &SegmentInstance,
    inv: &FundamentalInvariants,
) -> Result<FactoredExpr> {
    check_pair(a, b)?;
    let ca = cuspidal(inv, a)?;
    cuspidal(inv, b)?;
    let g2 = pair_gamma(a, b, inv)?.pow(2);
    let (la, lb) = (a.seg.l as i64, b.seg.l as i64);
    if a.cuspidal_index != b.cuspidal_index {
        let f = cross_conductor(inv, a.cuspidal_index, b.cuspidal_index)?;
        return Ok(FactoredExpr::constant(&g2 * &RatFunc::q_pow_int(la * lb * f)));
    }
    let f = self_conductor(ca, a.cuspidal_index)?;
    let r = ca.r as i64;
    let mut out = FactoredExpr::constant(&g2 * &RatFunc::q_pow_int(la * lb * f));
    for g in pair_range(a.seg.l, b.seg.l) {
        let up = FactoredExpr::abs_sq(a.torus_index, b.torus_index, g * r, 1);
        let down = FactoredExpr::abs_sq(
            a.torus_index,
            b.torus_index,
            -(g + HalfInt::from_int(1)) * r,
            -1,
        );
        out = out.mul(&up).mul(&down);
    }
    Ok(out)
}

/// `μ_{G|M} = Π_{pairs} μ_pair`; the constant 1 for a single segment.
pub fn mu_levi(segs: &[SegmentInstance], inv: &FundamentalInvariants) -> Result<FactoredExpr> {
    check_indices(segs)?;
    let mut out = FactoredExpr::one();
    for (i, a) in segs.iter().enumerate() {
        for b in &segs[i + 1..] {
            out = out.mul(&mu_pair(a, b, inv)?);
        }
    }
    Ok(out)
}

fn check_indices(segs: &[SegmentInstance]) -> Result<()> {
    let mut seen = vec![false; segs.len()];
    for s in segs {
        match seen.get_mut(s.torus_index) {
            Some(slot) if !*slot => *slot = true,
            _ => {
                return Err(Error::Index(format!(
                    "torus indices must be a permutation of 0..{}",
                    segs.len()
                )))
            }
        }
    }
    Ok(())
}

/// `ℓ(γ) = Σ_{i<j} l_i l_j` for the segment lengths.
pub fn segment_gamma_length(segs: &[SegmentInstance]) -> i64 {
    let mut acc = 0;
    for (i, a) in segs.iter().enumerate() {
        for b in &segs[i + 1..] {
            acc += a.seg.l as i64 * b.seg.l as i64;
        }
    }
    acc
}

/// The composition of intertwining operators `j` on a one-cuspidal Levi:
/// `q^{-ℓ(γ) f} Π |(1 - z_j z_i^{-1} q^{-(g+1)r})/(1 - z_j z_i^{-1} q^{gr})|²`.
///
/// The sign of the conductor exponent is the one forced by
/// `c^{-2} γ^{-1} μ = γ j^{-1}` together with the μ-function above.
pub fn j_function(segs: &[SegmentInstance], inv: &FundamentalInvariants) -> Result<FactoredExpr> {
    check_indices(segs)?;
    let Some(first) = segs.first() else {
        return Ok(FactoredExpr::one());
    };
    if segs.iter().any(|s| s.cuspidal_index != first.cuspidal_index) {
        return Err(Error::MixedCuspidal(
            "j is only available when all segments share one cuspidal".into(),
        ));
    }
    let c = cuspidal(inv, first)?;
    if segs.len() == 1 {
        return Ok(FactoredExpr::one());
    }
    let f = self_conductor(c, first.cuspidal_index)?;
    let mu = mu_levi(segs, inv)?;
    let scalar = RatFunc::q_pow_int(-segment_gamma_length(segs) * f);
    Ok(mu.torus_part().inv().with_scalar(scalar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_factored;
    use crate::invariants::CuspidalDatum;

    fn one_cuspidal(m: u32, e: u32, r: u32, f: i64) -> FundamentalInvariants {
        FundamentalInvariants::single(
            3,
            CuspidalDatum::new(m, e, r).with_conductor(f),
        )
    }

    #[test]
    fn length_one_pair() {
        let inv = one_cuspidal(2, 2, 2, 5);
        let a = SegmentInstance::new(0, 1, 0);
        let b = SegmentInstance::new(0, 1, 1);
        let mu = mu_pair(&a, &b, &inv).unwrap();
        let g = gamma_factor(&LeviShape::new(vec![2, 2]).unwrap());
        let expect = parse_factored("|1 - z2/z1|^2 * |1 - z2/z1 * q^(-2)|^(-2)")
            .unwrap()
            .scale(&(&g.pow(2) * &RatFunc::q_pow_int(5)));
        assert_eq!(mu, expect);
    }

    #[test]
    fn gl3_example() {
        let inv = one_cuspidal(1, 3, 1, 0);
        let a = SegmentInstance::new(0, 1, 0);
        let b = SegmentInstance::new(0, 2, 1);
        let mu = mu_pair(&a, &b, &inv).unwrap();
        let g = gamma_factor(&LeviShape::new(vec![1, 2]).unwrap());
        let display = parse_factored("q * |1 - z2/z1 * q^(-1/2)|^2 * |1 - z2/z1 * q^(-3/2)|^(-2)")
            .unwrap()
            .scale(&g.pow(2));
        assert!(mu.exact_eq(&display));
        assert_ne!(mu, display);
    }

    #[test]
    fn distinct_cuspidals_constant() {
        let inv = FundamentalInvariants {
            q: 3,
            cuspidals: vec![CuspidalDatum::iwahori(1), CuspidalDatum::iwahori(1)],
            cross_conductors: vec![vec![None, Some(2)], vec![Some(2), None]],
        };
        let a = SegmentInstance::new(0, 1, 0);
        let b = SegmentInstance::new(1, 1, 1);
        let mu = mu_pair(&a, &b, &inv).unwrap();
        assert!(mu.is_constant());
        let g = gamma_factor(&LeviShape::new(vec![1, 1]).unwrap());
        assert_eq!(mu.scalar(), &(&g.pow(2) * &RatFunc::q_pow_int(2)));
        assert!(matches!(
            mu_pair(&a, &SegmentInstance::new(5, 1, 1), &inv),
            Err(Error::Index(_))
        ));
    }

    #[test]
    fn conductors() {
        let inv = one_cuspidal(1, 2, 1, 0);
        let s = |l, t| SegmentInstance::new(0, l, t);
        assert_eq!(conductor_pair(&s(1, 0), &s(1, 1), &inv), Ok(0));
        assert_eq!(conductor_pair(&s(1, 0), &s(2, 1), &inv), Ok(1));
        let inv = one_cuspidal(2, 5, 2, 2);
        assert_eq!(conductor_pair(&s(2, 0), &s(3, 1), &inv), Ok(20));
    }

    #[test]
    fn levi_products() {
        let inv = one_cuspidal(1, 3, 1, 0);
        let one = mu_levi(&[SegmentInstance::new(0, 3, 0)], &inv).unwrap();
        assert_eq!(one, FactoredExpr::one());
        let segs: Vec<_> = (0..3).map(|t| SegmentInstance::new(0, 1, t)).collect();
        let mu = mu_levi(&segs, &inv).unwrap();
        assert_eq!(mu.factors().len(), 12);
        assert!(mu_levi(&[SegmentInstance::new(0, 1, 1)], &inv).is_err());
    }

    #[test]
    fn j_examples() {
        let inv = one_cuspidal(1, 2, 1, 0);
        let single = j_function(&[SegmentInstance::new(0, 2, 0)], &inv).unwrap();
        assert_eq!(single, FactoredExpr::one());
        let segs = [SegmentInstance::new(0, 1, 0), SegmentInstance::new(0, 1, 1)];
        let j = j_function(&segs, &inv).unwrap();
        let expect = parse_factored("|1 - z2/z1 * q^(-1)|^2 * |1 - z2/z1|^(-2)").unwrap();
        assert_eq!(j, expect);
        let mixed = FundamentalInvariants {
            q: 3,
            cuspidals: vec![CuspidalDatum::iwahori(1), CuspidalDatum::iwahori(1)],
            cross_conductors: vec![vec![None, Some(0)], vec![Some(0), None]],
        };
        let segs = [SegmentInstance::new(0, 1, 0), SegmentInstance::new(1, 1, 1)];
        assert!(matches!(j_function(&segs, &mixed), Err(Error::MixedCuspidal(_))));
    }
}
