use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use plancherel_core::combinatorics::{overlap_function, partitions_of, Partition, Segment};
use plancherel_core::exactalg::{parse_ratfunc, FactoredExpr, HalfInt, HalfPowerPoly, RatFunc, TorusFactor};
use plancherel_core::invariants::{
    ConductorInput, CuspidalDatum, FormalDegreeInput, FundamentalInvariants,
};
use plancherel_core::mu::{mu_levi, mu_pair, SegmentInstance};
use plancherel_core::plancherel::{density, integrate, select_component, ComponentSpec};

fn poly() -> impl Strategy<Value = HalfPowerPoly> {
    prop::collection::vec((-6i64..=6, -4i64..=4, 1i64..=3), 0..5).prop_map(|terms| {
        terms.into_iter().fold(HalfPowerPoly::zero(), |acc, (e, n, d)| {
            &acc + &HalfPowerPoly::monomial(BigRational::new(BigInt::from(n), BigInt::from(d)), e)
        })
    })
}

fn nonzero_poly() -> impl Strategy<Value = HalfPowerPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RatFunc::from_polys(&n, &d).unwrap())
}

fn unit_point(k: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(0.0..TAU, k)
        .prop_map(|angles| angles.into_iter().map(|t| Complex64::from_polar(1.0, t)).collect())
}

fn torus_factor(k: usize) -> impl Strategy<Value = TorusFactor> {
    (0..k, 1..k, -6i64..=6, -2i32..=2).prop_map(move |(i, off, a, e)| {
        TorusFactor::new(i, (i + off) % k, HalfInt::from_doubled(a), e)
    })
}

/// A single cuspidal with `e` free and exact `d = 1`.
fn one_cuspidal(m: u32, e: u32, r: u32, f: i64) -> FundamentalInvariants {
    FundamentalInvariants::single(
        3,
        CuspidalDatum::new(m, e, r)
            .with_conductor(f)
            .with_degree(FormalDegreeInput::Exact(RatFunc::one())),
    )
}

fn mrf() -> impl Strategy<Value = (u32, u32, i64)> {
    prop_oneof![Just((1, 1)), Just((2, 1)), Just((2, 2)), Just((3, 3)), Just((4, 2))]
        .prop_flat_map(|(m, r)| (Just(m), Just(r), 0i64..=5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division(a in poly(), b in nonzero_poly()) {
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn ratfunc_field(a in ratfunc(), b in ratfunc()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
        }
        let q = 2.7;
        let direct = a.eval(q) * b.eval(q);
        prop_assert!(((&a * &b).eval(q) - direct).abs() <= 1e-9 * direct.abs().max(1.0));
    }

    #[test]
    fn ratfunc_render_parses_back(a in ratfunc()) {
        prop_assert_eq!(parse_ratfunc(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn canonical_form_keeps_values(
        fs in prop::collection::vec(torus_factor(3), 0..6),
        z in unit_point(3),
        q in 1.5f64..6.0,
    ) {
        let expr = FactoredExpr::new(RatFunc::ratio(3, 2), fs.clone());
        let raw = fs.iter().fold(Complex64::new(1.5, 0.0), |acc, f| acc * f.eval(q, &z));
        if raw.norm().is_finite() && raw.norm() < 1e8 {
            if let Ok(v) = expr.eval(q, &z) {
                prop_assert!((v - raw).norm() <= 1e-12 * raw.norm().max(1.0), "{} vs {}", v, raw);
            }
        }
        prop_assert!(expr.exact_eq(&expr.torus_normal_form()));
    }

    #[test]
    fn squared_moduli_are_nonnegative(
        i in 0usize..3, off in 1usize..3, a in -8i64..=8, z in unit_point(3), q in 1.1f64..9.0,
    ) {
        let j = (i + off) % 3;
        let v = FactoredExpr::abs_sq(i, j, HalfInt::from_doubled(a), 1).eval(q, &z).unwrap();
        prop_assert!(v.im.abs() <= 1e-10 * v.norm().max(1.0));
        prop_assert!(v.re >= 0.0);
    }

    #[test]
    fn mu_pair_is_symmetric((m, r, f) in mrf(), la in 1u32..5, lb in 1u32..5) {
        let inv = one_cuspidal(m, la + lb, r, f);
        let a = SegmentInstance::new(0, la, 0);
        let b = SegmentInstance::new(0, lb, 1);
        let ab = mu_pair(&a, &b, &inv).unwrap();
        let ba = mu_pair(&b, &a, &inv).unwrap();
        prop_assert!(ab.exact_eq(&ba));
    }

    #[test]
    fn mu_is_rotation_invariant_and_positive(
        (m, r, f) in mrf(),
        lens in prop::collection::vec(1u32..4, 2..4),
        z in unit_point(3),
        t in 0.0..TAU,
        q in prop_oneof![Just(2.0), Just(3.0), Just(4.0), Just(5.0)],
    ) {
        let e: u32 = lens.iter().sum();
        let inv = one_cuspidal(m, e, r, f);
        let segs: Vec<_> = lens.iter().enumerate().map(|(k, &l)| SegmentInstance::new(0, l, k)).collect();
        let mu = mu_levi(&segs, &inv).unwrap();
        let z = &z[..segs.len()];
        let lambda = Complex64::from_polar(1.0, t);
        let rotated: Vec<_> = z.iter().map(|w| w * lambda).collect();
        let v = mu.eval(q, z).unwrap();
        let w = mu.eval(q, &rotated).unwrap();
        prop_assert!((v - w).norm() <= 1e-10 * v.norm().max(1.0));
        prop_assert!(v.re >= 0.0 && v.im.abs() <= 1e-10 * v.norm().max(1.0));
    }

    #[test]
    fn weyl_invariance((m, r, f) in mrf(), e in 2u32..6, pick in 0usize..100) {
        let inv = one_cuspidal(m, e, r, f);
        let parts = partitions_of(e).unwrap();
        let p = parts[pick % parts.len()].clone();
        let spec = ComponentSpec::new(inv, vec![p]).unwrap();
        let report = density(&spec).unwrap();
        let segs = &spec.segments;
        for a in 0..segs.len() {
            for b in a + 1..segs.len() {
                if segs[a].seg.l == segs[b].seg.l {
                    let mut map: Vec<usize> = (0..segs.len()).collect();
                    map.swap(a, b);
                    prop_assert!(report.factors.relabel(&map).exact_eq(&report.factors));
                }
            }
        }
    }

    #[test]
    fn density_rotation_invariant(z in unit_point(3), t in 0.0..TAU) {
        let inv = FundamentalInvariants::iwahori(3, 3);
        let report = density(&select_component(&inv, "1+1+1").unwrap()).unwrap();
        let lambda = Complex64::from_polar(1.0, t);
        let rotated: Vec<_> = z.iter().map(|w| w * lambda).collect();
        let v = report.eval(3.0, &z).unwrap();
        let w = report.eval(3.0, &rotated).unwrap();
        prop_assert!((v - w).abs() <= 1e-10 * v.abs().max(1.0));
    }

    #[test]
    fn overlap_sums(l1 in 1u32..=12, l2 in 1u32..=12) {
        let a = overlap_function(l1, l2);
        prop_assert_eq!(a.values().sum::<u32>(), l1 * l2);
        let b = Segment::new(l1).g + Segment::new(l2).g;
        prop_assert_eq!(a.len() as i64, b.doubled() + 1);
    }

    #[test]
    fn gamma_length_formula(parts in prop::collection::vec(1u32..6, 1..6)) {
        let p = Partition::new(parts).unwrap();
        let e = p.total() as u64;
        let sq: u64 = p.parts().iter().map(|&l| (l * l) as u64).sum();
        prop_assert_eq!(p.gamma_length() * 2, e * e - sq);
    }

    #[test]
    fn validate_is_total_and_idempotent(
        q in 0u64..5,
        m in 0u32..5, e in 0u32..4, r in 0u32..5,
        delta in prop::option::of(-2i64..7),
        f in prop::option::of(-2i64..20),
        d in prop::option::of(-2.0f64..5.0),
    ) {
        let mut c = CuspidalDatum::new(m, e, r);
        c.delta = delta.map(HalfInt::from_doubled);
        c.f_self = f.map(ConductorInput::Given);
        if let Some(d) = d {
            c.d = FormalDegreeInput::Numeric(d);
        }
        let inv = FundamentalInvariants::single(q, c);
        let first = inv.validate();
        prop_assert_eq!(first, inv.validate());
    }
}

/// `p(n)` from Euler's pentagonal recurrence.
fn partition_count(n: usize) -> u64 {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            p[m] += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                p[m] += sign * p[m - g2];
            }
            k += 1;
        }
    }
    p[n] as u64
}

#[test]
fn partition_counts_match_recurrence() {
    for e in 1..=15 {
        assert_eq!(partitions_of(e).unwrap().len() as u64, partition_count(e as usize));
    }
    assert_eq!(partition_count(12), 77);
}

#[test]
fn quadrature_converges() {
    let cases = [
        (FundamentalInvariants::iwahori(2, 2), "1+1"),
        (FundamentalInvariants::iwahori(2, 3), "1+1+1"),
        (FundamentalInvariants::iwahori(2, 3), "2+1"),
        (one_cuspidal(2, 3, 2, 3), "1+1+1"),
        (one_cuspidal(3, 3, 1, 4), "2+1"),
    ];
    for (inv, sel) in cases {
        let report = density(&select_component(&inv, sel).unwrap()).unwrap();
        for q in [2.0, 3.0, 5.0] {
            let fine = integrate(&report, q, 256).unwrap();
            let coarse = integrate(&report, q, 128).unwrap();
            assert!((fine - coarse).abs() <= 1e-9 * fine.abs(), "{sel} q={q}: {fine} vs {coarse}");
            assert_eq!(fine.to_bits(), integrate(&report, q, 256).unwrap().to_bits());
        }
    }
}

#[test]
fn formal_degrees_positive() {
    for (m, r) in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 3), (4, 2)] {
        for delta in 0..=6 {
            let c = CuspidalDatum::new(m, 4, r).with_delta(delta);
            for l in 1..=4 {
                let d = plancherel_core::degrees::fd_generalized_steinberg(&c, l).unwrap();
                for q in [2.0, 3.0, 4.0] {
                    assert!(d.eval(q) > 0.0);
                }
            }
        }
    }
}
