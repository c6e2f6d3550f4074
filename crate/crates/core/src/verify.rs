//! Identity suites. Each suite checks one family of identities by an
//! independent derivation path and records counterexamples.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::combinatorics::{overlap_function, pair_range, partitions_of, Partition, Segment};
use crate::degrees::{
    fd_explicit, fd_generalized_steinberg, fd_ratio, fd_ratio_delta_form,
    fd_ratio_steinberg_form, fd_square_exponent_form, steinberg_fd, steinberg_fd_group_order,
};
use crate::error::Result;
use crate::exactalg::{HalfInt, HalfPowerPoly, RatFunc};
use crate::groupdata::{
    c_function, gamma_factor, gamma_factor_group_orders, gamma_factor_poincare, gl_order,
    invert_q, poincare_poly, LeviShape,
};
use crate::invariants::{CuspidalDatum, FundamentalInvariants};
use crate::mu::{conductor_pair, j_function, mu_levi, segment_gamma_length, SegmentInstance};
use crate::plancherel::{density, enumerate_components, hecke_density, macdonald_form, ComponentSpec};
use crate::transfer::{kappa, lambda_df, transfer_density};

/// Counterexamples kept per suite.
const MAX_FAILURES: usize = 20;

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn check_result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => self.check(false, || format!("{}: {e}", what())),
        }
    }
}

pub type FdRatioFn = fn(u32, u32, u32, i64) -> Result<RatFunc>;

pub const SUITES: &[&str] = &[
    "poincare",
    "gamma",
    "overlap",
    "formal_degrees",
    "steinberg",
    "hecke",
    "closure",
    "macdonald",
    "lambda",
    "transfer",
    "centralizer",
];

pub fn run_suite(name: &str) -> Option<SuiteReport> {
    Some(match name {
        "poincare" => poincare(12),
        "gamma" => gamma(8),
        "overlap" => overlap(12),
        "formal_degrees" => formal_degrees_with(fd_ratio),
        "steinberg" => steinberg(12),
        "hecke" => hecke(6),
        "closure" => closure(4),
        "macdonald" => macdonald(6),
        "lambda" => lambda(4, 4),
        "transfer" => transfer(5),
        "centralizer" => centralizer(8),
        _ => return None,
    })
}

pub fn run_all() -> Vec<SuiteReport> {
    SUITES.iter().filter_map(|s| run_suite(s)).collect()
}

/// `P_{S_n}(q^{-1}) = |GL(n,q)| / (q^{n²-n} (q-1)^n)` for `n ≤ max_n`.
pub fn poincare(max_n: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("poincare");
    for n in 1..=max_n {
        let lhs = RatFunc::from_poly(&invert_q(&poincare_poly(n)));
        let n_ = n as i64;
        let den = &HalfPowerPoly::q_pow(HalfInt::from_int(n_ * n_ - n_))
            * &HalfPowerPoly::from_q_coeffs(&[-1, 1]).pow(n);
        let rhs = RatFunc::from_polys(&gl_order(n), &den).expect("nonzero");
        rep.check(lhs == rhs, || format!("n={n}: {lhs} != {rhs}"));
    }
    rep
}

/// Ordered compositions of `n`.
pub fn compositions(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// γ(G|M) from group orders against the Poincaré ratio, and its
/// multiplicativity when two adjacent blocks are merged.
pub fn gamma(max_n: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("gamma");
    for n in 1..=max_n {
        for blocks in compositions(n) {
            let shape = LeviShape::new(blocks.clone()).expect("valid");
            let a = gamma_factor_group_orders(&shape);
            let b = gamma_factor_poincare(&shape);
            rep.check(a == b, || format!("{blocks:?}: {a} != {b}"));
            rep.check(gamma_factor(&shape) == a, || format!("{blocks:?}: cache"));
            if blocks.len() >= 2 {
                let mut merged = vec![blocks[0] + blocks[1]];
                merged.extend_from_slice(&blocks[2..]);
                let outer = gamma_factor_group_orders(&LeviShape::new(merged).expect("valid"));
                let inner = gamma_factor_group_orders(
                    &LeviShape::new(vec![blocks[0], blocks[1]]).expect("valid"),
                );
                rep.check(a == &outer * &inner, || {
                    format!("{blocks:?}: not multiplicative under merging")
                });
            }
        }
    }
    rep
}

/// Conductor of a pair on one cuspidal recomputed from the L-factor
/// bookkeeping: `|λ(s)|²` symbols with exponents, `L'` from the overlap
/// function, `L''` from the multiplicative property, and
/// `|λ(s)|² = q^{2sr} |λ(-s)|²` to fold everything onto `s ≤ 0`.
/// Returns `None` if the quotient `L'/L''` is not a pure power of q.
pub fn conductor_oracle(l1: u32, l2: u32, r: i64, f: i64) -> Option<i64> {
    let one = HalfInt::from_int(1);
    let mut exps: BTreeMap<HalfInt, i64> = BTreeMap::new();
    for (k, a) in overlap_function(l1, l2) {
        *exps.entry(one + k).or_default() += a as i64;
        *exps.entry(k).or_default() -= a as i64;
    }
    let g1 = HalfInt::segment_radius(l1);
    let g2 = HalfInt::segment_radius(l2);
    let mut g = (g1 - g2).abs();
    while g <= g1 + g2 {
        *exps.entry(one + g).or_default() -= 1;
        *exps.entry(g).or_default() += 1;
        g = g + one;
    }
    let mut q_exp = 0i64;
    let positive: Vec<HalfInt> = exps.keys().copied().filter(|s| s.is_positive()).collect();
    for s in positive {
        let d = exps.remove(&s).unwrap_or(0);
        q_exp += s.doubled() * r * d;
        *exps.entry(-s).or_default() += d;
    }
    if exps.values().any(|&e| e != 0) {
        return None;
    }
    Some(l1 as i64 * l2 as i64 * f + q_exp)
}

/// The overlap function and the conductor of pairs.
pub fn overlap(max_l: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("overlap");
    for l1 in 1..=max_l {
        for l2 in 1..=max_l {
            let a = overlap_function(l1, l2);
            let b = HalfInt::segment_radius(l1) + HalfInt::segment_radius(l2);
            let tag = || format!("(l1, l2) = ({l1}, {l2})");
            rep.check(a.iter().all(|(k, v)| a.get(&-*k) == Some(v)), || format!("{}: a not even", tag()));
            rep.check(
                a.values().map(|&v| v as u64).sum::<u64>() == (l1 * l2) as u64,
                || format!("{}: Σa != l1 l2", tag()),
            );
            rep.check(a.values().max() == Some(&l1.min(l2)), || format!("{}: max a", tag()));
            rep.check(a.get(&b) == Some(&1) && a.get(&-b) == Some(&1), || format!("{}: a(±b)", tag()));
            let gs = pair_range(l1, l2);
            let s1: i64 = gs.iter().map(|g| g.doubled() + 1).sum();
            let s2: i64 = gs.iter().map(|g| g.doubled()).sum();
            rep.check(s1 == (l1 * l2) as i64, || format!("{}: Σ(2g+1)", tag()));
            rep.check(s2 == (l1 * l2 - l1.min(l2)) as i64, || format!("{}: Σ2g", tag()));
            for r in 1..=3u32 {
                for f in 0..=4i64 {
                    let inv = FundamentalInvariants::single(
                        2,
                        CuspidalDatum::new(r, l1 + l2, r).with_conductor(f),
                    );
                    let sa = SegmentInstance { cuspidal_index: 0, seg: Segment::new(l1), torus_index: 0 };
                    let sb = SegmentInstance { cuspidal_index: 0, seg: Segment::new(l2), torus_index: 1 };
                    let got = conductor_pair(&sa, &sb, &inv).ok();
                    let want = conductor_oracle(l1, l2, r as i64, f);
                    rep.check(got.is_some() && got == want, || {
                        format!("{}, r={r}, f={f}: conductor {got:?} vs oracle {want:?}", tag())
                    });
                }
            }
        }
    }
    rep
}

/// `(m, r)` with `m ≤ 4` and `r | m`.
pub fn mr_grid() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for m in 1..=4u32 {
        for r in 1..=m {
            if m % r == 0 {
                out.push((m, r));
            }
        }
    }
    out
}

/// The formal degree identities on `m ≤ 4, r | m, e ≤ 4, δ ≤ 6`, with the
/// ratio under test supplied by the caller.
pub fn formal_degrees_with(ratio: FdRatioFn) -> SuiteReport {
    let mut rep = SuiteReport::new("formal_degrees");
    for (m, r) in mr_grid() {
        for e in 1..=4u32 {
            let tag = move |d: i64| format!("m={m}, r={r}, e={e}, δ={d}");
            for delta in 0..=6i64 {
                let f = delta + (m * m) as i64 - r as i64;
                let thm = match ratio(m, e, r, f) {
                    Ok(t) => t,
                    Err(err) => {
                        rep.check(false, || format!("{}: {err}", tag(delta)));
                        continue;
                    }
                };
                rep.check(fd_ratio_steinberg_form(m, e, r, f).ok() == Some(thm.clone()), || {
                    format!("{}: ratio vs Steinberg rewriting", tag(delta))
                });
                rep.check(fd_ratio_delta_form(m, e, r, delta).ok() == Some(thm.clone()), || {
                    format!("{}: ratio vs δ display", tag(delta))
                });
                let d_sigma = fd_explicit(m, r, delta, 1);
                let d_pi = fd_explicit(m, r, delta, e);
                let closure = &d_pi / &d_sigma.pow(e as i64);
                rep.check(thm == closure, || {
                    format!("{}: explicit ratio vs ratio with f = δ + m² - r", tag(delta))
                });
                let sq = &d_pi / &d_sigma.pow((e * e) as i64);
                rep.check(sq == fd_square_exponent_form(m, r, e), || {
                    format!("{}: d(π)/d(σ)^(e²) display", tag(delta))
                });
                for q in [2.0, 3.0, 4.0, 5.0] {
                    rep.check(d_pi.eval(q) > 0.0 && d_sigma.eval(q) > 0.0, || {
                        format!("{}: non-positive degree at q={q}", tag(delta))
                    });
                }
            }
        }
    }
    rep
}

/// Steinberg degrees through two formulas and through the ratio on the
/// trivial character.
pub fn steinberg(max_l: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("steinberg");
    let iw = CuspidalDatum::iwahori(max_l);
    for l in 1..=max_l {
        rep.check(steinberg_fd(l) == steinberg_fd_group_order(l), || format!("l={l}: two forms"));
        rep.check_result(fd_ratio(1, l, 1, 0).map(|x| x == steinberg_fd(l)), || {
            format!("l={l}: ratio on the trivial character")
        });
        rep.check_result(
            fd_generalized_steinberg(&iw, l).map(|x| x.as_exact() == Some(&steinberg_fd(l))),
            || format!("l={l}: generalized Steinberg on the trivial character"),
        );
    }
    rep
}

/// The two displays of the Hecke algebra density.
pub fn hecke(max_n: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("hecke");
    for n in 1..=max_n {
        for p in partitions_of(n).expect("n ≥ 1") {
            rep.check_result(hecke_density(n, &p).map(|h| h.forms_agree()), || {
                format!("n={n}, partition {p}")
            });
        }
    }
    rep
}

/// One-cuspidal components with `e ≤ max_e` over the `(m, r)` grid and
/// `f ≤ 6`: `c^{-2} γ^{-1} μ = γ j^{-1}`, and the assembled constant equals
/// `q^{ℓ(γ) f} γ(G|M)`.
pub fn closure(max_e: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("closure");
    for (m, r) in mr_grid() {
        for f in 0..=6i64 {
            for e in 1..=max_e {
                let inv = FundamentalInvariants::single(
                    2,
                    CuspidalDatum::new(m, e, r).with_conductor(f).with_degree(
                        crate::invariants::FormalDegreeInput::Exact(RatFunc::one()),
                    ),
                );
                for spec in enumerate_components(&inv).expect("valid") {
                    let tag = || format!("m={m}, r={r}, f={f}, component {}", spec.selector());
                    rep.check_result(closure_holds(&spec, f), tag);
                }
            }
        }
    }
    rep
}

fn closure_holds(spec: &ComponentSpec, f: i64) -> Result<bool> {
    let levi = spec.levi();
    let gamma = gamma_factor(&levi);
    let c = c_function(&levi);
    let mu = mu_levi(&spec.segments, &spec.inv)?;
    let j = j_function(&spec.segments, &spec.inv)?;
    let lhs = mu.scale(&(&c.pow(-2) / &gamma));
    let rhs = j.inv().scale(&gamma);
    let report = density(spec)?;
    let expected_constant = &RatFunc::q_pow_int(segment_gamma_length(&spec.segments) * f) * &gamma;
    Ok(lhs.exact_eq(&rhs) && report.constant == expected_constant && lhs.torus_part() == report.factors)
}

/// The torus part of the all-ones Iwahori component against the
/// Macdonald product.
pub fn macdonald(max_n: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("macdonald");
    for n in 1..=max_n {
        let spec = ComponentSpec::new(
            FundamentalInvariants::iwahori(2, n),
            vec![Partition::new(vec![1; n as usize]).expect("valid")],
        );
        rep.check_result(
            spec.and_then(|s| density(&s)).map(|r| r.factors == macdonald_form(n)),
            || format!("n={n}"),
        );
    }
    rep
}

/// `λ(D/F) Π_{j<n}(q^j - 1) = Π_{j<n'}(q^{dj} - 1)`, and the value of
/// `λ` for `d = 2, n' = 3`.
pub fn lambda(max_d: u32, max_n: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("lambda");
    for d in 1..=max_d {
        for np in 1..=max_n {
            let n = (d * np) as i64;
            let lhs = (1..n).fold(lambda_df(d, np).expect("valid"), |acc, j| {
                &acc * &RatFunc::q_pow_minus_one(j)
            });
            let rhs = (1..np as i64).fold(RatFunc::one(), |acc, j| {
                &acc * &RatFunc::q_pow_minus_one(d as i64 * j)
            });
            rep.check(lhs == rhs, || format!("d={d}, n'={np}: {lhs} != {rhs}"));
        }
    }
    let expect = [1, 3, 5]
        .iter()
        .fold(RatFunc::one(), |acc, &m| &acc / &RatFunc::q_pow_minus_one(m));
    rep.check(lambda_df(2, 3).ok() == Some(expect), || "d=2, n'=3 value".into());
    rep
}

/// κ on the `(m, r, δ)` grid for `e ≤ max_e`: the torus parts cancel
/// against the `GL(e, K)` Iwahori reference and κ does not depend on the
/// partition. Transfer keeps torus factors.
pub fn transfer(max_e: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("transfer");
    for (m, r) in mr_grid() {
        for delta in 0..=6i64 {
            for e in 1..=max_e {
                let inv = FundamentalInvariants::single(2, CuspidalDatum::new(m, e, r).with_delta(delta));
                let tag = || format!("m={m}, r={r}, δ={delta}, e={e}");
                let kappas: Result<Vec<_>> = enumerate_components(&inv)
                    .and_then(|specs| specs.iter().map(|s| kappa(s).map(|k| k.kappa)).collect());
                rep.check_result(kappas.map(|ks| ks.windows(2).all(|w| w[0] == w[1])), tag);
            }
        }
    }
    for d in 1..=3u32 {
        for np in 1..=2u32 {
            let inv = FundamentalInvariants::iwahori(2, d * np);
            for spec in enumerate_components(&inv).expect("valid") {
                rep.check_result(
                    density(&spec)
                        .and_then(|rp| Ok((transfer_density(&rp, d, np)?, rp)))
                        .map(|(t, rp)| t.factors == rp.factors),
                    || format!("d={d}, n'={np}, {}: factors changed", spec.selector()),
                );
            }
        }
    }
    rep
}

/// Centralizer data against brute force in `S_e`: `|Z(γ)|` times the
/// class size is `e!`, and the permutation action of `Z(γ)` on the cycles
/// of γ has order `Π a_d!`.
pub fn centralizer(max_e: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("centralizer");
    for e in 1..=max_e {
        let perms = permutations(e as usize);
        let mut class_sizes: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for p in &perms {
            *class_sizes.entry(cycle_type(p)).or_default() += 1;
        }
        let factorial: u64 = (1..=e as u64).product();
        for p in partitions_of(e).expect("e ≥ 1") {
            let data = p.centralizer_data();
            let size = class_sizes.get(p.parts()).copied().unwrap_or(0);
            rep.check(data.order * size == factorial, || format!("e={e}, {p}: class size"));
            rep.check(data.fixed_torus_dim == p.len(), || format!("e={e}, {p}: dim"));
            let gamma = representative(&p);
            let cycle_of = cycle_labels(&gamma);
            let mut order = 0u64;
            let mut induced: BTreeSet<Vec<usize>> = BTreeSet::new();
            for s in &perms {
                if (0..e as usize).all(|x| s[gamma[x]] == gamma[s[x]]) {
                    order += 1;
                    let mut map = vec![0; p.len()];
                    for x in 0..e as usize {
                        map[cycle_of[x]] = cycle_of[s[x]];
                    }
                    induced.insert(map);
                }
            }
            rep.check(order == data.order, || format!("e={e}, {p}: |Z(γ)| = {order}"));
            rep.check(induced.len() as u64 == data.effective_perm_group_order, || {
                format!("e={e}, {p}: effective order {}", induced.len())
            });
        }
    }
    rep
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut p, &mut out);
    out
}

fn heap_permute(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, p, out);
        if k % 2 == 0 {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, p, out);
}

fn cycle_type(p: &[usize]) -> Vec<u32> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn cycle_labels(p: &[usize]) -> Vec<usize> {
    let mut label = vec![usize::MAX; p.len()];
    let mut next = 0;
    for s in 0..p.len() {
        if label[s] != usize::MAX {
            continue;
        }
        let mut x = s;
        while label[x] == usize::MAX {
            label[x] = next;
            x = p[x];
        }
        next += 1;
    }
    label
}

/// A permutation with cycles on consecutive blocks of the given lengths.
fn representative(p: &Partition) -> Vec<usize> {
    let mut out = Vec::new();
    let mut start = 0;
    for &l in p.parts() {
        let l = l as usize;
        for i in 0..l {
            out.push(start + (i + 1) % l);
        }
        start += l;
    }
    out
}
