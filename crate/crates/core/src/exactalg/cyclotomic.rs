//! Cyclotomic polynomials `Φ_k(v)` and the small amount of elementary
//! number theory needed to manipulate them.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use super::HalfPowerPoly;

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factors with multiplicity, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn mobius(n: u64) -> i32 {
    let f = prime_factors(n);
    for w in f.windows(2) {
        if w[0] == w[1] {
            return 0;
        }
    }
    if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    let mut f = prime_factors(n);
    f.dedup();
    f.iter().fold(n, |acc, p| acc / p * (p - 1))
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<HalfPowerPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<HalfPowerPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Φ_k(v)` as a polynomial in v. Memoized.
pub fn cyclotomic_poly(k: u64) -> Arc<HalfPowerPoly> {
    assert!(k >= 1);
    if let Some(p) = cache().lock().unwrap().get(&k) {
        return p.clone();
    }
    let mut p = HalfPowerPoly::monomial(num_traits::One::one(), k as i64) - HalfPowerPoly::one();
    for d in divisors(k) {
        if d < k {
            p = p
                .div_exact(&cyclotomic_poly(d))
                .expect("cyclotomic divisor must divide v^k - 1");
        }
    }
    let p = Arc::new(p);
    cache().lock().unwrap().insert(k, p.clone());
    p
}

/// `Φ_k(v)` at a real point, via `Π_{d|k} (v^d - 1)^{μ(k/d)}`.
pub fn eval_cyclotomic(k: u64, v: f64) -> f64 {
    if (v - 1.0).abs() < 1e-9 || (v + 1.0).abs() < 1e-9 {
        return cyclotomic_poly(k).eval_v(v);
    }
    let mut acc = 1.0;
    for d in divisors(k) {
        match mobius(k / d) {
            1 => acc *= v.powi(d as i32) - 1.0,
            -1 => acc /= v.powi(d as i32) - 1.0,
            _ => {}
        }
    }
    acc
}

/// Cyclotomic exponents of `v^a - 1`, i.e. `{k : k | a}` each with multiplicity 1.
pub fn v_pow_minus_one(a: u64) -> BTreeMap<u64, i64> {
    divisors(a).into_iter().map(|k| (k, 1)).collect()
}

/// Factor `Φ_k(v^r)` into cyclotomic polynomials in v.
pub fn substitute_power(k: u64, r: u64) -> BTreeMap<u64, i64> {
    let mut current: BTreeMap<u64, i64> = BTreeMap::from([(k, 1)]);
    for p in prime_factors(r) {
        let mut next = BTreeMap::new();
        for (&kk, &e) in &current {
            // Φ_kk(x^p) = Φ_{kk p}(x)            if p | kk
            //           = Φ_{kk p}(x) Φ_kk(x)    otherwise
            *next.entry(kk * p).or_insert(0) += e;
            if kk % p != 0 {
                *next.entry(kk).or_insert(0) += e;
            }
        }
        current = next;
    }
    current
}

/// Divide out every cyclotomic factor of `p` (assumed to have a non-zero
/// constant term). Returns the exponents found and the cyclotomic-free
/// cofactor.
pub fn extract_cyclotomic(p: &HalfPowerPoly) -> (BTreeMap<u64, i64>, HalfPowerPoly) {
    let mut found = BTreeMap::new();
    let mut rest = p.clone();
    let Some(deg) = rest.degree() else {
        return (found, rest);
    };
    let deg = deg.max(0) as u64;
    if deg == 0 {
        return (found, rest);
    }
    let scale: f64 = rest
        .terms()
        .map(|(_, c)| num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::INFINITY).abs())
        .sum();
    for k in 1.. {
        if k > 30 && phi_lower_bound(k) > deg as f64 {
            break;
        }
        let phi = euler_phi(k);
        if phi > rest.degree().unwrap_or(0) as u64 {
            continue;
        }
        // Cheap filter: Φ_k | p forces p(e^{2πi/k}) = 0.
        let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU / k as f64);
        if rest.eval_v_complex(zeta).norm() > 1e-6 * scale.max(1.0) {
            continue;
        }
        let ck = cyclotomic_poly(k);
        while let Some(q) = rest.div_exact(&ck) {
            rest = q;
            *found.entry(k).or_insert(0) += 1;
        }
    }
    (found, rest)
}

/// Rosser–Schoenfeld lower bound for Euler's totient, valid for `n ≥ 3`
/// and increasing past `n = 30`.
fn phi_lower_bound(n: u64) -> f64 {
    let x = n as f64;
    let ll = x.ln().ln();
    x / (1.781_072_4 * ll + 2.506_37 / ll)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1).to_string(), "q^(1/2) - 1");
        assert_eq!(*cyclotomic_poly(4), HalfPowerPoly::from_q_coeffs(&[1, 1]));
        // Φ_6(v) = v² - v + 1
        assert_eq!(cyclotomic_poly(6).to_string(), "q - q^(1/2) + 1");
    }

    #[test]
    fn number_theory() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(prime_factors(12), vec![2, 2, 3]);
    }

    #[test]
    fn substitution_matches_polynomials() {
        for k in 1..=12u64 {
            for r in 1..=6u64 {
                let lhs = cyclotomic_poly(k).substitute_power(r as i64);
                let mut rhs = HalfPowerPoly::one();
                for (kk, e) in substitute_power(k, r) {
                    rhs = &rhs * &cyclotomic_poly(kk).pow(e as u32);
                }
                assert_eq!(lhs, rhs, "Φ_{k}(v^{r})");
            }
        }
    }

    #[test]
    fn extraction_finds_all_factors() {
        let p = &HalfPowerPoly::q_pow_minus_one(6) * &HalfPowerPoly::from_q_coeffs(&[2, 1]);
        let (found, rest) = extract_cyclotomic(&p);
        assert_eq!(found, v_pow_minus_one(12));
        assert_eq!(rest, HalfPowerPoly::from_q_coeffs(&[2, 1]));
    }

    #[test]
    fn numeric_eval_agrees_with_polynomial() {
        for k in 1..=30 {
            let a = eval_cyclotomic(k, 1.7);
            let b = cyclotomic_poly(k).eval_v(1.7);
            assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "k={k}");
        }
    }
}
