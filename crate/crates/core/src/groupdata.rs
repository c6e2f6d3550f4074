//! Orders of finite general linear groups, Poincaré polynomials of `S_n`,
//! and the constants γ(G|M), c(G|M) and μ(I) attached to Levi subgroups.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{HalfInt, HalfPowerPoly, RatFunc};

/// Block sizes `(n_1, …, n_k)` of `M = GL(n_1) × … × GL(n_k) ⊂ GL(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeviShape {
    pub n: u32,
    pub blocks: Vec<u32>,
}

impl LeviShape {
    pub fn new(blocks: Vec<u32>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::Input(format!("invalid Levi blocks {blocks:?}")));
        }
        Ok(LeviShape {
            n: blocks.iter().sum(),
            blocks,
        })
    }

    /// `Σ_{i<j} n_i n_j`, the number of roots of G not in M, halved.
    pub fn positive_root_gap(&self) -> i64 {
        let mut r = 0i64;
        for (i, &a) in self.blocks.iter().enumerate() {
            for &b in &self.blocks[i + 1..] {
                r += a as i64 * b as i64;
            }
        }
        r
    }

    fn key(&self) -> Vec<u32> {
        let mut k = self.blocks.clone();
        k.sort_unstable();
        k
    }
}

/// `|GL(n, q)| = Π_{j<n} (q^n - q^j)` expanded.
pub fn gl_order(n: u32) -> HalfPowerPoly {
    let qn = HalfPowerPoly::q_pow(HalfInt::from_int(n as i64));
    (0..n).fold(HalfPowerPoly::one(), |acc, j| {
        &acc * &(&qn - &HalfPowerPoly::q_pow(HalfInt::from_int(j as i64)))
    })
}

/// `|GL(n, q)|` in factored form `q^{n(n-1)/2} Π_{i=1}^n (q^i - 1)`.
pub fn gl_order_factored(n: u32) -> RatFunc {
    let n = n as i64;
    (1..=n).fold(RatFunc::q_pow_int(n * (n - 1) / 2), |acc, i| {
        &acc * &RatFunc::q_pow_minus_one(i)
    })
}

/// `P_{S_n}(X) = Π_{i=1}^n (X^i - 1)/(X - 1)` in the variable q.
pub fn poincare_poly(n: u32) -> HalfPowerPoly {
    (1..=n).fold(HalfPowerPoly::one(), |acc, i| {
        let geometric: Vec<i64> = vec![1; i as usize];
        &acc * &HalfPowerPoly::from_q_coeffs(&geometric)
    })
}

/// `P_{S_n}(q)` in factored form.
pub fn poincare_at_q(n: u32) -> RatFunc {
    (1..=n as i64).fold(RatFunc::one(), |acc, i| {
        &acc * &(&RatFunc::q_pow_minus_one(i) / &RatFunc::q_pow_minus_one(1))
    })
}

/// `P_{S_n}(q^{-1})` in factored form.
pub fn poincare_at_q_inverse(n: u32) -> RatFunc {
    (1..=n as i64).fold(RatFunc::one(), |acc, i| {
        &acc * &(&RatFunc::q_pow_minus_one(-i) / &RatFunc::q_pow_minus_one(-1))
    })
}

/// Substitute `q -> q^{-1}` in an expanded polynomial.
pub fn invert_q(p: &HalfPowerPoly) -> HalfPowerPoly {
    p.terms().fold(HalfPowerPoly::zero(), |acc, (e, c)| {
        &acc + &HalfPowerPoly::monomial(c.clone(), -e)
    })
}

fn gamma_cache() -> &'static Mutex<HashMap<Vec<u32>, RatFunc>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u32>, RatFunc>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `γ(G|M) = q^{-2 Σ_{i<j} n_i n_j} |GL(n,q)| / Π |GL(n_i,q)|`. Memoized.
pub fn gamma_factor(shape: &LeviShape) -> RatFunc {
    let key = shape.key();
    if let Some(v) = gamma_cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let value = gamma_factor_group_orders(shape);
    gamma_cache().lock().unwrap().insert(key, value.clone());
    value
}

/// γ(G|M) computed from the expanded group orders.
pub fn gamma_factor_group_orders(shape: &LeviShape) -> RatFunc {
    let num = &gl_order(shape.n) * &HalfPowerPoly::q_pow(HalfInt::from_int(-2 * shape.positive_root_gap()));
    let den = shape
        .blocks
        .iter()
        .fold(HalfPowerPoly::one(), |acc, &b| &acc * &gl_order(b));
    RatFunc::from_polys(&num, &den).expect("group orders are nonzero")
}

/// γ(G|M) computed as `P_{S_n}(q^{-1}) / Π P_{S_{n_i}}(q^{-1})` from the
/// expanded Poincaré polynomials.
pub fn gamma_factor_poincare(shape: &LeviShape) -> RatFunc {
    let num = invert_q(&poincare_poly(shape.n));
    let den = shape
        .blocks
        .iter()
        .fold(HalfPowerPoly::one(), |acc, &b| &acc * &invert_q(&poincare_poly(b)));
    RatFunc::from_polys(&num, &den).expect("Poincaré polynomials are nonzero")
}

/// `c(G|M) = Π_{i<j} P_{S_{n_i+n_j}}(q^{-1}) / (P_{S_n}(q^{-1}) Π_i P_{S_{n_i}}(q^{-1})^{k-2})`,
/// taken to be 1 when `k = 1`.
pub fn c_function(shape: &LeviShape) -> RatFunc {
    let k = shape.blocks.len() as i64;
    if k == 1 {
        return RatFunc::one();
    }
    let mut acc = poincare_at_q_inverse(shape.n).inv();
    for (i, &a) in shape.blocks.iter().enumerate() {
        for &b in &shape.blocks[i + 1..] {
            acc = &acc * &poincare_at_q_inverse(a + b);
        }
        acc = &acc * &poincare_at_q_inverse(a).pow(2 - k);
    }
    acc
}

/// `μ(I) = 1 / P_{S_n}(q)` when `μ(GL(n, 𝔬)) = 1`.
pub fn iwahori_volume(n: u32) -> RatFunc {
    poincare_at_q(n).inv()
}
