//! Partitions, cycle-type centralizers, segments and the overlap function.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::HalfInt;

/// A partition `l_1 ≥ … ≥ l_k` of its total, `k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the parts; rejects empty input and zero parts.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Input(format!(
                "a partition needs at least one positive part, got {parts:?}"
            )));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Multiplicity `a_d` of each part size `d`.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    pub fn centralizer_data(&self) -> CentralizerData {
        centralizer_data(self)
    }

    pub fn gamma_length(&self) -> u64 {
        gamma_length(self)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join("+"))
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// `"2+1+1"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split('+')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `e` in reverse-lexicographic order.
pub fn partitions_of(e: u32) -> Result<Vec<Partition>> {
    if e < 1 {
        return Err(Error::Input("partitions_of needs e ≥ 1".into()));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(e, e, &mut current, &mut out);
    Ok(out)
}

fn fill(rest: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        current.push(p);
        fill(rest - p, p, current, out);
        current.pop();
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerData {
    /// `|Z(γ)| = Π_d d^{a_d} a_d!`
    pub order: u64,
    /// `Π_d a_d!`, the part of `Z(γ)` permuting the coordinates of `X^γ`.
    pub effective_perm_group_order: u64,
    /// `k`, the dimension of `X^γ`.
    pub fixed_torus_dim: usize,
}

fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

pub fn centralizer_data(p: &Partition) -> CentralizerData {
    let mut order = 1u64;
    let mut effective = 1u64;
    for (d, a) in p.multiplicities() {
        let f = factorial(a);
        order *= (d as u64).pow(a) * f;
        effective *= f;
    }
    CentralizerData {
        order,
        effective_perm_group_order: effective,
        fixed_torus_dim: p.len(),
    }
}

/// `ℓ(γ) = Σ_{i<j} l_i l_j`
pub fn gamma_length(p: &Partition) -> u64 {
    let mut acc = 0u64;
    for (i, &a) in p.parts.iter().enumerate() {
        for &b in &p.parts[i + 1..] {
            acc += a as u64 * b as u64;
        }
    }
    acc
}

/// A Zelevinsky segment of length `l`, centred at `g = (l-1)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub l: u32,
    pub g: HalfInt,
}

impl Segment {
    pub fn new(l: u32) -> Self {
        assert!(l >= 1, "segment length must be positive");
        Segment {
            l,
            g: HalfInt::segment_radius(l),
        }
    }
}

/// `a(k) = #{(i, j) : k = i + j - b}` with `b = g_1 + g_2`.
pub fn overlap_function(l1: u32, l2: u32) -> BTreeMap<HalfInt, u32> {
    let b = HalfInt::segment_radius(l1) + HalfInt::segment_radius(l2);
    let mut a = BTreeMap::new();
    for i in 0..l1 as i64 {
        for j in 0..l2 as i64 {
            *a.entry(HalfInt::from_int(i + j) - b).or_insert(0) += 1;
        }
    }
    a
}

/// The values `g` with `|g_1 - g_2| ≤ g ≤ g_1 + g_2`, in unit steps.
pub fn pair_range(l1: u32, l2: u32) -> Vec<HalfInt> {
    let g1 = HalfInt::segment_radius(l1);
    let g2 = HalfInt::segment_radius(l2);
    let lo = (g1 - g2).abs().doubled();
    let hi = (g1 + g2).doubled();
    (lo..=hi).step_by(2).map(HalfInt::from_doubled).collect()
}
