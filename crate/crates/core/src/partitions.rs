//! Partitions as multisets of positive parts, and the combinatorics the
//! pairing formulas need: sub-multisets, binomial coefficients of
//! multiplicities, scaling, and centralizer orders in symmetric groups.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// A partition with parts stored in non-increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn count(&self, part: u32) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }

    /// Pairs `(part, multiplicity)` in decreasing order of part.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Multiset containment.
    pub fn contains(&self, other: &Partition) -> bool {
        other.multiplicities().iter().all(|&(p, c)| self.count(p) >= c)
    }

    pub fn union(&self, other: &Partition) -> Partition {
        let mut v = self.parts.clone();
        v.extend_from_slice(&other.parts);
        Partition::new(v).expect("parts stay positive")
    }

    /// Multiset difference; fails unless `other` is contained in `self`.
    pub fn difference(&self, other: &Partition) -> Result<Partition> {
        if !self.contains(other) {
            return Err(Error::InvalidInput(alloc::format!("{other} is not contained in {self}")));
        }
        let mut v = self.parts.clone();
        for p in &other.parts {
            let i = v.iter().position(|x| x == p).expect("contained");
            v.remove(i);
        }
        Ok(Partition { parts: v })
    }

    /// Multiset intersection.
    pub fn intersection(&self, other: &Partition) -> Partition {
        let mut v = Vec::new();
        for (p, c) in self.multiplicities() {
            for _ in 0..c.min(other.count(p)) {
                v.push(p);
            }
        }
        Partition { parts: v }
    }

    /// Divides every part by `d`; fails if some part is not a multiple.
    pub fn scale_div(&self, d: u32) -> Result<Partition> {
        if d == 0 || self.parts.iter().any(|p| p % d != 0) {
            return Err(Error::InvalidInput(alloc::format!("{self} is not divisible by {d}")));
        }
        Ok(Partition { parts: self.parts.iter().map(|p| p / d).collect() })
    }

    pub fn scale_mul(&self, m: u32) -> Partition {
        Partition { parts: self.parts.iter().map(|p| p * m).collect() }
    }

    pub fn even_parts(&self) -> usize {
        self.parts.iter().filter(|p| *p % 2 == 0).count()
    }

    pub fn all_even(&self) -> bool {
        self.parts.iter().all(|p| p % 2 == 0)
    }

    /// `C_{self, sub}`: the product over part values of
    /// `binom(mult_self, mult_sub)`; zero unless `sub` is contained.
    pub fn c_coeff(&self, sub: &Partition) -> BigUint {
        let mut acc = BigUint::one();
        for (p, c) in sub.multiplicities() {
            acc *= binomial(self.count(p) as u64, c as u64);
        }
        acc
    }

    /// `z_mu = prod i^{k_i} k_i!`, the order of the centralizer in the
    /// symmetric group of an element of cycle type `self`.
    pub fn z(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, c) in self.multiplicities() {
            acc *= BigUint::from(p).pow(c as u32) * factorial(c as u64);
        }
        acc
    }

    /// Every distinct sub-multiset, the empty one included.
    pub fn sub_multisets(&self) -> Vec<Partition> {
        let mult = self.multiplicities();
        let mut out = vec![Vec::new()];
        for (p, c) in mult {
            let mut next = Vec::new();
            for base in &out {
                for k in 0..=c {
                    let mut v: Vec<u32> = base.clone();
                    v.extend(core::iter::repeat_n(p, k));
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(|v| Partition::new(v).expect("positive")).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// A pair of partitions `(mu, lambda)`, labelling classes in the Weyl groups
/// of types B, C and D. Parts of `mu` are positive cycles, parts of `lambda`
/// negative cycles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    pub mu: Partition,
    pub lambda: Partition,
}

impl Bipartition {
    pub fn new(mu: Partition, lambda: Partition) -> Self {
        Bipartition { mu, lambda }
    }

    pub fn size(&self) -> u32 {
        self.mu.size() + self.lambda.size()
    }

    pub fn contains(&self, other: &Bipartition) -> bool {
        self.mu.contains(&other.mu) && self.lambda.contains(&other.lambda)
    }

    pub fn difference(&self, other: &Bipartition) -> Result<Bipartition> {
        Ok(Bipartition { mu: self.mu.difference(&other.mu)?, lambda: self.lambda.difference(&other.lambda)? })
    }

    /// Order of the centralizer in the hyperoctahedral group:
    /// `prod (2e)^k k! * prod (2f)^l l!`.
    pub fn b_centralizer_order(&self) -> BigUint {
        let mut acc = BigUint::one();
        for part in [&self.mu, &self.lambda] {
            for (p, c) in part.multiplicities() {
                acc *= BigUint::from(2 * p).pow(c as u32) * factorial(c as u64);
            }
        }
        acc
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.mu, self.lambda)
    }
}

/// All partitions of `n` in reverse lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All bipartitions of total size `n`.
pub fn bipartitions_of(n: u32) -> Vec<Bipartition> {
    let mut out = Vec::new();
    for k in (0..=n).rev() {
        for mu in partitions_of(k) {
            for lambda in partitions_of(n - k) {
                out.push(Bipartition { mu: mu.clone(), lambda });
            }
        }
    }
    out
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Multiset union of any number of partitions.
pub fn multiset_union<'a>(parts: impl IntoIterator<Item = &'a Partition>) -> Partition {
    parts.into_iter().fold(Partition::empty(), |acc, p| acc.union(p))
}
