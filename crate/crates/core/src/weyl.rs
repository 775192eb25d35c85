//! Weyl groups of the classical groups as signed permutation groups, their
//! F-conjugacy classes, and F-centralizers.
//!
//! Type A groups act on `n` coordinates by permutations, types B and C by
//! signed permutations, type D by signed permutations with an even number of
//! sign changes. The unitary Frobenius is the graph automorphism `w0 x w0`,
//! and the quasi-split even orthogonal Frobenius is conjugation by a single
//! sign change.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::eigenvalue_orbits::FieldParam;
use crate::error::{Error, Result};
use crate::partitions::{factorial, Bipartition, Partition};

/// The classical group families handled by the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `GL_n`.
    GL,
    /// `U_n`.
    U,
    /// `Sp_{2n}`.
    Sp,
    /// `SO_{2n+1}`.
    SOOdd,
    /// Split `SO^+_{2n}`.
    SOEvenPlus,
    /// Quasi-split non-split `SO^-_{2n}`.
    SOEvenMinus,
}

/// Dynkin type of the Weyl group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeylType {
    A,
    B,
    D,
}

impl Family {
    pub fn weyl_type(self) -> WeylType {
        match self {
            Family::GL | Family::U => WeylType::A,
            Family::Sp | Family::SOOdd => WeylType::B,
            Family::SOEvenPlus | Family::SOEvenMinus => WeylType::D,
        }
    }

    pub fn is_orthogonal_like(self) -> bool {
        !matches!(self, Family::GL | Family::U)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::GL => "GL",
            Family::U => "U",
            Family::Sp => "Sp",
            Family::SOOdd => "SO_odd",
            Family::SOEvenPlus => "SO+_even",
            Family::SOEvenMinus => "SO-_even",
        };
        f.write_str(s)
    }
}

/// A classical group over a finite field. `n` is the matrix size for `GL_n`
/// and `U_n`, and the Weyl rank for the symplectic and orthogonal families.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupKind {
    pub family: Family,
    pub n: u32,
    pub field: FieldParam,
}

impl GroupKind {
    pub fn new(family: Family, n: u32, field: FieldParam) -> Self {
        GroupKind { family, n, field }
    }

    /// The F_q-rank.
    pub fn fq_rank(&self) -> u32 {
        match self.family {
            Family::GL | Family::Sp | Family::SOOdd | Family::SOEvenPlus => self.n,
            Family::U => self.n / 2,
            Family::SOEvenMinus => self.n.saturating_sub(1),
        }
    }

    /// `(-1)^{F_q-rank}`.
    pub fn sign(&self) -> i8 {
        if self.fq_rank() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::GL => write!(f, "GL_{}(q={})", self.n, self.field),
            Family::U => write!(f, "U_{}(q={})", self.n, self.field),
            Family::Sp => write!(f, "Sp_{}(q={})", 2 * self.n, self.field),
            Family::SOOdd => write!(f, "SO_{}(q={})", 2 * self.n + 1, self.field),
            Family::SOEvenPlus => write!(f, "SO+_{}(q={})", 2 * self.n, self.field),
            Family::SOEvenMinus => write!(f, "SO-_{}(q={})", 2 * self.n, self.field),
        }
    }
}

/// Distinguishes the two classes of a split type D class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplitSign {
    Plus,
    Minus,
}

/// Class data: a partition in type A, a bipartition otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassData {
    Part(Partition),
    Bi(Bipartition),
}

/// An F-conjugacy class of the Weyl group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FClassLabel {
    pub family: Family,
    pub n: u32,
    pub data: ClassData,
    pub split: SplitSign,
}

impl FClassLabel {
    /// Label for a type A family.
    pub fn type_a(family: Family, mu: Partition) -> Result<Self> {
        if !matches!(family, Family::GL | Family::U) {
            return Err(Error::InvalidInput("partition label needs GL or U".into()));
        }
        Ok(FClassLabel { family, n: mu.size(), data: ClassData::Part(mu), split: SplitSign::Plus })
    }

    /// Label for types B, C and D. The parity of the number of negative
    /// cycles must match the even orthogonal family.
    pub fn signed(family: Family, bi: Bipartition, split: SplitSign) -> Result<Self> {
        let odd = bi.lambda.len() % 2 == 1;
        match family {
            Family::GL | Family::U => {
                return Err(Error::InvalidInput("bipartition label needs a B, C or D family".into()))
            }
            Family::SOEvenPlus if odd => {
                return Err(Error::InvalidInput(alloc::format!(
                    "{bi} has an odd number of negative cycles, which labels a torus of SO-"
                )))
            }
            Family::SOEvenMinus if !odd => {
                return Err(Error::InvalidInput(alloc::format!(
                    "{bi} has an even number of negative cycles, which labels a torus of SO+"
                )))
            }
            _ => {}
        }
        let splits = family == Family::SOEvenPlus && bi.lambda.is_empty() && bi.mu.all_even();
        if split == SplitSign::Minus && !splits {
            return Err(Error::InvalidInput(alloc::format!("{bi} is not a split class")));
        }
        Ok(FClassLabel { family, n: bi.size(), data: ClassData::Bi(bi), split })
    }

    /// The bipartition view; type A labels have only positive cycles.
    pub fn bipartition(&self) -> Bipartition {
        match &self.data {
            ClassData::Part(p) => Bipartition::new(p.clone(), Partition::empty()),
            ClassData::Bi(b) => b.clone(),
        }
    }

    /// Whether this label is one of two classes with the same bipartition.
    pub fn is_split(&self) -> bool {
        match &self.data {
            ClassData::Bi(b) => {
                self.family == Family::SOEvenPlus && b.lambda.is_empty() && b.mu.all_even()
            }
            ClassData::Part(_) => false,
        }
    }

    /// The torus blocks in canonical order: positive cycles in decreasing
    /// size, then negative cycles in decreasing size, on consecutive
    /// coordinates.
    pub fn blocks(&self) -> Vec<Block> {
        let bi = self.bipartition();
        let mut out = Vec::new();
        let mut start = 0usize;
        for &m in bi.mu.parts() {
            out.push(Block { kind: BlockKind::Positive, size: m, start });
            start += m as usize;
        }
        for &l in bi.lambda.parts() {
            out.push(Block { kind: BlockKind::Negative, size: l, start });
            start += l as usize;
        }
        out
    }
}

impl fmt::Display for FClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.data {
            ClassData::Part(p) => write!(f, "{p}"),
            ClassData::Bi(b) if self.is_split() => {
                let s = if self.split == SplitSign::Plus { '+' } else { '-' };
                write!(f, "{b}{s}")
            }
            ClassData::Bi(b) => write!(f, "{b}"),
        }
    }
}

/// Positive blocks are cycles; negative blocks are cycles with one sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    Positive,
    Negative,
}

/// A cycle of the canonical Weyl element on consecutive coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub kind: BlockKind,
    pub size: u32,
    pub start: usize,
}

/// A signed permutation acting by `(w x)_{perm[i]} = x_i^{+-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub neg: Vec<bool>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm { perm: (0..n).collect(), neg: vec![false; n] }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// `self * other`, acting as `other` first.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let n = self.len();
        let mut perm = vec![0; n];
        let mut neg = vec![false; n];
        for i in 0..n {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            neg[i] = other.neg[i] ^ self.neg[j];
        }
        SignedPerm { perm, neg }
    }

    pub fn inverse(&self) -> SignedPerm {
        let n = self.len();
        let mut perm = vec![0; n];
        let mut neg = vec![false; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            neg[self.perm[i]] = self.neg[i];
        }
        SignedPerm { perm, neg }
    }

    /// True when the number of sign changes is even.
    pub fn is_even(&self) -> bool {
        self.neg.iter().filter(|&&b| b).count() % 2 == 0
    }

    /// Applies the permutation to exponent coordinates modulo `modulus`.
    pub fn act(&self, x: &[BigUint], modulus: &BigUint) -> Vec<BigUint> {
        let mut out = vec![BigUint::default(); x.len()];
        for i in 0..x.len() {
            out[self.perm[i]] = if self.neg[i] {
                (modulus - &x[i] % modulus) % modulus
            } else {
                x[i].clone()
            };
        }
        out
    }

    /// Sign change on coordinate `i` of `n`.
    pub fn flip(n: usize, i: usize) -> SignedPerm {
        let mut s = SignedPerm::identity(n);
        s.neg[i] = true;
        s
    }

    /// The longest element of `S_n`, reversing coordinates.
    pub fn reversal(n: usize) -> SignedPerm {
        SignedPerm { perm: (0..n).rev().collect(), neg: vec![false; n] }
    }
}

/// Generator of the cyclic shift on one block.
fn block_cycle(n: usize, b: &Block) -> SignedPerm {
    let mut s = SignedPerm::identity(n);
    let e = b.size as usize;
    for i in 0..e {
        s.perm[b.start + i] = b.start + (i + 1) % e;
    }
    if b.kind == BlockKind::Negative {
        s.neg[b.start + e - 1] = true;
    }
    s
}

fn block_flip(n: usize, b: &Block) -> SignedPerm {
    let mut s = SignedPerm::identity(n);
    for i in 0..b.size as usize {
        s.neg[b.start + i] = true;
    }
    s
}

/// The product of block cycles, a representative of the class with the
/// given signed cycle type (before any type D adjustment).
fn block_element(label: &FClassLabel) -> SignedPerm {
    let n = label.n as usize;
    label.blocks().iter().fold(SignedPerm::identity(n), |acc, b| block_cycle(n, b).compose(&acc))
}

/// Sign change used to build the second class of a split label and to
/// define the twisted Frobenius of `SO^-_{2n}`.
fn twisting_flip(n: usize) -> SignedPerm {
    if n == 0 {
        return SignedPerm::identity(0);
    }
    SignedPerm::flip(n, n - 1)
}

/// The canonical element `w` of the F-centralizer model: for every family
/// but the non-split even orthogonal one this is the element whose ordinary
/// centralizer is the F-centralizer. For `SO^-_{2n}` it is the odd element
/// of `B_n` with the given cycle type, whose centralizer in `D_n` equals the
/// twisted centralizer of `w a^-1`.
pub fn canonical_element(label: &FClassLabel) -> SignedPerm {
    let w = block_element(label);
    if label.split == SplitSign::Minus {
        let c = twisting_flip(label.n as usize);
        return c.compose(&w).compose(&c);
    }
    w
}

/// All F-classes of the Weyl group of the family at rank `n`.
pub fn f_classes(family: Family, n: u32) -> Vec<FClassLabel> {
    use crate::partitions::{bipartitions_of, partitions_of};
    let mut out = Vec::new();
    match family.weyl_type() {
        WeylType::A => {
            for p in partitions_of(n) {
                out.push(FClassLabel::type_a(family, p).expect("type A"));
            }
        }
        _ => {
            for bi in bipartitions_of(n) {
                if let Ok(l) = FClassLabel::signed(family, bi.clone(), SplitSign::Plus) {
                    let split = l.is_split();
                    out.push(l);
                    if split {
                        out.push(FClassLabel::signed(family, bi, SplitSign::Minus).expect("split"));
                    }
                }
            }
        }
    }
    out
}

/// `|C_{W,F}(w)|` from the closed formula.
pub fn f_centralizer_order(label: &FClassLabel) -> BigUint {
    match &label.data {
        ClassData::Part(p) => p.z(),
        ClassData::Bi(b) => {
            let full = b.b_centralizer_order();
            match label.family.weyl_type() {
                WeylType::D if !label.is_split() => full >> 1,
                _ => full,
            }
        }
    }
}

/// Automorphisms of a single block commuting with the canonical element.
fn block_automorphisms(n: usize, b: &Block, signed: bool) -> Vec<SignedPerm> {
    let gen = block_cycle(n, b);
    let order = match b.kind {
        BlockKind::Positive => b.size as usize,
        BlockKind::Negative => 2 * b.size as usize,
    };
    let mut out = Vec::with_capacity(2 * order);
    let mut g = SignedPerm::identity(n);
    for _ in 0..order {
        out.push(g.clone());
        g = gen.compose(&g);
    }
    if signed && b.kind == BlockKind::Positive {
        let f = block_flip(n, b);
        let flipped: Vec<SignedPerm> = out.iter().map(|x| f.compose(x)).collect();
        out.extend(flipped);
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// The F-centralizer of the canonical element, generated as a product of
/// wreath products of block automorphism groups. Its size is checked
/// against [`f_centralizer_order`].
pub fn centralizer_elements(label: &FClassLabel, bound: u64) -> Result<Vec<SignedPerm>> {
    let order = f_centralizer_order(label);
    let wt = label.family.weyl_type();
    let estimate = if wt == WeylType::D { &order << 1 } else { order.clone() };
    let est = estimate.to_u64().unwrap_or(u64::MAX);
    if est > bound {
        return Err(Error::BoundExceeded { requested: est, limit: bound });
    }
    let n = label.n as usize;
    let blocks = label.blocks();
    let signed = wt != WeylType::A;
    let mut groups: Vec<Vec<Block>> = Vec::new();
    for b in &blocks {
        match groups.last_mut() {
            Some(g) if g[0].kind == b.kind && g[0].size == b.size => g.push(*b),
            _ => groups.push(vec![*b]),
        }
    }
    let mut elems = vec![SignedPerm::identity(n)];
    for g in &groups {
        let auts: Vec<Vec<SignedPerm>> = g.iter().map(|b| block_automorphisms(n, b, signed)).collect();
        let mut next = Vec::new();
        for base in &elems {
            let mut partial = vec![base.clone()];
            for a in &auts {
                let mut grown = Vec::with_capacity(partial.len() * a.len());
                for x in &partial {
                    for y in a {
                        grown.push(y.compose(x));
                    }
                }
                partial = grown;
            }
            for pi in permutations(g.len()) {
                let mut p = SignedPerm::identity(n);
                for (j, &tj) in pi.iter().enumerate() {
                    for i in 0..g[j].size as usize {
                        p.perm[g[j].start + i] = g[tj].start + i;
                    }
                }
                for x in &partial {
                    next.push(p.compose(x));
                }
            }
        }
        elems = next;
    }
    if wt == WeylType::D {
        elems.retain(|x| x.is_even());
    }
    if label.split == SplitSign::Minus {
        let c = twisting_flip(n);
        elems = elems.iter().map(|x| c.compose(x).compose(&c)).collect();
    }
    debug_assert_eq!(BigUint::from(elems.len()), order);
    Ok(elems)
}

/// Order of the Weyl group of the given type and rank.
pub fn weyl_order(wt: WeylType, n: u32) -> BigUint {
    let f = factorial(n as u64);
    match wt {
        WeylType::A => f,
        WeylType::B => f << n as usize,
        WeylType::D if n == 0 => BigUint::one(),
        WeylType::D => f << (n as usize - 1),
    }
}

/// Every element of the Weyl group, refusing to enumerate past `bound`.
pub fn all_elements(wt: WeylType, n: u32, bound: u64) -> Result<Vec<SignedPerm>> {
    let size = weyl_order(wt, n).to_u64().unwrap_or(u64::MAX);
    if size > bound {
        return Err(Error::BoundExceeded { requested: size, limit: bound });
    }
    let n = n as usize;
    let mut out = Vec::new();
    for p in permutations(n) {
        let base = SignedPerm { perm: p, neg: vec![false; n] };
        if wt == WeylType::A {
            out.push(base);
            continue;
        }
        for mask in 0u32..(1 << n) {
            if wt == WeylType::D && mask.count_ones() % 2 == 1 {
                continue;
            }
            let mut s = base.clone();
            for i in 0..n {
                s.neg[i] = mask >> i & 1 == 1;
            }
            out.push(s);
        }
    }
    Ok(out)
}

/// The F-centralizer found by testing every Weyl group element against the
/// defining equation `x^-1 w F(x) = w`, with `F` the Frobenius of the family.
pub fn enumerate_f_centralizer(label: &FClassLabel, bound: u64) -> Result<Vec<SignedPerm>> {
    let n = label.n as usize;
    let wt = label.family.weyl_type();
    let all = all_elements(wt, label.n, bound)?;
    let w_can = canonical_element(label);
    let (w, frob): (SignedPerm, SignedPerm) = match label.family {
        Family::U => {
            let w0 = SignedPerm::reversal(n);
            (w_can.compose(&w0), w0)
        }
        Family::SOEvenMinus => {
            let a = twisting_flip(n);
            (w_can.compose(&a.inverse()), a)
        }
        _ => (w_can, SignedPerm::identity(n)),
    };
    let finv = frob.inverse();
    Ok(all
        .into_iter()
        .filter(|x| {
            let fx = frob.compose(x).compose(&finv);
            x.inverse().compose(&w).compose(&fx) == w
        })
        .collect())
}

/// Whether `x` lies in the F-centralizer of the canonical element, in the
/// ordinary centralizer model used by the torus coordinates.
pub fn in_centralizer(label: &FClassLabel, x: &SignedPerm) -> bool {
    let w = canonical_element(label);
    let even_ok = label.family.weyl_type() != WeylType::D || x.is_even();
    x.len() == w.len() && even_ok && x.compose(&w) == w.compose(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::partitions_of;

    #[test]
    fn constructive_matches_formula() {
        for fam in [Family::GL, Family::Sp, Family::SOEvenPlus, Family::SOEvenMinus] {
            for n in 1..=4 {
                for l in f_classes(fam, n) {
                    let c = centralizer_elements(&l, 1 << 20).unwrap();
                    assert_eq!(BigUint::from(c.len()), f_centralizer_order(&l), "{fam} {l}");
                    assert!(c.iter().all(|x| in_centralizer(&l, x)));
                }
            }
        }
    }

    #[test]
    fn class_counts() {
        assert_eq!(f_classes(Family::GL, 4).len(), partitions_of(4).len());
        // D_2 = A_1 x A_1: two split classes among the four labels of SO+.
        assert_eq!(f_classes(Family::SOEvenPlus, 2).len(), 4);
    }
}
