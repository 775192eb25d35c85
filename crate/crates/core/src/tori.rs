//! Maximal tori of the dual group, their semisimple elements, the Weyl
//! action on them, and the restriction counts `M` used by the pairing
//! engine.
//!
//! A torus is given by an F-class label. Each block of the canonical Weyl
//! element contributes a cyclic group of eigenvalues: a block of size `m`
//! holds coordinates `(x, F x, F^2 x, ...)` determined by a single seed `x`.
//! Elements are stored as one seed per block; the full coordinate vector is
//! rebuilt at a common level whenever the Weyl group acts.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::eigenvalue_orbits::{frobenius_orbit, paired_orbit_key, Eigenvalue, FieldParam, OrbitKey, Twist};
use crate::error::{Error, Result};
use crate::partitions::{binomial, factorial, Bipartition, Partition};
use crate::weyl::{
    centralizer_elements, enumerate_f_centralizer, f_centralizer_order, in_centralizer, Block, BlockKind,
    ClassData, FClassLabel, Family, GroupKind, SignedPerm, SplitSign, WeylType,
};

/// Default bound on Weyl group enumerations.
pub const DEFAULT_BOUND: u64 = 1 << 22;

/// A maximal torus of a group, up to conjugacy.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusDatum {
    pub kind: GroupKind,
    pub label: FClassLabel,
}

impl TorusDatum {
    pub fn new(kind: GroupKind, label: FClassLabel) -> Result<Self> {
        if label.family != kind.family || label.n != kind.n {
            return Err(Error::InvalidInput(alloc::format!("label {label} does not belong to {kind}")));
        }
        Ok(TorusDatum { kind, label })
    }

    /// Torus of `GL_n` or `U_n` with the given cycle type.
    pub fn type_a(family: Family, field: &FieldParam, mu: Partition) -> Result<Self> {
        let label = FClassLabel::type_a(family, mu)?;
        Self::new(GroupKind::new(family, label.n, field.clone()), label)
    }

    /// Torus of a symplectic or orthogonal group.
    pub fn signed(family: Family, field: &FieldParam, bi: Bipartition, split: SplitSign) -> Result<Self> {
        let label = FClassLabel::signed(family, bi, split)?;
        Self::new(GroupKind::new(family, label.n, field.clone()), label)
    }

    pub fn field(&self) -> &FieldParam {
        &self.kind.field
    }

    pub fn blocks(&self) -> Vec<Block> {
        self.label.blocks()
    }

    /// The F_q-rank of the torus.
    pub fn fq_rank(&self) -> u32 {
        let bi = self.label.bipartition();
        match self.kind.family {
            Family::U => bi.mu.even_parts() as u32,
            _ => bi.mu.len() as u32,
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

    /// Frobenius twist acting on eigenvalues of the dual group.
    pub fn twist(&self) -> Twist {
        if self.kind.family == Family::U {
            Twist::Unitary
        } else {
            Twist::Standard
        }
    }

    /// Level of the field holding the coordinates of a block.
    pub fn block_level(&self, b: &Block) -> u32 {
        match (self.kind.family, b.kind) {
            (Family::U, _) if b.size % 2 == 1 => 2 * b.size,
            (_, BlockKind::Negative) => 2 * b.size,
            _ => b.size,
        }
    }

    /// Order of the cyclic group of admissible seeds of a block.
    pub fn block_order(&self, b: &Block) -> BigUint {
        let qm = self.field().q().pow(b.size);
        match (self.kind.family, b.kind) {
            (Family::U, _) if b.size % 2 == 1 => qm + 1u32,
            (_, BlockKind::Negative) => qm + 1u32,
            _ => qm - 1u32,
        }
    }

    /// The `j`-th power of a generator of the seed group of a block.
    pub fn block_seed(&self, b: &Block, j: u64) -> Eigenvalue {
        let lvl = self.block_level(b);
        let f = self.field();
        let step = f.order(lvl) / self.block_order(b);
        Eigenvalue::new(f, lvl, step * j).expect("positive level")
    }

    /// `|T^F|`.
    pub fn order(&self) -> BigUint {
        self.blocks().iter().map(|b| self.block_order(b)).product()
    }

    /// Least common multiple of the block levels.
    pub fn common_level(&self) -> u32 {
        self.blocks().iter().fold(1, |acc, b| acc.lcm(&self.block_level(b)))
    }

    /// `|W(T)^F|`, the order of the F-centralizer of the label.
    /// Orders of the cyclic factors of `T^F`, one per block.
    pub fn factor_orders(&self) -> Vec<BigUint> {
        self.blocks().iter().map(|b| self.block_order(b)).collect()
    }

    pub fn weyl_order(&self) -> BigUint {
        f_centralizer_order(&self.label)
    }
}

/// A semisimple element of a dual torus: one seed per block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemisimpleElement {
    pub seeds: Vec<Eigenvalue>,
}

impl SemisimpleElement {
    pub fn new(seeds: Vec<Eigenvalue>) -> Self {
        SemisimpleElement { seeds }
    }
}

/// A torus together with a semisimple element in it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualTorusPair {
    pub torus: TorusDatum,
    pub element: SemisimpleElement,
}

impl DualTorusPair {
    /// Checks that each seed lies in the cyclic group of its block.
    pub fn new(torus: TorusDatum, element: SemisimpleElement) -> Result<Self> {
        let blocks = torus.blocks();
        if blocks.len() != element.seeds.len() {
            return Err(Error::NotInTorus(alloc::format!(
                "{} seeds given for {} blocks of {}",
                element.seeds.len(),
                blocks.len(),
                torus.label
            )));
        }
        let f = torus.field();
        for (b, s) in blocks.iter().zip(&element.seeds) {
            let lvl = torus.block_level(b);
            if lvl % s.level() != 0 {
                return Err(Error::NotInTorus(alloc::format!(
                    "seed {s} does not lie in F_(q^{lvl}) for a block of size {}",
                    b.size
                )));
            }
            let e = s.exponent_at(f, lvl)?;
            if !((e * torus.block_order(b)) % f.order(lvl)).is_zero() {
                return Err(Error::NotInTorus(alloc::format!(
                    "seed {s} is not fixed by the block Frobenius of a block of size {}",
                    b.size
                )));
            }
        }
        Ok(DualTorusPair { torus, element })
    }

    /// The identity element of the torus.
    pub fn trivial(torus: TorusDatum) -> Self {
        let seeds = vec![Eigenvalue::one(); torus.blocks().len()];
        DualTorusPair { torus, element: SemisimpleElement { seeds } }
    }

    /// Full coordinate vector at level `l`, a multiple of the common level.
    pub fn coordinates(&self, l: u32) -> Result<Vec<BigUint>> {
        let t = &self.torus;
        let f = t.field();
        let n = f.order(l);
        let q = f.q() % &n;
        let mult = match t.twist() {
            Twist::Standard => q,
            Twist::Unitary => (&n - q) % &n,
        };
        let mut out = vec![BigUint::zero(); t.label.n as usize];
        for (b, s) in t.blocks().iter().zip(&self.element.seeds) {
            let mut e = s.exponent_at(f, l)?;
            for i in 0..b.size as usize {
                out[b.start + i] = e.clone();
                e = (e * &mult) % &n;
            }
        }
        if t.label.split == SplitSign::Minus {
            out = split_flip(out.len()).act(&out, &n);
        }
        Ok(out)
    }
}

fn split_flip(n: usize) -> SignedPerm {
    SignedPerm::flip(n, n - 1)
}

/// Reads the seeds back from a coordinate vector at level `l`.
pub fn seeds_from_coordinates(torus: &TorusDatum, coords: &[BigUint], l: u32) -> SemisimpleElement {
    let f = torus.field();
    let coords = unsplit(torus, coords, l);
    let seeds = torus.blocks().iter().map(|b| Eigenvalue::from_level(f, l, coords[b.start].clone())).collect();
    SemisimpleElement { seeds }
}

fn unsplit(torus: &TorusDatum, coords: &[BigUint], l: u32) -> Vec<BigUint> {
    if torus.label.split == SplitSign::Minus {
        split_flip(coords.len()).act(coords, &torus.field().order(l))
    } else {
        coords.to_vec()
    }
}

/// The action of `w` in the F-centralizer on the element.
pub fn weyl_action(pair: &DualTorusPair, w: &SignedPerm) -> Result<SemisimpleElement> {
    if !in_centralizer(&pair.torus.label, w) {
        return Err(Error::NotInCentralizer);
    }
    let l = pair.torus.common_level();
    let x = pair.coordinates(l)?;
    let y = w.act(&x, &pair.torus.field().order(l));
    Ok(seeds_from_coordinates(&pair.torus, &y, l))
}

/// Frobenius orbit data of one eigenvalue orbit of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitEntry {
    pub key: OrbitKey,
    /// Orbit size under the relevant Frobenius.
    pub h: u32,
    /// For orthogonal and symplectic duals: whether the orbit is closed
    /// under inversion. Always false in type A.
    pub self_inverse: bool,
    pub contains_one: bool,
    pub contains_minus_one: bool,
    /// Block sizes of positive blocks in this orbit.
    pub mu: Partition,
    /// Block sizes of negative blocks in this orbit.
    pub lambda: Partition,
    /// Rank of the centralizer factor attached to the orbit.
    pub nu: u32,
}

/// How an orbit's centralizer factor is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorFamily {
    GL,
    U,
}

impl OrbitEntry {
    /// Family and field exponent of the centralizer factor: the factor is
    /// `GL_nu` or `U_nu` over `F_{q^e}`.
    pub fn factor(&self, ambient: Family) -> (FactorFamily, u32) {
        match ambient {
            Family::GL => (FactorFamily::GL, self.h),
            Family::U if self.h % 2 == 1 => (FactorFamily::U, self.h),
            Family::U => (FactorFamily::GL, self.h),
            _ if self.self_inverse => (FactorFamily::U, self.h / 2),
            _ => (FactorFamily::GL, self.h),
        }
    }

    /// Torus type of the factor obtained by rescaling block sizes.
    pub fn factor_shape(&self, ambient: Family) -> Result<Partition> {
        match ambient {
            Family::GL | Family::U => self.mu.scale_div(self.h),
            _ if self.self_inverse => {
                let half = self.h / 2;
                Ok(self.mu.scale_div(half)?.union(&self.lambda.scale_div(half)?))
            }
            _ => self.mu.scale_div(self.h),
        }
    }

    /// Scales a factor torus part back to an ambient block.
    pub fn ambient_block(&self, ambient: Family, k: u32) -> (BlockKind, u32) {
        match ambient {
            Family::GL | Family::U => (BlockKind::Positive, self.h * k),
            _ if self.self_inverse && k % 2 == 1 => (BlockKind::Negative, self.h / 2 * k),
            _ if self.self_inverse => (BlockKind::Positive, self.h / 2 * k),
            _ => (BlockKind::Positive, self.h * k),
        }
    }
}

/// Orbit key of an eigenvalue as seen by the dual group of `family`.
pub fn orbit_key(family: Family, field: &FieldParam, x: &Eigenvalue) -> OrbitKey {
    match family {
        Family::GL => frobenius_orbit(field, Twist::Standard, x).key(),
        Family::U => frobenius_orbit(field, Twist::Unitary, x).key(),
        _ => paired_orbit_key(field, x),
    }
}

/// Orders of the cyclic factors of `T^F`.
pub fn torus_factor_orders(t: &TorusDatum) -> Vec<BigUint> {
    t.factor_orders()
}

/// Groups the blocks of an element by eigenvalue orbit.
pub fn decompose_by_orbit(pair: &DualTorusPair) -> Result<BTreeMap<OrbitKey, OrbitEntry>> {
    let t = &pair.torus;
    let family = t.kind.family;
    let f = t.field();
    let mut mus: BTreeMap<OrbitKey, (Vec<u32>, Vec<u32>, OrbitEntry)> = BTreeMap::new();
    for (b, s) in t.blocks().iter().zip(&pair.element.seeds) {
        let key = orbit_key(family, f, s);
        let entry = mus.entry(key.clone()).or_insert_with(|| {
            let o = frobenius_orbit(f, t.twist(), &key.0);
            let self_inverse = family.is_orthogonal_like() && o.self_inverse;
            (
                Vec::new(),
                Vec::new(),
                OrbitEntry {
                    key: key.clone(),
                    h: o.size(),
                    self_inverse,
                    contains_one: o.contains_one,
                    contains_minus_one: o.contains_minus_one,
                    mu: Partition::empty(),
                    lambda: Partition::empty(),
                    nu: 0,
                },
            )
        });
        match b.kind {
            BlockKind::Positive => entry.0.push(b.size),
            BlockKind::Negative => entry.1.push(b.size),
        }
    }
    let mut out = BTreeMap::new();
    for (k, (m, l, mut e)) in mus {
        e.mu = Partition::new(m)?;
        e.lambda = Partition::new(l)?;
        let total = e.mu.size() + e.lambda.size();
        e.nu = if e.self_inverse { 2 * total / e.h } else { total / e.h };
        out.insert(k, e);
    }
    Ok(out)
}

/// Rejects elements with eigenvalue 1 or -1 in an orthogonal pair.
pub fn check_no_plus_minus_one(pair: &DualTorusPair) -> Result<()> {
    for e in decompose_by_orbit(pair)?.values() {
        if e.contains_minus_one {
            return Err(Error::HypothesisViolation { orbit: "[-1]".to_string() });
        }
        if e.contains_one {
            return Err(Error::HypothesisViolation { orbit: "[1]".to_string() });
        }
    }
    Ok(())
}

/// Family of the torus obtained by keeping the sub-label `target`.
pub fn sub_family(family: Family, target: &Bipartition) -> Family {
    match family {
        Family::SOEvenPlus | Family::SOEvenMinus => {
            if target.lambda.len() % 2 == 0 {
                Family::SOEvenPlus
            } else {
                Family::SOEvenMinus
            }
        }
        f => f,
    }
}

/// Torus of the smaller group with label `target`.
pub fn sub_torus(torus: &TorusDatum, target: &Bipartition) -> Result<TorusDatum> {
    let fam = sub_family(torus.kind.family, target);
    match torus.label.data {
        ClassData::Part(_) => TorusDatum::type_a(fam, torus.field(), target.mu.clone()),
        ClassData::Bi(_) => TorusDatum::signed(fam, torus.field(), target.clone(), SplitSign::Plus),
    }
}

/// Indices of the blocks of `torus` that carry the sub-torus `target`, in
/// the block order of `target`: for each block of the target, the first
/// unused block of the same kind and size.
pub fn chosen_blocks(torus: &TorusDatum, target: &Bipartition) -> Result<Vec<usize>> {
    if !torus.label.bipartition().contains(target) {
        return Err(Error::InvalidInput(alloc::format!(
            "{target} is not a sub-label of {}",
            torus.label
        )));
    }
    let blocks = torus.blocks();
    let mut used = vec![false; blocks.len()];
    let mut out = Vec::new();
    let wanted = target
        .mu
        .parts()
        .iter()
        .map(|&m| (BlockKind::Positive, m))
        .chain(target.lambda.parts().iter().map(|&l| (BlockKind::Negative, l)));
    for (kind, size) in wanted {
        let i = (0..blocks.len())
            .find(|&i| !used[i] && blocks[i].kind == kind && blocks[i].size == size)
            .expect("containment checked");
        used[i] = true;
        out.push(i);
    }
    Ok(out)
}

/// First coordinate of each chosen block: the seeds of the restriction.
pub fn restriction_key(torus: &TorusDatum, coords: &[BigUint], chosen: &[usize], l: u32) -> Vec<BigUint> {
    let coords = unsplit(torus, coords, l);
    let blocks = torus.blocks();
    chosen.iter().map(|&i| coords[blocks[i].start].clone()).collect()
}

/// `M(t, t')` by enumerating the F-centralizer element by element. The
/// centralizer is found by testing all of `W`.
pub fn m_count_brute(
    pair: &DualTorusPair,
    target: &Bipartition,
    t_prime: &SemisimpleElement,
    bound: u64,
) -> Result<u64> {
    let t = &pair.torus;
    let chosen = chosen_blocks(t, target)?;
    let sub = sub_torus(t, target)?;
    let l = t.common_level().lcm(&sub.common_level());
    let f = t.field();
    let want: Vec<BigUint> =
        t_prime.seeds.iter().map(|s| s.exponent_at(f, l)).collect::<Result<_>>()?;
    let x = pair.coordinates(l)?;
    let n = f.order(l);
    let mut count = 0;
    for w in enumerate_f_centralizer(&t.label, bound)? {
        if restriction_key(t, &w.act(&x, &n), &chosen, l) == want {
            count += 1;
        }
    }
    Ok(count)
}

/// Block class: kind, size and orbit of the seed.
type ClassKey = (BlockKind, u32, OrbitKey);

struct BlockInfo {
    class: ClassKey,
    seed: Eigenvalue,
}

fn block_infos(torus: &TorusDatum, seeds: &[Eigenvalue]) -> Vec<BlockInfo> {
    let f = torus.field();
    torus
        .blocks()
        .iter()
        .zip(seeds)
        .map(|(b, s)| BlockInfo { class: (b.kind, b.size, orbit_key(torus.kind.family, f, s)), seed: s.clone() })
        .collect()
}

/// Number of block automorphisms fixing a seed.
fn block_stabilizer(torus: &TorusDatum, kind: BlockKind, size: u32, seed: &Eigenvalue) -> u64 {
    let f = torus.field();
    let o = frobenius_orbit(f, torus.twist(), seed);
    let h = o.size() as u64;
    match (torus.kind.family.weyl_type(), kind) {
        (WeylType::A, _) => size as u64 / h,
        (_, BlockKind::Positive) if o.self_inverse => 2 * size as u64 / h,
        (_, BlockKind::Positive) => size as u64 / h,
        (_, BlockKind::Negative) => 2 * size as u64 / h,
    }
}

/// Whether every block automorphism fixing the seed has an even number of
/// sign changes.
fn stabilizer_even(torus: &TorusDatum, kind: BlockKind, size: u32, seed: &Eigenvalue) -> bool {
    let o = frobenius_orbit(torus.field(), Twist::Standard, seed);
    match kind {
        BlockKind::Positive => !(o.self_inverse && size % 2 == 1),
        BlockKind::Negative => o.size() % 2 == 0,
    }
}

/// Sign of a block automorphism carrying the class base seed to `seed`.
fn polarity(torus: &TorusDatum, kind: BlockKind, size: u32, base: &Eigenvalue, seed: &Eigenvalue) -> i64 {
    let f = torus.field();
    match kind {
        BlockKind::Positive => {
            if size % 2 == 0 || frobenius_orbit(f, Twist::Standard, base).contains(seed) {
                1
            } else {
                -1
            }
        }
        BlockKind::Negative => {
            let mut y = seed.clone();
            let mut k = 0u32;
            while &y != base {
                y = y.frobenius(f, Twist::Standard);
                k += 1;
            }
            if k % 2 == 0 {
                1
            } else {
                -1
            }
        }
    }
}

/// Elementary symmetric function `e_k` of a list of signs.
fn elementary_symmetric(xs: &[i64], k: usize) -> i64 {
    let mut e = vec![0i64; k + 1];
    e[0] = 1;
    for &x in xs {
        for j in (1..=k).rev() {
            e[j] += e[j - 1] * x;
        }
    }
    e[k]
}

/// `M(t, t')` from the product formula: the stabilizer of `t'` in `W(T')`,
/// times `|W(T'')|`, times binomials of block multiplicities per class. In
/// type D the count is corrected by the signed count of the same set in
/// type B, so only even elements are kept.
pub fn m_count(pair: &DualTorusPair, target: &Bipartition, t_prime: &SemisimpleElement) -> Result<BigUint> {
    let t = &pair.torus;
    let sub = sub_torus(t, target)?;
    DualTorusPair::new(sub.clone(), t_prime.clone())?;
    let src = block_infos(t, &pair.element.seeds);
    let tgt = block_infos(&sub, &t_prime.seeds);
    let comp = t.label.bipartition().difference(target)?;

    let mut classes: BTreeMap<ClassKey, (Vec<&BlockInfo>, Vec<&BlockInfo>)> = BTreeMap::new();
    for b in &src {
        classes.entry(b.class.clone()).or_default().0.push(b);
    }
    for b in &tgt {
        classes.entry(b.class.clone()).or_default().1.push(b);
    }

    let complement_order = match t.kind.family.weyl_type() {
        WeylType::A => comp.mu.z(),
        _ => comp.b_centralizer_order(),
    };
    let mut total = complement_order.clone();
    for ((kind, size, _), (s, g)) in &classes {
        if g.len() > s.len() {
            return Ok(BigUint::zero());
        }
        if g.is_empty() {
            continue;
        }
        let stab = block_stabilizer(t, *kind, *size, &g[0].seed);
        total *= binomial(s.len() as u64, g.len() as u64)
            * factorial(g.len() as u64)
            * BigUint::from(stab).pow(g.len() as u32);
    }
    if t.kind.family.weyl_type() != WeylType::D {
        return Ok(total);
    }

    let mut delta: i64 = if comp.lambda.is_empty() && comp.mu.all_even() {
        i64::try_from(&complement_order).map_err(|_| Error::Unsupported("count overflow".into()))?
    } else {
        0
    };
    for ((kind, size, key), (s, g)) in &classes {
        if g.is_empty() || delta == 0 {
            continue;
        }
        if !stabilizer_even(t, *kind, *size, &g[0].seed) {
            delta = 0;
            continue;
        }
        let base = &key.0;
        let stab = block_stabilizer(t, *kind, *size, &g[0].seed) as i64;
        let pol_src: Vec<i64> = s.iter().map(|b| polarity(t, *kind, *size, base, &b.seed)).collect();
        let pol_tgt: i64 = g.iter().map(|b| polarity(t, *kind, *size, base, &b.seed)).product();
        let b = g.len();
        let fact: i64 = (1..=b as i64).product();
        delta *= fact * stab.pow(b as u32) * pol_tgt * elementary_symmetric(&pol_src, b);
    }
    let sum = num_bigint::BigInt::from(total) + num_bigint::BigInt::from(delta);
    let half: num_bigint::BigInt = sum / 2;
    Ok(half.to_biguint().expect("non-negative count"))
}

/// A restriction class: for each orbit, the sub-label of blocks of that
/// orbit that land in `T'`.
pub type PLabel = Vec<(OrbitKey, Bipartition)>;

/// Representatives of the restriction classes `P(t, T')`, each with a seed
/// list for `T'` built from seeds of `t`.
pub fn restriction_classes(pair: &DualTorusPair, target: &Bipartition) -> Result<Vec<(SemisimpleElement, PLabel)>> {
    let t = &pair.torus;
    chosen_blocks(t, target)?;
    let src = block_infos(t, &pair.element.seeds);
    let wanted: Vec<(BlockKind, u32, usize)> = target
        .mu
        .multiplicities()
        .into_iter()
        .map(|(p, c)| (BlockKind::Positive, p, c))
        .chain(target.lambda.multiplicities().into_iter().map(|(p, c)| (BlockKind::Negative, p, c)))
        .collect();

    // For each (kind, size) group: the orbits holding such blocks, with
    // their counts and a sample seed.
    type Choice = Vec<(OrbitKey, usize, Eigenvalue)>;
    let mut per_group: Vec<Vec<Choice>> = Vec::new();
    for &(kind, size, want) in &wanted {
        let mut orbits: BTreeMap<OrbitKey, (usize, Eigenvalue)> = BTreeMap::new();
        for b in src.iter().filter(|b| b.class.0 == kind && b.class.1 == size) {
            orbits.entry(b.class.2.clone()).or_insert((0, b.seed.clone())).0 += 1;
        }
        let list: Vec<(OrbitKey, usize, Eigenvalue)> = orbits.into_iter().map(|(k, (c, s))| (k, c, s)).collect();
        let mut dists = Vec::new();
        distribute(&list, want, 0, &mut Vec::new(), &mut dists);
        per_group.push(dists);
    }

    let mut out = Vec::new();
    let mut idx = vec![0usize; per_group.len()];
    if per_group.iter().any(|g| g.is_empty()) {
        return Ok(out);
    }
    loop {
        let mut seeds = Vec::new();
        let mut label: BTreeMap<OrbitKey, (Vec<u32>, Vec<u32>)> = BTreeMap::new();
        for (gi, (g, &i)) in per_group.iter().zip(&idx).enumerate() {
            let (kind, size, _) = wanted[gi];
            for (key, c, seed) in &g[i] {
                for _ in 0..*c {
                    seeds.push(seed.clone());
                    let e = label.entry(key.clone()).or_default();
                    match kind {
                        BlockKind::Positive => e.0.push(size),
                        BlockKind::Negative => e.1.push(size),
                    }
                }
            }
        }
        let plabel: PLabel = label
            .into_iter()
            .map(|(k, (m, l))| (k, Bipartition::new(Partition::new(m).unwrap(), Partition::new(l).unwrap())))
            .collect();
        out.push((SemisimpleElement { seeds }, plabel));
        let mut j = 0;
        loop {
            if j == idx.len() {
                return Ok(out);
            }
            idx[j] += 1;
            if idx[j] < per_group[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn distribute(
    list: &[(OrbitKey, usize, Eigenvalue)],
    want: usize,
    i: usize,
    cur: &mut Vec<(OrbitKey, usize, Eigenvalue)>,
    out: &mut Vec<Vec<(OrbitKey, usize, Eigenvalue)>>,
) {
    if i == list.len() {
        if want == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let (k, c, s) = &list[i];
    for x in 0..=(*c).min(want) {
        if x > 0 {
            cur.push((k.clone(), x, s.clone()));
        }
        distribute(list, want - x, i + 1, cur, out);
        if x > 0 {
            cur.pop();
        }
    }
}

/// `|P(t, T')|`: distributions of the blocks of `T'` among the orbits of
/// `t`, respecting the block multiplicities of each orbit.
pub fn p_count(pair: &DualTorusPair, target: &Bipartition) -> Result<u64> {
    Ok(restriction_classes(pair, target)?.len() as u64)
}

/// Number of classes of the restriction set `D` under the elements of the
/// F-centralizer that preserve the coordinates of `T'`, found by brute
/// force.
pub fn d_classes_brute(pair: &DualTorusPair, target: &Bipartition, bound: u64) -> Result<usize> {
    let t = &pair.torus;
    let chosen = chosen_blocks(t, target)?;
    let blocks = t.blocks();
    let mut inside = vec![false; t.label.n as usize];
    for &i in &chosen {
        for j in 0..blocks[i].size as usize {
            inside[blocks[i].start + j] = true;
        }
    }
    let l = t.common_level();
    let n = t.field().order(l);
    let x = pair.coordinates(l)?;
    let cent = enumerate_f_centralizer(&t.label, bound)?;
    // Stabilizers are tested in the unsplit model, where the chosen
    // coordinates are fixed sets.
    let conj = if t.label.split == SplitSign::Minus { Some(split_flip(x.len())) } else { None };
    let preserving: Vec<&SignedPerm> = cent
        .iter()
        .filter(|g| {
            let g2 = match &conj {
                Some(c) => c.compose(g).compose(c),
                None => (*g).clone(),
            };
            (0..g2.len()).all(|i| inside[i] == inside[g2.perm[i]])
        })
        .collect();
    let orbit: Vec<Vec<BigUint>> = cent.iter().map(|w| w.act(&x, &n)).collect();
    let mut keys: Vec<Vec<BigUint>> = orbit.iter().map(|y| restriction_key(t, y, &chosen, l)).collect();
    keys.sort();
    keys.dedup();
    let mut parent: Vec<usize> = (0..keys.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let nx = p[j];
            p[j] = r;
            j = nx;
        }
        r
    }
    for y in &orbit {
        let a = keys.binary_search(&restriction_key(t, y, &chosen, l)).unwrap();
        for g in &preserving {
            let z = g.act(y, &n);
            let b = keys.binary_search(&restriction_key(t, &z, &chosen, l)).unwrap();
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    Ok((0..keys.len()).filter(|&i| find(&mut parent, i) == i).count())
}

/// The constructive F-centralizer, re-exported for the engine.
pub fn centralizer(torus: &TorusDatum, bound: u64) -> Result<Vec<SignedPerm>> {
    centralizer_elements(&torus.label, bound)
}

/// `#{w in W(T)^F : w t = t'}` for two elements of the same torus class,
/// the Deligne-Lusztig inner product within one group.
pub fn same_torus_count(a: &DualTorusPair, b: &DualTorusPair, bound: u64) -> Result<u64> {
    if a.torus.label != b.torus.label {
        return Ok(0);
    }
    let l = a.torus.common_level().lcm(&b.torus.common_level());
    let n = a.torus.field().order(l);
    let x = a.coordinates(l)?;
    let y = b.coordinates(l)?;
    let mut c = 0;
    for w in centralizer(&a.torus, bound)? {
        if w.act(&x, &n) == y {
            c += 1;
        }
    }
    Ok(c)
}
