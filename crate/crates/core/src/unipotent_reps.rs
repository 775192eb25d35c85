//! Irreducible characters as combinations of Deligne-Lusztig characters,
//! and the Gross-Prasad multiplicities built from them.
//!
//! Unipotent characters of `GL_n` and `U_n` come from symmetric group
//! characters. A member of a Lusztig series is glued from unipotent
//! characters of the centralizer factors. The multiplicity of a pair is
//! computed twice: by expanding both characters through the restriction
//! pairing, and as a product of per-orbit multiplicities of unipotent
//! characters of the factors.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::eigenvalue_orbits::{frobenius_orbit, Eigenvalue, FieldParam, OrbitKey, Twist};
use crate::error::{Error, Result};
use crate::lusztig_decomposition::{padded_element, padding_shape, Padding};
use crate::partitions::{partitions_of, Bipartition, Partition};
use crate::reeder_engine::{reeder_direct, PairFamily, PairInput};
use crate::tori::{orbit_key, same_torus_count, DualTorusPair, FactorFamily, OrbitEntry, SemisimpleElement, TorusDatum, DEFAULT_BOUND};
use crate::weyl::{BlockKind, FClassLabel, Family, GroupKind, SplitSign};

/// `chi_lambda(mu)` by the Murnaghan-Nakayama rule.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::InvalidInput(format!("{lambda} and {mu} have different sizes")));
    }
    Ok(mn(lambda.parts(), mu.parts()))
}

fn mn(lambda: &[u32], mu: &[u32]) -> i64 {
    let Some((&r, rest)) = mu.split_first() else {
        return 1;
    };
    let k = lambda.len();
    let beta: Vec<i64> = (0..k).map(|i| lambda[i] as i64 + (k - 1 - i) as i64).collect();
    let r = r as i64;
    let mut total = 0;
    for i in 0..k {
        let b = beta[i] - r;
        if b < 0 || beta.contains(&b) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > b && x < beta[i]).count();
        let mut nb = beta.clone();
        nb[i] = b;
        nb.sort_unstable_by(|x, y| y.cmp(x));
        let nl: Vec<u32> =
            (0..k).map(|j| (nb[j] - (k - 1 - j) as i64) as u32).filter(|&p| p > 0).collect();
        let s = if between % 2 == 0 { 1 } else { -1 };
        total += s * mn(&nl, rest);
    }
    total
}

/// A rational combination of Deligne-Lusztig characters `R_{T,t}` of one
/// group. Terms are sorted by torus label and seeds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualCharacter {
    pub group: GroupKind,
    pub terms: Vec<(DualTorusPair, BigRational)>,
}

impl VirtualCharacter {
    fn from_terms(group: GroupKind, mut terms: Vec<(DualTorusPair, BigRational)>) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by(|a, b| (&a.0.torus.label, &a.0.element).cmp(&(&b.0.torus.label, &b.0.element)));
        VirtualCharacter { group, terms }
    }

    pub fn negate(&self) -> Self {
        VirtualCharacter {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(p, c)| (p.clone(), -c.clone())).collect(),
        }
    }
}

/// `|G^F|_{p'}`.
pub fn p_prime_order(kind: &GroupKind) -> BigUint {
    let q = kind.field.q();
    let n = kind.n;
    let prod = |f: &dyn Fn(u32) -> BigUint, range: core::ops::RangeInclusive<u32>| -> BigUint {
        range.map(f).fold(BigUint::one(), |a, b| a * b)
    };
    match kind.family {
        Family::GL => prod(&|i| q.pow(i) - 1u32, 1..=n),
        Family::U => prod(&|i| if i % 2 == 0 { q.pow(i) - 1u32 } else { q.pow(i) + 1u32 }, 1..=n),
        Family::Sp | Family::SOOdd => prod(&|i| q.pow(2 * i) - 1u32, 1..=n),
        Family::SOEvenPlus | Family::SOEvenMinus if n == 0 => BigUint::one(),
        Family::SOEvenPlus => (q.pow(n) - 1u32) * prod(&|i| q.pow(2 * i) - 1u32, 1..=n - 1),
        Family::SOEvenMinus => (q.pow(n) + 1u32) * prod(&|i| q.pow(2 * i) - 1u32, 1..=n - 1),
    }
}

/// Degree of `R_{T,t}`: `eps_G eps_T |G|_{p'} / |T^F|`.
pub fn dl_degree(pair: &DualTorusPair) -> BigRational {
    let t = &pair.torus;
    let s = BigInt::from(t.kind.sign() * t.sign());
    BigRational::new(BigInt::from(p_prime_order(&t.kind)) * s, BigInt::from(t.order()))
}

/// Degree of a virtual character; fails unless it is an integer.
pub fn degree(vc: &VirtualCharacter) -> Result<BigInt> {
    let d: BigRational = vc.terms.iter().map(|(p, c)| c * dl_degree(p)).sum();
    if !d.is_integer() {
        return Err(Error::NonIntegral(format!("degree {d}")));
    }
    Ok(d.to_integer())
}

/// `<a, b>_G` from the orthogonality of Deligne-Lusztig characters.
pub fn inner_product(a: &VirtualCharacter, b: &VirtualCharacter) -> Result<BigRational> {
    if a.group != b.group {
        return Err(Error::InvalidInput("characters of different groups".into()));
    }
    let mut acc = BigRational::zero();
    for (pa, ca) in &a.terms {
        for (pb, cb) in &b.terms {
            if pa.torus.label != pb.torus.label {
                continue;
            }
            let n = same_torus_count(pa, pb, DEFAULT_BOUND)?;
            if n > 0 {
                acc += ca * cb * BigRational::from_integer(BigInt::from(n));
            }
        }
    }
    Ok(acc)
}

/// The unipotent character of `GL_n` or `U_n` labelled by `lambda`.
pub fn unipotent_expansion(kind: &GroupKind, lambda: &Partition) -> Result<VirtualCharacter> {
    if !matches!(kind.family, Family::GL | Family::U) {
        return Err(Error::Unsupported(format!("unipotent expansion for {kind}")));
    }
    if lambda.size() != kind.n {
        return Err(Error::InvalidInput(format!("{lambda} is not a partition of {}", kind.n)));
    }
    let mut terms = Vec::new();
    for mu in partitions_of(kind.n) {
        let chi = mn_character(lambda, &mu)?;
        let c = BigRational::new(BigInt::from(chi), BigInt::from(mu.z()));
        let t = TorusDatum::type_a(kind.family, &kind.field, mu)?;
        terms.push((DualTorusPair::trivial(t), c));
    }
    let vc = VirtualCharacter::from_terms(kind.clone(), terms);
    if degree(&vc)?.is_negative() {
        return Ok(vc.negate());
    }
    Ok(vc)
}

/// One orbit of a Lusztig series datum with the unipotent label of its
/// centralizer factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesOrbit {
    pub seed: Eigenvalue,
    pub nu: u32,
    pub lambda: Partition,
}

/// A semisimple class of the dual group together with a unipotent
/// character of each centralizer factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesDatum {
    pub group: GroupKind,
    pub orbits: Vec<SeriesOrbit>,
}

/// Orbit data of a series orbit as seen by the ambient dual group.
fn series_entry(group: &GroupKind, o: &SeriesOrbit) -> Result<OrbitEntry> {
    let f = &group.field;
    let ambient = group.family;
    let twist = if ambient == Family::U { Twist::Unitary } else { Twist::Standard };
    let orb = frobenius_orbit(f, twist, &o.seed);
    let self_inverse = ambient.is_orthogonal_like() && orb.self_inverse;
    if ambient.is_orthogonal_like() && (orb.contains_one || orb.contains_minus_one) {
        return Err(Error::HypothesisViolation { orbit: orb.describe() });
    }
    if o.lambda.size() != o.nu {
        return Err(Error::InvalidInput(format!("{} is not a partition of nu = {}", o.lambda, o.nu)));
    }
    Ok(OrbitEntry {
        key: orbit_key(ambient, f, &o.seed),
        h: orb.size(),
        self_inverse,
        contains_one: orb.contains_one,
        contains_minus_one: orb.contains_minus_one,
        mu: Partition::empty(),
        lambda: Partition::empty(),
        nu: o.nu,
    })
}

impl SeriesDatum {
    /// Orbit entries keyed by orbit, checking that the ranks add up.
    pub fn entries(&self) -> Result<BTreeMap<OrbitKey, (OrbitEntry, SeriesOrbit)>> {
        let mut out = BTreeMap::new();
        let mut rank = 0;
        for o in &self.orbits {
            let e = series_entry(&self.group, o)?;
            rank += if e.self_inverse { e.nu * e.h / 2 } else { e.nu * e.h };
            if out.insert(e.key.clone(), (e, o.clone())).is_some() {
                return Err(Error::InvalidInput("an orbit is listed twice".into()));
            }
        }
        if rank != self.group.n {
            return Err(Error::InvalidInput(format!(
                "orbits fill rank {rank} but {} has rank {}",
                self.group, self.group.n
            )));
        }
        Ok(out)
    }
}

/// The factor group `GL_nu` or `U_nu` over `F_Q` of an orbit.
pub fn factor_group(ambient: &GroupKind, e: &OrbitEntry, nu: u32) -> GroupKind {
    let (fam, exp) = e.factor(ambient.family);
    let family = match fam {
        FactorFamily::GL => Family::GL,
        FactorFamily::U => Family::U,
    };
    GroupKind::new(family, nu, ambient.field.power(exp))
}

fn sign_of(group: &GroupKind) -> BigInt {
    BigInt::from(group.sign())
}

/// Builds the torus of the ambient group from per-orbit factor tori.
fn glue(group: &GroupKind, pieces: &[(&OrbitEntry, &SeriesOrbit, &Partition)]) -> Result<DualTorusPair> {
    let mut blocks: Vec<(BlockKind, u32, OrbitKey, Eigenvalue)> = Vec::new();
    for (e, o, kappa) in pieces {
        for &k in kappa.parts() {
            let (kind, size) = e.ambient_block(group.family, k);
            blocks.push((kind, size, e.key.clone(), o.seed.clone()));
        }
    }
    blocks.sort_by(|a, b| (a.0, core::cmp::Reverse(a.1), &a.2).cmp(&(b.0, core::cmp::Reverse(b.1), &b.2)));
    let mu = Partition::new(blocks.iter().filter(|b| b.0 == BlockKind::Positive).map(|b| b.1).collect())?;
    let lambda = Partition::new(blocks.iter().filter(|b| b.0 == BlockKind::Negative).map(|b| b.1).collect())?;
    let label = match group.family {
        Family::GL | Family::U => FClassLabel::type_a(group.family, mu)?,
        _ => FClassLabel::signed(group.family, Bipartition::new(mu, lambda), SplitSign::Plus)?,
    };
    let torus = TorusDatum::new(group.clone(), label)?;
    DualTorusPair::new(torus, SemisimpleElement::new(blocks.into_iter().map(|b| b.3).collect()))
}

/// The member of the Lusztig series of the datum whose Jordan
/// decomposition is the product of the unipotent labels.
pub fn series_member(series: &SeriesDatum) -> Result<VirtualCharacter> {
    let group = &series.group;
    let entries = series.entries()?;
    let mut per_orbit: Vec<(&OrbitEntry, &SeriesOrbit, Vec<(Partition, BigRational)>)> = Vec::new();
    for (e, o) in entries.values() {
        let fg = factor_group(group, e, o.nu);
        let vc = unipotent_expansion(&fg, &o.lambda)?;
        let eps = BigRational::from_integer(sign_of(&fg));
        let terms = vc
            .terms
            .into_iter()
            .map(|(p, c)| (p.torus.label.bipartition().mu, c * &eps))
            .collect();
        per_orbit.push((e, o, terms));
    }
    let eps_g = BigRational::from_integer(sign_of(group));
    let mut terms = Vec::new();
    let mut idx = vec![0usize; per_orbit.len()];
    loop {
        let mut coeff = eps_g.clone();
        let mut pieces = Vec::new();
        for (j, (e, o, list)) in per_orbit.iter().enumerate() {
            let (kappa, c) = &list[idx[j]];
            coeff *= c;
            pieces.push((*e, *o, kappa));
        }
        terms.push((glue(group, &pieces)?, coeff));
        let mut j = 0;
        loop {
            if j == idx.len() {
                return Ok(VirtualCharacter::from_terms(group.clone(), terms));
            }
            idx[j] += 1;
            if idx[j] < per_orbit[j].2.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// A regular element of a Coxeter torus of `GL_k` over `F_Q` avoiding 1.
/// `variant` selects among the available Frobenius orbits.
pub fn coxeter_seed(field: &FieldParam, k: u32, variant: u64) -> Result<Eigenvalue> {
    let n = field.order(k);
    let mut found: Vec<Eigenvalue> = Vec::new();
    let mut seen: BTreeSet<OrbitKey> = BTreeSet::new();
    let mut e = BigUint::one();
    let cap = 64;
    while e < n && found.len() < cap {
        let x = Eigenvalue::new(field, k, e.clone())?;
        let o = frobenius_orbit(field, Twist::Standard, &x);
        if x.level() == k && o.size() == k && !o.contains_one && seen.insert(o.key()) {
            found.push(x);
            if found.len() as u64 > variant {
                break;
            }
        }
        e += 1u32;
    }
    if found.is_empty() {
        return Err(Error::Unsupported(format!("no regular element of F_({}^{k}) avoids 1", field)));
    }
    Ok(found[(variant as usize) % found.len()].clone())
}

/// `<pi, I(tau x sigma)>_{GL_n}` for characters `pi` of `GL_n` and `sigma`
/// of `GL_m` with `m <= n` (arguments are swapped otherwise), where `tau`
/// is `eps R_{T,theta}` on `GL_{n+1-m}` with `T` a Coxeter torus and
/// `theta` regular avoiding 1.
pub fn gl_multiplicity(pi: &VirtualCharacter, sigma: &VirtualCharacter, tau_variant: u64) -> Result<BigInt> {
    if pi.group.family != Family::GL || sigma.group.family != Family::GL {
        return Err(Error::InvalidInput("gl_multiplicity needs two general linear groups".into()));
    }
    if pi.group.field != sigma.group.field {
        return Err(Error::InvalidInput("both groups must be over the same field".into()));
    }
    let (pi, sigma) = if pi.group.n < sigma.group.n { (sigma, pi) } else { (pi, sigma) };
    let field = &pi.group.field;
    let k = pi.group.n + 1 - sigma.group.n;
    let theta = coxeter_seed(field, k, tau_variant)?;
    let eps_tau = if (k + 1) % 2 == 0 { 1 } else { -1 };
    let big_group = GroupKind::new(Family::GL, pi.group.n + 1, field.clone());
    let mut acc = BigRational::zero();
    for (s, cs) in &sigma.terms {
        let shape = s.torus.label.bipartition().mu.union(&Partition::new(vec![k])?);
        let torus = TorusDatum::type_a(Family::GL, field, shape)?;
        let big = place_extra_block(&torus, s, k, &theta)?;
        debug_assert_eq!(big.torus.kind, big_group);
        for (t, ct) in &pi.terms {
            let input = PairInput::new(PairFamily::GL, big.clone(), t.clone())?;
            let v = reeder_direct(&input)?.value;
            acc += cs * ct * BigRational::from_integer(v);
        }
    }
    if !acc.is_integer() {
        return Err(Error::NonIntegral(format!("GL multiplicity {acc}")));
    }
    Ok(acc.to_integer() * BigInt::from(eps_tau))
}

/// Places the seeds of `s` and one extra block of size `k` with seed
/// `theta` into `torus`.
fn place_extra_block(torus: &TorusDatum, s: &DualTorusPair, k: u32, theta: &Eigenvalue) -> Result<DualTorusPair> {
    let mut pool: Vec<(u32, Eigenvalue)> =
        s.torus.blocks().iter().zip(&s.element.seeds).map(|(b, x)| (b.size, x.clone())).collect();
    let mut extra = Some(theta.clone());
    let mut seeds = Vec::new();
    for b in torus.blocks() {
        if let Some(i) = pool.iter().position(|(sz, _)| *sz == b.size) {
            seeds.push(pool.remove(i).1);
        } else if b.size == k && extra.is_some() {
            seeds.push(extra.take().unwrap());
        } else {
            return Err(Error::InvalidInput("block layout mismatch".into()));
        }
    }
    DualTorusPair::new(torus.clone(), SemisimpleElement::new(seeds))
}

/// One row of the per-orbit factor table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorRow {
    pub key: OrbitKey,
    pub h: u32,
    pub nu_big: u32,
    pub nu_small: u32,
    pub factor: GroupKind,
    /// The signed factor multiplicity before taking absolute values.
    pub value: BigInt,
}

/// Both sides of the multiplicity identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub factors: Vec<FactorRow>,
    pub agree: bool,
}

/// Per-orbit multiplicity: `eps <pi_small x tau, pi_large>` inside
/// `G' > H'` with `tau` the padding character, `eps` its sign.
fn orbit_factor(
    fg_large: &GroupKind,
    lambda_large: &Partition,
    lambda_small: &Partition,
    nu_small: u32,
    theta_seed: u64,
) -> Result<BigInt> {
    let fam = fg_large.family;
    let field = &fg_large.field;
    let large = unipotent_expansion(fg_large, lambda_large)?;
    let small = unipotent_expansion(&GroupKind::new(fam, nu_small, field.clone()), lambda_small)?;
    let d = fg_large.n + 1 - nu_small;
    let ff = if fam == Family::GL { FactorFamily::GL } else { FactorFamily::U };
    let padding = padding_shape(ff, d, Padding::Default);
    let pad_group = GroupKind::new(fam, d, field.clone());
    let pad_torus = TorusDatum::type_a(fam, field, padding.clone())?;
    let eps = BigInt::from(pad_group.sign() * pad_torus.sign());
    let mut acc = BigRational::zero();
    for (s, cs) in &small.terms {
        let big = padded_element(fam, field, &s.torus.label.bipartition().mu, &padding, theta_seed)?;
        for (t, ct) in &large.terms {
            let pf = if fam == Family::GL { PairFamily::GL } else { PairFamily::U };
            let v = reeder_direct(&PairInput::new(pf, big.clone(), t.clone())?)?.value;
            acc += cs * ct * BigRational::from_integer(v);
        }
    }
    if !acc.is_integer() {
        return Err(Error::NonIntegral(format!("factor multiplicity {acc}")));
    }
    Ok(acc.to_integer() * eps)
}

fn pair_family(big: &GroupKind, small: &GroupKind) -> Result<PairFamily> {
    match (big.family, small.family) {
        (Family::GL, Family::GL) if big.n == small.n + 1 => Ok(PairFamily::GL),
        (Family::U, Family::U) if big.n == small.n + 1 => Ok(PairFamily::U),
        (Family::SOOdd, Family::SOEvenPlus | Family::SOEvenMinus) if big.n == small.n => Ok(PairFamily::SO),
        _ => Err(Error::InvalidInput(format!("{big} > {small} is not a basic restriction pair"))),
    }
}

/// The multiplicity of `sigma` in the restriction of `pi`, computed from
/// the pairing expansion and from the product over orbits.
pub fn ggp_multiplicity(pi: &SeriesDatum, sigma: &SeriesDatum, theta_seed: u64) -> Result<MultiplicityReport> {
    if pi.group.field != sigma.group.field {
        return Err(Error::InvalidInput("both groups must be over the same field".into()));
    }
    let pf = pair_family(&pi.group, &sigma.group)?;
    let vp = series_member(pi)?;
    let vs = series_member(sigma)?;
    let mut lhs = BigRational::zero();
    for (t, ct) in &vp.terms {
        for (s, cs) in &vs.terms {
            let v = reeder_direct(&PairInput::new(pf, t.clone(), s.clone())?)?.value;
            lhs += ct * cs * BigRational::from_integer(v);
        }
    }
    if !lhs.is_integer() {
        return Err(Error::NonIntegral(format!("multiplicity {lhs}")));
    }
    let lhs = lhs.to_integer();

    let ep = pi.entries()?;
    let es = sigma.entries()?;
    let keys: BTreeSet<OrbitKey> = ep.keys().chain(es.keys()).cloned().collect();
    let mut rhs = BigInt::one();
    let mut factors = Vec::new();
    for key in keys {
        let (nb, lb) = ep.get(&key).map_or((0, Partition::empty()), |(_, o)| (o.nu, o.lambda.clone()));
        let (ns, ls) = es.get(&key).map_or((0, Partition::empty()), |(_, o)| (o.nu, o.lambda.clone()));
        let e = ep.get(&key).or(es.get(&key)).map(|x| &x.0).expect("present");
        let (nl, ll, nsm, lsm) = if nb >= ns { (nb, lb, ns, ls) } else { (ns, ls, nb, lb) };
        let fg = factor_group(&pi.group, e, nl);
        let v = orbit_factor(&fg, &ll, &lsm, nsm, theta_seed)?;
        rhs *= v.abs();
        factors.push(FactorRow { key, h: e.h, nu_big: nb, nu_small: ns, factor: fg, value: v });
    }
    let agree = lhs == rhs && !lhs.is_negative();
    Ok(MultiplicityReport { lhs, rhs, factors, agree })
}

/// The basic-case pair produced by the corank reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicReduction {
    pub corank: u32,
    /// `I(tau x sigma)` on the group one larger than `pi`'s.
    pub sigma_plus: SeriesDatum,
    /// Orbit of the cuspidal `tau`, absent for corank one.
    pub fresh_orbit: Option<OrbitKey>,
}

/// Dimension of the natural module.
fn natural_dim(g: &GroupKind) -> u32 {
    match g.family {
        Family::SOOdd => 2 * g.n + 1,
        Family::Sp | Family::SOEvenPlus | Family::SOEvenMinus => 2 * g.n,
        _ => g.n,
    }
}

/// Replaces a pair of odd corank greater than one by a basic pair: `sigma`
/// is induced with a cuspidal character on a fresh orbit up to the group
/// one larger than `pi`'s. Corank one is returned unchanged.
pub fn reduce_to_basic(pi: &SeriesDatum, sigma: &SeriesDatum) -> Result<BasicReduction> {
    let (dp, ds) = (natural_dim(&pi.group), natural_dim(&sigma.group));
    if dp <= ds {
        return Err(Error::InvalidInput("the first group must be the larger one".into()));
    }
    let corank = dp - ds;
    if corank % 2 == 0 {
        return Err(Error::Unsupported(format!("even corank {corank} (Fourier-Jacobi case)")));
    }
    if corank == 1 {
        return Ok(BasicReduction { corank, sigma_plus: sigma.clone(), fresh_orbit: None });
    }
    let l = corank.div_ceil(2);
    let field = &sigma.group.field;
    let used: BTreeSet<OrbitKey> = pi.entries()?.into_keys().chain(sigma.entries()?.into_keys()).collect();
    let (group, level, twist) = match (pi.group.family, sigma.group.family) {
        (Family::U, Family::U) => (GroupKind::new(Family::U, pi.group.n + 1, field.clone()), 2 * l, Twist::Unitary),
        (Family::SOEvenPlus | Family::SOEvenMinus, Family::SOOdd) => {
            (GroupKind::new(Family::SOOdd, pi.group.n, field.clone()), l, Twist::Standard)
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "corank reduction from {} > {} does not land in a basic pair handled here",
                pi.group, sigma.group
            )))
        }
    };
    let n = field.order(level);
    let mut e = BigUint::one();
    let seed = loop {
        if e >= n {
            return Err(Error::Unsupported(format!("no fresh regular orbit of size {level} over F_{field}")));
        }
        let x = Eigenvalue::new(field, level, e.clone())?;
        let o = frobenius_orbit(field, twist, &x);
        let key = orbit_key(group.family, field, &x);
        let ok = x.level() == level
            && o.size() == level
            && !o.contains_one
            && !o.contains_minus_one
            && !(group.family == Family::SOOdd && o.self_inverse)
            && !used.contains(&key);
        if ok {
            break x;
        }
        e += 1u32;
    };
    let mut orbits = sigma.orbits.clone();
    orbits.push(SeriesOrbit { seed: seed.clone(), nu: 1, lambda: Partition::new(vec![1])? });
    let sigma_plus = SeriesDatum { group: group.clone(), orbits };
    sigma_plus.entries()?;
    Ok(BasicReduction { corank, sigma_plus, fresh_orbit: Some(orbit_key(group.family, field, &seed)) })
}

/// Multiplicity for any odd corank: reduce, then evaluate the basic pair.
pub fn multiplicity_any_corank(
    pi: &SeriesDatum,
    sigma: &SeriesDatum,
    theta_seed: u64,
) -> Result<(BasicReduction, MultiplicityReport)> {
    let red = reduce_to_basic(pi, sigma)?;
    let report = if red.corank == 1 {
        ggp_multiplicity(pi, sigma, theta_seed)?
    } else {
        ggp_multiplicity(&red.sigma_plus, pi, theta_seed)?
    };
    Ok((red, report))
}

/// Candidate orbits for series data of `group`: one seed per orbit found
/// at the given levels, with the rank each copy of the orbit fills.
fn candidate_orbits(group: &GroupKind, levels: &[u32]) -> Vec<(Eigenvalue, u32)> {
    let f = &group.field;
    let mut seen: BTreeSet<OrbitKey> = BTreeSet::new();
    let mut out = Vec::new();
    for &lv in levels {
        let n = f.order(lv);
        let mut e = BigUint::zero();
        while e < n {
            let Ok(x) = Eigenvalue::new(f, lv, e.clone()) else { break };
            e += 1u32;
            let probe = SeriesOrbit { seed: x.clone(), nu: 1, lambda: Partition::new(vec![1]).expect("positive") };
            let Ok(en) = series_entry(group, &probe) else { continue };
            if !seen.insert(en.key.clone()) {
                continue;
            }
            let w = if en.self_inverse { en.h / 2 } else { en.h };
            if w >= 1 && w <= group.n {
                out.push((x, w));
            }
        }
    }
    out
}

/// Series data of `group` built from orbits of eigenvalues at the given
/// levels, at most `limit` of them, in a deterministic order.
pub fn enumerate_series(group: &GroupKind, levels: &[u32], limit: usize) -> Vec<SeriesDatum> {
    let cands = candidate_orbits(group, levels);
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, u32)> = Vec::new();
    fill(group, &cands, 0, group.n, &mut chosen, &mut out, limit);
    out
}

fn fill(
    group: &GroupKind,
    cands: &[(Eigenvalue, u32)],
    from: usize,
    rest: u32,
    chosen: &mut Vec<(usize, u32)>,
    out: &mut Vec<SeriesDatum>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if rest == 0 {
        let mut labels: Vec<Vec<Partition>> = vec![Vec::new()];
        for &(_, nu) in chosen.iter() {
            labels = labels
                .into_iter()
                .flat_map(|v| {
                    partitions_of(nu).into_iter().map(move |l| {
                        let mut w = v.clone();
                        w.push(l);
                        w
                    })
                })
                .collect();
        }
        for ls in labels {
            if out.len() >= limit {
                return;
            }
            let orbits = chosen
                .iter()
                .zip(ls)
                .map(|(&(i, nu), lambda)| SeriesOrbit { seed: cands[i].0.clone(), nu, lambda })
                .collect();
            let s = SeriesDatum { group: group.clone(), orbits };
            if series_member(&s).is_ok() {
                out.push(s);
            }
        }
        return;
    }
    for i in from..cands.len() {
        let w = cands[i].1;
        let mut nu = 1;
        while nu * w <= rest {
            chosen.push((i, nu));
            fill(group, cands, i + 1, rest - nu * w, chosen, out, limit);
            chosen.pop();
            nu += 1;
        }
    }
}
