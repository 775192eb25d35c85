//! Factorization of a pairing through the centralizers of the semisimple
//! parts.
//!
//! For every eigenvalue orbit `[a]` in the union of the supports of `t` and
//! `s`, the side with the larger multiplicity contributes a torus `S'` of a
//! group `H'` of rank `n[a]`; the other side, padded by a synthetic torus
//! `T''` carrying a character `theta` in general position, gives a torus `T'`
//! of `G'` of rank `n[a] + 1`. Both groups are general linear or unitary over
//! `F_Q` with `Q` a power of `q`. The pairing equals a signed product of the
//! factor pairings.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::eigenvalue_orbits::{Eigenvalue, FieldParam, OrbitKey};
use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::reeder_engine::{orbit_union, reeder_direct, Contribution, PairFamily, PairInput, PairingReport, Route};
use crate::tori::{decompose_by_orbit, DualTorusPair, FactorFamily, OrbitEntry, SemisimpleElement, TorusDatum};
use crate::weyl::{Family, GroupKind};

/// One factor `G^*_{[a]}(t)` of the centralizer of a semisimple element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerFactor {
    pub key: OrbitKey,
    pub h: u32,
    pub self_inverse: bool,
    pub family: FactorFamily,
    /// The field `F_Q` of the factor.
    pub field: FieldParam,
    pub nu: u32,
    /// Type of the torus of the factor containing the element.
    pub shape: Partition,
}

impl CentralizerFactor {
    /// The factor as a group.
    pub fn group(&self) -> GroupKind {
        let fam = match self.family {
            FactorFamily::GL => Family::GL,
            FactorFamily::U => Family::U,
        };
        GroupKind::new(fam, self.nu, self.field.clone())
    }

    /// `(-1)^{F_q-rank}` of the factor.
    pub fn fq_sign(&self) -> i8 {
        let r = match self.family {
            FactorFamily::GL => self.nu,
            FactorFamily::U => self.nu / 2,
        };
        if r % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

fn factor_of(ambient: Family, base: &FieldParam, e: &OrbitEntry) -> Result<CentralizerFactor> {
    let (family, exp) = e.factor(ambient);
    Ok(CentralizerFactor {
        key: e.key.clone(),
        h: e.h,
        self_inverse: e.self_inverse,
        family,
        field: base.power(exp),
        nu: e.nu,
        shape: e.factor_shape(ambient)?,
    })
}

/// The centralizer of `t` as a product of general linear and unitary
/// factors, one per eigenvalue orbit.
pub fn centralizer_decomposition(pair: &DualTorusPair) -> Result<Vec<CentralizerFactor>> {
    let fam = pair.torus.kind.family;
    decompose_by_orbit(pair)?.values().map(|e| factor_of(fam, pair.torus.field(), e)).collect()
}

/// Shape of the padding torus `T''`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Padding {
    /// One block of size `d` for general linear factors, `d` blocks of size
    /// one for unitary factors.
    #[default]
    Default,
    /// The other extreme: `d` blocks of size one for general linear
    /// factors, one block of size `d` for unitary factors.
    Alternate,
}

/// Choices that must not change the value of the factorized route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct FactorOptions {
    pub padding: Padding,
    /// Selects which non-trivial seeds the padding carries.
    pub theta_seed: u64,
}

/// The data `(G', H', T', S', theta)` attached to one orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimedDatum {
    pub key: OrbitKey,
    pub h: u32,
    pub nu_t: u32,
    pub nu_s: u32,
    /// True when `t` has the larger multiplicity, so `S'` comes from `t`.
    pub large_is_t: bool,
    pub family: FactorFamily,
    pub field: FieldParam,
    pub padding: Partition,
    /// `(-1)^{rk T''}` with the rank over `F_Q`.
    pub eps_a: i8,
    /// `T'` with element `1` on the small side and `theta` on the padding.
    pub big: DualTorusPair,
    /// `S'` with the trivial element.
    pub small: DualTorusPair,
}

impl PrimedDatum {
    pub fn n_a(&self) -> u32 {
        self.nu_t.max(self.nu_s)
    }

    pub fn input(&self) -> Result<PairInput> {
        let pf = match self.family {
            FactorFamily::GL => PairFamily::GL,
            FactorFamily::U => PairFamily::U,
        };
        PairInput::new(pf, self.big.clone(), self.small.clone())
    }
}

fn factor_family_name(f: FactorFamily) -> Family {
    match f {
        FactorFamily::GL => Family::GL,
        FactorFamily::U => Family::U,
    }
}

/// The padding partition of size `d`.
pub fn padding_shape(family: FactorFamily, d: u32, choice: Padding) -> Partition {
    let single = Partition::new(vec![d]).expect("positive");
    let ones = Partition::new(vec![1; d as usize]).expect("positive");
    match (family, choice) {
        (FactorFamily::GL, Padding::Default) | (FactorFamily::U, Padding::Alternate) => single,
        _ => ones,
    }
}

/// Builds the torus `shape` of `family` over `field` whose first blocks of
/// each size (as many as `trivial` has) carry `1`, the others a non-trivial
/// seed.
pub fn padded_element(
    family: Family,
    field: &FieldParam,
    trivial: &Partition,
    padding: &Partition,
    theta_seed: u64,
) -> Result<DualTorusPair> {
    let shape = trivial.union(padding);
    let torus = TorusDatum::type_a(family, field, shape)?;
    let mut used: BTreeMap<u32, usize> = BTreeMap::new();
    let mut seeds = Vec::new();
    let mut pad_index = 0u64;
    for b in torus.blocks() {
        let c = used.entry(b.size).or_insert(0);
        if *c < trivial.count(b.size) {
            seeds.push(Eigenvalue::one());
        } else {
            let order = torus.block_order(&b);
            let k: u64 = (&order - 1u32).try_into().unwrap_or(u64::MAX).max(1);
            seeds.push(torus.block_seed(&b, 1 + (theta_seed + pad_index) % k));
            pad_index += 1;
        }
        *c += 1;
    }
    DualTorusPair::new(torus, SemisimpleElement::new(seeds))
}

/// The primed data for every orbit of the union of supports.
pub fn primed_data(input: &PairInput, opts: FactorOptions) -> Result<Vec<PrimedDatum>> {
    let ambient = input.big.torus.kind.family;
    let base = input.big.torus.field().clone();
    let mut out = Vec::new();
    for (key, (et, es)) in orbit_union(input)? {
        let e = et.as_ref().or(es.as_ref()).expect("present");
        let fac = factor_of(ambient, &base, e)?;
        let nu_t = et.as_ref().map_or(0, |x| x.nu);
        let nu_s = es.as_ref().map_or(0, |x| x.nu);
        let large_is_t = nu_t >= nu_s;
        let shape = |x: &Option<OrbitEntry>| -> Result<Partition> {
            x.as_ref().map_or(Ok(Partition::empty()), |y| y.factor_shape(ambient))
        };
        let (large, small) = if large_is_t { (shape(&et)?, shape(&es)?) } else { (shape(&es)?, shape(&et)?) };
        let d = nu_t.abs_diff(nu_s) + 1;
        let padding = padding_shape(fac.family, d, opts.padding);
        let eps_a = match fac.family {
            FactorFamily::GL => sign(padding.len()),
            FactorFamily::U => sign(padding.even_parts()),
        };
        let fam = factor_family_name(fac.family);
        let big = padded_element(fam, &fac.field, &small, &padding, opts.theta_seed)?;
        let small_pair = DualTorusPair::trivial(TorusDatum::type_a(fam, &fac.field, large)?);
        out.push(PrimedDatum {
            key,
            h: e.h,
            nu_t,
            nu_s,
            large_is_t,
            family: fac.family,
            field: fac.field,
            padding,
            eps_a,
            big,
            small: small_pair,
        });
    }
    Ok(out)
}

/// The primed datum of a single orbit of the union of supports.
pub fn build_primed_data(input: &PairInput, key: &OrbitKey, opts: FactorOptions) -> Result<PrimedDatum> {
    primed_data(input, opts)?
        .into_iter()
        .find(|d| &d.key == key)
        .ok_or_else(|| Error::InvalidInput(format!("{key} lies in neither support")))
}

/// `eps_ts` and the padding sign of every orbit.
pub fn signs(input: &PairInput, opts: FactorOptions) -> Result<(i8, BTreeMap<OrbitKey, i8>)> {
    let data = primed_data(input, opts)?;
    let ledger = sign_ledger(input, &data);
    Ok((ledger.eps_ts, data.into_iter().map(|d| (d.key, d.eps_a)).collect()))
}

fn sign(e: usize) -> i8 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Global signs relating the pairing to the product of factor pairings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignLedger {
    /// Sign derived from rank bookkeeping with `F_Q`-rank padding signs.
    pub eps_ts: i8,
    /// Product of the padding signs `eps_a`.
    pub eps_a_product: i8,
    /// The alternative convention: `eps_ts` built from the count of
    /// even-size orbits, padding signs `(-1)^{#[a]+1}`.
    pub alt_eps_ts: i8,
    pub alt_eps_a_product: i8,
}

/// Sign bookkeeping for the given primed data.
pub fn sign_ledger(input: &PairInput, data: &[PrimedDatum]) -> SignLedger {
    let mut eps_ts: i8 = 1;
    let mut alt_a = 0usize;
    let mut alt_b = 0usize;
    for d in data {
        let n_a = d.n_a();
        let c = match input.family {
            PairFamily::GL => -1,
            PairFamily::U if d.h % 2 == 0 => -1,
            PairFamily::U => sign((d.nu_s + n_a) as usize),
            PairFamily::SO => match d.family {
                FactorFamily::GL => -1,
                FactorFamily::U => sign(n_a as usize),
            },
        };
        eps_ts *= c;
        if d.h % 2 == 0 {
            alt_a += 1;
        }
        if d.nu_t >= d.nu_s && (d.nu_t + d.nu_s) % 2 == 1 {
            alt_b += 1;
        }
    }
    let alt_eps_ts = match input.family {
        PairFamily::GL => {
            eps_ts = -eps_ts;
            eps_ts
        }
        PairFamily::U => sign(alt_a + alt_b),
        PairFamily::SO => {
            eps_ts *= input.group_sign();
            sign(alt_a) * input.group_sign()
        }
    };
    let eps_a_product = data.iter().map(|d| d.eps_a).product();
    let alt_eps_a_product = data.iter().map(|d| sign(d.h as usize + 1)).product();
    SignLedger { eps_ts, eps_a_product, alt_eps_ts, alt_eps_a_product }
}

/// Output of the factorized route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizedReport {
    pub report: PairingReport,
    pub data: Vec<PrimedDatum>,
    pub factor_values: Vec<BigInt>,
    pub signs: SignLedger,
    /// Value under the alternative sign convention.
    pub alt_value: BigInt,
}

/// The factorized route.
pub fn factorized_pairing(input: &PairInput, opts: FactorOptions) -> Result<FactorizedReport> {
    let data = primed_data(input, opts)?;
    let signs = sign_ledger(input, &data);
    let mut prod = BigInt::one();
    let mut factor_values = Vec::new();
    let mut contributions = Vec::new();
    for d in &data {
        let v = reeder_direct(&d.input()?)?.value;
        prod *= &v * BigInt::from(d.eps_a);
        contributions.push(Contribution {
            label: format!("{} over F_{}: eps_a={}", d.key, d.field, d.eps_a),
            value: BigRational::from_integer(v.clone()),
        });
        factor_values.push(v);
    }
    if data.is_empty() {
        return Err(Error::InvalidInput("no eigenvalue orbits".into()));
    }
    let value = &prod * BigInt::from(signs.eps_ts);
    let raw: BigInt = factor_values.iter().product();
    let alt_value = raw * BigInt::from(signs.alt_eps_ts * signs.alt_eps_a_product);
    Ok(FactorizedReport {
        report: PairingReport { route: Route::Factorized, value, contributions },
        data,
        factor_values,
        signs,
        alt_value,
    })
}
