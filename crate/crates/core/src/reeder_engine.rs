//! Restricted inner products `<R^G_{T,t}, R^H_{S,s}>_H` of Deligne-Lusztig
//! characters for the pairs `GL_{n+1} > GL_n`, `U_{n+1} > U_n` and
//! `SO_{2n+1} > SO^e_{2n}`.
//!
//! The direct route sums over common sub-tori `T'` and over Weyl group
//! actions on both sides. The closed route evaluates a product over
//! eigenvalue orbits. Both must agree; the factorized route lives in
//! [`crate::lusztig_decomposition`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{Bipartition, Partition};
use crate::tori::{
    centralizer, check_no_plus_minus_one, chosen_blocks, decompose_by_orbit, restriction_key, DualTorusPair,
    OrbitEntry, TorusDatum, DEFAULT_BOUND,
};
use crate::weyl::Family;

/// The three restriction problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairFamily {
    GL,
    U,
    SO,
}

impl fmt::Display for PairFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairFamily::GL => "GL",
            PairFamily::U => "U",
            PairFamily::SO => "SO",
        })
    }
}

/// Which computation produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    Direct,
    ClosedForm,
    Factorized,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Direct => "direct",
            Route::ClosedForm => "closed_form",
            Route::Factorized => "factorized",
        })
    }
}

/// One summand of a pairing, labelled for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub label: String,
    pub value: BigRational,
}

/// Result of one route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingReport {
    pub route: Route,
    pub value: BigInt,
    pub contributions: Vec<Contribution>,
}

/// A validated input: `big` lives in the larger group, `small` in the
/// smaller one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairInput {
    pub family: PairFamily,
    pub big: DualTorusPair,
    pub small: DualTorusPair,
}

impl PairInput {
    pub fn new(family: PairFamily, big: DualTorusPair, small: DualTorusPair) -> Result<Self> {
        let (gk, hk) = (&big.torus.kind, &small.torus.kind);
        if gk.field != hk.field {
            return Err(Error::InvalidInput("both groups must be over the same field".into()));
        }
        let ok = match family {
            PairFamily::GL => gk.family == Family::GL && hk.family == Family::GL && gk.n == hk.n + 1,
            PairFamily::U => gk.family == Family::U && hk.family == Family::U && gk.n == hk.n + 1,
            PairFamily::SO => {
                gk.family == Family::SOOdd
                    && matches!(hk.family, Family::SOEvenPlus | Family::SOEvenMinus)
                    && gk.n == hk.n
            }
        };
        if !ok {
            return Err(Error::InvalidInput(format!("{gk} > {hk} is not a {family} restriction pair")));
        }
        if family == PairFamily::SO {
            check_no_plus_minus_one(&big)?;
            check_no_plus_minus_one(&small)?;
        }
        Ok(PairInput { family, big, small })
    }

    /// `(-1)^{rk G + rk H}` with F_q-ranks.
    pub fn group_sign(&self) -> i8 {
        self.big.torus.kind.sign() * self.small.torus.kind.sign()
    }

    /// `(-1)^{rk T + rk S}`.
    pub fn torus_sign(&self) -> i8 {
        self.big.torus.sign() * self.small.torus.sign()
    }
}

/// A common sub-torus `T'` in the direct sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iota {
    pub target: Bipartition,
    /// `C_{mu_S, mu'}` (times `C_{lambda_S, lambda'}`).
    pub weight: BigUint,
    /// `|W(T'')|` for the complement of `T'` in `T`.
    pub complement_order: BigUint,
    pub sign: i8,
}

/// Precomputed data for the direct route. Summands over `iotas` are
/// independent and may be evaluated in parallel.
pub struct DirectPlan {
    input: PairInput,
    level: u32,
    big_orbit: Vec<Vec<BigUint>>,
    small_orbit: Vec<Vec<BigUint>>,
    small_weyl: BigUint,
    iotas: Vec<Iota>,
}

fn sgn(e: usize) -> i8 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

impl DirectPlan {
    pub fn new(input: &PairInput) -> Result<Self> {
        Self::with_bound(input, DEFAULT_BOUND)
    }

    pub fn with_bound(input: &PairInput, bound: u64) -> Result<Self> {
        let (t, s) = (&input.big.torus, &input.small.torus);
        let level = t.common_level().lcm(&s.common_level());
        let f = t.field();
        let modulus = f.order(level);
        let xt = input.big.coordinates(level)?;
        let xs = input.small.coordinates(level)?;
        let big_orbit = centralizer(t, bound)?.iter().map(|w| w.act(&xt, &modulus)).collect();
        let small_orbit = centralizer(s, bound)?.iter().map(|w| w.act(&xs, &modulus)).collect();
        let (bt, bs) = (t.label.bipartition(), s.label.bipartition());
        let mut iotas = Vec::new();
        let common_mu = bt.mu.intersection(&bs.mu);
        let common_lambda = bt.lambda.intersection(&bs.lambda);
        let ts = input.torus_sign();
        for mu in common_mu.sub_multisets() {
            for lambda in common_lambda.sub_multisets() {
                let target = Bipartition::new(mu.clone(), lambda.clone());
                let comp = bt.difference(&target)?;
                let m = s.label.n - target.size();
                let (complement_order, weight, rk) = match input.family {
                    PairFamily::GL => (comp.mu.z(), bs.mu.c_coeff(&mu), 1usize),
                    PairFamily::U => (comp.mu.z(), bs.mu.c_coeff(&mu), m as usize),
                    PairFamily::SO => (
                        comp.b_centralizer_order(),
                        bs.mu.c_coeff(&mu) * bs.lambda.c_coeff(&lambda),
                        bs.lambda.len() - lambda.len(),
                    ),
                };
                iotas.push(Iota { target, weight, complement_order, sign: ts * sgn(rk) });
            }
        }
        Ok(DirectPlan {
            input: input.clone(),
            level,
            big_orbit,
            small_orbit,
            small_weyl: s.weyl_order(),
            iotas,
        })
    }

    pub fn iotas(&self) -> &[Iota] {
        &self.iotas
    }

    /// The summand for one sub-torus.
    pub fn evaluate(&self, i: usize) -> Result<BigRational> {
        let iota = &self.iotas[i];
        let (t, s) = (&self.input.big.torus, &self.input.small.torus);
        let ct = key_counts(t, &self.big_orbit, &iota.target, self.level)?;
        let cs = key_counts(s, &self.small_orbit, &iota.target, self.level)?;
        let mut acc = BigUint::zero();
        for (k, a) in &ct {
            if let Some(b) = cs.get(k) {
                acc += BigUint::from(*a) * BigUint::from(*b);
            }
        }
        let num = BigInt::from(acc * &iota.weight) * BigInt::from(iota.sign);
        let den = BigInt::from(&iota.complement_order * &self.small_weyl);
        Ok(BigRational::new(num, den))
    }

    /// Sums the summands into a report.
    pub fn finish(&self, values: Vec<BigRational>) -> Result<PairingReport> {
        let total: BigRational = values.iter().cloned().sum();
        if !total.is_integer() {
            return Err(Error::NonIntegral(format!("direct pairing {total}")));
        }
        let contributions = self
            .iotas
            .iter()
            .zip(values)
            .map(|(i, v)| Contribution { label: format!("T'={}", label_of(self.input.family, &i.target)), value: v })
            .collect();
        Ok(PairingReport { route: Route::Direct, value: total.to_integer(), contributions })
    }
}

fn label_of(family: PairFamily, b: &Bipartition) -> String {
    match family {
        PairFamily::SO => format!("{b}"),
        _ => format!("{}", b.mu),
    }
}

fn key_counts(
    torus: &TorusDatum,
    orbit: &[Vec<BigUint>],
    target: &Bipartition,
    level: u32,
) -> Result<BTreeMap<Vec<BigUint>, u64>> {
    let chosen = chosen_blocks(torus, target)?;
    let mut out = BTreeMap::new();
    for y in orbit {
        *out.entry(restriction_key(torus, y, &chosen, level)).or_insert(0) += 1;
    }
    Ok(out)
}

/// The direct route, evaluated serially.
pub fn reeder_direct(input: &PairInput) -> Result<PairingReport> {
    let plan = DirectPlan::new(input)?;
    let values = (0..plan.iotas().len()).map(|i| plan.evaluate(i)).collect::<Result<Vec<_>>>()?;
    plan.finish(values)
}

/// Exponent convention for negative cycles in the orthogonal closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NegativeCycleSign {
    /// `(-1)^{number of negative cycles kept}`.
    Length,
    /// `(-1)^{total size of negative cycles kept}`.
    Size,
}

/// Orbits of both elements, keyed by orbit, over the union of supports.
pub fn orbit_union(input: &PairInput) -> Result<BTreeMap<crate::eigenvalue_orbits::OrbitKey, (Option<OrbitEntry>, Option<OrbitEntry>)>> {
    let dt = decompose_by_orbit(&input.big)?;
    let ds = decompose_by_orbit(&input.small)?;
    let mut out: BTreeMap<_, (Option<OrbitEntry>, Option<OrbitEntry>)> = BTreeMap::new();
    for (k, e) in dt {
        out.entry(k).or_default().0 = Some(e);
    }
    for (k, e) in ds {
        out.entry(k).or_default().1 = Some(e);
    }
    Ok(out)
}

fn entry_rank(family: PairFamily, e: &Option<OrbitEntry>) -> usize {
    match e {
        None => 0,
        Some(e) => match family {
            PairFamily::U => e.mu.even_parts(),
            _ => e.mu.len(),
        },
    }
}

fn mu_of(e: &Option<OrbitEntry>) -> Partition {
    e.as_ref().map(|x| x.mu.clone()).unwrap_or_default()
}

fn lambda_of(e: &Option<OrbitEntry>) -> Partition {
    e.as_ref().map(|x| x.lambda.clone()).unwrap_or_default()
}

/// The closed route: a product over the union of eigenvalue orbits.
pub fn reeder_closed_form(input: &PairInput) -> Result<PairingReport> {
    reeder_closed_form_with(input, NegativeCycleSign::Length)
}

/// The closed route with a chosen sign convention for negative cycles.
pub fn reeder_closed_form_with(input: &PairInput, neg: NegativeCycleSign) -> Result<PairingReport> {
    let family = input.family;
    let mut value = BigInt::one();
    let mut contributions = Vec::new();
    for (key, (et, es)) in orbit_union(input)? {
        let h = et.as_ref().or(es.as_ref()).map(|e| e.h).expect("orbit present on one side");
        let self_inverse = et.as_ref().or(es.as_ref()).map(|e| e.self_inverse).unwrap_or(false);
        let (mt, ms) = (mu_of(&et), mu_of(&es));
        let (lt, ls) = (lambda_of(&et), lambda_of(&es));
        let base = entry_rank(family, &et) + entry_rank(family, &es);
        let mut sum = BigInt::zero();
        for mu in mt.intersection(&ms).sub_multisets() {
            for lambda in lt.intersection(&ls).sub_multisets() {
                let c = mt.c_coeff(&mu) * ms.c_coeff(&mu) * lt.c_coeff(&lambda) * ls.c_coeff(&lambda);
                let (exp, shape) = match family {
                    PairFamily::GL => (base, mu.scale_div(h)?),
                    PairFamily::U => (base + ms.size() as usize + mu.size() as usize, mu.scale_div(h)?),
                    PairFamily::SO => {
                        let e = match neg {
                            NegativeCycleSign::Length => lambda.len(),
                            NegativeCycleSign::Size => lambda.size() as usize,
                        };
                        let shape = if self_inverse {
                            mu.scale_div(h / 2)?.union(&lambda.scale_div(h / 2)?)
                        } else {
                            mu.scale_div(h)?
                        };
                        (base + e, shape)
                    }
                };
                sum += BigInt::from(c * shape.z()) * BigInt::from(sgn(exp));
            }
        }
        contributions.push(Contribution { label: format!("{key}"), value: BigRational::from_integer(sum.clone()) });
        value *= sum;
    }
    match family {
        PairFamily::GL => value = -value,
        PairFamily::U => {}
        PairFamily::SO => value *= BigInt::from(input.group_sign()),
    }
    Ok(PairingReport { route: Route::ClosedForm, value, contributions })
}

/// Same-group Deligne-Lusztig inner product `<R_{T,t}, R_{T',t'}>_G`.
pub fn dl_inner_product_same_group(a: &DualTorusPair, b: &DualTorusPair) -> Result<BigUint> {
    if a.torus.kind != b.torus.kind {
        return Err(Error::InvalidInput("characters of different groups".into()));
    }
    Ok(BigUint::from(crate::tori::same_torus_count(a, b, DEFAULT_BOUND)?))
}
