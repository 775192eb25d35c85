//! Self-test families: every closed formula of the core crate against an
//! independent enumeration or a second route.

use std::collections::BTreeSet;

use ggp_core::eigenvalue_orbits::{FieldParam, OrbitKey};
use ggp_core::lusztig_decomposition::{factorized_pairing, FactorOptions, Padding};
use ggp_core::partitions::{partitions_of, Bipartition, Partition};
use ggp_core::reeder_engine::{reeder_closed_form, reeder_direct, PairFamily, PairInput};
use ggp_core::tori::{
    check_no_plus_minus_one, chosen_blocks, d_classes_brute, decompose_by_orbit, m_count, m_count_brute, p_count, same_torus_count, sub_torus,
    weyl_action, DualTorusPair, SemisimpleElement, TorusDatum, DEFAULT_BOUND,
};
use ggp_core::unipotent_reps::{
    degree, enumerate_series, ggp_multiplicity, gl_multiplicity, inner_product, unipotent_expansion,
};
use ggp_core::weyl::{
    centralizer_elements, enumerate_f_centralizer, f_centralizer_order, f_classes, weyl_order, ClassData, Family,
    GroupKind,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;

/// Largest rank bound accepted by the suite.
pub const MAX_RANK: u32 = 4;

/// Default rank bound.
pub const DEFAULT_RANK: u32 = 3;

/// Enumeration limit handed to the Weyl group enumerators.
const BOUND: u64 = 1 << 20;

/// How far the suite reaches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    /// Rank `n` of the pair families `G_{n+1} > G_n` and `SO_{2n+1} >
    /// SO_{2n}`; the other families scale from it.
    pub rank: u32,
    pub fields: Vec<u64>,
    /// Cap on sampled elements per torus-class family and rank.
    pub samples: usize,
}

impl OracleBounds {
    pub fn new(rank: u32) -> Result<Self, CliError> {
        if rank == 0 || rank > MAX_RANK {
            return Err(CliError::Job(format!("oracle bound {rank} outside 1..={MAX_RANK}")));
        }
        Ok(OracleBounds { rank, fields: vec![3, 5], samples: 240 })
    }
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds::new(DEFAULT_RANK).expect("default bound is valid")
    }
}

/// Pass and fail counts of one invariant family.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FamilyResult {
    pub name: String,
    pub checks: usize,
    pub failed: usize,
    /// The first few failures.
    pub failures: Vec<String>,
}

impl FamilyResult {
    fn new(name: &str) -> Self {
        FamilyResult { name: name.into(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checks > 0
    }

    fn absorb(&mut self, outcomes: Vec<Result<(), String>>) {
        for o in outcomes {
            self.checks += 1;
            if let Err(m) = o {
                self.failed += 1;
                if self.failures.len() < 5 {
                    self.failures.push(m);
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub families: Vec<FamilyResult>,
    pub all_pass: bool,
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(q: u64) -> FieldParam {
    FieldParam::new(q).expect("odd prime power")
}

pub fn tori(family: Family, n: u32, q: &FieldParam) -> Vec<TorusDatum> {
    f_classes(family, n)
        .into_iter()
        .map(|l| TorusDatum::new(GroupKind::new(family, n, q.clone()), l).expect("valid class"))
        .collect()
}

/// Elements of `t` whose block seeds are the `j`-th powers of the block
/// generators for `j` in `alphabet`.
pub fn torus_elements(t: &TorusDatum, alphabet: &[u64]) -> Vec<DualTorusPair> {
    let mut out = vec![Vec::new()];
    for b in t.blocks() {
        out = out
            .into_iter()
            .flat_map(|v: Vec<_>| {
                alphabet.iter().map(move |&j| {
                    let mut w = v.clone();
                    w.push(t.block_seed(&b, j));
                    w
                })
            })
            .collect();
    }
    out.into_iter().filter_map(|s| DualTorusPair::new(t.clone(), SemisimpleElement::new(s)).ok()).collect()
}

/// At most `cap` items spread evenly over `v`.
fn spread<T: Clone>(v: Vec<T>, cap: usize) -> Vec<T> {
    if v.len() <= cap {
        return v;
    }
    (0..cap).map(|i| v[i * v.len() / cap].clone()).collect()
}

/// Centralizer orders against enumeration, `S_n` and twisted `S_n` up to
/// `a_max`, `B_n` and both `D_n` up to `bd_max`.
pub fn centralizer_orders(a_max: u32, bd_max: u32) -> FamilyResult {
    let mut r = FamilyResult::new("weyl_centralizer_orders");
    let mut cases = Vec::new();
    for f in [Family::GL, Family::U] {
        for n in 1..=a_max {
            cases.extend(f_classes(f, n));
        }
    }
    for f in [Family::SOOdd, Family::SOEvenPlus, Family::SOEvenMinus] {
        for n in 1..=bd_max {
            cases.extend(f_classes(f, n));
        }
    }
    r.absorb(
        cases
            .par_iter()
            .map(|l| {
                let e = enumerate_f_centralizer(l, BOUND).map_err(|e| e.to_string())?;
                let want = f_centralizer_order(l);
                check(BigUint::from(e.len()) == want, || format!("{} {l}: enumerated {} formula {want}", l.family, e.len()))
            })
            .collect(),
    );
    r
}

/// `sum |W| / |C(w)|` over the F-classes equals `|W|`.
pub fn class_equation(a_max: u32, bd_max: u32) -> FamilyResult {
    let mut r = FamilyResult::new("weyl_class_equation");
    let mut out = Vec::new();
    for (f, top) in [
        (Family::GL, a_max),
        (Family::U, a_max),
        (Family::SOOdd, bd_max),
        (Family::SOEvenPlus, bd_max),
        (Family::SOEvenMinus, bd_max),
    ] {
        for n in 1..=top {
            let w = weyl_order(f.weyl_type(), n);
            let total: BigRational = f_classes(f, n)
                .iter()
                .map(|l| BigRational::new(BigInt::from(w.clone()), BigInt::from(f_centralizer_order(l))))
                .sum();
            out.push(check(total == BigRational::from_integer(BigInt::from(w.clone())), || {
                format!("{f} n={n}: classes fill {total} of {w}")
            }));
        }
    }
    r.absorb(out);
    r
}

fn targets(t: &TorusDatum) -> Vec<Bipartition> {
    let bi = t.label.bipartition();
    let mut out = Vec::new();
    for mu in bi.mu.sub_multisets() {
        for lambda in bi.lambda.sub_multisets() {
            if matches!(t.label.data, ClassData::Part(_)) && !lambda.is_empty() {
                continue;
            }
            out.push(Bipartition::new(mu.clone(), lambda));
        }
    }
    out
}

const COUNT_FAMILIES: [Family; 5] = [Family::GL, Family::U, Family::Sp, Family::SOEvenPlus, Family::SOEvenMinus];

/// Restrictions of `w t` to `T'` over the F-centralizer.
fn restriction_set(pair: &DualTorusPair, target: &Bipartition) -> Result<Vec<SemisimpleElement>, String> {
    let chosen = chosen_blocks(&pair.torus, target).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for w in centralizer_elements(&pair.torus.label, BOUND).map_err(|e| e.to_string())? {
        let s = weyl_action(pair, &w).map_err(|e| e.to_string())?;
        out.push(SemisimpleElement::new(chosen.iter().map(|&i| s.seeds[i].clone()).collect()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn count_cases(max_rank: u32) -> Vec<(DualTorusPair, Bipartition)> {
    let q = field(3);
    let mut cases = Vec::new();
    for f in COUNT_FAMILIES {
        for n in 1..=max_rank {
            for t in tori(f, n, &q) {
                for pair in torus_elements(&t, &[1, 2]) {
                    for target in targets(&t) {
                        cases.push((pair.clone(), target));
                    }
                }
            }
        }
    }
    cases
}

/// `M(t, t')` from the closed count against enumeration of the
/// F-centralizer, exhaustive over targets and restrictions.
pub fn m_counts(max_rank: u32) -> FamilyResult {
    let mut r = FamilyResult::new("m_count");
    let outcomes: Vec<Vec<Result<(), String>>> = count_cases(max_rank)
        .par_iter()
        .map(|(pair, target)| {
            let mut out = Vec::new();
            let mut cands = match restriction_set(pair, target) {
                Ok(c) => c,
                Err(e) => return vec![Err(e)],
            };
            if let Ok(sub) = sub_torus(&pair.torus, target) {
                cands.push(DualTorusPair::trivial(sub).element);
            }
            for tp in cands {
                let fast = m_count(pair, target, &tp);
                let slow = m_count_brute(pair, target, &tp, BOUND);
                out.push(match (fast, slow) {
                    (Ok(a), Ok(b)) => check(a == BigUint::from(b), || {
                        format!("{} {} T'={target}: formula {a} enumeration {b}", pair.torus.kind, pair.torus.label)
                    }),
                    (a, b) => Err(format!("{:?} {:?}", a.err(), b.err())),
                });
            }
            out
        })
        .collect();
    r.absorb(outcomes.into_iter().flatten().collect());
    r
}

/// `|P(t, T')|` against the number of classes of the restriction set.
pub fn bijections(max_rank: u32) -> FamilyResult {
    let mut r = FamilyResult::new("restriction_bijection");
    r.absorb(
        count_cases(max_rank)
            .par_iter()
            .map(|(pair, target)| {
                let p = p_count(pair, target).map_err(|e| e.to_string())?;
                let d = d_classes_brute(pair, target, BOUND).map_err(|e| e.to_string())?;
                check(p as usize == d, || format!("{} {} T'={target}: |P|={p} classes={d}", pair.torus.kind, pair.torus.label))
            })
            .collect(),
    );
    r
}

/// All torus-class pairs of a restriction problem with rank `n` for the
/// smaller group's partner, and elements drawn from small alphabets.
pub fn pair_inputs(pf: PairFamily, n: u32, q: &FieldParam, cap: usize) -> Vec<PairInput> {
    // Orthogonal pairs lose every element with eigenvalue 1 or -1, so they
    // draw from wider alphabets.
    let (alpha_t, alpha_s): (&[u64], &[u64]) = match (pf, n) {
        (PairFamily::SO, 1 | 2) => (&[1, 2, 3, 4, 5, 6, 7], &[1, 2, 3, 4, 5, 6, 7]),
        (PairFamily::SO, _) => (&[1, 2, 3, 4, 5], &[1, 2, 3]),
        (_, 1) => (&[0, 1, 2, 3, 4, 5], &[0, 1, 2, 3, 4, 5]),
        (_, 2) => (&[0, 1, 2, 3], &[0, 1, 2, 3]),
        _ => (&[0, 1, 2], &[0, 1, 2]),
    };
    let usable = |p: &DualTorusPair| pf != PairFamily::SO || check_no_plus_minus_one(p).is_ok();
    let mut pairs = Vec::new();
    let bigs_smalls: Vec<(TorusDatum, TorusDatum)> = match pf {
        PairFamily::GL | PairFamily::U => {
            let f = if pf == PairFamily::GL { Family::GL } else { Family::U };
            let mut v = Vec::new();
            for t in tori(f, n + 1, q) {
                for s in tori(f, n, q) {
                    v.push((t.clone(), s));
                }
            }
            v
        }
        PairFamily::SO => {
            let mut v = Vec::new();
            for t in tori(Family::SOOdd, n, q) {
                for f in [Family::SOEvenPlus, Family::SOEvenMinus] {
                    for s in tori(f, n, q) {
                        v.push((t.clone(), s));
                    }
                }
            }
            v
        }
    };
    for (t, s) in &bigs_smalls {
        let mut bs = torus_elements(s, alpha_s);
        bs.retain(usable);
        bs.sort_by(|a, b| a.element.cmp(&b.element));
        bs.dedup();
        let mut bts = torus_elements(t, alpha_t);
        bts.retain(usable);
        bts.sort_by(|a, b| a.element.cmp(&b.element));
        bts.dedup();
        for bt in bts {
            for b in &bs {
                if let Ok(input) = PairInput::new(pf, bt.clone(), b.clone()) {
                    pairs.push(input);
                }
            }
        }
    }
    // Keep every torus-class pair represented before thinning.
    let mut seen = BTreeSet::new();
    let mut head = Vec::new();
    let mut tail = Vec::new();
    for p in pairs {
        if seen.insert((p.big.torus.label.to_string(), p.small.torus.label.to_string())) {
            head.push(p);
        } else {
            tail.push(p);
        }
    }
    let rest = cap.saturating_sub(head.len());
    head.extend(spread(tail, rest));
    head
}

fn describe(input: &PairInput) -> String {
    format!(
        "{} T={} t={:?} > {} S={} s={:?}",
        input.big.torus.kind,
        input.big.torus.label,
        input.big.element.seeds.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        input.small.torus.kind,
        input.small.torus.label,
        input.small.element.seeds.iter().map(|e| e.to_string()).collect::<Vec<_>>()
    )
}

/// Direct, closed and factorized routes agree exactly.
pub fn routes(name: &str, pf: PairFamily, ranks: &[u32], fields: &[u64], cap: usize) -> FamilyResult {
    let mut r = FamilyResult::new(name);
    for &q in fields {
        let q = field(q);
        for &n in ranks {
            let inputs = pair_inputs(pf, n, &q, cap);
            r.absorb(
                inputs
                    .par_iter()
                    .map(|input| {
                        let d = reeder_direct(input).map_err(|e| e.to_string())?.value;
                        let c = reeder_closed_form(input).map_err(|e| e.to_string())?.value;
                        let f = factorized_pairing(input, FactorOptions::default()).map_err(|e| e.to_string())?;
                        check(d == c && d == f.report.value, || {
                            format!("{}: direct {d} closed {c} factorized {}", describe(input), f.report.value)
                        })
                    })
                    .collect(),
            );
        }
    }
    r
}

/// Orthonormality and positive integral degrees of unipotent characters,
/// and the Steinberg degree of `GL_2`.
pub fn unipotent_orthonormality(max_n: u32, fields: &[u64]) -> FamilyResult {
    let mut r = FamilyResult::new("unipotent_orthonormality");
    let mut out = Vec::new();
    for &qq in fields {
        let q = field(qq);
        for f in [Family::GL, Family::U] {
            for n in 1..=max_n {
                let g = GroupKind::new(f, n, q.clone());
                let ps = partitions_of(n);
                let vs: Vec<_> = ps.iter().map(|l| unipotent_expansion(&g, l)).collect();
                for (i, a) in vs.iter().enumerate() {
                    let Ok(a) = a else {
                        out.push(Err(format!("{g} {}: expansion failed", ps[i])));
                        continue;
                    };
                    out.push(match degree(a) {
                        Ok(d) => check(d > BigInt::zero(), || format!("{g} {}: degree {d}", ps[i])),
                        Err(e) => Err(format!("{g} {}: {e}", ps[i])),
                    });
                    for (j, b) in vs.iter().enumerate() {
                        let Ok(b) = b else { continue };
                        let want = if i == j { BigRational::one() } else { BigRational::zero() };
                        let got = inner_product(a, b).map_err(|e| e.to_string());
                        out.push(check(got.as_ref() == Ok(&want), || format!("{g} <{}, {}> = {got:?}", ps[i], ps[j])));
                    }
                }
            }
        }
        let gl2 = GroupKind::new(Family::GL, 2, q.clone());
        let st = unipotent_expansion(&gl2, &Partition::new(vec![1, 1]).expect("partition")).and_then(|v| degree(&v));
        out.push(check(st == Ok(BigInt::from(qq)), || format!("Steinberg degree of {gl2}: {st:?}")));
    }
    r.absorb(out);
    r
}

/// Which multiplicity-identity cases to visit.
#[derive(Clone, Debug)]
pub struct MultiplicityPlan {
    pub fields: Vec<u64>,
    /// Cap on series per group for the unitary families.
    pub unitary_series: usize,
    /// Cap on series per group for the orthogonal families.
    pub orthogonal_series: usize,
    pub max_rank: u32,
}

/// Counts of one multiplicity sweep, split by pair family.
#[derive(Clone, Debug, Default)]
pub struct MultiplicityCounts {
    pub unitary: usize,
    pub orthogonal: usize,
    pub shared: usize,
    pub disjoint: usize,
}

/// LHS equals the product of per-orbit factors, and both are
/// non-negative.
pub fn multiplicity_identity(plan: &MultiplicityPlan) -> (FamilyResult, MultiplicityCounts) {
    let mut r = FamilyResult::new("multiplicity_identity");
    let mut counts = MultiplicityCounts::default();
    let mut jobs = Vec::new();
    for &qq in &plan.fields {
        let q = field(qq);
        for n in 1..=plan.max_rank.min(2) {
            let (b, s) = (GroupKind::new(Family::U, n + 1, q.clone()), GroupKind::new(Family::U, n, q.clone()));
            jobs.push((b, s, vec![1, 2], plan.unitary_series, false));
        }
        if plan.max_rank >= 2 {
            for f in [Family::SOEvenPlus, Family::SOEvenMinus] {
                let (b, s) = (GroupKind::new(Family::SOOdd, 2, q.clone()), GroupKind::new(f, 2, q.clone()));
                jobs.push((b, s, vec![2, 4], plan.orthogonal_series, true));
            }
        }
    }
    for (b, s, levels, cap, orth) in jobs {
        let ps = enumerate_series(&b, &levels, cap);
        let ss = enumerate_series(&s, &levels, cap);
        let cases: Vec<_> = ps.iter().flat_map(|p| ss.iter().map(move |t| (p, t))).collect();
        let outcomes: Vec<(Result<(), String>, bool)> = cases
            .par_iter()
            .map(|(p, t)| {
                let keys = |x: &ggp_core::unipotent_reps::SeriesDatum| -> BTreeSet<OrbitKey> {
                    x.entries().map(|e| e.into_keys().collect()).unwrap_or_default()
                };
                let shared = !keys(p).is_disjoint(&keys(t));
                let res = match ggp_multiplicity(p, t, 0) {
                    Ok(rep) => check(rep.agree, || format!("{b} > {s}: {:?} {:?}: lhs {} rhs {}", p.orbits, t.orbits, rep.lhs, rep.rhs)),
                    Err(e) => Err(format!("{b} > {s}: {e}")),
                };
                (res, shared)
            })
            .collect();
        for (_, shared) in &outcomes {
            if orth {
                counts.orthogonal += 1;
            } else {
                counts.unitary += 1;
            }
            if *shared {
                counts.shared += 1;
            } else {
                counts.disjoint += 1;
            }
        }
        r.absorb(outcomes.into_iter().map(|x| x.0).collect());
    }
    (r, counts)
}

/// Independence of the synthetic choices: the GL multiplicity under two
/// cuspidal seeds, and the factorized route under two paddings and two
/// padding characters.
pub fn independence(fields: &[u64], max_rank: u32, cap: usize) -> FamilyResult {
    let mut r = FamilyResult::new("synthetic_independence");
    let mut out = Vec::new();
    for &qq in fields {
        let q = field(qq);
        for n in 0..=max_rank.min(2) {
            for m in 0..=n {
                let gn = GroupKind::new(Family::GL, n, q.clone());
                let gm = GroupKind::new(Family::GL, m, q.clone());
                for l in partitions_of(n) {
                    for k in partitions_of(m) {
                        let pi = unipotent_expansion(&gn, &l);
                        let sigma = unipotent_expansion(&gm, &k);
                        let (Ok(pi), Ok(sigma)) = (pi, sigma) else {
                            out.push(Err(format!("expansion failed for {l} or {k}")));
                            continue;
                        };
                        let a = gl_multiplicity(&pi, &sigma, 0);
                        let b = gl_multiplicity(&pi, &sigma, 1);
                        out.push(check(a.is_ok() && a == b, || format!("GL_{n} {l} x GL_{m} {k}: {a:?} vs {b:?}")));
                    }
                }
            }
        }
        for pf in [PairFamily::GL, PairFamily::U, PairFamily::SO] {
            for n in 1..=max_rank.min(2) {
                let inputs = pair_inputs(pf, n, &q, cap);
                out.extend(
                    inputs
                        .par_iter()
                        .map(|input| {
                            let mut vals = Vec::new();
                            for padding in [Padding::Default, Padding::Alternate] {
                                for theta_seed in [0, 1] {
                                    let f = factorized_pairing(input, FactorOptions { padding, theta_seed })
                                        .map_err(|e| e.to_string())?;
                                    vals.push(f.report.value);
                                }
                            }
                            check(vals.windows(2).all(|w| w[0] == w[1]), || format!("{}: {vals:?}", describe(input)))
                        })
                        .collect::<Vec<_>>(),
                );
            }
        }
    }
    r.absorb(out);
    r
}

/// Whether an element has trivial stabilizer in `W(T)^F`.
pub fn is_regular(pair: &DualTorusPair) -> bool {
    same_torus_count(pair, pair, DEFAULT_BOUND) == Ok(1)
}

/// Whether the two elements share no eigenvalue orbit.
pub fn disjoint_supports(input: &PairInput) -> bool {
    match (decompose_by_orbit(&input.big), decompose_by_orbit(&input.small)) {
        (Ok(a), Ok(b)) => a.keys().all(|k| !b.contains_key(k)),
        _ => false,
    }
}

/// `eps_G eps_T eps_H eps_S` times the pairing: the multiplicity of one
/// irreducible in the other when both elements are regular.
pub fn normalized_value(input: &PairInput, value: &BigInt) -> BigInt {
    value * BigInt::from(input.group_sign() * input.torus_sign())
}

/// Regular pairs with disjoint supports have multiplicity one. Also
/// returns how many pairs each pair family contributed.
pub fn regular_disjoint(fields: &[u64], max_rank: u32, cap: usize) -> (FamilyResult, Vec<(PairFamily, usize)>) {
    let mut r = FamilyResult::new("regular_disjoint_multiplicity_one");
    let mut per_family = Vec::new();
    for pf in [PairFamily::GL, PairFamily::U, PairFamily::SO] {
        let mut count = 0;
        for &qq in fields {
            let q = field(qq);
            for n in 1..=max_rank.min(2) {
                let inputs: Vec<_> = pair_inputs(pf, n, &q, usize::MAX)
                    .into_iter()
                    .filter(|i| is_regular(&i.big) && is_regular(&i.small) && disjoint_supports(i))
                    .collect();
                let inputs = spread(inputs, cap);
                count += inputs.len();
                r.absorb(
                    inputs
                        .par_iter()
                        .map(|input| {
                            let v = reeder_direct(input).map_err(|e| e.to_string())?.value;
                            let m = normalized_value(input, &v);
                            check(m == BigInt::one(), || format!("{}: pairing {v}", describe(input)))
                        })
                        .collect::<Vec<_>>(),
                );
            }
        }
        per_family.push((pf, count));
    }
    (r, per_family)
}

/// Runs every family within `b`.
pub fn run_all(b: &OracleBounds) -> OracleSummary {
    let r = b.rank;
    let mut families = vec![
        centralizer_orders(r + 3, r + 1),
        class_equation(r + 3, r + 1),
        m_counts(r.min(3)),
        bijections(r.min(3)),
    ];
    let ranks: Vec<u32> = (1..=r.min(3)).collect();
    families.push(routes("routes_general_linear", PairFamily::GL, &ranks, &b.fields, b.samples));
    families.push(routes("routes_unitary", PairFamily::U, &ranks, &b.fields, b.samples));
    families.push(routes("routes_orthogonal", PairFamily::SO, &ranks, &b.fields, b.samples));
    families.push(unipotent_orthonormality((r + 1).min(4), &b.fields));
    let plan = MultiplicityPlan { fields: b.fields.clone(), unitary_series: 12, orthogonal_series: 12, max_rank: r };
    families.push(multiplicity_identity(&plan).0);
    families.push(independence(&b.fields, r, b.samples / 4));
    families.push(regular_disjoint(&b.fields, r, b.samples / 4).0);
    let all_pass = families.iter().all(|f| f.passed());
    OracleSummary { families, all_pass }
}
