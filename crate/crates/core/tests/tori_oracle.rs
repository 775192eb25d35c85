//! Restriction counts against brute-force enumeration over the whole Weyl
//! group.

use ggp_core::eigenvalue_orbits::FieldParam;
use ggp_core::partitions::Bipartition;
use ggp_core::tori::{
    chosen_blocks, d_classes_brute, m_count, m_count_brute, p_count, sub_torus, weyl_action, DualTorusPair,
    SemisimpleElement, TorusDatum,
};
use ggp_core::weyl::{centralizer_elements, f_classes, ClassData, Family, GroupKind};
use num_bigint::BigUint;

const BOUND: u64 = 1 << 20;

fn tori(family: Family, n: u32, q: &FieldParam) -> Vec<TorusDatum> {
    f_classes(family, n)
        .into_iter()
        .map(|l| TorusDatum::new(GroupKind::new(family, n, q.clone()), l).unwrap())
        .collect()
}

/// Elements whose seeds are small powers of block generators, so that
/// orbits repeat across blocks.
fn elements(t: &TorusDatum, alphabet: &[u64]) -> Vec<DualTorusPair> {
    let blocks = t.blocks();
    let mut out = vec![Vec::new()];
    for b in &blocks {
        let mut next = Vec::new();
        for base in &out {
            for &j in alphabet {
                let mut v: Vec<_> = base.clone();
                v.push(t.block_seed(b, j));
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(|s| DualTorusPair::new(t.clone(), SemisimpleElement::new(s)).unwrap()).collect()
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

/// Every restriction of `w t` for `w` in the centralizer, as seeds of `T'`.
fn restriction_set(pair: &DualTorusPair, target: &Bipartition) -> Vec<SemisimpleElement> {
    let chosen = chosen_blocks(&pair.torus, target).unwrap();
    let mut out: Vec<SemisimpleElement> = centralizer_elements(&pair.torus.label, BOUND)
        .unwrap()
        .iter()
        .map(|w| {
            let s = weyl_action(pair, w).unwrap();
            SemisimpleElement::new(chosen.iter().map(|&i| s.seeds[i].clone()).collect())
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

#[test]
fn m_count_matches_enumeration() {
    let q = FieldParam::new(3).unwrap();
    let mut checks = 0;
    for family in [Family::GL, Family::U, Family::Sp, Family::SOEvenPlus, Family::SOEvenMinus] {
        for n in 1..=3 {
            for t in tori(family, n, &q) {
                for pair in elements(&t, &[1, 2]) {
                    for target in targets(&t) {
                        let sub = sub_torus(&t, &target).unwrap();
                        let mut cands = restriction_set(&pair, &target);
                        cands.push(DualTorusPair::trivial(sub.clone()).element);
                        for tp in cands {
                            let fast = m_count(&pair, &target, &tp).unwrap();
                            let slow = m_count_brute(&pair, &target, &tp, BOUND).unwrap();
                            assert_eq!(fast, BigUint::from(slow), "{family} {} {target}", t.label);
                            checks += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checks >= 500, "{checks}");
}

#[test]
fn restriction_classes_match_d_classes() {
    let q = FieldParam::new(3).unwrap();
    for family in [Family::GL, Family::U, Family::Sp, Family::SOEvenPlus, Family::SOEvenMinus] {
        for n in 1..=3 {
            for t in tori(family, n, &q) {
                for pair in elements(&t, &[1, 2]) {
                    for target in targets(&t) {
                        let p = p_count(&pair, &target).unwrap();
                        let d = d_classes_brute(&pair, &target, BOUND).unwrap();
                        assert_eq!(p as usize, d, "{family} {} {target} {:?}", t.label, pair.element);
                    }
                }
            }
        }
    }
}
