//! The direct route against an orbit count on flag varieties, and against
//! the closed route.

use ggp_core::eigenvalue_orbits::FieldParam;
use ggp_core::partitions::{Bipartition, Partition};
use ggp_core::reeder_engine::{
    reeder_closed_form, reeder_closed_form_with, reeder_direct, NegativeCycleSign, PairFamily, PairInput,
};
use ggp_core::tori::{DualTorusPair, SemisimpleElement, TorusDatum};
use ggp_core::weyl::{f_classes, Family, GroupKind};
use num_bigint::BigInt;

fn split_pair(q: &FieldParam, n: u32) -> PairInput {
    let t = TorusDatum::type_a(Family::GL, q, Partition::new(vec![1; n as usize + 1]).unwrap()).unwrap();
    let s = TorusDatum::type_a(Family::GL, q, Partition::new(vec![1; n as usize]).unwrap()).unwrap();
    PairInput::new(PairFamily::GL, DualTorusPair::trivial(t), DualTorusPair::trivial(s)).unwrap()
}

#[test]
fn gl2_over_gl1_trivial_characters() {
    let q = FieldParam::new(3).unwrap();
    let r = reeder_direct(&split_pair(&q, 1)).unwrap();
    assert_eq!(r.value, BigInt::from(3));
    assert_eq!(reeder_closed_form(&split_pair(&q, 1)).unwrap().value, BigInt::from(3));
}

/// Vectors of `F_p^d` as base-`p` digits.
fn vectors(p: u64, d: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Reduced row echelon form of a list of vectors mod p.
fn rref(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let d = rows.first().map_or(0, |r| r.len());
    let inv = |a: u64| (1..p).find(|b| a * b % p == 1).unwrap();
    let mut r = 0;
    for c in 0..d {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, piv);
        let k = inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = *x * k % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..d {
                    rows[i][j] = (rows[i][j] + p * p - f * rows[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Complete flags as tuples of subspaces in echelon form.
fn flags(p: u64, d: usize) -> Vec<Vec<Vec<Vec<u64>>>> {
    let nonzero: Vec<Vec<u64>> = vectors(p, d).into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
    let mut out: Vec<Vec<Vec<Vec<u64>>>> = vec![Vec::new()];
    for k in 1..d {
        let mut next = Vec::new();
        for f in &out {
            let prev: Vec<Vec<u64>> = f.last().cloned().unwrap_or_default();
            let mut seen = Vec::new();
            for v in &nonzero {
                let mut rows = prev.clone();
                rows.push(v.clone());
                let e = rref(rows, p);
                if e.len() == k && !seen.contains(&e) {
                    seen.push(e.clone());
                    let mut g = f.clone();
                    g.push(e);
                    next.push(g);
                }
            }
        }
        out = next;
    }
    out
}

/// Number of orbits of the upper triangular Borel of `GL_n` (embedded in
/// the top-left corner) on complete flags of `F_p^{n+1}`.
fn borel_orbits_on_flags(p: u64, n: usize) -> usize {
    let d = n + 1;
    let fl = flags(p, d);
    let mut gens: Vec<Vec<Vec<u64>>> = Vec::new();
    let id = |d: usize| (0..d).map(|i| (0..d).map(|j| u64::from(i == j)).collect::<Vec<u64>>()).collect::<Vec<_>>();
    for i in 0..n {
        for a in 2..p {
            let mut g = id(d);
            g[i][i] = a;
            gens.push(g);
        }
        for j in i + 1..n {
            let mut g = id(d);
            g[i][j] = 1;
            gens.push(g);
        }
    }
    let act = |g: &Vec<Vec<u64>>, f: &Vec<Vec<Vec<u64>>>| -> Vec<Vec<Vec<u64>>> {
        f.iter()
            .map(|space| {
                let rows = space
                    .iter()
                    .map(|v| (0..d).map(|i| (0..d).map(|j| g[i][j] * v[j]).sum::<u64>() % p).collect())
                    .collect();
                rref(rows, p)
            })
            .collect()
    };
    let mut seen = vec![false; fl.len()];
    let mut orbits = 0;
    for s in 0..fl.len() {
        if seen[s] {
            continue;
        }
        orbits += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for g in &gens {
                let j = fl.iter().position(|f| *f == act(g, &fl[i])).unwrap();
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    orbits
}

#[test]
fn split_trivial_pairing_counts_borel_orbits_on_flags() {
    for (p, n) in [(3u64, 1usize), (5, 1), (3, 2)] {
        let q = FieldParam::new(p).unwrap();
        let want = borel_orbits_on_flags(p, n);
        let got = reeder_direct(&split_pair(&q, n as u32)).unwrap().value;
        assert_eq!(got, BigInt::from(want), "q={p} n={n}");
    }
}

fn pairs_of(t: &TorusDatum, alphabet: &[u64]) -> Vec<DualTorusPair> {
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
    out.into_iter().map(|s| DualTorusPair::new(t.clone(), SemisimpleElement::new(s)).unwrap()).collect()
}

fn tori(family: Family, n: u32, q: &FieldParam) -> Vec<TorusDatum> {
    f_classes(family, n).into_iter().map(|l| TorusDatum::new(GroupKind::new(family, n, q.clone()), l).unwrap()).collect()
}

#[test]
fn closed_form_matches_direct_type_a() {
    for qq in [3u64, 5] {
        let q = FieldParam::new(qq).unwrap();
        for (fam, pf) in [(Family::GL, PairFamily::GL), (Family::U, PairFamily::U)] {
            for n in 1..=2 {
                for t in tori(fam, n + 1, &q) {
                    for s in tori(fam, n, &q) {
                        for bt in pairs_of(&t, &[0, 1, 2]) {
                            for bs in pairs_of(&s, &[0, 1]) {
                                let input = PairInput::new(pf, bt.clone(), bs).unwrap();
                                let d = reeder_direct(&input).unwrap().value;
                                let c = reeder_closed_form(&input).unwrap().value;
                                assert_eq!(d, c, "{pf} q={qq} T={} S={} {:?} {:?}", t.label, s.label, input.big.element, input.small.element);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn closed_form_matches_direct_orthogonal() {
    let mut length_ok = 0;
    let mut size_ok = 0;
    let mut total = 0;
    for qq in [3u64, 5] {
        let q = FieldParam::new(qq).unwrap();
        for n in 1..=2 {
            for t in tori(Family::SOOdd, n, &q) {
                for fam in [Family::SOEvenPlus, Family::SOEvenMinus] {
                    for s in tori(fam, n, &q) {
                        for bt in pairs_of(&t, &[1, 2, 3]) {
                            for bs in pairs_of(&s, &[1, 2]) {
                                let Ok(input) = PairInput::new(PairFamily::SO, bt.clone(), bs) else { continue };
                                let d = reeder_direct(&input).unwrap().value;
                                total += 1;
                                if reeder_closed_form_with(&input, NegativeCycleSign::Length).unwrap().value == d {
                                    length_ok += 1;
                                }
                                if reeder_closed_form_with(&input, NegativeCycleSign::Size).unwrap().value == d {
                                    size_ok += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    eprintln!("orthogonal closed form: length {length_ok}/{total}, size {size_ok}/{total}");
    assert!(total > 50);
    assert_eq!(length_ok, total);
    let _ = Bipartition::default();
}

#[test]
fn factorized_matches_direct() {
    use ggp_core::lusztig_decomposition::{factorized_pairing, FactorOptions, Padding};
    let mut stats = std::collections::BTreeMap::new();
    for qq in [3u64, 5] {
        let q = FieldParam::new(qq).unwrap();
        let mut cases: Vec<(PairFamily, TorusDatum, TorusDatum)> = Vec::new();
        for (fam, pf) in [(Family::GL, PairFamily::GL), (Family::U, PairFamily::U)] {
            for n in 1..=2 {
                for t in tori(fam, n + 1, &q) {
                    for s in tori(fam, n, &q) {
                        cases.push((pf, t.clone(), s));
                    }
                }
            }
        }
        for n in 1..=2 {
            for t in tori(Family::SOOdd, n, &q) {
                for fam in [Family::SOEvenPlus, Family::SOEvenMinus] {
                    for s in tori(fam, n, &q) {
                        cases.push((PairFamily::SO, t.clone(), s));
                    }
                }
            }
        }
        for (pf, t, s) in cases {
            for bt in pairs_of(&t, &[0, 1, 2, 3]) {
                for bs in pairs_of(&s, &[0, 1, 2]) {
                    let Ok(input) = PairInput::new(pf, bt.clone(), bs) else { continue };
                    let d = reeder_direct(&input).unwrap().value;
                    for padding in [Padding::Default, Padding::Alternate] {
                        for theta_seed in [0, 1] {
                            let f = factorized_pairing(&input, FactorOptions { padding, theta_seed }).unwrap();
                            let e = stats.entry(format!("{pf}")).or_insert((0, 0, 0));
                            e.0 += 1;
                            if f.report.value == d {
                                e.1 += 1;
                            } else {
                                eprintln!("{pf} q={qq} T={} S={} t={:?} s={:?} direct={d} fact={} {:?}", t.label, s.label, input.big.element.seeds, input.small.element.seeds, f.report.value, f.signs);
                            }
                            if f.alt_value == d {
                                e.2 += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    eprintln!("{stats:?}");
    for (k, (n, ok, _)) in &stats {
        assert_eq!(n, ok, "{k}");
    }
}
