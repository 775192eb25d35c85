//! Unipotent characters, series members and multiplicities.

use ggp_core::eigenvalue_orbits::{frobenius_orbit, Eigenvalue, FieldParam, Twist};
use ggp_core::partitions::{partitions_of, Partition};
use ggp_core::unipotent_reps::{
    degree, ggp_multiplicity, gl_multiplicity, inner_product, mn_character, multiplicity_any_corank,
    reduce_to_basic, series_member, unipotent_expansion, SeriesDatum, SeriesOrbit,
};
use ggp_core::weyl::{Family, GroupKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

/// Characters of `S_n` by brute force: sums over the group of the number of
/// fixed points, used to cross-check the trivial, sign and standard rows.
fn perm_fixed_points_char(mu: &Partition) -> i64 {
    mu.parts().iter().filter(|&&x| x == 1).count() as i64
}

#[test]
fn murnaghan_nakayama_rows_are_orthonormal() {
    for n in 1..=6u32 {
        let ps = partitions_of(n);
        for a in &ps {
            for b in &ps {
                let s: BigRational = ps
                    .iter()
                    .map(|mu| {
                        BigRational::new(
                            BigInt::from(mn_character(a, mu).unwrap() * mn_character(b, mu).unwrap()),
                            BigInt::from(mu.z()),
                        )
                    })
                    .sum();
                let want = if a == b { BigRational::one() } else { BigRational::zero() };
                assert_eq!(s, want, "{a} {b}");
            }
        }
        for mu in &ps {
            assert_eq!(mn_character(&p(&[n]), mu).unwrap(), 1);
            if n >= 2 {
                // The permutation character is trivial plus standard.
                let std = mn_character(&Partition::new(vec![n - 1, 1]).unwrap(), mu).unwrap();
                assert_eq!(std + 1, perm_fixed_points_char(mu));
            }
        }
    }
    assert_eq!(mn_character(&p(&[2]), &p(&[1, 1])).unwrap(), 1);
    assert_eq!(mn_character(&p(&[1, 1]), &p(&[2])).unwrap(), -1);
}

#[test]
fn unipotent_orthonormal_with_positive_degrees() {
    for qq in [3u64, 5] {
        let q = FieldParam::new(qq).unwrap();
        for fam in [Family::GL, Family::U] {
            for n in 1..=4 {
                let g = GroupKind::new(fam, n, q.clone());
                let us: Vec<_> = partitions_of(n).iter().map(|l| unipotent_expansion(&g, l).unwrap()).collect();
                for (i, a) in us.iter().enumerate() {
                    assert!(degree(a).unwrap() > BigInt::zero());
                    for (j, b) in us.iter().enumerate() {
                        let want = if i == j { BigRational::one() } else { BigRational::zero() };
                        assert_eq!(inner_product(a, b).unwrap(), want);
                    }
                }
            }
        }
        let gl2 = GroupKind::new(Family::GL, 2, q.clone());
        assert_eq!(degree(&unipotent_expansion(&gl2, &p(&[1, 1])).unwrap()).unwrap(), BigInt::from(qq));
        assert_eq!(degree(&unipotent_expansion(&gl2, &p(&[2])).unwrap()).unwrap(), BigInt::one());
    }
}

fn ev(q: &FieldParam, level: u32, e: u64) -> Eigenvalue {
    Eigenvalue::from_u64(q, level, e).unwrap()
}

#[test]
fn series_members_are_irreducible() {
    let q = FieldParam::new(3).unwrap();
    // U_2 with one orbit of size 2 under x -> x^(-3).
    let x = ev(&q, 2, 1);
    assert_eq!(frobenius_orbit(&q, Twist::Unitary, &x).size(), 2);
    let s = SeriesDatum {
        group: GroupKind::new(Family::U, 2, q.clone()),
        orbits: vec![SeriesOrbit { seed: x, nu: 1, lambda: p(&[1]) }],
    };
    let v = series_member(&s).unwrap();
    assert_eq!(v.terms.len(), 1);
    assert_eq!(inner_product(&v, &v).unwrap(), BigRational::one());
    assert!(degree(&v).unwrap() > BigInt::zero());

    // Two orbits in U_3: 1 with a unipotent of U_2, and a fixed point of
    // x -> x^(-3) of order 4.
    let y = ev(&q, 2, 2);
    for lam in [p(&[2]), p(&[1, 1])] {
        let s = SeriesDatum {
            group: GroupKind::new(Family::U, 3, q.clone()),
            orbits: vec![
                SeriesOrbit { seed: Eigenvalue::one(), nu: 2, lambda: lam.clone() },
                SeriesOrbit { seed: y.clone(), nu: 1, lambda: p(&[1]) },
            ],
        };
        let v = series_member(&s).unwrap();
        assert_eq!(inner_product(&v, &v).unwrap(), BigRational::one());
        assert!(degree(&v).unwrap() > BigInt::zero());
    }

    // Orthogonal groups: an orbit of F_9 elements closed under inversion.
    let z = ev(&q, 2, 2);
    let so = SeriesDatum {
        group: GroupKind::new(Family::SOOdd, 1, q.clone()),
        orbits: vec![SeriesOrbit { seed: z, nu: 1, lambda: p(&[1]) }],
    };
    let v = series_member(&so).unwrap();
    assert_eq!(inner_product(&v, &v).unwrap(), BigRational::one());
    assert!(degree(&v).unwrap() > BigInt::zero());
}

#[test]
fn gl_multiplicity_trivial_cases() {
    let q = FieldParam::new(5).unwrap();
    let g0 = GroupKind::new(Family::GL, 0, q.clone());
    let g1 = GroupKind::new(Family::GL, 1, q.clone());
    let g2 = GroupKind::new(Family::GL, 2, q.clone());
    let triv0 = unipotent_expansion(&g0, &Partition::empty()).unwrap();
    assert_eq!(gl_multiplicity(&triv0, &triv0, 0).unwrap(), BigInt::one());
    let t1 = unipotent_expansion(&g1, &p(&[1])).unwrap();
    let a = gl_multiplicity(&t1, &t1, 0).unwrap();
    let b = gl_multiplicity(&t1, &t1, 1).unwrap();
    assert_eq!(a, b);
    assert!(a >= BigInt::zero());
    for l in [p(&[2]), p(&[1, 1])] {
        let pi = unipotent_expansion(&g2, &l).unwrap();
        for m in [p(&[2]), p(&[1, 1])] {
            let sigma = unipotent_expansion(&g2, &m).unwrap();
            assert_eq!(gl_multiplicity(&pi, &sigma, 0).unwrap(), gl_multiplicity(&sigma, &pi, 0).unwrap());
        }
    }
}

fn unipotent_series(fam: Family, n: u32, q: &FieldParam, l: Partition) -> SeriesDatum {
    SeriesDatum {
        group: GroupKind::new(fam, n, q.clone()),
        orbits: if n == 0 { vec![] } else { vec![SeriesOrbit { seed: Eigenvalue::one(), nu: n, lambda: l }] },
    }
}

#[test]
fn unitary_multiplicities_agree() {
    let q = FieldParam::new(3).unwrap();
    for n in 1..=2u32 {
        for lp in partitions_of(n + 1) {
            for ls in partitions_of(n) {
                let pi = unipotent_series(Family::U, n + 1, &q, lp.clone());
                let sigma = unipotent_series(Family::U, n, &q, ls.clone());
                let r = ggp_multiplicity(&pi, &sigma, 0).unwrap();
                assert!(r.agree, "{lp} {ls} {r:?}");
            }
        }
    }
}

#[test]
fn corank_three_reduction() {
    let q = FieldParam::new(3).unwrap();
    let pi = unipotent_series(Family::U, 3, &q, p(&[3]));
    let sigma = SeriesDatum { group: GroupKind::new(Family::U, 0, q.clone()), orbits: vec![] };
    let red = reduce_to_basic(&pi, &sigma).unwrap();
    assert_eq!(red.corank, 3);
    assert_eq!(red.sigma_plus.group.n, 4);
    let v = series_member(&red.sigma_plus).unwrap();
    assert_eq!(inner_product(&v, &v).unwrap(), BigRational::one());
    assert!(degree(&v).unwrap() > BigInt::zero());
    let (_, rep) = multiplicity_any_corank(&pi, &sigma, 0).unwrap();
    assert!(rep.agree, "{rep:?}");
    let two = unipotent_series(Family::U, 1, &q, p(&[1]));
    assert!(reduce_to_basic(&pi, &two).is_err());
}

use ggp_core::unipotent_reps::enumerate_series;

fn sweep(big: GroupKind, small: GroupKind, levels: &[u32], limit: usize) -> (usize, usize) {
    let (mut n, mut ok) = (0, 0);
    let ps = enumerate_series(&big, levels, limit);
    let ss = enumerate_series(&small, levels, limit);
    for pi in &ps {
        for sigma in &ss {
            let r = ggp_multiplicity(pi, sigma, 0).unwrap();
            n += 1;
            if r.agree {
                ok += 1;
            } else {
                eprintln!("{} > {}: {pi:?} {sigma:?} {r:?}", big, small);
            }
        }
    }
    (n, ok)
}

#[test]
fn multiplicity_identity_sweep() {
    let q = FieldParam::new(3).unwrap();
    let u = |n| GroupKind::new(Family::U, n, q.clone());
    let (n, ok) = sweep(u(2), u(1), &[1, 2], 40);
    assert!(n >= 50, "{n}");
    assert_eq!(n, ok);
    let (n, ok) = sweep(u(3), u(2), &[1, 2], 12);
    assert!(n >= 50, "{n}");
    assert_eq!(n, ok);
    let mut total = 0;
    for minus in [Family::SOEvenPlus, Family::SOEvenMinus] {
        let (n, ok) = sweep(GroupKind::new(Family::SOOdd, 2, q.clone()), GroupKind::new(minus, 2, q.clone()), &[2, 4], 12);
        assert_eq!(n, ok, "{minus:?}");
        total += n;
    }
    assert!(total >= 20, "{total}");
}
