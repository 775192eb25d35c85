//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every comparison is exact (tolerance 0). Wall-clock limits are part of
//! the pass condition. A criterion listed in `KNOWN_DEVIATIONS` may print
//! FAIL without failing the test process; any other FAIL does. The target
//! runs without the libtest harness so the lines always reach stdout.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ggp::oracle::{
    bijections, centralizer_orders, class_equation, independence, m_counts, multiplicity_identity, pair_inputs,
    regular_disjoint, routes, unipotent_orthonormality, FamilyResult, MultiplicityPlan,
};
use ggp_core::eigenvalue_orbits::FieldParam;
use ggp_core::reeder_engine::PairFamily;

/// Criteria allowed to fail, with the reason. Empty while all pass.
const KNOWN_DEVIATIONS: &[(u32, &str)] = &[];

/// Exact equality everywhere.
const TOLERANCE: u32 = 0;

/// Samples drawn per (q, n) in the route criteria.
const ROUTE_SAMPLES: usize = 400;
const MIN_ROUTE_SAMPLES: usize = 200;

struct Line {
    id: u32,
    pass: bool,
    text: String,
}

fn family_ok(f: &FamilyResult) -> bool {
    f.passed()
}

fn failures(f: &FamilyResult) -> String {
    if f.failures.is_empty() {
        String::new()
    } else {
        format!(" first failure: {}", f.failures[0])
    }
}

/// Direct = closed = factorized for one pair family; every (q, n) must
/// reach the sample floor unless fewer distinct pairs exist, in which case
/// all of them are used.
fn route_criterion(id: u32, name: &str, pf: PairFamily, ranks: &[u32], limit: Duration) -> Line {
    let start = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    let mut checks = 0;
    let mut failed = 0;
    let mut first = String::new();
    for q in [3u64, 5] {
        for &n in ranks {
            let field = FieldParam::new(q).unwrap();
            let available = pair_inputs(pf, n, &field, usize::MAX).len();
            let r = routes(name, pf, &[n], &[q], ROUTE_SAMPLES);
            let floor = MIN_ROUTE_SAMPLES.min(available);
            if r.checks < floor {
                pass = false;
            }
            if available < MIN_ROUTE_SAMPLES {
                notes.push(format!("q={q} n={n} exhaustive over all {available} pairs"));
            }
            checks += r.checks;
            failed += r.failed;
            if first.is_empty() {
                first = failures(&r);
            }
            pass &= family_ok(&r);
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed <= limit;
    Line {
        id,
        pass,
        text: format!(
            "{name}: {checks} pairs, {failed} mismatches, tolerance {TOLERANCE}, {:.1}s of {}s{}{}",
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if notes.is_empty() { String::new() } else { format!(" ({})", notes.join("; ")) },
            first
        ),
    }
}

fn criterion_3() -> Line {
    let r = m_counts(3);
    Line {
        id: 3,
        pass: family_ok(&r) && r.checks >= 500,
        text: format!("M-count vs Weyl enumeration, ranks <= 3, five families: {} checks, {} failed{}", r.checks, r.failed, failures(&r)),
    }
}

fn criterion_4() -> Line {
    let r = bijections(3);
    Line {
        id: 4,
        pass: family_ok(&r),
        text: format!("|P| vs classes of D by orbit partitioning, ranks <= 3: {} checks, {} failed{}", r.checks, r.failed, failures(&r)),
    }
}

fn criterion_5() -> Line {
    let start = Instant::now();
    let a = centralizer_orders(6, 4);
    let b = class_equation(6, 4);
    let elapsed = start.elapsed();
    Line {
        id: 5,
        pass: family_ok(&a) && family_ok(&b) && elapsed <= Duration::from_secs(60),
        text: format!(
            "centralizer orders S_n, twisted S_n (n <= 6), B_n, D_n+- (n <= 4): {} classes, {} failed; class equation {} checks, {} failed; {:.1}s of 60s{}{}",
            a.checks,
            a.failed,
            b.checks,
            b.failed,
            elapsed.as_secs_f64(),
            failures(&a),
            failures(&b)
        ),
    }
}

fn criterion_6() -> Line {
    let r = unipotent_orthonormality(4, &[3, 5]);
    Line {
        id: 6,
        pass: family_ok(&r),
        text: format!(
            "unipotent orthonormality n <= 4, GL and U, q in {{3,5}}, Steinberg degree of GL_2 = q, positive degrees: {} checks, {} failed{}",
            r.checks,
            r.failed,
            failures(&r)
        ),
    }
}

fn criterion_7() -> Line {
    let start = Instant::now();
    let plan = MultiplicityPlan { fields: vec![3, 5], unitary_series: 12, orthogonal_series: 12, max_rank: 2 };
    let (r, c) = multiplicity_identity(&plan);
    let elapsed = start.elapsed();
    let pass = family_ok(&r)
        && c.unitary >= 50
        && c.orthogonal >= 20
        && c.shared > 0
        && c.disjoint > 0
        && elapsed <= Duration::from_secs(600);
    Line {
        id: 7,
        pass,
        text: format!(
            "LHS = product of orbit factors, LHS >= 0: {} unitary and {} orthogonal series pairs ({} shared, {} disjoint supports), {} failed, {:.1}s of 600s{}",
            c.unitary,
            c.orthogonal,
            c.shared,
            c.disjoint,
            r.failed,
            elapsed.as_secs_f64(),
            failures(&r)
        ),
    }
}

fn criterion_8() -> Line {
    let r = independence(&[3, 5], 2, 120);
    Line {
        id: 8,
        pass: family_ok(&r),
        text: format!(
            "GL multiplicity under two cuspidal seeds, factorized route under two paddings x two padding characters: {} checks, {} failed{}",
            r.checks,
            r.failed,
            failures(&r)
        ),
    }
}

fn criterion_9() -> Line {
    let (r, per) = regular_disjoint(&[3, 5], 2, 60);
    let all_families = per.iter().all(|(_, n)| *n > 0);
    let counts: Vec<String> = per.iter().map(|(f, n)| format!("{f} {n}")).collect();
    Line {
        id: 9,
        pass: family_ok(&r) && r.checks >= 100 && all_families,
        text: format!(
            "regular disjoint-support pairs have multiplicity one (pairing times eps_G eps_T eps_H eps_S): {} pairs [{}], {} failed{}",
            r.checks,
            counts.join(", "),
            r.failed,
            failures(&r)
        ),
    }
}

fn main() -> ExitCode {
    let lines = vec![
        route_criterion(1, "unitary routes agree", PairFamily::U, &[1, 2, 3], Duration::from_secs(300)),
        route_criterion(2, "orthogonal routes agree (SO_5 > SO_4+-, SO_7 > SO_6+-)", PairFamily::SO, &[2, 3], Duration::from_secs(600)),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    let mut unexpected = Vec::new();
    for l in &lines {
        let known = KNOWN_DEVIATIONS.iter().find(|(id, _)| *id == l.id);
        let tag = match (l.pass, known) {
            (true, _) => "PASS".to_string(),
            (false, Some((_, why))) => format!("FAIL (known deviation: {why})"),
            (false, None) => {
                unexpected.push(l.id);
                "FAIL".to_string()
            }
        };
        println!("{tag} [{}] {}", l.id, l.text);
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria met or allowlisted");
        ExitCode::SUCCESS
    } else {
        eprintln!("acceptance: criteria failed: {unexpected:?}");
        ExitCode::FAILURE
    }
}
