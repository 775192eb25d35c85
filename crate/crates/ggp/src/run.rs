//! Job dispatch. Every runner returns a JSON report and an exit status;
//! the report is deterministic apart from its `timings_ms` field.

use std::collections::BTreeMap;
use std::time::Instant;

use ggp_core::lusztig_decomposition::{factorized_pairing, FactorOptions, FactorizedReport, Padding};
use ggp_core::reeder_engine::{reeder_closed_form, Contribution, DirectPlan, PairInput, PairingReport};
use ggp_core::tori::DualTorusPair;
use ggp_core::unipotent_reps::multiplicity_any_corank;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{CliError, ExitStatus};
use crate::json::{
    infer_pair_kind, int_value, rational_value, Command, EigenDto, JobSpec, PaddingDto, RouteDto, SeriesDto,
};
use crate::oracle::{normalized_value, run_all, OracleBounds};

/// Settings taken from the command line; they override the job file.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub routes: Option<Vec<RouteDto>>,
    /// Worker threads for parallel summation; rayon's default when absent.
    pub jobs: Option<usize>,
    pub oracle_bound: Option<u32>,
    /// Test hook: shifts the value of one route by one.
    pub inject_fault: Option<RouteDto>,
}

/// A finished run.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub status: ExitStatus,
}

impl Outcome {
    /// The report with its timings removed, for determinism checks.
    pub fn stable_report(&self) -> Value {
        let mut r = self.report.clone();
        if let Value::Object(m) = &mut r {
            m.remove("timings_ms");
        }
        r
    }
}

/// Runs a job under the given configuration.
pub fn run_job(job: &JobSpec, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.jobs {
        if n == 0 {
            return Err(CliError::Job("--jobs must be positive".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;
    pool.install(|| match job.command {
        Command::Pair => run_pair(job, cfg, false),
        Command::Factorize => run_pair(job, cfg, true),
        Command::Multiplicity => run_multiplicity(job),
        Command::Oracle => run_oracle(job, cfg),
    })
}

/// The direct route with the summands evaluated on the current pool.
pub fn direct_parallel(input: &PairInput) -> Result<PairingReport, CliError> {
    let plan = DirectPlan::new(input)?;
    let values =
        (0..plan.iotas().len()).into_par_iter().map(|i| plan.evaluate(i)).collect::<Result<Vec<_>, _>>()?;
    Ok(plan.finish(values)?)
}

fn pair_input(job: &JobSpec) -> Result<PairInput, CliError> {
    let field = job.field()?;
    let big = job.big.as_ref().ok_or_else(|| CliError::Job("missing big".into()))?;
    let small = job.small.as_ref().ok_or_else(|| CliError::Job("missing small".into()))?;
    let kind = job.pair_kind.unwrap_or_else(|| infer_pair_kind(big.group.family.into()));
    Ok(PairInput::new(kind.into(), big.to_core(&field)?, small.to_core(&field)?)?)
}

fn element_json(p: &DualTorusPair) -> Value {
    json!({
        "group": p.torus.kind.to_string(),
        "torus": p.torus.label.to_string(),
        "element": p.element.seeds.iter().map(EigenDto::from_core).collect::<Vec<_>>(),
    })
}

fn contributions_json(cs: &[Contribution]) -> Value {
    Value::Array(cs.iter().map(|c| json!({"label": c.label, "value": rational_value(&c.value)})).collect())
}

fn factorization_json(f: &FactorizedReport) -> Value {
    let factors: Vec<Value> = f
        .data
        .iter()
        .zip(&f.factor_values)
        .map(|(d, v)| {
            json!({
                "orbit": d.key.to_string(),
                "orbit_size": d.h,
                "nu_big": d.nu_t,
                "nu_small": d.nu_s,
                "factor_group": format!("{:?}", d.family),
                "factor_field": d.field.to_string(),
                "padding": d.padding.parts(),
                "eps_a": d.eps_a,
                "pairing": int_value(v),
            })
        })
        .collect();
    json!({
        "factors": factors,
        "eps_ts": f.signs.eps_ts,
        "eps_a_product": f.signs.eps_a_product,
        "alternative_convention_value": int_value(&f.alt_value),
    })
}

fn run_pair(job: &JobSpec, cfg: &RunConfig, factorize_only: bool) -> Result<Outcome, CliError> {
    let input = pair_input(job)?;
    let routes: Vec<RouteDto> = if factorize_only {
        vec![RouteDto::Factorized]
    } else {
        let mut r = cfg
            .routes
            .clone()
            .or_else(|| job.options.routes.clone())
            .unwrap_or_else(|| vec![RouteDto::Direct, RouteDto::Closed, RouteDto::Factorized]);
        r.sort();
        r.dedup();
        r
    };
    if routes.is_empty() {
        return Err(CliError::Job("no routes selected".into()));
    }
    let opts = FactorOptions {
        padding: match job.options.padding {
            PaddingDto::Default => Padding::Default,
            PaddingDto::Alternate => Padding::Alternate,
        },
        theta_seed: job.options.theta_seed,
    };
    let mut values: BTreeMap<&'static str, BigInt> = BTreeMap::new();
    let mut contributions = Map::new();
    let mut timings = Map::new();
    let mut factorization = Value::Null;
    for route in &routes {
        let start = Instant::now();
        let mut report = match route {
            RouteDto::Direct => direct_parallel(&input)?,
            RouteDto::Closed => reeder_closed_form(&input)?,
            RouteDto::Factorized => {
                let f = factorized_pairing(&input, opts)?;
                factorization = factorization_json(&f);
                f.report
            }
        };
        if cfg.inject_fault == Some(*route) {
            report.value += 1;
        }
        timings.insert(route.name().into(), json!(start.elapsed().as_secs_f64() * 1e3));
        contributions.insert(route.name().into(), contributions_json(&report.contributions));
        values.insert(route.name(), report.value);
    }
    let value = values.values().next().expect("at least one route").clone();
    let agree = values.values().all(|v| *v == value);
    let mut report = json!({
        "command": if factorize_only { "factorize" } else { "pair" },
        "q": job.q,
        "pair_kind": input.family.to_string(),
        "big": element_json(&input.big),
        "small": element_json(&input.small),
        "value": int_value(&value),
        "normalized_value": int_value(&normalized_value(&input, &value)),
        "routes": values.iter().map(|(k, v)| (k.to_string(), int_value(v))).collect::<Map<_, _>>(),
        "routes_agree": agree,
        "contributions": contributions,
        "timings_ms": timings,
    });
    if !factorization.is_null() {
        report["factorization"] = factorization;
    }
    Ok(Outcome { report, status: if agree { ExitStatus::Ok } else { ExitStatus::Disagreement } })
}

fn run_multiplicity(job: &JobSpec) -> Result<Outcome, CliError> {
    let field = job.field()?;
    let pi = job.pi.as_ref().ok_or_else(|| CliError::Job("missing pi".into()))?.to_core(&field)?;
    let sigma = job.sigma.as_ref().ok_or_else(|| CliError::Job("missing sigma".into()))?.to_core(&field)?;
    let start = Instant::now();
    let (red, rep) = multiplicity_any_corank(&pi, &sigma, job.options.tau_seed)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let factors: Vec<Value> = rep
        .factors
        .iter()
        .map(|f| {
            json!({
                "orbit": f.key.to_string(),
                "orbit_size": f.h,
                "nu_big": f.nu_big,
                "nu_small": f.nu_small,
                "factor_group": f.factor.to_string(),
                "value": int_value(&f.value),
            })
        })
        .collect();
    let nonnegative = rep.lhs >= BigInt::from(0);
    let reduction = if red.corank == 1 {
        json!({"corank": 1})
    } else {
        json!({
            "corank": red.corank,
            "sigma_plus": SeriesDto::from_core(&red.sigma_plus),
            "fresh_orbit": red.fresh_orbit.as_ref().map(|k| k.to_string()),
        })
    };
    let report = json!({
        "command": "multiplicity",
        "q": job.q,
        "big_group": pi.group.to_string(),
        "small_group": sigma.group.to_string(),
        "value": int_value(&rep.lhs),
        "lhs": int_value(&rep.lhs),
        "rhs": int_value(&rep.rhs),
        "lhs_equals_rhs": rep.lhs == rep.rhs,
        "nonnegative": nonnegative,
        "factors": factors,
        "reduction": reduction,
        "timings_ms": {"multiplicity": elapsed},
    });
    Ok(Outcome { report, status: if rep.agree { ExitStatus::Ok } else { ExitStatus::Disagreement } })
}

fn run_oracle(job: &JobSpec, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let bound = cfg.oracle_bound.or(job.options.oracle_bound);
    let mut bounds = match bound {
        Some(b) => OracleBounds::new(b)?,
        None => OracleBounds::default(),
    };
    if let Some(q) = job.q {
        job.field()?;
        bounds.fields = vec![q];
    }
    let start = Instant::now();
    let summary = run_all(&bounds);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let report = json!({
        "command": "oracle",
        "bound": bounds.rank,
        "fields": bounds.fields,
        "families": summary.families.iter().map(|f| json!({
            "name": f.name,
            "checks": f.checks,
            "passed": f.checks - f.failed,
            "failed": f.failed,
            "failures": f.failures,
        })).collect::<Vec<_>>(),
        "all_pass": summary.all_pass,
        "timings_ms": {"oracle": elapsed},
    });
    Ok(Outcome { report, status: if summary.all_pass { ExitStatus::Ok } else { ExitStatus::Disagreement } })
}
