//! JSON job files and the conversions into core types.
//!
//! Integers that may exceed 2^53 are written as decimal strings and read
//! from either numbers or strings.

use std::str::FromStr;

use ggp_core::eigenvalue_orbits::{Eigenvalue, FieldParam};
use ggp_core::partitions::{Bipartition, Partition};
use ggp_core::reeder_engine::PairFamily;
use ggp_core::tori::{DualTorusPair, SemisimpleElement, TorusDatum};
use ggp_core::unipotent_reps::{SeriesDatum, SeriesOrbit};
use ggp_core::weyl::{Family, GroupKind, SplitSign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// Largest integer a double represents exactly.
const SAFE: u64 = 1 << 53;

/// A big integer as a JSON number when safe, else a decimal string.
pub fn int_value(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) if v.unsigned_abs() <= SAFE => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn uint_value(x: &BigUint) -> Value {
    int_value(&BigInt::from(x.clone()))
}

/// Rationals are always strings such as `"-1/2"`.
pub fn rational_value(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

/// An unsigned integer read from a JSON number or string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BigNumDto {
    Num(u64),
    Str(String),
}

impl BigNumDto {
    pub fn to_biguint(&self) -> Result<BigUint, CliError> {
        match self {
            BigNumDto::Num(n) => Ok(BigUint::from(*n)),
            BigNumDto::Str(s) => BigUint::from_str(s.trim()).map_err(|_| CliError::Job(format!("not an integer: {s:?}"))),
        }
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        match u64::try_from(x) {
            Ok(v) if v <= SAFE => BigNumDto::Num(v),
            _ => BigNumDto::Str(x.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyDto {
    GL,
    U,
    Sp,
    #[serde(rename = "SO_odd")]
    SOOdd,
    #[serde(rename = "SO_even_plus")]
    SOEvenPlus,
    #[serde(rename = "SO_even_minus")]
    SOEvenMinus,
}

impl From<FamilyDto> for Family {
    fn from(f: FamilyDto) -> Family {
        match f {
            FamilyDto::GL => Family::GL,
            FamilyDto::U => Family::U,
            FamilyDto::Sp => Family::Sp,
            FamilyDto::SOOdd => Family::SOOdd,
            FamilyDto::SOEvenPlus => Family::SOEvenPlus,
            FamilyDto::SOEvenMinus => Family::SOEvenMinus,
        }
    }
}

impl From<Family> for FamilyDto {
    fn from(f: Family) -> FamilyDto {
        match f {
            Family::GL => FamilyDto::GL,
            Family::U => FamilyDto::U,
            Family::Sp => FamilyDto::Sp,
            Family::SOOdd => FamilyDto::SOOdd,
            Family::SOEvenPlus => FamilyDto::SOEvenPlus,
            Family::SOEvenMinus => FamilyDto::SOEvenMinus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairKindDto {
    GL,
    U,
    SO,
}

impl From<PairKindDto> for PairFamily {
    fn from(p: PairKindDto) -> PairFamily {
        match p {
            PairKindDto::GL => PairFamily::GL,
            PairKindDto::U => PairFamily::U,
            PairKindDto::SO => PairFamily::SO,
        }
    }
}

/// Infers the pair family from the two groups.
pub fn infer_pair_kind(big: Family) -> PairKindDto {
    match big {
        Family::GL => PairKindDto::GL,
        Family::U => PairKindDto::U,
        _ => PairKindDto::SO,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDto {
    pub family: FamilyDto,
    pub n: u32,
}

impl GroupDto {
    pub fn to_core(&self, field: &FieldParam) -> GroupKind {
        GroupKind::new(self.family.into(), self.n, field.clone())
    }

    pub fn from_core(g: &GroupKind) -> Self {
        GroupDto { family: g.family.into(), n: g.n }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitDto {
    #[default]
    Plus,
    Minus,
}

/// An F-class label: `mu` alone in type A, `(mu, lambda)` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusDto {
    pub mu: Vec<u32>,
    #[serde(default)]
    pub lambda: Vec<u32>,
    /// Selects the second class of a split type D label.
    #[serde(default)]
    pub split: SplitDto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenDto {
    pub level: u32,
    pub exponent: BigNumDto,
}

impl EigenDto {
    pub fn to_core(&self, field: &FieldParam) -> Result<Eigenvalue, CliError> {
        Ok(Eigenvalue::new(field, self.level, self.exponent.to_biguint()?)?)
    }

    pub fn from_core(e: &Eigenvalue) -> Self {
        EigenDto { level: e.level(), exponent: BigNumDto::from_biguint(e.exponent()) }
    }
}

/// A torus of a group together with one seed per block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusElementDto {
    pub group: GroupDto,
    pub torus: TorusDto,
    pub element: Vec<EigenDto>,
}

fn partition(v: &[u32]) -> Result<Partition, CliError> {
    Ok(Partition::new(v.to_vec())?)
}

impl TorusElementDto {
    pub fn to_core(&self, field: &FieldParam) -> Result<DualTorusPair, CliError> {
        let fam: Family = self.group.family.into();
        let mu = partition(&self.torus.mu)?;
        let lambda = partition(&self.torus.lambda)?;
        let torus = match fam {
            Family::GL | Family::U => {
                if !lambda.is_empty() {
                    return Err(CliError::Job("type A tori take no lambda".into()));
                }
                TorusDatum::type_a(fam, field, mu)?
            }
            _ => {
                let split = match self.torus.split {
                    SplitDto::Plus => SplitSign::Plus,
                    SplitDto::Minus => SplitSign::Minus,
                };
                TorusDatum::signed(fam, field, Bipartition::new(mu, lambda), split)?
            }
        };
        if torus.kind.n != self.group.n {
            return Err(CliError::Job(format!(
                "torus {} has rank {} but the group has rank {}",
                torus.label, torus.kind.n, self.group.n
            )));
        }
        let seeds = self.element.iter().map(|e| e.to_core(field)).collect::<Result<Vec<_>, _>>()?;
        Ok(DualTorusPair::new(torus, SemisimpleElement::new(seeds))?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesOrbitDto {
    pub seed: EigenDto,
    pub nu: u32,
    pub lambda: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDto {
    pub group: GroupDto,
    pub orbits: Vec<SeriesOrbitDto>,
}

impl SeriesDto {
    pub fn to_core(&self, field: &FieldParam) -> Result<SeriesDatum, CliError> {
        let orbits = self
            .orbits
            .iter()
            .map(|o| Ok(SeriesOrbit { seed: o.seed.to_core(field)?, nu: o.nu, lambda: partition(&o.lambda)? }))
            .collect::<Result<Vec<_>, CliError>>()?;
        let s = SeriesDatum { group: self.group.to_core(field), orbits };
        s.entries()?;
        Ok(s)
    }

    pub fn from_core(s: &SeriesDatum) -> Self {
        SeriesDto {
            group: GroupDto::from_core(&s.group),
            orbits: s
                .orbits
                .iter()
                .map(|o| SeriesOrbitDto { seed: EigenDto::from_core(&o.seed), nu: o.nu, lambda: o.lambda.parts().to_vec() })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteDto {
    Direct,
    Closed,
    Factorized,
}

impl FromStr for RouteDto {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "direct" => Ok(RouteDto::Direct),
            "closed" | "closed_form" => Ok(RouteDto::Closed),
            "factorized" => Ok(RouteDto::Factorized),
            other => Err(CliError::Job(format!("unknown route {other:?}"))),
        }
    }
}

impl RouteDto {
    pub fn name(self) -> &'static str {
        match self {
            RouteDto::Direct => "direct",
            RouteDto::Closed => "closed_form",
            RouteDto::Factorized => "factorized",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaddingDto {
    #[default]
    Default,
    Alternate,
}

/// Job options. Every seed defaults to 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDto {
    /// Routes to run; all three when absent.
    #[serde(default)]
    pub routes: Option<Vec<RouteDto>>,
    #[serde(default)]
    pub padding: PaddingDto,
    /// Selects the non-trivial padding characters of the factorized route.
    #[serde(default)]
    pub theta_seed: u64,
    /// Selects the synthetic characters of the multiplicity computation.
    #[serde(default)]
    pub tau_seed: u64,
    /// Largest rank visited by the oracle suite.
    #[serde(default)]
    pub oracle_bound: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Pair,
    Factorize,
    Multiplicity,
    Oracle,
}

/// One job file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default)]
    pub q: Option<u64>,
    #[serde(default)]
    pub pair_kind: Option<PairKindDto>,
    #[serde(default)]
    pub big: Option<TorusElementDto>,
    #[serde(default)]
    pub small: Option<TorusElementDto>,
    #[serde(default)]
    pub pi: Option<SeriesDto>,
    #[serde(default)]
    pub sigma: Option<SeriesDto>,
    #[serde(default)]
    pub options: OptionsDto,
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn field(&self) -> Result<FieldParam, CliError> {
        let q = self.q.ok_or_else(|| CliError::Job("missing q".into()))?;
        Ok(FieldParam::new(q)?)
    }
}
