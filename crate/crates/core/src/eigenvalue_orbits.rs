//! Eigenvalues in the multiplicative group of an algebraic closure of F_q.
//!
//! An eigenvalue is stored as a pair `(level, exponent)`: the element
//! `zeta_level ^ exponent` where `zeta_k` generates `F_{q^k}^x` and the
//! generators are chosen compatibly under norm maps. Values are normalized to
//! the least level that contains them, so equal elements compare equal.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The size `q` of the base field. Always an odd prime power when built
/// through [`FieldParam::new`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldParam {
    q: BigUint,
}

impl FieldParam {
    /// Validates that `q` is an odd prime power.
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || q % 2 == 0 {
            return Err(Error::InvalidField(alloc::format!("q = {q} is not an odd prime power")));
        }
        let mut p = 3u64;
        while p * p <= q && q % p != 0 {
            p += 2;
        }
        if q % p != 0 {
            p = q;
        }
        let mut r = q;
        while r % p == 0 {
            r /= p;
        }
        if r != 1 {
            return Err(Error::InvalidField(alloc::format!("q = {q} is not an odd prime power")));
        }
        Ok(FieldParam { q: BigUint::from(q) })
    }

    /// The field of size `q^h`.
    pub fn power(&self, h: u32) -> FieldParam {
        FieldParam { q: self.q.pow(h) }
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    /// `q` as a machine integer when it fits.
    pub fn q_u64(&self) -> Option<u64> {
        self.q.to_u64()
    }

    /// `q^k - 1`, the order of `F_{q^k}^x`.
    pub fn order(&self, k: u32) -> BigUint {
        self.q.pow(k) - BigUint::one()
    }
}

impl fmt::Display for FieldParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// A normalized eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Eigenvalue {
    level: u32,
    exponent: BigUint,
}

impl Eigenvalue {
    /// Alias of [`Eigenvalue::new`] taking a machine-size exponent.
    pub fn normalize(field: &FieldParam, level: u32, exponent: u64) -> Result<Self> {
        Self::new(field, level, BigUint::from(exponent))
    }

    /// Builds `zeta_level ^ exponent` and normalizes it to its minimal level.
    pub fn new(field: &FieldParam, level: u32, exponent: BigUint) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidInput("eigenvalue level must be positive".into()));
        }
        let n = field.order(level);
        let e = exponent % &n;
        for d in 1..=level {
            if level % d != 0 {
                continue;
            }
            let m = &n / field.order(d);
            if (&e % &m).is_zero() {
                return Ok(Eigenvalue { level: d, exponent: e / m });
            }
        }
        unreachable!("level itself always divides")
    }

    pub fn from_u64(field: &FieldParam, level: u32, exponent: u64) -> Result<Self> {
        Self::new(field, level, BigUint::from(exponent))
    }

    pub fn one() -> Self {
        Eigenvalue { level: 1, exponent: BigUint::zero() }
    }

    pub fn minus_one(field: &FieldParam) -> Self {
        Eigenvalue { level: 1, exponent: field.order(1) >> 1 }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn exponent(&self) -> &BigUint {
        &self.exponent
    }

    /// Exponent of the same element at level `l`, a multiple of the level.
    pub fn exponent_at(&self, field: &FieldParam, l: u32) -> Result<BigUint> {
        if l % self.level != 0 {
            return Err(Error::InvalidInput(alloc::format!(
                "level {} does not divide {l}",
                self.level
            )));
        }
        Ok(&self.exponent * (field.order(l) / field.order(self.level)))
    }

    /// Reads an exponent at level `l` back into normalized form.
    pub fn from_level(field: &FieldParam, l: u32, exponent: BigUint) -> Self {
        Self::new(field, l, exponent).expect("positive level")
    }

    pub fn inverse(&self, field: &FieldParam) -> Self {
        let n = field.order(self.level);
        let e = (&n - &self.exponent) % &n;
        Eigenvalue { level: self.level, exponent: e }
    }

    /// `x^(twist q)`, the Frobenius image for the given twist.
    pub fn frobenius(&self, field: &FieldParam, twist: Twist) -> Self {
        let n = field.order(self.level);
        let mult = match twist {
            Twist::Standard => field.q() % &n,
            Twist::Unitary => (&n - field.q() % &n) % &n,
        };
        Eigenvalue { level: self.level, exponent: (&self.exponent * mult) % n }
    }

    /// Multiplicative order of the element.
    pub fn order(&self, field: &FieldParam) -> BigUint {
        let n = field.order(self.level);
        let g = self.exponent.gcd(&n);
        n / g
    }

    pub fn is_one(&self) -> bool {
        self.level == 1 && self.exponent.is_zero()
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.level, self.exponent)
    }
}

/// Which Frobenius acts on eigenvalues: `x -> x^q` or `x -> x^(-q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Twist {
    Standard,
    Unitary,
}

/// Canonical key of an orbit: its least member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitKey(pub Eigenvalue);

impl fmt::Display for OrbitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

/// A Frobenius orbit of eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusOrbit {
    pub twist: Twist,
    pub members: Vec<Eigenvalue>,
    pub self_inverse: bool,
    pub contains_one: bool,
    pub contains_minus_one: bool,
}

impl FrobeniusOrbit {
    pub fn size(&self) -> u32 {
        self.members.len() as u32
    }

    pub fn key(&self) -> OrbitKey {
        OrbitKey(self.members[0].clone())
    }

    pub fn contains(&self, x: &Eigenvalue) -> bool {
        self.members.binary_search(x).is_ok()
    }

    /// Human readable tag used in diagnostics, e.g. `[-1]`.
    pub fn describe(&self) -> String {
        if self.contains_one {
            "[1]".into()
        } else if self.contains_minus_one {
            "[-1]".into()
        } else {
            alloc::format!("{}", self.key())
        }
    }
}

/// The orbit of `a` under the chosen Frobenius twist.
pub fn frobenius_orbit(field: &FieldParam, twist: Twist, a: &Eigenvalue) -> FrobeniusOrbit {
    let mut members = Vec::new();
    let mut x = a.clone();
    loop {
        members.push(x.clone());
        x = x.frobenius(field, twist);
        if &x == a {
            break;
        }
    }
    members.sort();
    let inv = a.inverse(field);
    let self_inverse = members.binary_search(&inv).is_ok();
    let one = Eigenvalue::one();
    let minus = Eigenvalue::minus_one(field);
    FrobeniusOrbit {
        twist,
        contains_one: members.contains(&one),
        contains_minus_one: members.contains(&minus),
        self_inverse,
        members,
    }
}

/// Key of the union of the orbits of `a` and `a^-1` (standard twist).
/// Used for symplectic and orthogonal duals, where eigenvalues come in
/// inverse pairs.
pub fn paired_orbit_key(field: &FieldParam, a: &Eigenvalue) -> OrbitKey {
    let o = frobenius_orbit(field, Twist::Standard, a);
    let oi = frobenius_orbit(field, Twist::Standard, &a.inverse(field));
    core::cmp::min(o.key(), oi.key())
}
