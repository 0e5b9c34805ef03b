//! Exact coefficient fields: the rationals and prime fields F_p with p < 2^31.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A coefficient field. Forms and matrices carry one of these and refuse to mix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u32),
}

/// A field element. `Q` is only produced by `Field::Rationals`, `P` only by a prime
/// field (always a canonical residue in `0..p`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    P(u32),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::zero()),
            Field::Prime(_) => Scalar::P(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(v.into())),
            Field::Prime(p) => Scalar::P(v.rem_euclid(*p as i64) as u32),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Scalar::P(r.to_u32().expect("residue below p"))
            }
        }
    }

    /// Maps a rational into the field; fails in F_p when p divides the denominator.
    pub fn from_rational(&self, v: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rationals => Ok(Scalar::Q(v.clone())),
            Field::Prime(p) => {
                let num = self.from_bigint(v.numer());
                let den = self.from_bigint(v.denom());
                let inv = self
                    .inv(&den)
                    .ok_or_else(|| Error::Parse(format!("denominator of {v} vanishes mod {p}")))?;
                Ok(self.mul(&num, &inv))
            }
        }
    }

    fn check(&self, a: &Scalar) {
        match (self, a) {
            (Field::Rationals, Scalar::Q(_)) => {}
            (Field::Prime(p), Scalar::P(v)) => debug_assert!(v < p),
            _ => panic!("scalar {a:?} does not belong to {self:?}"),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.check(a);
        self.check(b);
        match (a, b) {
            (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            (Scalar::P(x), Scalar::P(y)) => {
                let p = self.characteristic() as u64;
                Scalar::P(((*x as u64 + *y as u64) % p) as u32)
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.check(a);
        match a {
            Scalar::Q(x) => Scalar::Q(-x),
            Scalar::P(x) => {
                let p = self.characteristic();
                Scalar::P(if *x == 0 { 0 } else { p - x })
            }
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.check(a);
        self.check(b);
        match (a, b) {
            (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x * y),
            (Scalar::P(x), Scalar::P(y)) => {
                let p = self.characteristic() as u64;
                Scalar::P(((*x as u64 * *y as u64) % p) as u32)
            }
            _ => unreachable!(),
        }
    }

    pub fn pow(&self, a: &Scalar, mut e: u32) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match a {
            Scalar::Q(x) => Some(Scalar::Q(x.recip())),
            Scalar::P(_) => Some(self.pow(a, self.characteristic() - 2)),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Q(x) => x.is_zero(),
            Scalar::P(x) => *x == 0,
        }
    }

    /// Parses an integer, an `a/b` rational, or a residue.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad coefficient {s:?}"));
        let v = if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            BigRational::new(n, d)
        } else {
            BigRational::from_integer(s.parse().map_err(|_| bad())?)
        };
        self.from_rational(&v)
    }

    pub fn format(&self, a: &Scalar) -> String {
        a.to_string()
    }

    /// Uniform element of F_p, or an integer in `-bound..=bound` for the rationals.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Scalar {
        match self {
            Field::Rationals => self.from_i64(rng.gen_range(-bound..=bound)),
            Field::Prime(p) => Scalar::P(rng.gen_range(0..*p)),
        }
    }

    /// Nonzero random element.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Scalar {
        loop {
            let c = self.random(rng, bound);
            if !self.is_zero(&c) {
                return c;
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl Scalar {
    /// Integer value for prime residues or integral rationals.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Q(x) if x.is_integer() => Some(x.to_integer()),
            Scalar::Q(_) => None,
            Scalar::P(v) => Some(BigInt::from(*v)),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Q(x) => x.clone(),
            Scalar::P(v) => BigRational::from_integer((*v).into()),
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Q(x) if x.is_negative())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(x) if x.is_integer() => write!(f, "{}", x.numer()),
            Scalar::Q(x) => write!(f, "{}/{}", x.numer(), x.denom()),
            Scalar::P(v) => write!(f, "{v}"),
        }
    }
}
