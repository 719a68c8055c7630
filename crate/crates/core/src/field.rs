//! Coefficient fields: the rationals and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base field of a coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

/// An element of a [`Field`].
///
/// Prime-field values are kept reduced into `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, p: u64 },
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not a prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp {
                value: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar::Fp {
                    value: r.to_u64().expect("reduced residue fits"),
                    p,
                }
            }
        }
    }

    /// Maps a rational into the field; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rationals => Ok(Scalar::Q(q.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                if den.is_zero() {
                    return Err(Error::Parse(format!(
                        "denominator of {q} vanishes in characteristic {}",
                        self.characteristic()
                    )));
                }
                Ok(num.mul(&den.inverse().expect("nonzero")))
            }
        }
    }

    /// Parses `"n"` or `"n/d"`.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        self.from_rational(&BigRational::new(num, den))
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        matches!(
            (self, a),
            (Field::Rationals, Scalar::Q(_)) | (Field::Prime(_), Scalar::Fp { .. })
        ) && match (self, a) {
            (Field::Prime(p), Scalar::Fp { p: q, .. }) => p == q,
            _ => true,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Fp {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Fp {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Q(a) => Some(Scalar::Q(a.recip())),
            Scalar::Fp { value, p } => Some(Scalar::Fp {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            }),
        }
    }

    /// Canonical string: `"n"` or `"n/d"` (prime-field values as `0..p`).
    pub fn to_literal(&self) -> String {
        match self {
            Scalar::Q(q) if q.is_integer() => q.numer().to_string(),
            Scalar::Q(q) => format!("{}/{}", q.numer(), q.denom()),
            Scalar::Fp { value, .. } => value.to_string(),
        }
    }

    pub(crate) fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Q(q) if q.is_negative())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let m = p as u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Wire form of a field: `"Q"` or `{"Fp": p}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        fp: u64,
    },
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldSpec::Named(s) if s == "Q" => Ok(Field::Rationals),
            FieldSpec::Named(s) => Err(Error::Parse(format!("unknown field {s:?}"))),
            FieldSpec::Prime { fp } => Field::prime(*fp),
        }
    }
}

impl From<Field> for FieldSpec {
    fn from(f: Field) -> Self {
        match f {
            Field::Rationals => FieldSpec::Named("Q".into()),
            Field::Prime(p) => FieldSpec::Prime { fp: p },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(a.add(&b), f.from_i64(2));
        assert_eq!(a.mul(&b), f.from_i64(2));
        assert_eq!(a.mul(&a.inverse().unwrap()), f.one());
        assert_eq!(f.from_i64(-1), f.from_i64(4));
    }

    #[test]
    fn parse_literals() {
        let q = Field::Rationals;
        assert_eq!(q.parse("-2/4").unwrap().to_literal(), "-1/2");
        let f = Field::prime(7).unwrap();
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(4));
        assert!(f.parse("1/7").is_err());
        assert!(Field::prime(6).is_err());
    }

    #[test]
    fn field_spec_wire_form() {
        let s: FieldSpec = serde_json::from_str(r#"{"Fp": 5}"#).unwrap();
        assert_eq!(s.to_field().unwrap(), Field::Prime(5));
        let s: FieldSpec = serde_json::from_str(r#""Q""#).unwrap();
        assert_eq!(s.to_field().unwrap(), Field::Rationals);
    }
}
