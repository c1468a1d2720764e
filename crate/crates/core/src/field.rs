//! Exact scalars over prime fields `F_p` and the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A coefficient field: the rationals (`characteristic == 0`) or `F_p`.
///
/// `algebraically_closed` is declared metadata only. No closure is built; the
/// flag only unlocks reporting `Z(k[G]) ≅ k^c` when the arithmetic allows it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFieldSpec")]
pub struct FieldSpec {
    #[serde(rename = "char")]
    characteristic: u64,
    #[serde(rename = "alg_closed", default, skip_serializing_if = "std::ops::Not::not")]
    algebraically_closed: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFieldSpec {
    #[serde(rename = "char")]
    characteristic: u64,
    #[serde(rename = "alg_closed", default)]
    algebraically_closed: bool,
}

impl TryFrom<RawFieldSpec> for FieldSpec {
    type Error = Error;

    fn try_from(raw: RawFieldSpec) -> Result<Self> {
        Ok(FieldSpec::new(raw.characteristic)?.with_algebraically_closed(raw.algebraically_closed))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic != 0 && !is_prime(characteristic) {
            return Err(Error::NotPrime(characteristic));
        }
        // residues are multiplied in u128, but keep them comfortably below u32
        if characteristic > u32::MAX as u64 {
            return Err(Error::Input(format!("characteristic {characteristic} is too large")));
        }
        Ok(Self { characteristic, algebraically_closed: false })
    }

    pub fn rationals() -> Self {
        Self { characteristic: 0, algebraically_closed: false }
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::NotPrime(0));
        }
        Self::new(p)
    }

    pub fn with_algebraically_closed(mut self, flag: bool) -> Self {
        self.algebraically_closed = flag;
        self
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_algebraically_closed(&self) -> bool {
        self.algebraically_closed
    }

    /// True iff `n` is invertible in the field.
    pub fn is_coprime_to(&self, n: u64) -> bool {
        assert!(n >= 1, "is_coprime_to expects a positive integer");
        self.characteristic == 0 || n % self.characteristic != 0
    }

    pub fn zero(&self) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rational(BigRational::zero()),
            p => Scalar::Mod { p, value: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            p => Scalar::Mod { p, value: (n as i128).rem_euclid(p as i128) as u64 },
        }
    }

    pub fn from_u64(&self, n: u64) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            p => Scalar::Mod { p, value: n % p },
        }
    }

    /// `num / den` in the field; fails if `den` vanishes in it.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        self.from_i64(num).checked_mul(&self.from_i64(den).inv()?)
    }

    /// Parses `"n"` or `"n/d"`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let bad = || Error::Input(format!("cannot parse scalar `{text}`"));
        let text = text.trim();
        match text.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                self.from_ratio(n, d)
            }
            None => Ok(self.from_i64(text.parse().map_err(|_| bad())?)),
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        x.characteristic() == self.characteristic
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q")?,
            p => write!(f, "F_{p}")?,
        }
        if self.algebraically_closed {
            write!(f, " (algebraically closed)")?;
        }
        Ok(())
    }
}

/// An exact field element. Residues are always reduced; fractions are always
/// in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { p: u64, value: u64 },
    Rational(BigRational),
}

impl Scalar {
    pub fn characteristic(&self) -> u64 {
        match self {
            Scalar::Mod { p, .. } => *p,
            Scalar::Rational(_) => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::FieldMismatch { left: self.characteristic(), right: other.characteristic() }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Mod { p, value: a }, Scalar::Mod { p: q, value: b }) if p == q => {
                let s = a + b;
                Ok(Scalar::Mod { p: *p, value: if s >= *p { s - p } else { s } })
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Mod { p, value: a }, Scalar::Mod { p: q, value: b }) if p == q => {
                Ok(Scalar::Mod { p: *p, value: ((*a as u128 * *b as u128) % *p as u128) as u64 })
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Mod { p, value } => Scalar::Mod { p: *p, value: if *value == 0 { 0 } else { p - value } },
            Scalar::Rational(q) => Scalar::Rational(-q),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Mod { p, value } => {
                let e = (*value as i128).extended_gcd(&(*p as i128));
                debug_assert_eq!(e.gcd, 1);
                Ok(Scalar::Mod { p: *p, value: e.x.rem_euclid(*p as i128) as u64 })
            }
            Scalar::Rational(q) => Ok(Scalar::Rational(q.recip())),
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if self.characteristic() != other.characteristic() {
            return Err(self.mismatch(other));
        }
        self.checked_mul(&other.inv()?)
    }

    /// Multiplies by an integer, reducing into the field.
    pub fn scale_int(&self, n: i64) -> Scalar {
        match self {
            Scalar::Mod { p, value } => {
                let n = (n as i128).rem_euclid(*p as i128) as u128;
                Scalar::Mod { p: *p, value: ((*value as u128 * n) % *p as u128) as u64 }
            }
            Scalar::Rational(q) => Scalar::Rational(q * BigInt::from(n)),
        }
    }

    /// The integer representative when the value is integral.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Mod { value, .. } => i64::try_from(*value).ok(),
            Scalar::Rational(q) if q.is_integer() => i64::try_from(q.to_integer()).ok(),
            Scalar::Rational(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.to_i64() {
            Some(n) => serializer.serialize_i64(n),
            None => serializer.serialize_str(&self.to_string()),
        }
    }
}

// Operator forms panic on mixed fields; internal code always works inside one
// field. Use the `checked_*` methods at API boundaries.
impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}
