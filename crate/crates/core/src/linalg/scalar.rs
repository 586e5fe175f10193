use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// The base field of a session: a prime field `Fp(p)` or the rationals `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Fp(u32),
    Q,
}

/// An exact field element. Prime-field values carry their modulus so that
/// mixing fields is detected rather than silently coerced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { v: u32, p: u32 },
    Q(BigRational),
}

fn is_prime(p: u64) -> bool {
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

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

impl Field {
    /// Prime field of order `p`; `p` must be a prime not exceeding 2^31.
    pub fn fp(p: u32) -> Result<Field, LinalgError> {
        if p as u64 > (1u64 << 31) || !is_prime(p as u64) {
            return Err(LinalgError::BadField(format!("Fp({p}) is not a supported prime field")));
        }
        Ok(Field::Fp(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Fp(p) => *p as u64,
            Field::Q => 0,
        }
    }

    /// Number of elements, if finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Fp(p) => Some(*p as u64),
            Field::Q => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Fp(p) => Scalar::Fp { v: (n.rem_euclid(*p as i64)) as u32, p: *p },
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar, LinalgError> {
        if den == 0 {
            return Err(LinalgError::DivisionByZero);
        }
        Ok(self.from_i64(num).div(&self.from_i64(den)).map_err(|_| LinalgError::DivisionByZero)?)
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Fp(p) => {
                let m = BigInt::from(*p);
                let r = ((n % &m) + &m) % &m;
                let v: u32 = r.try_into().expect("residue fits");
                Scalar::Fp { v, p: *p }
            }
            Field::Q => Scalar::Q(BigRational::from_integer(n.clone())),
        }
    }

    /// Element number `i` in a fixed enumeration of a finite field.
    pub fn element(&self, i: u64) -> Scalar {
        match self {
            Field::Fp(p) => Scalar::Fp { v: (i % *p as u64) as u32, p: *p },
            Field::Q => self.from_i64(i as i64),
        }
    }

    /// Parse a field spec: `Q`, `Fp(5)`, `F5` or `GF(5)`.
    pub fn parse(s: &str) -> Result<Field, LinalgError> {
        let t = s.trim();
        if t == "Q" || t == "QQ" {
            return Ok(Field::Q);
        }
        let inner = t
            .strip_prefix("Fp(")
            .or_else(|| t.strip_prefix("GF("))
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix('F'));
        match inner.and_then(|x| x.trim().parse::<u32>().ok()) {
            Some(p) => Field::fp(p),
            None => Err(LinalgError::BadField(format!("unrecognized field spec `{s}`"))),
        }
    }

    /// Parse an entry: an integer or `a/b`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, LinalgError> {
        let t = s.trim();
        let bad = || LinalgError::Parse(format!("bad scalar `{s}`"));
        if let Some((a, b)) = t.split_once('/') {
            let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if b.is_zero() {
                return Err(LinalgError::DivisionByZero);
            }
            self.from_bigint(&a).div(&self.from_bigint(&b)).map_err(|_| LinalgError::DivisionByZero)
        } else {
            let a = BigInt::from_str(t).map_err(|_| bad())?;
            Ok(self.from_bigint(&a))
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Fp(p) => write!(f, "Fp({p})"),
            Field::Q => write!(f, "Q"),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Field::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Fp { p, .. } => Field::Fp(*p),
            Scalar::Q(_) => Field::Q,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Q(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Q(r) => r.is_one(),
        }
    }

    fn same(&self, o: &Scalar) -> Result<(), LinalgError> {
        if self.field() == o.field() {
            Ok(())
        } else {
            Err(LinalgError::FieldMismatch(self.field(), o.field()))
        }
    }

    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar, LinalgError> {
        self.same(o)?;
        Ok(match (self, o) {
            (Scalar::Fp { v, p }, Scalar::Fp { v: w, .. }) => {
                Scalar::Fp { v: ((*v as u64 + *w as u64) % *p as u64) as u32, p: *p }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => unreachable!(),
        })
    }

    pub fn checked_mul(&self, o: &Scalar) -> Result<Scalar, LinalgError> {
        self.same(o)?;
        Ok(match (self, o) {
            (Scalar::Fp { v, p }, Scalar::Fp { v: w, .. }) => {
                Scalar::Fp { v: ((*v as u64 * *w as u64) % *p as u64) as u32, p: *p }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, o: &Scalar) -> Result<Scalar, LinalgError> {
        self.checked_add(&o.neg_ref())
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
            Scalar::Q(a) => Scalar::Q(-a),
        }
    }

    pub fn inv(&self) -> Result<Scalar, LinalgError> {
        if self.is_zero() {
            return Err(LinalgError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Fp { v, p } => Scalar::Fp { v: inv_mod(*v as u64, *p as u64) as u32, p: *p },
            Scalar::Q(a) => Scalar::Q(a.recip()),
        })
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar, LinalgError> {
        self.checked_mul(&o.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut r = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        r
    }

    /// Integer representative for prime-field values, in `0..p`.
    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Fp { v, .. } => Some(*v),
            Scalar::Q(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(r) => Some(r),
            Scalar::Fp { .. } => None,
        }
    }

    /// Canonical JSON form: an integer when possible, otherwise `"a/b"`.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Fp { v, .. } => serde_json::Value::from(*v),
            Scalar::Q(r) => {
                if r.is_integer() {
                    match i64::try_from(r.numer().clone()) {
                        Ok(n) => serde_json::Value::from(n),
                        Err(_) => serde_json::Value::from(r.numer().to_string()),
                    }
                } else {
                    serde_json::Value::from(format!("{}/{}", r.numer(), r.denom()))
                }
            }
        }
    }

    pub fn from_json(field: Field, v: &serde_json::Value) -> Result<Scalar, LinalgError> {
        match v {
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(field.from_i64(i))
                } else if let Some(u) = n.as_u64() {
                    Ok(field.from_bigint(&BigInt::from(u)))
                } else {
                    Err(LinalgError::Parse(format!("non-integer number {n}")))
                }
            }
            serde_json::Value::String(s) => field.parse_scalar(s),
            other => Err(LinalgError::Parse(format!("bad scalar {other}"))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { v, .. } => write!(f, "{v}"),
            Scalar::Q(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.checked_add(o).expect("field mismatch")
    }
}
impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.checked_sub(o).expect("field mismatch")
    }
}
impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.checked_mul(o).expect("field mismatch")
    }
}
impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}
impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}
impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}
impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}
impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}
