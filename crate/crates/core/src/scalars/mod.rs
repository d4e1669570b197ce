//! Exact field arithmetic: arbitrary-precision rationals and the Galois fields GF(p^k).
//!
//! [`Scalar`] is a runtime-typed field element. Geometry is written against the
//! [`FieldElement`] trait, which `Scalar` implements exactly and `f64`
//! implements approximately for interactive evaluation.

mod galois;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use galois::{GaloisField, MAX_ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("operands belong to different fields: {0} and {1}")]
    Mismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field is not ordered")]
    UnorderedField,
    #[error("field is infinite")]
    InfiniteField,
    #[error("invalid field spec: {0}")]
    InvalidSpec(String),
    #[error("cannot parse scalar: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// Arithmetic needed by the geometric layers.
///
/// `zero_like`/`one_like` take a receiver because finite-field elements carry
/// their field with them.
pub trait FieldElement:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self, FieldError>;
    fn sign(&self) -> Result<Sign, FieldError>;

    fn is_one(&self) -> bool {
        (self.clone() - self.one_like()).is_zero()
    }

    fn div(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self.clone() * rhs.inv()?)
    }

    /// Integer power; negative exponents invert first.
    fn powi(&self, n: i64) -> Result<Self, FieldError> {
        let mut base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        Ok(acc)
    }
}

/// Serializable description of a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Rationals,
    Finite {
        p: u32,
        k: u32,
        /// Monic modulus, constant term first. Empty selects the default modulus.
        #[serde(default)]
        modulus: Vec<u32>,
    },
}

impl FieldSpec {
    pub fn finite(p: u32, k: u32) -> Self {
        FieldSpec::Finite {
            p,
            k,
            modulus: Vec::new(),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `rational`, `rationals`, `q`, `gf7`, `gf:9`, `gf(9)` or a JSON object.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| FieldError::InvalidSpec(e.to_string()));
        }
        let lower = t.to_ascii_lowercase();
        if matches!(lower.as_str(), "rational" | "rationals" | "q") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = lower
            .strip_prefix("gf")
            .map(|r| r.trim_matches(|c: char| c == ':' || c == '(' || c == ')'))
            .ok_or_else(|| FieldError::InvalidSpec(format!("unknown field '{s}'")))?;
        let q: u32 = digits
            .parse()
            .map_err(|_| FieldError::InvalidSpec(format!("unknown field '{s}'")))?;
        let (p, k) = prime_power(q)
            .ok_or_else(|| FieldError::InvalidSpec(format!("{q} is not a prime power")))?;
        Ok(FieldSpec::finite(p, k))
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut r = q;
    let mut k = 0;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// Runtime handle on a field: creates, samples and enumerates [`Scalar`]s.
#[derive(Clone, Debug)]
pub enum ScalarField {
    Rationals,
    Finite(Arc<GaloisField>),
}

impl PartialEq for ScalarField {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ScalarField::Rationals, ScalarField::Rationals) => true,
            (ScalarField::Finite(a), ScalarField::Finite(b)) => a.same_field(b),
            _ => false,
        }
    }
}

impl Eq for ScalarField {}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Rationals => write!(f, "Q"),
            ScalarField::Finite(gf) => write!(f, "GF({})", gf.order()),
        }
    }
}

impl ScalarField {
    pub fn rationals() -> Self {
        ScalarField::Rationals
    }

    /// GF(q) with the default modulus.
    pub fn gf(q: u32) -> Result<Self, FieldError> {
        let (p, k) =
            prime_power(q).ok_or_else(|| FieldError::InvalidSpec(format!("{q} is not a prime power")))?;
        Self::from_spec(&FieldSpec::finite(p, k))
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self, FieldError> {
        match spec {
            FieldSpec::Rationals => Ok(ScalarField::Rationals),
            FieldSpec::Finite { p, k, modulus } => {
                let m = if modulus.is_empty() {
                    GaloisField::default_modulus(*p, *k)?
                } else {
                    modulus.clone()
                };
                Ok(ScalarField::Finite(Arc::new(GaloisField::new(*p, *k, &m)?)))
            }
        }
    }

    pub fn spec(&self) -> FieldSpec {
        match self {
            ScalarField::Rationals => FieldSpec::Rationals,
            ScalarField::Finite(gf) => FieldSpec::Finite {
                p: gf.characteristic(),
                k: gf.degree(),
                modulus: gf.modulus().to_vec(),
            },
        }
    }

    pub fn is_ordered(&self) -> bool {
        matches!(self, ScalarField::Rationals)
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u32> {
        match self {
            ScalarField::Rationals => None,
            ScalarField::Finite(gf) => Some(gf.order()),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            ScalarField::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            ScalarField::Finite(gf) => Scalar::Finite(FiniteElement {
                index: gf.index_of_int(n),
                field: gf.clone(),
            }),
        }
    }

    /// The rational `num/den`; panics on a zero denominator or a finite field.
    pub fn ratio(&self, num: i64, den: i64) -> Scalar {
        match self {
            ScalarField::Rationals => Scalar::Rational(BigRational::new(num.into(), den.into())),
            ScalarField::Finite(_) => {
                let d = self.from_int(den).inv().expect("nonzero denominator");
                self.from_int(num) * d
            }
        }
    }

    /// Element with the given coefficient vector (constant term first).
    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<Scalar, FieldError> {
        match self {
            ScalarField::Rationals => Err(FieldError::InfiniteField),
            ScalarField::Finite(gf) => Ok(Scalar::Finite(FiniteElement {
                index: gf.index_of(coeffs)?,
                field: gf.clone(),
            })),
        }
    }

    /// All elements in index order (lexicographic on the coefficient vector read
    /// from the leading coefficient down).
    pub fn elements(&self) -> Result<Vec<Scalar>, FieldError> {
        match self {
            ScalarField::Rationals => Err(FieldError::InfiniteField),
            ScalarField::Finite(gf) => Ok((0..gf.order())
                .map(|i| {
                    Scalar::Finite(FiniteElement {
                        index: i as u8,
                        field: gf.clone(),
                    })
                })
                .collect()),
        }
    }

    /// Random element. Rationals are drawn with small numerators and denominators
    /// so that collisions (equal points, collinear triples) still occur.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self {
            ScalarField::Rationals => {
                let num: i64 = rng.random_range(-12..=12);
                let den: i64 = rng.random_range(1..=6);
                self.ratio(num, den)
            }
            ScalarField::Finite(gf) => Scalar::Finite(FiniteElement {
                index: rng.random_range(0..gf.order()) as u8,
                field: gf.clone(),
            }),
        }
    }

    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.sample(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Parses `"num/den"`, an integer, or a decimal (rationals only).
    pub fn parse(&self, s: &str) -> Result<Scalar, FieldError> {
        let t = s.trim();
        match self {
            ScalarField::Rationals => parse_rational(t).map(Scalar::Rational),
            ScalarField::Finite(_) => {
                if let Ok(n) = t.parse::<i64>() {
                    return Ok(self.from_int(n));
                }
                let v: serde_json::Value =
                    serde_json::from_str(t).map_err(|_| FieldError::Parse(s.to_string()))?;
                self.scalar_from_json(&v)
            }
        }
    }

    /// Reads the JSON form produced by [`Scalar::to_json`], plus plain numbers.
    pub fn scalar_from_json(&self, v: &serde_json::Value) -> Result<Scalar, FieldError> {
        use serde_json::Value;
        match (self, v) {
            (_, Value::String(s)) => self.parse(s),
            (ScalarField::Rationals, Value::Number(n)) => {
                if let Some(i) = n.as_i64() {
                    Ok(self.from_int(i))
                } else {
                    let f = n.as_f64().ok_or_else(|| FieldError::Parse(n.to_string()))?;
                    rational_from_f64(f).map(Scalar::Rational)
                }
            }
            (ScalarField::Rationals, Value::Array(a)) if a.len() == 2 => {
                let num = a[0].as_i64().ok_or_else(|| FieldError::Parse(v.to_string()))?;
                let den = a[1].as_i64().ok_or_else(|| FieldError::Parse(v.to_string()))?;
                if den == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(self.ratio(num, den))
            }
            (ScalarField::Finite(_), Value::Number(n)) => n
                .as_i64()
                .map(|i| self.from_int(i))
                .ok_or_else(|| FieldError::Parse(n.to_string())),
            (ScalarField::Finite(_), Value::Array(a)) => {
                let coeffs = a
                    .iter()
                    .map(|c| c.as_u64().map(|c| c as u32))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| FieldError::Parse(v.to_string()))?;
                self.from_coefficients(&coeffs)
            }
            _ => Err(FieldError::Parse(v.to_string())),
        }
    }
}

fn parse_rational(t: &str) -> Result<BigRational, FieldError> {
    let err = || FieldError::Parse(t.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| err())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let f: BigInt = frac.parse().map_err(|_| err())?;
        let mag = int_part.abs() * &scale + f;
        let num = if neg { -mag } else { mag };
        return Ok(BigRational::new(num, scale));
    }
    t.parse::<BigInt>()
        .map(BigRational::from_integer)
        .map_err(|_| err())
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(f: f64) -> Result<BigRational, FieldError> {
    BigRational::from_float(f).ok_or_else(|| FieldError::Parse(format!("{f}")))
}

#[derive(Clone)]
pub struct FiniteElement {
    field: Arc<GaloisField>,
    index: u8,
}

impl FiniteElement {
    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    fn with(&self, index: u8) -> Self {
        FiniteElement {
            field: self.field.clone(),
            index,
        }
    }
}

impl PartialEq for FiniteElement {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index && self.field.same_field(&other.field)
    }
}

impl Eq for FiniteElement {}

impl Hash for FiniteElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order().hash(state);
        self.index.hash(state);
    }
}

impl fmt::Debug for FiniteElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Scalar::Finite(self.clone()))
    }
}

/// An exact element of ℚ or of some GF(p^k).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Finite(FiniteElement),
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    /// Rationals print as `num/den` (always with a denominator); finite
    /// elements print as a polynomial in `t`, or an integer when k = 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Finite(e) => {
                let coeffs = e.field.coefficients(e.index);
                if coeffs.len() == 1 {
                    return write!(f, "{}", coeffs[0]);
                }
                let terms: Vec<String> = coeffs
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| match (i, c) {
                        (0, c) => format!("{c}"),
                        (1, 1) => "t".to_string(),
                        (1, c) => format!("{c}t"),
                        (i, 1) => format!("t^{i}"),
                        (i, c) => format!("{c}t^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", terms.join("+"))
                }
            }
        }
    }
}

impl Scalar {
    pub fn field(&self) -> ScalarField {
        match self {
            Scalar::Rational(_) => ScalarField::Rationals,
            Scalar::Finite(e) => ScalarField::Finite(e.field.clone()),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Finite(_) => None,
        }
    }

    fn mismatch(&self, other: &Scalar) -> FieldError {
        FieldError::Mismatch(self.field().to_string(), other.field().to_string())
    }

    fn zip(&self, other: &Scalar) -> Result<(), FieldError> {
        match (self, other) {
            (Scalar::Rational(_), Scalar::Rational(_)) => Ok(()),
            (Scalar::Finite(a), Scalar::Finite(b)) if a.field.same_field(&b.field) => Ok(()),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        self.zip(rhs)?;
        Ok(match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Finite(a), Scalar::Finite(b)) => {
                Scalar::Finite(a.with(a.field.add(a.index, b.index)))
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        self.checked_add(&-rhs.clone())
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        self.zip(rhs)?;
        Ok(match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Finite(a), Scalar::Finite(b)) => {
                Scalar::Finite(a.with(a.field.mul(a.index, b.index)))
            }
            _ => unreachable!(),
        })
    }

    /// Best-effort conversion for display and the float backend.
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Scalar::Rational(r) => r.to_f64(),
            Scalar::Finite(_) => None,
        }
    }

    /// JSON form: `"num/den"` for rationals, coefficient array for finite elements.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Rational(_) => serde_json::Value::String(self.to_string()),
            Scalar::Finite(e) => serde_json::Value::from(e.field.coefficients(e.index)),
        }
    }
}

impl FieldElement for Scalar {
    fn zero_like(&self) -> Self {
        self.from_int_like(0)
    }

    fn one_like(&self) -> Self {
        self.from_int_like(1)
    }

    fn from_int_like(&self, n: i64) -> Self {
        match self {
            Scalar::Rational(_) => Scalar::Rational(BigRational::from_integer(n.into())),
            Scalar::Finite(e) => Scalar::Finite(e.with(e.field.index_of_int(n))),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Finite(e) => e.index == 0,
        }
    }

    fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Finite(e) => e.index == 1,
        }
    }

    fn inv(&self) -> Result<Self, FieldError> {
        match self {
            Scalar::Rational(r) if r.is_zero() => Err(FieldError::DivisionByZero),
            Scalar::Rational(r) => Ok(Scalar::Rational(r.recip())),
            Scalar::Finite(e) => e
                .field
                .inv(e.index)
                .map(|i| Scalar::Finite(e.with(i)))
                .ok_or(FieldError::DivisionByZero),
        }
    }

    fn sign(&self) -> Result<Sign, FieldError> {
        match self {
            Scalar::Rational(r) if r.is_zero() => Ok(Sign::Zero),
            Scalar::Rational(r) if r.is_negative() => Ok(Sign::Negative),
            Scalar::Rational(_) => Ok(Sign::Positive),
            Scalar::Finite(_) => Err(FieldError::UnorderedField),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            /// Panics if the operands belong to different fields; use the
            /// `checked_*` methods at API boundaries.
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$checked(&rhs).expect("scalar arithmetic across fields")
            }
        }
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar arithmetic across fields")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Finite(e) => {
                let i = e.field.neg(e.index);
                Scalar::Finite(e.with(i))
            }
        }
    }
}

/// Tolerance under which a double counts as zero in the float backend.
pub const FLOAT_ZERO_TOL: f64 = 1e-12;

impl FieldElement for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }

    fn one_like(&self) -> Self {
        1.0
    }

    fn from_int_like(&self, n: i64) -> Self {
        n as f64
    }

    fn is_zero(&self) -> bool {
        self.abs() < FLOAT_ZERO_TOL
    }

    fn inv(&self) -> Result<Self, FieldError> {
        if FieldElement::is_zero(self) {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(1.0 / self)
        }
    }

    fn sign(&self) -> Result<Sign, FieldError> {
        Ok(if FieldElement::is_zero(self) {
            Sign::Zero
        } else if *self < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        })
    }
}
