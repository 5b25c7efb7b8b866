//! Exact-or-float scalar arithmetic.
//!
//! Every quantity in this crate is a [`Scalar`]: either an exact rational
//! (arbitrary precision) or an `f64`. Operations stay exact as long as all
//! inputs are exact and the operation is rational; anything transcendental
//! (or any mixed operation) degrades to the float path. The variant therefore
//! doubles as an arithmetic-mode tag that propagates through every
//! computation and ends up in result reports.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arithmetic mode of a computed result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithmeticMode {
    Exact,
    Float,
}

impl ArithmeticMode {
    pub fn combine(self, other: ArithmeticMode) -> ArithmeticMode {
        if self == ArithmeticMode::Exact && other == ArithmeticMode::Exact {
            ArithmeticMode::Exact
        } else {
            ArithmeticMode::Float
        }
    }
}

impl fmt::Display for ArithmeticMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithmeticMode::Exact => write!(f, "exact"),
            ArithmeticMode::Float => write!(f, "float"),
        }
    }
}

/// A real number, exact rational or floating point.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn big_int(n: BigInt) -> Scalar {
        Scalar::Exact(BigRational::from_integer(n))
    }

    /// Exact rational `p/q`. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Scalar {
        assert!(q != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_f64(x: f64) -> Scalar {
        Scalar::Float(x)
    }

    pub fn mode(&self) -> ArithmeticMode {
        match self {
            Scalar::Exact(_) => ArithmeticMode::Exact,
            Scalar::Float(_) => ArithmeticMode::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    /// Largest integer `<= self`.
    pub fn floor_big(&self) -> BigInt {
        match self {
            Scalar::Exact(r) => r.floor().to_integer(),
            Scalar::Float(x) => BigInt::from(x.floor() as i64),
        }
    }

    pub fn floor_i64(&self) -> i64 {
        self.floor_big().to_i64().expect("floor out of i64 range")
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(&self) -> Scalar {
        self.clone() - Scalar::big_int(self.floor_big())
    }

    /// `sin(pi * self)`. Exact when `self` is rational with denominator 1 or
    /// 2 (values in {-1, 0, 1}); float otherwise.
    pub fn sin_pi(&self) -> Scalar {
        if let Scalar::Exact(r) = self {
            let denom = r.denom();
            if denom.is_one() {
                return Scalar::zero();
            }
            if *denom == BigInt::from(2) {
                // r = k/2 with k odd; sin(pi k/2) = +1 for k = 1 mod 4, -1 for k = 3 mod 4.
                let k = r.numer();
                let m = ((k % 4) + 4) % 4;
                return if m == BigInt::from(1) {
                    Scalar::one()
                } else {
                    Scalar::int(-1)
                };
            }
        }
        Scalar::Float((self.to_f64() * std::f64::consts::PI).sin())
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Parse `"p/q"`, an integer, or a decimal. `p/q` and integers are
    /// exact; decimals are floats (the written form does not pin an
    /// intended rational).
    pub fn parse(text: &str) -> Result<Scalar, String> {
        let t = text.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in {t:?}"))?;
            let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in {t:?}"))?;
            if q.is_zero() {
                return Err(format!("zero denominator in {t:?}"));
            }
            return Ok(Scalar::Exact(BigRational::new(p, q)));
        }
        if let Ok(n) = t.parse::<BigInt>() {
            return Ok(Scalar::Exact(BigRational::from_integer(n)));
        }
        t.parse::<f64>()
            .map(Scalar::Float)
            .map_err(|_| format!("cannot parse number {t:?}"))
    }
}

fn binop(a: &Scalar, b: &Scalar, exact: impl Fn(&BigRational, &BigRational) -> BigRational, float: impl Fn(f64, f64) -> f64) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(exact(x, y)),
        _ => Scalar::Float(float(a.to_f64(), b.to_f64())),
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                binop(&self, &rhs, |x, y| x $op y, |x, y| x $op y)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                binop(&self, rhs, |x, y| x $op y, |x, y| x $op y)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                binop(self, &rhs, |x, y| x $op y, |x, y| x $op y)
            }
        }
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                binop(self, rhs, |x, y| x $op y, |x, y| x $op y)
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);
impl_binop!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => {
                if r.denom().is_one() {
                    if let Some(n) = r.numer().to_i64() {
                        return serializer.serialize_i64(n);
                    }
                }
                serializer.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
            }
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Scalar, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        match value {
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Scalar::int(i))
                } else {
                    Ok(Scalar::Float(n.as_f64().ok_or_else(|| D::Error::custom("bad number"))?))
                }
            }
            serde_json::Value::String(s) => Scalar::parse(&s).map_err(D::Error::custom),
            other => Err(D::Error::custom(format!("expected number or \"p/q\" string, got {other}"))),
        }
    }
}

/// A point in the plane (model space or universal cover).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point2 {
    pub fn new(x: Scalar, y: Scalar) -> Point2 {
        Point2 { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Point2 {
        Point2::new(Scalar::int(x), Scalar::int(y))
    }

    pub fn floats(x: f64, y: f64) -> Point2 {
        Point2::new(Scalar::Float(x), Scalar::Float(y))
    }

    pub fn mode(&self) -> ArithmeticMode {
        self.x.mode().combine(self.y.mode())
    }

    pub fn add(&self, dx: &Scalar, dy: &Scalar) -> Point2 {
        Point2::new(&self.x + dx, &self.y + dy)
    }

    /// Euclidean distance, via floats.
    pub fn dist_f64(&self, other: &Point2) -> f64 {
        let dx = self.x.to_f64() - other.x.to_f64();
        let dy = self.y.to_f64() - other.y.to_f64();
        (dx * dx + dy * dy).sqrt()
    }
}

/// A point in three-space (nilmanifold universal cover).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
}

impl Point3 {
    pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Point3 {
        Point3 { x, y, z }
    }

    pub fn ints(x: i64, y: i64, z: i64) -> Point3 {
        Point3::new(Scalar::int(x), Scalar::int(y), Scalar::int(z))
    }

    pub fn dist_f64(&self, other: &Point3) -> f64 {
        let dx = self.x.to_f64() - other.x.to_f64();
        let dy = self.y.to_f64() - other.y.to_f64();
        let dz = self.z.to_f64() - other.z.to_f64();
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Radical-inverse (van der Corput) value of `index` in the given base, as
/// an exact rational in `[0, 1)`. Halton samples built from these are
/// reproducible and stay on the exact arithmetic path.
pub fn radical_inverse(mut index: u64, base: u64) -> BigRational {
    let mut numer = BigInt::zero();
    let mut denom = BigInt::one();
    let b = BigInt::from(base);
    while index > 0 {
        numer = &numer * &b + BigInt::from(index % base);
        denom *= &b;
        index /= base;
    }
    BigRational::new(numer, denom)
}

/// Deterministic low-discrepancy samples in `[0,1) x [-range, range]`.
pub fn halton_plane(count: usize, range: i64) -> Vec<Point2> {
    (1..=count as u64)
        .map(|i| {
            let x = Scalar::Exact(radical_inverse(i, 2));
            let t = Scalar::Exact(radical_inverse(i, 3));
            let y = t * Scalar::int(2 * range) - Scalar::int(range);
            Point2::new(x, y)
        })
        .collect()
}

/// Deterministic low-discrepancy samples in `[0,1) x [-range, range]^2`.
pub fn halton_space(count: usize, range: i64) -> Vec<Point3> {
    (1..=count as u64)
        .map(|i| {
            let x = Scalar::Exact(radical_inverse(i, 2));
            let ty = Scalar::Exact(radical_inverse(i, 3));
            let tz = Scalar::Exact(radical_inverse(i, 5));
            let y = ty * Scalar::int(2 * range) - Scalar::int(range);
            let z = tz * Scalar::int(2 * range) - Scalar::int(range);
            Point3::new(x, y, z)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        let sum = &a + &b;
        assert!(sum.is_exact());
        assert_eq!(sum, Scalar::ratio(1, 2));
    }

    #[test]
    fn mixed_arithmetic_degrades() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::Float(0.5);
        assert_eq!((&a + &b).mode(), ArithmeticMode::Float);
    }

    #[test]
    fn sin_pi_special_values() {
        assert_eq!(Scalar::int(3).sin_pi(), Scalar::zero());
        assert_eq!(Scalar::ratio(1, 2).sin_pi(), Scalar::one());
        assert_eq!(Scalar::ratio(3, 2).sin_pi(), Scalar::int(-1));
        assert_eq!(Scalar::ratio(-1, 2).sin_pi(), Scalar::int(-1));
        assert_eq!(Scalar::ratio(5, 2).sin_pi(), Scalar::one());
        let f = Scalar::ratio(1, 4).sin_pi();
        assert!(!f.is_exact());
        assert!((f.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn floor_and_fract() {
        assert_eq!(Scalar::ratio(-7, 2).floor_i64(), -4);
        assert_eq!(Scalar::ratio(7, 2).fract(), Scalar::ratio(1, 2));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Scalar::parse("2/6").unwrap(), Scalar::ratio(1, 3));
        assert!(Scalar::parse("5").unwrap().is_exact());
        assert!(!Scalar::parse("0.3333").unwrap().is_exact());
        assert!(Scalar::parse("1/0").is_err());
    }

    #[test]
    fn radical_inverse_values() {
        assert_eq!(radical_inverse(1, 2), BigRational::new(1.into(), 2.into()));
        assert_eq!(radical_inverse(2, 2), BigRational::new(1.into(), 4.into()));
        assert_eq!(radical_inverse(3, 2), BigRational::new(3.into(), 4.into()));
        assert_eq!(radical_inverse(1, 3), BigRational::new(1.into(), 3.into()));
    }
}
