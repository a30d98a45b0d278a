//! Rational and Gaussian-rational scalars.
//!
//! Rationals are `num_rational::BigRational`, which keeps the reduced form
//! (`gcd(|p|, q) = 1`, `q > 0`) as an invariant. On the wire they are strings
//! `"p/q"`, with `/q` omitted for integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_vec(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| rat(x)).collect()
}

pub fn int_vec(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_rational_vec(xs: &[BigInt]) -> Vec<Rational> {
    xs.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator/denominator overflow f64 individually
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn to_f64_vec(xs: &[Rational]) -> Vec<f64> {
    xs.iter().map(to_f64).collect()
}

pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Serde adapter for a single rational as `"p/q"`. Plain JSON integers are
/// accepted on input.
pub mod serde_rational {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Text(String),
        Int(i64),
    }

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Text(t) => parse_rational(&t).map_err(serde::de::Error::custom),
            Repr::Int(i) => Ok(rat(i)),
        }
    }
}

pub mod serde_rational_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "serde_rational")] Rational);

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = xs.iter().map(format_rational).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v: Vec<Wrap> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|w| w.0).collect())
    }
}

pub mod serde_rational_rows {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "serde_rational_vec")] Vec<Rational>);

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Row> = rows.iter().map(|r| Row(r.clone())).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let v: Vec<Row> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|r| r.0).collect())
    }
}

/// `re + i·im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussianRational {
    #[serde(with = "serde_rational")]
    pub re: Rational,
    #[serde(with = "serde_rational")]
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self { re: rat(re), im: rat(im) }
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self * &inv)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", format_rational(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", format_rational(&self.re), format_rational(&-self.im.clone()))
        } else {
            write!(f, "{}+{}i", format_rational(&self.re), format_rational(&self.im))
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

/// Scale a rational vector to the primitive integer vector with the same
/// direction. Zero maps to zero.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-3").unwrap(), rat(-3));
        assert_eq!(parse_rational(" 1 / -2 ").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        assert_eq!(format_rational(&ratio(-1, 3)), "-1/3");
    }

    #[test]
    fn gaussian_json_shape() {
        let z = GaussianRational::new(ratio(1, 2), rat(-1));
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"re":"1/2","im":"-1"}"#);
        let back: GaussianRational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        let from_int: GaussianRational = serde_json::from_str(r#"{"re":3,"im":"0"}"#).unwrap();
        assert_eq!(from_int, GaussianRational::from_ints(3, 0));
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![ratio(1, 2), ratio(-3, 4), rat(0)];
        assert_eq!(primitive_integer(&v), int_vec(&[2, -3, 0]));
    }

    fn gauss() -> impl Strategy<Value = GaussianRational> {
        (-20i64..20, 1i64..6, -20i64..20, 1i64..6)
            .prop_map(|(a, b, c, d)| GaussianRational::new(ratio(a, b), ratio(c, d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn gaussian_field_axioms(x in gauss(), y in gauss(), z in gauss()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if let Some(inv) = x.inv() {
                prop_assert_eq!(&x * &inv, GaussianRational::one());
            }
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        }
    }
}
