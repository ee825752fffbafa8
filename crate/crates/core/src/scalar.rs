//! The coefficient field.
//!
//! Every algorithm in the crate is written against [`Scalar`]. Three
//! implementations are provided: exact rationals ([`Q`]), exact Gaussian
//! rationals ([`Qi`]) and `f64` for the truncated-series checks that involve
//! transcendental prefactors.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::random::RatGen;
use crate::{Qi, Q};

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    /// Whether arithmetic is exact; exact scalars are compared bit-exactly.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_rational(q: &Q) -> Self;

    /// Absolute value as a float, used only to report discrepancies.
    fn magnitude(&self) -> f64;

    /// True for real, nonnegative values.
    fn is_real_nonneg(&self) -> bool;

    /// Draws a value from the deterministic test-input generator.
    fn random(g: &mut RatGen) -> Self;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// `self^k` for a nonnegative integer exponent.
    fn pow_n(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc *= self.clone();
        }
        acc
    }
}

/// `p/q` in lowest terms with a positive denominator, or `p` for integers.
pub fn rational_string(q: &Q) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    if s.contains('/') {
        BigRational::from_str(s).map_err(|e| Error::Json(format!("bad rational {s:?}: {e}")))
    } else {
        BigInt::from_str(s)
            .map(BigRational::from_integer)
            .map_err(|e| Error::Json(format!("bad integer {s:?}: {e}")))
    }
}

fn rational_from_json(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigRational::from_integer(i.into())),
            None => Err(Error::Json(format!(
                "non-integer number {n}; write rationals as \"p/q\" strings"
            ))),
        },
        other => Err(Error::Json(format!("expected a rational, got {other}"))),
    }
}

pub fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }

    fn from_rational(q: &Q) -> Self {
        q.clone()
    }

    fn magnitude(&self) -> f64 {
        q_to_f64(&self.abs())
    }

    fn is_real_nonneg(&self) -> bool {
        !self.is_negative()
    }

    fn random(g: &mut RatGen) -> Self {
        g.next_rational()
    }

    fn to_json(&self) -> Value {
        Value::String(rational_string(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        rational_from_json(v)
    }
}

impl Scalar for Qi {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Complex::new(Q::from_i64(v), Q::zero())
    }

    fn from_rational(q: &Q) -> Self {
        Complex::new(q.clone(), Q::zero())
    }

    fn magnitude(&self) -> f64 {
        q_to_f64(&self.re).hypot(q_to_f64(&self.im))
    }

    fn is_real_nonneg(&self) -> bool {
        self.im.is_zero() && !self.re.is_negative()
    }

    fn random(g: &mut RatGen) -> Self {
        let re = g.next_rational();
        let im = g.next_rational();
        Complex::new(re, im)
    }

    fn to_json(&self) -> Value {
        json!({ "re": rational_string(&self.re), "im": rational_string(&self.im) })
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(map) => {
                let re = map
                    .get("re")
                    .map(rational_from_json)
                    .transpose()?
                    .unwrap_or_else(Q::zero);
                let im = map
                    .get("im")
                    .map(rational_from_json)
                    .transpose()?
                    .unwrap_or_else(Q::zero);
                Ok(Complex::new(re, im))
            }
            other => Ok(Complex::new(rational_from_json(other)?, Q::zero())),
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(q: &Q) -> Self {
        q_to_f64(q)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn is_real_nonneg(&self) -> bool {
        *self >= 0.0
    }

    fn random(g: &mut RatGen) -> Self {
        q_to_f64(&g.next_rational())
    }

    fn to_json(&self) -> Value {
        json!(self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| Error::Json(format!("bad float {n}"))),
            Value::String(s) => Ok(q_to_f64(&parse_rational(s)?)),
            other => Err(Error::Json(format!("expected a number, got {other}"))),
        }
    }
}

/// `n!` in the scalar field.
pub fn factorial<S: Scalar>(n: usize) -> S {
    let mut acc = S::one();
    for i in 2..=n {
        acc *= S::from_i64(i as i64);
    }
    acc
}

/// Binomial coefficient `C(n, k)` in the scalar field; zero when `k > n`.
pub fn binomial<S: Scalar>(n: usize, k: usize) -> S {
    if k > n {
        return S::zero();
    }
    let k = k.min(n - k);
    let mut acc = S::one();
    for i in 0..k {
        acc *= S::from_i64((n - i) as i64);
        acc = acc / S::from_i64((i + 1) as i64);
    }
    acc
}

/// Classical falling factorial `z(z-1)...(z-n+1)`.
pub fn falling_scalar<S: Scalar>(z: &S, n: usize) -> S {
    let mut acc = S::one();
    for j in 0..n {
        acc *= z.clone() - S::from_i64(j as i64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn rationals_are_canonical() {
        let a = q(6, -4);
        assert_eq!(rational_string(&a), "-3/2");
        assert_eq!(parse_rational("4/-6").unwrap(), q(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = q(-5, 7);
        assert_eq!(Q::from_json(&a.to_json()).unwrap(), a);
        let z = Complex::new(q(1, 2), q(-3, 4));
        assert_eq!(z.to_json(), json!({"re": "1/2", "im": "-3/4"}));
        assert_eq!(Qi::from_json(&z.to_json()).unwrap(), z);
        assert_eq!(Qi::from_json(&json!("2/3")).unwrap(), Qi::from_rational(&q(2, 3)));
        assert!(Q::from_json(&json!(0.5)).is_err());
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(factorial::<Q>(5), q(120, 1));
        assert_eq!(binomial::<Q>(6, 2), q(15, 1));
        assert_eq!(binomial::<Q>(2, 6), q(0, 1));
        assert_eq!(falling_scalar(&q(3, 1), 2), q(6, 1));
        assert_eq!(falling_scalar(&q(3, 1), 4), q(0, 1));
    }

    #[test]
    fn nonnegativity() {
        assert!(q(0, 1).is_real_nonneg());
        assert!(!q(-1, 3).is_real_nonneg());
        assert!(!Complex::new(q(1, 1), q(1, 1)).is_real_nonneg());
    }
}
