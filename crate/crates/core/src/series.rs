//! Power series in one formal variable, truncated at a fixed order.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSeries<S> {
    c: Vec<S>,
}

impl<S: Scalar> ScalarSeries<S> {
    /// Coefficients past `order` are dropped, missing ones are zero.
    pub fn new(order: usize, mut coeffs: Vec<S>) -> Self {
        coeffs.resize(order + 1, S::zero());
        ScalarSeries { c: coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn one(order: usize) -> Self {
        Self::new(order, vec![S::one()])
    }

    /// The series `z`.
    pub fn var(order: usize) -> Self {
        Self::new(order, vec![S::zero(), S::one()])
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> S) -> Self {
        ScalarSeries {
            c: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> S {
        self.c.get(k).cloned().unwrap_or_else(S::zero)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.order(), other.order()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(ScalarSeries {
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(ScalarSeries {
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, s: &S) -> Self {
        ScalarSeries {
            c: self.c.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut c = vec![S::zero(); n + 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c[..=n - i].iter().enumerate() {
                c[i + j] += a.clone() * b.clone();
            }
        }
        Ok(ScalarSeries { c })
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..k {
            acc = acc.mul(self).expect("same order");
        }
        acc
    }

    /// `exp(s)`, from `k e_k = Σ_{j=1}^k j s_j e_{k-j}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.c[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut e = vec![S::zero(); n + 1];
        e[0] = S::one();
        for k in 1..=n {
            let mut acc = S::zero();
            for j in 1..=k {
                acc += S::from_i64(j as i64) * self.c[j].clone() * e[k - j].clone();
            }
            e[k] = acc / S::from_i64(k as i64);
        }
        Ok(ScalarSeries { c: e })
    }

    /// `log(1 + s)`, from `(1+s) l' = s'`.
    pub fn log1p(&self) -> Result<Self> {
        if !self.c[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut l = vec![S::zero(); n + 1];
        for k in 1..=n {
            let mut acc = S::from_i64(k as i64) * self.c[k].clone();
            for (j, lj) in l.iter().enumerate().take(k).skip(1) {
                acc -= S::from_i64(j as i64) * lj.clone() * self.c[k - j].clone();
            }
            l[k] = acc / S::from_i64(k as i64);
        }
        Ok(ScalarSeries { c: l })
    }

    /// `1 / s`.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.c[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order();
        let inv0 = S::one() / self.c[0].clone();
        let mut r = vec![S::zero(); n + 1];
        r[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = S::zero();
            for j in 1..=k {
                acc += self.c[j].clone() * r[k - j].clone();
            }
            r[k] = -acc * inv0.clone();
        }
        Ok(ScalarSeries { c: r })
    }
}

impl<S: Scalar> fmt::Display for ScalarSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})z")?,
                _ => write!(f, "({a})z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

/// `exp(s)` with a nonzero-constant-term error.
pub fn series_exp<S: Scalar>(s: &ScalarSeries<S>) -> Result<ScalarSeries<S>> {
    s.exp()
}

/// `log(1+s)` with a nonzero-constant-term error.
pub fn series_log1p<S: Scalar>(s: &ScalarSeries<S>) -> Result<ScalarSeries<S>> {
    s.log1p()
}
