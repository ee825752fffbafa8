//! Finite ground set, point measures and point functions.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    m: usize,
    names: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("ground set needs at least one point".into()));
        }
        Ok(GroundSet { m, names: None })
    }

    pub fn with_names(names: Vec<String>) -> Result<Self> {
        let mut g = GroundSet::new(names.len())?;
        g.names = Some(names);
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, x: usize) -> String {
        match &self.names {
            Some(n) if x < n.len() => n[x].clone(),
            _ => x.to_string(),
        }
    }

    pub fn check(&self, x: usize) -> Result<()> {
        check_label(x, self.m)
    }
}

pub fn check_label(x: usize, m: usize) -> Result<()> {
    if x < m {
        Ok(())
    } else {
        Err(Error::LabelOutOfRange { label: x, m })
    }
}

macro_rules! weight_vector {
    ($name:ident, $field:literal) => {
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name<S> {
            w: Vec<S>,
        }

        impl<S: Scalar> $name<S> {
            pub fn new(w: Vec<S>) -> Self {
                $name { w }
            }

            pub fn zero(m: usize) -> Self {
                $name { w: vec![S::zero(); m] }
            }

            pub fn constant(m: usize, c: S) -> Self {
                $name { w: vec![c; m] }
            }

            /// The indicator of (or unit mass at) a single point.
            pub fn delta(m: usize, x: usize) -> Self {
                let mut w = vec![S::zero(); m];
                w[x] = S::one();
                $name { w }
            }

            pub fn m(&self) -> usize {
                self.w.len()
            }

            pub fn weights(&self) -> &[S] {
                &self.w
            }

            pub fn at(&self, x: usize) -> &S {
                &self.w[x]
            }

            pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
                $name { w: self.w.iter().map(f).collect() }
            }

            pub fn scale(&self, c: &S) -> Self {
                self.map(|v| v.clone() * c.clone())
            }

            pub fn neg(&self) -> Self {
                self.map(|v| -v.clone())
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                same_len(self.m(), other.m())?;
                Ok($name {
                    w: self.w.iter().zip(&other.w).map(|(a, b)| a.clone() + b.clone()).collect(),
                })
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.add(&other.neg())
            }

            pub fn to_json(&self) -> Value {
                json!({
                    "m": self.m(),
                    $field: self.w.iter().map(Scalar::to_json).collect::<Vec<_>>(),
                })
            }

            pub fn from_json(v: &Value) -> Result<Self> {
                let arr = v
                    .get($field)
                    .or_else(|| v.get("weights"))
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Json(format!("missing \"{}\" array", $field)))?;
                let w = arr.iter().map(S::from_json).collect::<Result<Vec<_>>>()?;
                if let Some(m) = v.get("m") {
                    let m = m.as_u64().ok_or_else(|| Error::Json("\"m\" must be an integer".into()))?;
                    same_len(m as usize, w.len())?;
                }
                if w.is_empty() {
                    return Err(Error::Json("empty weight vector".into()));
                }
                Ok($name { w })
            }
        }
    };
}

weight_vector!(PointMeasure, "weights");
weight_vector!(PointFn, "weights");

fn same_len(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GroundMismatch { left: a, right: b })
    }
}

impl<S: Scalar> PointMeasure<S> {
    /// `ω(A)`.
    pub fn eval(&self, a: &[usize]) -> Result<S> {
        measure_eval(self, a)
    }

    pub fn total(&self) -> S {
        self.w.iter().fold(S::zero(), |acc, v| acc + v.clone())
    }

    /// `⟨ω, ξ⟩ = Σ_x ω_x ξ(x)`.
    pub fn integrate(&self, xi: &PointFn<S>) -> Result<S> {
        same_len(self.m(), xi.m())?;
        Ok(self
            .w
            .iter()
            .zip(xi.weights())
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    /// The measure `ξ ω`.
    pub fn weighted(&self, xi: &PointFn<S>) -> Result<Self> {
        same_len(self.m(), xi.m())?;
        Ok(PointMeasure {
            w: self
                .w
                .iter()
                .zip(xi.weights())
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        })
    }

    /// The counting measure of a configuration given as a list of points.
    pub fn configuration(m: usize, points: &[usize]) -> Result<Self> {
        let mut w = vec![S::zero(); m];
        for &x in points {
            check_label(x, m)?;
            w[x] += S::one();
        }
        Ok(PointMeasure { w })
    }

    pub fn is_probability(&self) -> bool {
        self.w.iter().all(Scalar::is_real_nonneg) && self.total().is_one()
    }
}

impl<S: Scalar> PointFn<S> {
    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_len(self.m(), other.m())?;
        Ok(PointFn {
            w: self
                .w
                .iter()
                .zip(&other.w)
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        })
    }

    /// Pointwise power `ξ^k`.
    pub fn pow(&self, k: usize) -> Self {
        self.map(|v| v.pow_n(k))
    }
}

/// `ω(A) = Σ_{x ∈ A} ω({x})`.
pub fn measure_eval<S: Scalar>(omega: &PointMeasure<S>, a: &[usize]) -> Result<S> {
    let mut acc = S::zero();
    for &x in a {
        check_label(x, omega.m())?;
        acc += omega.at(x).clone();
    }
    Ok(acc)
}
