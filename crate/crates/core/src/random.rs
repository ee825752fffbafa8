//! Deterministic test-input generation.
//!
//! The stream is ChaCha8 seeded through `seed_from_u64`; every value is a
//! rational `p/q` with `|p| <= bound` and `1 <= q <= bound`.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ground::{PointFn, PointMeasure};
use crate::scalar::Scalar;
use crate::symtensor::{GradedFn, SymFn};
use crate::Q;

#[derive(Debug, Clone)]
pub struct RatGen {
    rng: ChaCha8Rng,
    bound: i64,
}

impl RatGen {
    /// A bound below 1 is treated as 1.
    pub fn new(seed: u64, bound: i64) -> Self {
        RatGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bound: bound.max(1),
        }
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn next_rational(&mut self) -> Q {
        let p = self.rng.random_range(-self.bound..=self.bound);
        let q = self.rng.random_range(1..=self.bound);
        BigRational::new(p.into(), q.into())
    }

    /// A nonzero rational; used where a zero would make an input degenerate.
    pub fn next_nonzero(&mut self) -> Q {
        loop {
            let r = self.next_rational();
            if r != Q::from_i64(0) {
                return r;
            }
        }
    }

    pub fn scalar<S: Scalar>(&mut self) -> S {
        S::random(self)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn measure<S: Scalar>(&mut self, m: usize) -> PointMeasure<S> {
        PointMeasure::new((0..m).map(|_| S::random(self)).collect())
    }

    /// A measure with every weight nonzero.
    pub fn nonzero_measure<S: Scalar>(&mut self, m: usize) -> PointMeasure<S> {
        PointMeasure::new(
            (0..m)
                .map(|_| {
                    let mut s = S::random(self);
                    while s.is_zero() {
                        s = S::random(self);
                    }
                    s
                })
                .collect(),
        )
    }

    pub fn point_fn<S: Scalar>(&mut self, m: usize) -> PointFn<S> {
        PointFn::new((0..m).map(|_| S::random(self)).collect())
    }

    pub fn sym_fn<S: Scalar>(&mut self, m: usize, n: usize) -> SymFn<S> {
        SymFn::from_fn(m, n, |_| S::random(self))
    }

    pub fn graded<S: Scalar>(&mut self, m: usize, degree: usize) -> GradedFn<S> {
        GradedFn::new(m, (0..=degree).map(|n| self.sym_fn(m, n)).collect())
    }

    /// A probability vector with rational weights.
    pub fn probability(&mut self, m: usize) -> PointMeasure<Q> {
        let raw: Vec<Q> = (0..m)
            .map(|_| Q::from_i64(self.rng.random_range(1..=self.bound)))
            .collect();
        let total = raw.iter().fold(Q::from_i64(0), |a, b| a + b);
        PointMeasure::new(raw.into_iter().map(|w| w / total.clone()).collect())
    }

    pub fn u64(&mut self) -> u64 {
        self.rng.random()
    }
}

/// A single rational drawn from the stream for `seed`.
pub fn random_rational(seed: u64, bound: i64) -> Q {
    RatGen::new(seed, bound).next_rational()
}

pub fn random_measure<S: Scalar>(m: usize, seed: u64, bound: i64) -> PointMeasure<S> {
    RatGen::new(seed, bound).measure(m)
}
