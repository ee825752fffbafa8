//! Symmetric functions and symmetric measures on `X^n`.
//!
//! Both are stored densely, one entry per sorted multiset of size `n` in
//! lexicographic order. A function entry is the value at any ordering of the
//! multiset; a measure entry is the mass of ONE ordered tuple, so
//!
//! ```text
//! pair(μ, f) = Σ_{multisets z} perm_count(z) · μ[z] · f[z]
//! ```
//!
//! is the sum over all ordered tuples.

use serde_json::{json, Value};

use crate::combinat::validate_partition;
use crate::error::{Error, Result};
use crate::ground::{check_label, PointFn, PointMeasure};
use crate::multiset::{self, arrangements, enumerate, for_each_split, perm_count, rank};
use crate::scalar::{binomial, Scalar};

macro_rules! dense_symmetric {
    ($name:ident) => {
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name<S> {
            m: usize,
            n: usize,
            vals: Vec<S>,
        }

        impl<S: Scalar> $name<S> {
            pub fn zero(m: usize, n: usize) -> Self {
                $name { m, n, vals: vec![S::zero(); multiset::multichoose(m, n)] }
            }

            /// Rank-0 object holding a single scalar.
            pub fn scalar(m: usize, c: S) -> Self {
                $name { m, n: 0, vals: vec![c] }
            }

            /// Fills every entry from its sorted multiset.
            pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(&[usize]) -> S) -> Self {
                let vals = enumerate(m, n).iter().map(|z| f(z)).collect();
                $name { m, n, vals }
            }

            pub fn from_values(m: usize, n: usize, vals: Vec<S>) -> Result<Self> {
                let want = multiset::multichoose(m, n);
                if vals.len() != want {
                    return Err(Error::InvalidArgument(format!(
                        "expected {want} entries for rank {n} over {m} points, got {}",
                        vals.len()
                    )));
                }
                Ok($name { m, n, vals })
            }

            pub fn m(&self) -> usize {
                self.m
            }

            pub fn rank(&self) -> usize {
                self.n
            }

            pub fn values(&self) -> &[S] {
                &self.vals
            }

            /// Entry at a multiset given in any order.
            pub fn get(&self, idx: &[usize]) -> &S {
                debug_assert_eq!(idx.len(), self.n);
                if multiset::is_sorted(idx) {
                    &self.vals[rank(self.m, idx)]
                } else {
                    &self.vals[rank(self.m, &multiset::sorted(idx.to_vec()))]
                }
            }

            pub fn set(&mut self, idx: &[usize], v: S) {
                let r = rank(self.m, &multiset::sorted(idx.to_vec()));
                self.vals[r] = v;
            }

            /// `(sorted multiset, value)` pairs in storage order.
            pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &S)> {
                enumerate(self.m, self.n).into_iter().zip(self.vals.iter())
            }

            /// The scalar of a rank-0 object.
            pub fn as_scalar(&self) -> &S {
                &self.vals[0]
            }

            pub fn is_zero(&self) -> bool {
                self.vals.iter().all(|v| v.is_zero())
            }

            pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
                $name { m: self.m, n: self.n, vals: self.vals.iter().map(f).collect() }
            }

            pub fn scale(&self, c: &S) -> Self {
                self.map(|v| v.clone() * c.clone())
            }

            pub fn neg(&self) -> Self {
                self.map(|v| -v.clone())
            }

            fn check_shape(&self, other: &Self) -> Result<()> {
                if self.m != other.m {
                    return Err(Error::GroundMismatch { left: self.m, right: other.m });
                }
                if self.n != other.n {
                    return Err(Error::RankMismatch { expected: self.n, got: other.n });
                }
                Ok(())
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                self.check_shape(other)?;
                Ok($name {
                    m: self.m,
                    n: self.n,
                    vals: self.vals.iter().zip(&other.vals).map(|(a, b)| a.clone() + b.clone()).collect(),
                })
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.check_shape(other)?;
                Ok($name {
                    m: self.m,
                    n: self.n,
                    vals: self.vals.iter().zip(&other.vals).map(|(a, b)| a.clone() - b.clone()).collect(),
                })
            }

            pub fn add_assign(&mut self, other: &Self) {
                assert_eq!((self.m, self.n), (other.m, other.n), "shape mismatch");
                for (a, b) in self.vals.iter_mut().zip(&other.vals) {
                    *a += b.clone();
                }
            }

            pub fn add_scaled(&mut self, c: &S, other: &Self) {
                assert_eq!((self.m, self.n), (other.m, other.n), "shape mismatch");
                if c.is_zero() {
                    return;
                }
                for (a, b) in self.vals.iter_mut().zip(&other.vals) {
                    *a += c.clone() * b.clone();
                }
            }

            /// Largest entrywise `|a - b|`; infinite on shape mismatch.
            pub fn max_diff(&self, other: &Self) -> f64 {
                if self.check_shape(other).is_err() {
                    return f64::INFINITY;
                }
                self.vals
                    .iter()
                    .zip(&other.vals)
                    .map(|(a, b)| (a.clone() - b.clone()).magnitude())
                    .fold(0.0, f64::max)
            }

            pub fn to_json(&self) -> Value {
                let entries: Vec<Value> = self
                    .entries()
                    .map(|(idx, v)| json!({ "idx": idx, "val": v.to_json() }))
                    .collect();
                json!({ "rank": self.n, "m": self.m, "entries": entries })
            }

            /// Entries not listed are zero; indices may be given in any order.
            pub fn from_json(v: &Value) -> Result<Self> {
                let field = |k: &str| {
                    v.get(k)
                        .and_then(Value::as_u64)
                        .map(|x| x as usize)
                        .ok_or_else(|| Error::Json(format!("missing integer field \"{k}\"")))
                };
                let (n, m) = (field("rank")?, field("m")?);
                if m == 0 {
                    return Err(Error::Json("\"m\" must be positive".into()));
                }
                let mut out = Self::zero(m, n);
                let mut seen = vec![false; out.vals.len()];
                let entries = v
                    .get("entries")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Json("missing \"entries\" array".into()))?;
                for e in entries {
                    let idx: Vec<usize> = e
                        .get("idx")
                        .and_then(Value::as_array)
                        .ok_or_else(|| Error::Json("entry without \"idx\"".into()))?
                        .iter()
                        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Json("bad label".into())))
                        .collect::<Result<_>>()?;
                    if idx.len() != n {
                        return Err(Error::RankMismatch { expected: n, got: idx.len() });
                    }
                    for &x in &idx {
                        check_label(x, m)?;
                    }
                    let val = S::from_json(e.get("val").ok_or_else(|| Error::Json("entry without \"val\"".into()))?)?;
                    let r = rank(m, &multiset::sorted(idx));
                    if seen[r] {
                        return Err(Error::Json("duplicate entry".into()));
                    }
                    seen[r] = true;
                    out.vals[r] = val;
                }
                Ok(out)
            }
        }
    };
}

dense_symmetric!(SymFn);
dense_symmetric!(SymMeasure);

impl<S: Scalar> SymFn<S> {
    /// The constant function `1^(n)`.
    pub fn ones(m: usize, n: usize) -> Self {
        SymFn::from_fn(m, n, |_| S::one())
    }

    /// Pointwise product of two functions of the same rank.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(SymFn {
            m: self.m,
            n: self.n,
            vals: self
                .vals
                .iter()
                .zip(&other.vals)
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        })
    }

    /// `f(alpha, ·)` as a function of the remaining `n - |alpha|` arguments.
    pub fn fix_prefix(&self, alpha: &[usize]) -> SymFn<S> {
        let b = self.n - alpha.len();
        SymFn::from_fn(self.m, b, |beta| self.get(&multiset::merge(alpha, beta)).clone())
    }
}

/// `⟨μ, f⟩` as a sum over ordered tuples.
pub fn pair<S: Scalar>(mu: &SymMeasure<S>, f: &SymFn<S>) -> Result<S> {
    if mu.m != f.m {
        return Err(Error::GroundMismatch { left: mu.m, right: f.m });
    }
    if mu.n != f.n {
        return Err(Error::RankMismatch {
            expected: mu.n,
            got: f.n,
        });
    }
    let mut acc = S::zero();
    for ((z, a), b) in mu.entries().zip(&f.vals) {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc += S::from_i64(perm_count(&z) as i64) * a.clone() * b.clone();
    }
    Ok(acc)
}

/// `ω^⊗n`.
pub fn power_measure<S: Scalar>(omega: &PointMeasure<S>, n: usize) -> SymMeasure<S> {
    SymMeasure::from_fn(omega.m(), n, |z| product_at(omega.weights(), z))
}

/// `ξ^⊗n`.
pub fn power_fn<S: Scalar>(xi: &PointFn<S>, n: usize) -> SymFn<S> {
    SymFn::from_fn(xi.m(), n, |z| product_at(xi.weights(), z))
}

fn product_at<S: Scalar>(w: &[S], z: &[usize]) -> S {
    z.iter().fold(S::one(), |acc, &x| acc * w[x].clone())
}

/// Symmetrization of a function of two argument groups.
///
/// Given `g(alpha, beta)` symmetric within each group (`|alpha| = a`,
/// `|beta| = b`), returns `P_{a+b} g`, the average over all orderings of the
/// `a+b` arguments.
pub fn symmetrize_split<S: Scalar>(
    m: usize,
    a: usize,
    b: usize,
    mut g: impl FnMut(&[usize], &[usize]) -> S,
) -> SymFn<S> {
    let total: S = binomial(a + b, a);
    SymFn::from_fn(m, a + b, |z| {
        let mut acc = S::zero();
        for_each_split(z, a, |alpha, beta, ways| {
            let v = g(alpha, beta);
            if !v.is_zero() {
                acc += S::from_i64(ways as i64) * v;
            }
        });
        acc / total.clone()
    })
}

/// `f ⊙ g = P_{n+m}(f ⊗ g)`.
pub fn sym_product_fn<S: Scalar>(f: &SymFn<S>, g: &SymFn<S>) -> Result<SymFn<S>> {
    if f.m != g.m {
        return Err(Error::GroundMismatch { left: f.m, right: g.m });
    }
    Ok(symmetrize_split(f.m, f.n, g.n, |alpha, beta| {
        f.get(alpha).clone() * g.get(beta).clone()
    }))
}

/// `μ ⊙ ν`, the symmetric measure pairing with every `h` like `μ ⊗ ν`.
///
/// With ordered-representative storage the split weight
/// `pc(alpha) pc(beta) / pc(z)` equals `∏ C(z_v, alpha_v) / C(a+b, a)`, the
/// same weight as for functions.
pub fn sym_product_measure<S: Scalar>(mu: &SymMeasure<S>, nu: &SymMeasure<S>) -> Result<SymMeasure<S>> {
    if mu.m != nu.m {
        return Err(Error::GroundMismatch {
            left: mu.m,
            right: nu.m,
        });
    }
    let f = symmetrize_split(mu.m, mu.n, nu.n, |alpha, beta| {
        mu.get(alpha).clone() * nu.get(beta).clone()
    });
    Ok(SymMeasure {
        m: f.m,
        n: f.n,
        vals: f.vals,
    })
}

/// `𝔻^(n)_{i_1..i_k} f`: `f` evaluated with its `j`-th new argument repeated
/// `i_j` times, symmetrized over the new arguments.
pub fn diag_embed<S: Scalar>(f: &SymFn<S>, parts: &[usize]) -> Result<SymFn<S>> {
    if parts.contains(&0) || parts.iter().sum::<usize>() != f.n {
        return Err(Error::InvalidComposition {
            parts: parts.to_vec(),
            n: f.n,
        });
    }
    let k = parts.len();
    if parts.iter().all(|&p| p == 1) {
        return Ok(f.clone());
    }
    let mut arg = Vec::with_capacity(f.n);
    Ok(SymFn::from_fn(f.m, k, |y| {
        let arr = arrangements(y);
        let count = arr.len();
        let mut acc = S::zero();
        for perm in arr {
            arg.clear();
            for (&x, &p) in perm.iter().zip(parts) {
                arg.extend(std::iter::repeat_n(x, p));
            }
            arg.sort_unstable();
            acc += f.get(&arg).clone();
        }
        acc / S::from_i64(count as i64)
    }))
}

/// `𝔻^(n)_λ f` for a set partition `λ` of `{0..n-1}` given by its blocks.
pub fn diag_partition<S: Scalar>(f: &SymFn<S>, blocks: &[Vec<usize>]) -> Result<SymFn<S>> {
    validate_partition(f.n, blocks).map_err(|reason| Error::InvalidPartition { n: f.n, reason })?;
    let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
    diag_embed(f, &sizes)
}

/// The diagonal measure `ω^[i]`: `⟨ω^[i], f⟩ = Σ_x ω_x f(x,..,x)`.
pub fn diag_measure<S: Scalar>(omega: &PointMeasure<S>, i: usize) -> Result<SymMeasure<S>> {
    if i == 0 {
        return Err(Error::InvalidArgument("diagonal measure needs rank at least 1".into()));
    }
    let mut mu = SymMeasure::zero(omega.m(), i);
    for x in 0..omega.m() {
        // constant multisets have exactly one ordering
        mu.set(&vec![x; i], omega.at(x).clone());
    }
    Ok(mu)
}

/// `N(ξ) f`: multiplication by `ξ(x_1) + .. + ξ(x_n)`.
pub fn multiply_n<S: Scalar>(xi: &PointFn<S>, f: &SymFn<S>) -> Result<SymFn<S>> {
    if xi.m() != f.m {
        return Err(Error::GroundMismatch {
            left: xi.m(),
            right: f.m,
        });
    }
    if f.n == 0 {
        return Err(Error::InvalidArgument("N(ξ) acts on rank at least 1".into()));
    }
    let w = xi.weights();
    Ok(SymFn::from_fn(f.m, f.n, |z| {
        let s = z.iter().fold(S::zero(), |acc, &x| acc + w[x].clone());
        s * f.get(z).clone()
    }))
}

/// A finite sequence `f^(0), .., f^(N)` of symmetric functions.
///
/// Read as the polynomial `p(ω) = Σ_k ⟨ω^⊗k, f^(k)⟩`, or as a function on
/// finite multisets via `f([x_1..x_n]) = f^(n)(x_1..x_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedFn<S> {
    m: usize,
    comps: Vec<SymFn<S>>,
}

impl<S: Scalar> GradedFn<S> {
    /// Panics if component `k` is not of rank `k` over `m` points.
    pub fn new(m: usize, comps: Vec<SymFn<S>>) -> Self {
        for (k, c) in comps.iter().enumerate() {
            assert!(c.n == k && c.m == m, "component {k} has the wrong shape");
        }
        let mut g = GradedFn { m, comps };
        if g.comps.is_empty() {
            g.comps.push(SymFn::zero(m, 0));
        }
        g
    }

    pub fn try_new(m: usize, comps: Vec<SymFn<S>>) -> Result<Self> {
        for (k, c) in comps.iter().enumerate() {
            if c.m != m {
                return Err(Error::GroundMismatch { left: m, right: c.m });
            }
            if c.n != k {
                return Err(Error::RankMismatch { expected: k, got: c.n });
            }
        }
        Ok(GradedFn::new(m, comps))
    }

    pub fn zero(m: usize, max_degree: usize) -> Self {
        GradedFn::new(m, (0..=max_degree).map(|k| SymFn::zero(m, k)).collect())
    }

    pub fn constant(m: usize, c: S) -> Self {
        GradedFn::new(m, vec![SymFn::scalar(m, c)])
    }

    /// The homogeneous polynomial `⟨ω^⊗n, f⟩`.
    pub fn monomial(f: &SymFn<S>) -> Self {
        let mut g = GradedFn::zero(f.m, f.n);
        g.comps[f.n] = f.clone();
        g
    }

    /// The linear polynomial `⟨ω, ξ⟩`.
    pub fn linear(xi: &PointFn<S>) -> Self {
        GradedFn::monomial(&power_fn(xi, 1))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Highest stored degree, including trailing zero components.
    pub fn max_degree(&self) -> usize {
        self.comps.len() - 1
    }

    /// Highest degree with a nonzero component (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.comps.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn components(&self) -> &[SymFn<S>] {
        &self.comps
    }

    /// Component of rank `k`; zero beyond the stored degree.
    pub fn component(&self, k: usize) -> SymFn<S> {
        self.comps.get(k).cloned().unwrap_or_else(|| SymFn::zero(self.m, k))
    }

    pub fn component_mut(&mut self, k: usize) -> &mut SymFn<S> {
        self.pad(k);
        &mut self.comps[k]
    }

    pub fn pad(&mut self, max_degree: usize) {
        while self.comps.len() <= max_degree {
            let k = self.comps.len();
            self.comps.push(SymFn::zero(self.m, k));
        }
    }

    pub fn trimmed(&self) -> Self {
        let d = self.degree();
        GradedFn {
            m: self.m,
            comps: self.comps[..=d].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(SymFn::is_zero)
    }

    pub fn scale(&self, c: &S) -> Self {
        GradedFn {
            m: self.m,
            comps: self.comps.iter().map(|f| f.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::GroundMismatch {
                left: self.m,
                right: other.m,
            });
        }
        let top = self.max_degree().max(other.max_degree());
        let comps = (0..=top)
            .map(|k| self.component(k).add(&other.component(k)))
            .collect::<Result<_>>()?;
        Ok(GradedFn { m: self.m, comps })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    /// Product of polynomials: `(p q)^(n) = Σ_{a+b=n} f^(a) ⊙ g^(b)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::GroundMismatch {
                left: self.m,
                right: other.m,
            });
        }
        let mut out = GradedFn::zero(self.m, self.max_degree() + other.max_degree());
        for f in &self.comps {
            if f.is_zero() {
                continue;
            }
            for g in &other.comps {
                if g.is_zero() {
                    continue;
                }
                let h = sym_product_fn(f, g)?;
                out.comps[f.n + g.n].add_assign(&h);
            }
        }
        Ok(out)
    }

    /// Largest entrywise discrepancy over all components.
    pub fn max_diff(&self, other: &Self) -> f64 {
        if self.m != other.m {
            return f64::INFINITY;
        }
        let top = self.max_degree().max(other.max_degree());
        (0..=top)
            .map(|k| self.component(k).max_diff(&other.component(k)))
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.comps.iter().map(SymFn::to_json).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Json("a graded function is an array of components".into()))?;
        if arr.is_empty() {
            return Err(Error::Json("empty component list".into()));
        }
        let comps = arr.iter().map(SymFn::from_json).collect::<Result<Vec<_>>>()?;
        let m = comps[0].m;
        GradedFn::try_new(m, comps)
    }
}

/// `p(ω) = Σ_k ⟨ω^⊗k, f^(k)⟩`.
pub fn eval_polynomial<S: Scalar>(p: &GradedFn<S>, omega: &PointMeasure<S>) -> Result<S> {
    if p.m != omega.m() {
        return Err(Error::GroundMismatch {
            left: p.m,
            right: omega.m(),
        });
    }
    let mut acc = S::zero();
    for f in &p.comps {
        if !f.is_zero() {
            acc += pair(&power_measure(omega, f.n), f)?;
        }
    }
    Ok(acc)
}

/// `f([x_1..x_n]) = f^(n)(x_1..x_n)`.
pub fn eval_on_multiset<S: Scalar>(f: &GradedFn<S>, eta: &[usize]) -> Result<S> {
    if eta.len() > f.max_degree() {
        return Err(Error::InvalidArgument(format!(
            "multiset of size {} exceeds degree {}",
            eta.len(),
            f.max_degree()
        )));
    }
    for &x in eta {
        check_label(x, f.m)?;
    }
    Ok(f.comps[eta.len()].get(eta).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::RatGen;
    use crate::{Qi, Q};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    // every ordered tuple in {0..m-1}^n
    fn tuples(m: usize, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..m).map(move |x| {
                        let mut t = t.clone();
                        t.push(x);
                        t
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn pairing_examples() {
        let mu = SymMeasure::scalar(1, q(3, 1));
        let f = SymFn::scalar(1, q(5, 1));
        assert_eq!(pair(&mu, &f).unwrap(), q(15, 1));
        let mu = power_measure(&PointMeasure::new(vec![q(2, 1), q(3, 1)]), 1);
        let f = SymFn::ones(2, 1);
        assert_eq!(pair(&mu, &f).unwrap(), q(5, 1));
        let mu = SymMeasure::from_fn(2, 2, |_| q(1, 1));
        let brute: Q = tuples(2, 2).iter().map(|t| mu.get(t).clone()).sum();
        assert_eq!(pair(&mu, &SymFn::ones(2, 2)).unwrap(), brute);
        assert_eq!(brute, q(4, 1));
        assert!(pair(&mu, &SymFn::ones(2, 1)).is_err());
    }

    #[test]
    fn power_examples() {
        let w = PointMeasure::new(vec![q(2, 1), q(5, 1)]);
        assert_eq!(power_measure(&w, 0).as_scalar(), &q(1, 1));
        let p = power_measure(&w, 2);
        assert_eq!(p.values(), &[q(4, 1), q(10, 1), q(25, 1)]);
    }

    #[test]
    fn product_pairing_matches_ordered_tuples() {
        let mut g = RatGen::new(4, 6);
        for _ in 0..10 {
            let m = 1 + g.below(3);
            let (a, b) = (g.below(4), g.below(4));
            let mu = SymMeasure::from_fn(m, a, |_| g.next_rational());
            let nu = SymMeasure::from_fn(m, b, |_| g.next_rational());
            let h: SymFn<Q> = g.sym_fn(m, a + b);
            let brute: Q = tuples(m, a + b)
                .iter()
                .map(|t| mu.get(&t[..a]).clone() * nu.get(&t[a..]).clone() * h.get(t).clone())
                .sum();
            let prod = sym_product_measure(&mu, &nu).unwrap();
            assert_eq!(pair(&prod, &h).unwrap(), brute);
        }
    }

    #[test]
    fn function_product_is_tuple_average() {
        let mut g = RatGen::new(8, 6);
        let f: SymFn<Q> = g.sym_fn(3, 2);
        let h: SymFn<Q> = g.sym_fn(3, 1);
        let prod = sym_product_fn(&f, &h).unwrap();
        for z in enumerate(3, 3) {
            let arr = arrangements(&z);
            let avg: Q = arr
                .iter()
                .map(|t| f.get(&t[..2]).clone() * h.get(&t[2..]).clone())
                .sum::<Q>()
                / Q::from_i64(arr.len() as i64);
            assert_eq!(prod.get(&z), &avg);
        }
        assert_eq!(prod, sym_product_fn(&h, &f).unwrap());
    }

    #[test]
    fn like_factors_merge() {
        let mut g = RatGen::new(2, 5);
        let xi: PointFn<Q> = g.point_fn(3);
        let lhs = sym_product_fn(&power_fn(&xi, 2), &power_fn(&xi, 3)).unwrap();
        assert_eq!(lhs, power_fn(&xi, 5));
    }

    #[test]
    fn diagonal_embeddings() {
        let mut g = RatGen::new(5, 5);
        let f: SymFn<Q> = g.sym_fn(3, 3);
        assert_eq!(diag_embed(&f, &[1, 1, 1]).unwrap(), f);
        let d = diag_embed(&f, &[3]).unwrap();
        for x in 0..3 {
            assert_eq!(d.get(&[x]), f.get(&[x, x, x]));
        }
        let xi: PointFn<Q> = g.point_fn(3);
        let lhs = diag_embed(&power_fn(&xi, 3), &[2, 1]).unwrap();
        let rhs = sym_product_fn(&power_fn(&xi.pow(2), 1), &power_fn(&xi, 1)).unwrap();
        assert_eq!(lhs, rhs);
        assert!(diag_embed(&f, &[2, 0, 1]).is_err());
        assert!(diag_embed(&f, &[2, 2]).is_err());
    }

    #[test]
    fn partition_embeddings() {
        let mut g = RatGen::new(6, 5);
        let f: SymFn<Q> = g.sym_fn(2, 2);
        let single = vec![vec![0], vec![1]];
        assert_eq!(diag_partition(&f, &single).unwrap(), f);
        let full = diag_partition(&f, &[vec![0, 1]]).unwrap();
        assert_eq!(full.get(&[1]), f.get(&[1, 1]));
        let f5: SymFn<Q> = g.sym_fn(3, 5);
        let a = diag_partition(&f5, &[vec![0, 3], vec![1], vec![2, 4]]).unwrap();
        let b = diag_partition(&f5, &[vec![2, 4], vec![0, 3], vec![1]]).unwrap();
        let c = diag_partition(&f5, &[vec![1], vec![4, 2], vec![3, 0]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(diag_partition(&f5, &[vec![0, 1], vec![2]]).is_err());
    }

    #[test]
    fn diagonal_measures() {
        let w = PointMeasure::new(vec![q(1, 1), q(1, 1)]);
        assert_eq!(
            pair(&diag_measure(&w, 3).unwrap(), &SymFn::ones(2, 3)).unwrap(),
            q(2, 1)
        );
        let mut g = RatGen::new(7, 5);
        let om: PointMeasure<Q> = g.measure(3);
        let xi: PointFn<Q> = g.point_fn(3);
        assert_eq!(
            pair(&diag_measure(&om, 2).unwrap(), &power_fn(&xi, 2)).unwrap(),
            om.integrate(&xi.pow(2)).unwrap()
        );
        assert_eq!(diag_measure(&om, 1).unwrap(), power_measure(&om, 1));
        assert!(diag_measure(&om, 0).is_err());
    }

    #[test]
    fn multiplication_by_n() {
        let mut g = RatGen::new(9, 5);
        let f: SymFn<Q> = g.sym_fn(3, 3);
        let ones = PointFn::constant(3, q(1, 1));
        assert_eq!(multiply_n(&ones, &f).unwrap(), f.scale(&q(3, 1)));
        let phi: PointFn<Q> = g.point_fn(3);
        let xi: PointFn<Q> = g.point_fn(3);
        assert_eq!(
            multiply_n(&xi, &power_fn(&phi, 1)).unwrap(),
            power_fn(&phi.mul(&xi).unwrap(), 1)
        );
        // N(ξ) ξ^⊗n = n (ξ^2 ⊙ ξ^⊗(n-1)), checked by pairing with ω^⊗n over tuples
        let om: PointMeasure<Q> = g.measure(3);
        let n = 3;
        let lhs = multiply_n(&xi, &power_fn(&xi, n)).unwrap();
        let brute: Q = tuples(3, n)
            .iter()
            .map(|t| {
                let w: Q = t.iter().map(|&x| om.at(x).clone()).product();
                let s: Q = t.iter().map(|&x| xi.at(x).clone()).sum();
                let p: Q = t.iter().map(|&x| xi.at(x).clone()).product();
                w * s * p
            })
            .sum();
        assert_eq!(pair(&power_measure(&om, n), &lhs).unwrap(), brute);
        let rhs = sym_product_fn(&power_fn(&xi.pow(2), 1), &power_fn(&xi, n - 1))
            .unwrap()
            .scale(&Q::from_i64(n as i64));
        assert_eq!(lhs, rhs);
        assert!(multiply_n(&xi, &SymFn::scalar(3, q(1, 1))).is_err());
    }

    #[test]
    fn polynomial_evaluation() {
        let mut g = RatGen::new(10, 5);
        let om: PointMeasure<Q> = g.measure(3);
        let c = GradedFn::constant(3, q(7, 2));
        assert_eq!(eval_polynomial(&c, &om).unwrap(), q(7, 2));
        let xi: PointFn<Q> = g.point_fn(3);
        let sq = GradedFn::monomial(&power_fn(&xi, 2));
        assert_eq!(eval_polynomial(&sq, &om).unwrap(), om.integrate(&xi).unwrap().pow_n(2));
        let p: GradedFn<Q> = g.graded(2, 3);
        let om2: PointMeasure<Q> = g.measure(2);
        let brute: Q = (0..=3)
            .map(|n| {
                tuples(2, n)
                    .iter()
                    .map(|t| {
                        let w: Q = t.iter().map(|&x| om2.at(x).clone()).product();
                        w * p.component(n).get(t).clone()
                    })
                    .sum::<Q>()
            })
            .sum();
        assert_eq!(eval_polynomial(&p, &om2).unwrap(), brute);
    }

    #[test]
    fn multiset_evaluation() {
        let mut g = RatGen::new(11, 5);
        let xi: PointFn<Q> = g.point_fn(2);
        let mut f: GradedFn<Q> = g.graded(2, 2);
        *f.component_mut(2) = power_fn(&xi, 2);
        assert_eq!(&eval_on_multiset(&f, &[]).unwrap(), f.component(0).as_scalar());
        assert_eq!(eval_on_multiset(&f, &[1, 1]).unwrap(), xi.at(1).clone().pow_n(2));
        assert!(eval_on_multiset(&f, &[0, 0, 0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut g = RatGen::new(12, 5);
        let f: SymFn<Qi> = g.sym_fn(2, 3);
        assert_eq!(SymFn::from_json(&f.to_json()).unwrap(), f);
        let p: GradedFn<Q> = g.graded(3, 2);
        assert_eq!(GradedFn::from_json(&p.to_json()).unwrap(), p);
        let v = json!({"rank": 2, "m": 2, "entries": [{"idx": [1, 0], "val": "3/4"}]});
        let h = SymFn::<Q>::from_json(&v).unwrap();
        assert_eq!(h.get(&[0, 1]), &q(3, 4));
        assert_eq!(h.get(&[0, 0]), &q(0, 1));
        let bad = json!({"rank": 2, "m": 2, "entries": [{"idx": [2, 0], "val": "1"}]});
        assert!(SymFn::<Q>::from_json(&bad).is_err());
    }

    #[test]
    fn storage_is_canonical() {
        let mut g = RatGen::new(13, 5);
        let f: SymFn<Q> = g.sym_fn(4, 4);
        assert!(f.entries().all(|(idx, _)| multiset::is_sorted(&idx)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn power_pairing_is_scalar_power(seed in any::<u64>(), n in 0usize..6) {
            let mut g = RatGen::new(seed, 6);
            let om: PointMeasure<Q> = g.measure(3);
            let xi: PointFn<Q> = g.point_fn(3);
            let lhs = pair(&power_measure(&om, n), &power_fn(&xi, n)).unwrap();
            prop_assert_eq!(lhs, om.integrate(&xi).unwrap().pow_n(n));
        }

        #[test]
        fn product_of_powers(seed in any::<u64>(), a in 0usize..4, b in 0usize..4) {
            let mut g = RatGen::new(seed, 6);
            let om: PointMeasure<Q> = g.measure(2);
            let xi: PointFn<Q> = g.point_fn(2);
            let f = sym_product_fn(&power_fn(&xi, a), &power_fn(&xi, b)).unwrap();
            prop_assert_eq!(pair(&power_measure(&om, a + b), &f).unwrap(), om.integrate(&xi).unwrap().pow_n(a + b));
        }

        #[test]
        fn product_commutes(seed in any::<u64>(), a in 0usize..4, b in 0usize..4) {
            let mut g = RatGen::new(seed, 6);
            let f: SymFn<Q> = g.sym_fn(3, a);
            let h: SymFn<Q> = g.sym_fn(3, b);
            prop_assert_eq!(sym_product_fn(&f, &h).unwrap(), sym_product_fn(&h, &f).unwrap());
        }

        #[test]
        fn polynomial_product_evaluates_pointwise(seed in any::<u64>()) {
            let mut g = RatGen::new(seed, 4);
            let p: GradedFn<Q> = g.graded(2, 2);
            let r: GradedFn<Q> = g.graded(2, 3);
            let om: PointMeasure<Q> = g.measure(2);
            let lhs = eval_polynomial(&p.mul(&r).unwrap(), &om).unwrap();
            prop_assert_eq!(lhs, eval_polynomial(&p, &om).unwrap() * eval_polynomial(&r, &om).unwrap());
        }
    }
}
