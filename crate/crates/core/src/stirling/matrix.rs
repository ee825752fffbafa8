//! Materialized operators and their per-thread cache.

use std::any::{Any, TypeId};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::{apply, Kind};
use crate::multiset::{enumerate, perm_count};
use crate::scalar::Scalar;
use crate::symtensor::{symmetrize_split, SymFn, SymMeasure};

/// An operator from rank-`n` to rank-`k` symmetric functions in the multiset
/// bases; `rows[target][source]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<S> {
    kind: Kind,
    m: usize,
    n: usize,
    k: usize,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> OperatorMatrix<S> {
    /// Materializes `op` by applying it to every basis vector.
    pub fn from_operator(kind: Kind, m: usize, n: usize, k: usize, mut op: impl FnMut(&SymFn<S>) -> SymFn<S>) -> Self {
        let sources = enumerate(m, n);
        let targets = enumerate(m, k).len();
        let mut rows = vec![vec![S::zero(); sources.len()]; targets];
        for (j, zeta) in sources.iter().enumerate() {
            let mut e = SymFn::zero(m, n);
            e.set(zeta, S::one());
            for (i, v) in op(&e).values().iter().enumerate() {
                rows[i][j] = v.clone();
            }
        }
        OperatorMatrix { kind, m, n, k, rows }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn source_rank(&self) -> usize {
        self.n
    }

    pub fn target_rank(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn scaled(&self, c: &S) -> Self {
        OperatorMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| v.clone() * c.clone()).collect())
                .collect(),
            ..self.clone()
        }
    }

    /// # Panics
    /// If `f` does not have the source rank and ground set of the matrix.
    pub fn apply(&self, f: &SymFn<S>) -> SymFn<S> {
        assert!(
            f.m() == self.m && f.rank() == self.n,
            "operator applied to a function of the wrong shape"
        );
        let vals = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = S::zero();
                for (a, b) in row.iter().zip(f.values()) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect();
        SymFn::from_values(self.m, self.k, vals).expect("row count matches the target rank")
    }

    /// `A^* μ`, with `(A^*μ)[η] = Σ_ζ pc(ζ) μ[ζ] A[ζ][η] / pc(η)`.
    ///
    /// # Panics
    /// If `mu` does not have the target rank and ground set of the matrix.
    pub fn adjoint(&self, mu: &SymMeasure<S>) -> SymMeasure<S> {
        assert!(
            mu.m() == self.m && mu.rank() == self.k,
            "adjoint applied to a measure of the wrong shape"
        );
        let weighted: Vec<S> = mu
            .entries()
            .map(|(z, v)| S::from_i64(perm_count(&z) as i64) * v.clone())
            .collect();
        SymMeasure::from_fn(self.m, self.n, |eta| {
            let col = crate::multiset::rank(self.m, eta);
            let mut acc = S::zero();
            for (row, w) in self.rows.iter().zip(&weighted) {
                if !w.is_zero() && !row[col].is_zero() {
                    acc += w.clone() * row[col].clone();
                }
            }
            acc / S::from_i64(perm_count(eta) as i64)
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Route {
    Partition,
    Recurrence,
}

type CacheKey = (TypeId, Route, Kind, usize, usize, usize);

thread_local! {
    static CACHE: RefCell<HashMap<CacheKey, Rc<dyn Any>>> = RefCell::new(HashMap::new());
}

fn cached<S: Scalar>(
    route: Route,
    kind: Kind,
    n: usize,
    k: usize,
    m: usize,
    build: impl FnOnce() -> OperatorMatrix<S>,
) -> Rc<OperatorMatrix<S>> {
    let key = (TypeId::of::<S>(), route, kind, n, k, m);
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit.downcast::<OperatorMatrix<S>>().expect("cache keyed by scalar type");
    }
    // built outside the borrow: recurrence builds re-enter the cache
    let mat = Rc::new(build());
    CACHE.with(|c| c.borrow_mut().insert(key, mat.clone() as Rc<dyn Any>));
    mat
}

/// `A(n,k)` materialized from the partition formula, cached per thread.
pub fn operator_matrix<S: Scalar>(kind: Kind, n: usize, k: usize, m: usize) -> Rc<OperatorMatrix<S>> {
    cached(Route::Partition, kind, n, k, m, || {
        OperatorMatrix::from_operator(kind, m, n, k, |f| {
            apply(kind, n, k, f).expect("basis vector has rank n")
        })
    })
}

/// `A(n,k)` for `A ∈ {S, s}` built bottom-up from the recurrences
///
/// `𝐒(n+1,k) = P_k(𝟏⊗𝐒(n,k-1)) + k P_k((𝔻^(2)⊗𝟏)(𝟏⊗𝐒(n,k)))`,
/// `𝐬(n+1,k) = P_k(𝟏⊗𝐬(n,k-1)) - n 𝐬(n,k) P_n(𝔻^(2)⊗𝟏)`.
///
/// # Panics
/// For kinds other than `S2` and `S1`.
pub fn recurrence_matrix<S: Scalar>(kind: Kind, n: usize, k: usize, m: usize) -> Rc<OperatorMatrix<S>> {
    assert!(matches!(kind, Kind::S2 | Kind::S1), "no recurrence route for {kind}");
    cached(Route::Recurrence, kind, n, k, m, || {
        if n == 0 || k == 0 || k > n {
            let id = n == 0 && k == 0;
            return OperatorMatrix::from_operator(kind, m, n, k, |f| if id { f.clone() } else { SymFn::zero(m, k) });
        }
        let lower = recurrence_matrix::<S>(kind, n - 1, k - 1, m);
        let same = recurrence_matrix::<S>(kind, n - 1, k, m);
        OperatorMatrix::from_operator(kind, m, n, k, |f| {
            let g: Vec<SymFn<S>> = (0..m).map(|y| lower.apply(&f.fix_prefix(&[y]))).collect();
            let mut out = symmetrize_split(m, 1, k - 1, |a, b| g[a[0]].get(b).clone());
            match kind {
                Kind::S2 => {
                    let h: Vec<SymFn<S>> = (0..m).map(|y| same.apply(&f.fix_prefix(&[y]))).collect();
                    let extra = SymFn::from_fn(m, k, |z| z.iter().fold(S::zero(), |acc, &y| acc + h[y].get(z).clone()));
                    out.add_assign(&extra);
                }
                _ => {
                    // n P_{n-1}(𝔻^(2)⊗𝟏) f at z is Σ_i f(z_i, z)
                    let u = SymFn::from_fn(m, n - 1, |z| {
                        let mut arg = Vec::with_capacity(n);
                        z.iter().fold(S::zero(), |acc, &y| {
                            arg.clear();
                            arg.push(y);
                            arg.extend_from_slice(z);
                            acc + f.get(&arg).clone()
                        })
                    });
                    out.add_scaled(&-S::one(), &same.apply(&u));
                }
            }
            out
        })
    })
}
