//! Stirling operators of both kinds, the unsigned first kind and the Lah
//! operators, each available through more than one construction.
//!
//! * [`apply`]: sum over set partitions `λ ∈ UP(n,k)` of a block weight times
//!   `𝔻_λ f`. Partitions are enumerated as restricted-growth strings and
//!   tallied by block-size shape, since `𝔻_λ f` only depends on the shape.
//! * [`apply_via_compositions`]: `(n!/k!) Σ_{i_1+..+i_k=n} w(i) 𝔻_{i_1..i_k} f`.
//! * [`apply_via_recurrence`]: operators built bottom-up from the `n -> n+1`
//!   recurrences (second kind and signed first kind).
//! * [`apply_via_euler`]: inclusion–exclusion over sub-multisets of the target
//!   (second kind).

mod identities;
mod matrix;

pub use identities::*;
pub use matrix::{operator_matrix, recurrence_matrix, OperatorMatrix};

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::combinat::{compositions, factorial_u128, shape_tally};
use crate::error::{Error, Result};
use crate::factorial::falling;
use crate::ground::PointMeasure;
use crate::multiset::sub_multisets;
use crate::scalar::{factorial, Scalar};
use crate::symtensor::{diag_embed, pair, power_measure, SymFn, SymMeasure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Second kind, `𝐒`.
    S2,
    /// Signed first kind, `𝐬`.
    S1,
    /// Unsigned first kind, `𝐜`.
    C1,
    /// Lah, `𝐋`.
    Lah,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::S2, Kind::S1, Kind::C1, Kind::Lah];

    pub fn symbol(self) -> &'static str {
        match self {
            Kind::S2 => "S",
            Kind::S1 => "s",
            Kind::C1 => "c",
            Kind::Lah => "L",
        }
    }

    /// Weight of a set partition with the given block sizes.
    fn block_weight(self, sizes: &[usize]) -> i128 {
        let n: usize = sizes.iter().sum();
        match self {
            Kind::S2 => 1,
            Kind::C1 | Kind::S1 => {
                let w: u128 = sizes.iter().map(|&s| factorial_u128(s - 1)).product();
                let sign = if self == Kind::S1 && (n - sizes.len()) % 2 == 1 {
                    -1
                } else {
                    1
                };
                sign * w as i128
            }
            Kind::Lah => sizes.iter().map(|&s| factorial_u128(s)).product::<u128>() as i128,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" | "S2" => Ok(Kind::S2),
            "s" | "S1" => Ok(Kind::S1),
            "c" | "C1" => Ok(Kind::C1),
            "L" | "Lah" => Ok(Kind::Lah),
            _ => Err(Error::InvalidArgument(format!("unknown operator kind {s:?}"))),
        }
    }
}

/// Zero outside `1 <= k <= n`, except `k = n = 0` which is the identity.
fn boundary<S: Scalar>(n: usize, k: usize, f: &SymFn<S>) -> Option<SymFn<S>> {
    if k == 0 && n == 0 {
        Some(f.clone())
    } else if k > n || k == 0 {
        Some(SymFn::zero(f.m(), k))
    } else {
        None
    }
}

fn check_rank<S: Scalar>(n: usize, f: &SymFn<S>) -> Result<()> {
    if f.rank() == n {
        Ok(())
    } else {
        Err(Error::RankMismatch {
            expected: n,
            got: f.rank(),
        })
    }
}

type ShapeTally = Rc<BTreeMap<Vec<usize>, u128>>;

thread_local! {
    static SHAPES: RefCell<HashMap<(usize, usize), ShapeTally>> =
        RefCell::new(HashMap::new());
}

fn shapes(n: usize, k: usize) -> ShapeTally {
    SHAPES.with(|c| {
        c.borrow_mut()
            .entry((n, k))
            .or_insert_with(|| Rc::new(shape_tally(n, k)))
            .clone()
    })
}

/// `A(n,k) f` from the set-partition formula.
pub fn apply<S: Scalar>(kind: Kind, n: usize, k: usize, f: &SymFn<S>) -> Result<SymFn<S>> {
    check_rank(n, f)?;
    if let Some(b) = boundary(n, k, f) {
        return Ok(b);
    }
    let mut out = SymFn::zero(f.m(), k);
    for (shape, count) in shapes(n, k).iter() {
        let w = S::from_i64(kind.block_weight(shape) as i64 * *count as i64);
        out.add_scaled(&w, &diag_embed(f, shape)?);
    }
    Ok(out)
}

/// `A(n,k) f` from the composition formula.
pub fn apply_via_compositions<S: Scalar>(kind: Kind, n: usize, k: usize, f: &SymFn<S>) -> Result<SymFn<S>> {
    check_rank(n, f)?;
    if let Some(b) = boundary(n, k, f) {
        return Ok(b);
    }
    let prefactor = factorial::<S>(n) / factorial::<S>(k);
    let mut out = SymFn::zero(f.m(), k);
    for parts in compositions(n, k) {
        let den: u128 = match kind {
            Kind::S2 => parts.iter().map(|&i| factorial_u128(i)).product(),
            Kind::S1 | Kind::C1 => parts.iter().map(|&i| i as u128).product(),
            Kind::Lah => 1,
        };
        let w = prefactor.clone() / S::from_i64(den as i64);
        out.add_scaled(&w, &diag_embed(f, &parts)?);
    }
    if kind == Kind::S1 && (n - k) % 2 == 1 {
        out = out.neg();
    }
    Ok(out)
}

/// `A(n,k) f` through the operator built from the recurrences in `n`.
pub fn apply_via_recurrence<S: Scalar>(kind: Kind, n: usize, k: usize, f: &SymFn<S>) -> Result<SymFn<S>> {
    check_rank(n, f)?;
    if !matches!(kind, Kind::S2 | Kind::S1) {
        return Err(Error::InvalidArgument(format!(
            "recurrence route is available for S and s, not {kind}"
        )));
    }
    if let Some(b) = boundary(n, k, f) {
        return Ok(b);
    }
    Ok(recurrence_matrix::<S>(kind, n, k, f.m()).apply(f))
}

/// `(𝐒(n,k) f)(x) = ((-1)^k / k!) Σ_{η ⊆ [x_1..x_k]} (-1)^|η| ⟨η^⊗n, f⟩`.
pub fn apply_via_euler<S: Scalar>(n: usize, k: usize, f: &SymFn<S>) -> Result<SymFn<S>> {
    check_rank(n, f)?;
    if let Some(b) = boundary(n, k, f) {
        return Ok(b);
    }
    let m = f.m();
    let kf = factorial::<S>(k);
    let mut memo: HashMap<Vec<usize>, S> = HashMap::new();
    let mut value = |eta: &[usize]| -> Result<S> {
        if let Some(v) = memo.get(eta) {
            return Ok(v.clone());
        }
        let conf = PointMeasure::configuration(m, eta)?;
        let v = pair(&power_measure(&conf, n), f)?;
        memo.insert(eta.to_vec(), v.clone());
        Ok(v)
    };
    let mut out = SymFn::zero(m, k);
    for (idx, _) in SymFn::<S>::zero(m, k).entries() {
        let mut acc = S::zero();
        for (eta, ways) in sub_multisets(&idx) {
            let t = S::from_i64(ways as i64) * value(&eta)?;
            if (k - eta.len()).is_multiple_of(2) {
                acc += t;
            } else {
                acc -= t;
            }
        }
        out.set(&idx, acc / kf.clone());
    }
    Ok(out)
}

/// `A(n,k)^* μ`: the measure with `⟨A^*μ, f⟩ = ⟨μ, A f⟩` for every `f`.
pub fn adjoint_apply<S: Scalar>(kind: Kind, n: usize, k: usize, mu: &SymMeasure<S>) -> Result<SymMeasure<S>> {
    if mu.rank() != k {
        return Err(Error::RankMismatch {
            expected: k,
            got: mu.rank(),
        });
    }
    Ok(operator_matrix::<S>(kind, n, k, mu.m()).adjoint(mu))
}

/// `A(n,k)` on `f`, dispatching on `n` and `k` as given.
pub fn apply_graded<S: Scalar>(kind: Kind, f: &SymFn<S>, k: usize) -> Result<SymFn<S>> {
    apply(kind, f.rank(), k, f)
}

/// Classical numbers `A(n,k)` for `1 <= k <= n <= n_max`: the operators on
/// the one-point ground set applied to the constant function 1.
pub fn classical_triangle(kind: Kind, n_max: usize) -> Result<Vec<Vec<crate::Q>>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("triangle needs n_max >= 1".into()));
    }
    (1..=n_max)
        .map(|n| {
            (1..=n)
                .map(|k| apply(kind, n, k, &SymFn::ones(1, n)).map(|g| g.as_scalar_at_one()))
                .collect()
        })
        .collect()
}

impl<S: Scalar> SymFn<S> {
    /// Value on the one-point ground set.
    fn as_scalar_at_one(&self) -> S {
        self.values()[0].clone()
    }
}

/// `Σ_k ⟨(ω)_k, 𝐒(n,k) f⟩`, used to cross-check expansions.
pub fn expand_in_falling<S: Scalar>(omega: &PointMeasure<S>, kind: Kind, f: &SymFn<S>) -> Result<S> {
    let n = f.rank();
    let mut acc = S::zero();
    for k in 0..=n {
        acc += pair(&falling(omega, k), &apply(kind, n, k, f)?)?;
    }
    Ok(acc)
}
