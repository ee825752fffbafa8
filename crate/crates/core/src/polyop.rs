//! Operators on polynomials of a measure, stored as [`GradedFn`] in the
//! monomial basis `p(ω) = Σ_n ⟨ω^⊗n, f^(n)⟩`.

use crate::error::{Error, Result};
use crate::factorial::falling;
use crate::ground::{check_label, PointFn, PointMeasure};
use crate::multiset::{merge, sub_multisets};
use crate::report::Report;
use crate::scalar::{binomial, factorial, falling_scalar, Scalar};
use crate::stirling::{apply, Kind};
use crate::symtensor::{
    eval_polynomial, multiply_n, pair, power_fn, sym_product_fn, symmetrize_split, GradedFn, SymFn,
};

/// `(𝒟_x f)(·) = n f(x,·)` for `f` of rank `n >= 1`.
pub fn script_d<S: Scalar>(f: &SymFn<S>, x: usize) -> Result<SymFn<S>> {
    check_label(x, f.m())?;
    if f.rank() == 0 {
        return Err(Error::InvalidArgument("𝒟_x acts on rank at least 1".into()));
    }
    Ok(f.fix_prefix(&[x]).scale(&S::from_i64(f.rank() as i64)))
}

/// `∂_x p`, the derivative in direction `δ_x`.
pub fn partial_derivative<S: Scalar>(p: &GradedFn<S>, x: usize) -> Result<GradedFn<S>> {
    check_label(x, p.m())?;
    let top = p.max_degree();
    let mut comps = Vec::with_capacity(top.max(1));
    for n in 1..=top {
        comps.push(script_d(&p.components()[n], x)?);
    }
    Ok(GradedFn::new(p.m(), comps))
}

/// `D_x p(ω) = p(ω + δ_x) - p(ω)`, from
/// `⟨(ω+δ_x)^⊗n, f⟩ = Σ_j C(n,j) ⟨ω^⊗(n-j), f(x^j, ·)⟩`.
pub fn difference<S: Scalar>(p: &GradedFn<S>, x: usize) -> Result<GradedFn<S>> {
    check_label(x, p.m())?;
    let top = p.max_degree();
    let mut out = GradedFn::zero(p.m(), top.saturating_sub(1));
    for (n, f) in p.components().iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        for j in 1..=n {
            let g = f.fix_prefix(&vec![x; j]);
            out.component_mut(n - j).add_scaled(&binomial::<S>(n, j), &g);
        }
    }
    Ok(out)
}

/// `Σ_{k>=1} ∂_x^k p / k!`, which terminates on polynomials.
pub fn difference_via_exp<S: Scalar>(p: &GradedFn<S>, x: usize) -> Result<GradedFn<S>> {
    let mut out = GradedFn::zero(p.m(), p.max_degree().saturating_sub(1));
    let mut d = p.clone();
    for k in 1..=p.max_degree() {
        d = partial_derivative(&d, x)?;
        out = out.add(&d.scale(&(S::one() / factorial::<S>(k))))?;
    }
    Ok(out)
}

/// Coefficients `g^(k)` of `p` in the falling-factorial basis,
/// `p(ω) = Σ_k ⟨(ω)_k, g^(k)⟩`, from
/// `g^(k)(x) = ((-1)^k/k!) Σ_{η ⊆ [x_1..x_k]} (-1)^|η| p(η)`.
pub fn euler_expand<S: Scalar>(p: &GradedFn<S>) -> Result<Vec<SymFn<S>>> {
    let m = p.m();
    let top = p.degree();
    let mut memo = std::collections::HashMap::new();
    let mut out = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let kf = factorial::<S>(k);
        let mut g = SymFn::zero(m, k);
        for (x, _) in SymFn::<S>::zero(m, k).entries() {
            let mut acc = S::zero();
            for (eta, ways) in sub_multisets(&x) {
                let v = match memo.get(&eta) {
                    Some(v) => Clone::clone(v),
                    None => {
                        let v = eval_polynomial(p, &PointMeasure::configuration(m, &eta)?)?;
                        memo.insert(eta.clone(), v.clone());
                        v
                    }
                };
                let t = S::from_i64(ways as i64) * v;
                if (k - eta.len()) % 2 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            g.set(&x, acc / kf.clone());
        }
        out.push(g);
    }
    Ok(out)
}

/// `Σ_k ⟨(ω)_k, g^(k)⟩` evaluated directly.
pub fn eval_falling<S: Scalar>(g: &[SymFn<S>], omega: &PointMeasure<S>) -> Result<S> {
    let mut acc = S::zero();
    for f in g {
        acc += pair(&falling(omega, f.rank()), f)?;
    }
    Ok(acc)
}

/// The monomial-basis polynomial `Σ_k ⟨(ω)_k, g^(k)⟩`, rewritten with
/// `⟨(ω)_k, g⟩ = Σ_j ⟨ω^⊗j, 𝐬(k,j) g⟩`.
pub fn falling_synthesis<S: Scalar>(m: usize, g: &[SymFn<S>]) -> Result<GradedFn<S>> {
    let mut out = GradedFn::zero(m, g.len().saturating_sub(1));
    for (k, f) in g.iter().enumerate() {
        if f.m() != m {
            return Err(Error::GroundMismatch { left: m, right: f.m() });
        }
        for j in 0..=k {
            out.component_mut(j).add_assign(&apply(Kind::S1, k, j, f)?);
        }
    }
    Ok(out)
}

/// `⟨ω, ξ∂⟩ p`: each component `f^(n)` becomes `N(ξ) f^(n)`.
pub fn euler_op<S: Scalar>(xi: &PointFn<S>, p: &GradedFn<S>) -> Result<GradedFn<S>> {
    if xi.m() != p.m() {
        return Err(Error::GroundMismatch {
            left: xi.m(),
            right: p.m(),
        });
    }
    let comps = p
        .components()
        .iter()
        .map(|f| {
            if f.rank() == 0 {
                Ok(SymFn::zero(p.m(), 0))
            } else {
                multiply_n(xi, f)
            }
        })
        .collect::<Result<_>>()?;
    Ok(GradedFn::new(p.m(), comps))
}

/// `⟨ω^⊗k, g ∂^⊗k⟩ p`: the monomial `⟨ω^⊗n, h⟩` becomes
/// `(n)_k ⟨ω^⊗n, P_n(g·h)⟩` with `(g·h)(x_1..x_n) = g(x_1..x_k) h(x_1..x_n)`.
pub fn wick_diff_op<S: Scalar>(g: &SymFn<S>, p: &GradedFn<S>) -> Result<GradedFn<S>> {
    if g.m() != p.m() {
        return Err(Error::GroundMismatch {
            left: g.m(),
            right: p.m(),
        });
    }
    let k = g.rank();
    if k == 0 {
        return Err(Error::InvalidArgument("⟨ω^⊗k, g∂^⊗k⟩ needs k >= 1".into()));
    }
    let m = p.m();
    let mut out = GradedFn::zero(m, p.max_degree());
    for (n, h) in p.components().iter().enumerate() {
        if n < k || h.is_zero() {
            continue;
        }
        let nk = falling_scalar(&S::from_i64(n as i64), k);
        let sym = symmetrize_split(m, k, n - k, |a, b| g.get(a).clone() * h.get(&merge(a, b)).clone());
        *out.component_mut(n) = sym.scale(&nk);
    }
    Ok(out)
}

/// `ξ_1 ⊙ .. ⊙ ξ_n`.
pub fn sym_product_of<S: Scalar>(m: usize, xis: &[PointFn<S>]) -> Result<SymFn<S>> {
    let mut acc = SymFn::scalar(m, S::one());
    for xi in xis {
        acc = sym_product_fn(&acc, &power_fn(xi, 1))?;
    }
    Ok(acc)
}

/// `⟨ω,ξ_1∂⟩ ⋯ ⟨ω,ξ_n∂⟩ p = Σ_k ⟨ω^⊗k, (𝐒(n,k)(ξ_1⊙..⊙ξ_n)) ∂^⊗k⟩ p`.
pub fn check_grunert<S: Scalar>(xis: &[PointFn<S>], p: &GradedFn<S>) -> Result<Report> {
    let n = xis.len();
    if n == 0 {
        return Err(Error::InvalidArgument("Grünert's formula needs at least one ξ".into()));
    }
    let m = p.m();
    let mut lhs = p.clone();
    for xi in xis.iter().rev() {
        lhs = euler_op(xi, &lhs)?;
    }
    let prod = sym_product_of(m, xis)?;
    let mut rhs = GradedFn::zero(m, p.max_degree());
    for k in 1..=n {
        rhs = rhs.add(&wick_diff_op(&apply(Kind::S2, n, k, &prod)?, p)?)?;
    }
    let mut r = Report::for_scalar::<S>("polyop.grunert");
    r.check(&lhs, &rhs, || format!("n={n} degree={}", p.degree()));
    Ok(r)
}
