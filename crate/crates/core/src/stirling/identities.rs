//! Identity checks relating the Stirling and Lah operators.

use super::{apply, Kind};
use crate::error::{Error, Result};
use crate::factorial::{falling, rising};
use crate::ground::{check_label, PointFn, PointMeasure};
use crate::multiset::sub_multisets;
use crate::polyop::script_d;
use crate::report::Report;
use crate::scalar::{binomial, factorial, Scalar};
use crate::series::ScalarSeries;
use crate::symtensor::{pair, power_fn, power_measure, sym_product_measure, symmetrize_split, SymFn};

fn same_ground(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GroundMismatch { left: a, right: b })
    }
}

/// `Σ_k A(k,i) B(n,k) f`.
fn compose_sum<S: Scalar>(outer: Kind, inner: Kind, n: usize, i: usize, f: &SymFn<S>) -> Result<SymFn<S>> {
    let mut acc = SymFn::zero(f.m(), i);
    for k in i..=n {
        let mid = apply(inner, n, k, f)?;
        acc.add_assign(&apply(outer, k, i, &mid)?);
    }
    Ok(acc)
}

fn delta_or_zero<S: Scalar>(n: usize, i: usize, f: &SymFn<S>) -> SymFn<S> {
    if n == i {
        f.clone()
    } else {
        SymFn::zero(f.m(), i)
    }
}

/// `Σ_k 𝐬(k,i) 𝐒(n,k) f = Σ_k 𝐒(k,i) 𝐬(n,k) f = δ_{ni} f` for `f` of rank `n`.
pub fn check_orthogonality<S: Scalar>(n: usize, i: usize, f: &SymFn<S>) -> Result<Report> {
    if f.rank() != n {
        return Err(Error::RankMismatch {
            expected: n,
            got: f.rank(),
        });
    }
    let mut r = Report::for_scalar::<S>("stirling.orthogonality");
    let want = delta_or_zero(n, i, f);
    r.check(&compose_sum(Kind::S1, Kind::S2, n, i, f)?, &want, || {
        format!("s∘S n={n} i={i}")
    });
    r.check(&compose_sum(Kind::S2, Kind::S1, n, i, f)?, &want, || {
        format!("S∘s n={n} i={i}")
    });
    Ok(r)
}

/// Series in `z` of `⟨ω, φ(zξ)⟩`, where `φ` is the generating function whose
/// `k`-th power over `k!` generates `A(n,k)`.
fn inner_series<S: Scalar>(
    kind: Kind,
    omega: &PointMeasure<S>,
    xi: &PointFn<S>,
    order: usize,
) -> Result<ScalarSeries<S>> {
    let mut acc = ScalarSeries::zero(order);
    for (w, c) in omega.weights().iter().zip(xi.weights()) {
        let cz = ScalarSeries::var(order).scale(c);
        let one = ScalarSeries::one(order);
        let phi = match kind {
            Kind::S2 => cz.exp()?.sub(&one)?,
            Kind::S1 => cz.log1p()?,
            Kind::C1 => cz.scale(&-S::one()).log1p()?.scale(&-S::one()),
            Kind::Lah => cz.mul(&one.sub(&cz)?.reciprocal()?)?,
        };
        acc = acc.add(&phi.scale(w))?;
    }
    Ok(acc)
}

/// `Σ_n (z^n/n!) ⟨ω^⊗k, A(n,k) ξ^⊗n⟩ = (1/k!) ⟨ω, φ(zξ)⟩^k` coefficientwise
/// to `order`, with `φ` equal to `e^t - 1`, `log(1+t)`, `-log(1-t)`, `t/(1-t)`
/// for `S`, `s`, `c`, `L`.
pub fn check_genfun_stirling<S: Scalar>(
    kind: Kind,
    k: usize,
    omega: &PointMeasure<S>,
    xi: &PointFn<S>,
    order: usize,
) -> Result<Report> {
    same_ground(omega.m(), xi.m())?;
    if k == 0 || order < k {
        return Err(Error::InvalidArgument(format!(
            "generating function needs 1 <= k <= order, got k={k} order={order}"
        )));
    }
    let mut r = Report::for_scalar::<S>(format!("stirling.genfun.{kind}"));
    let rhs = inner_series(kind, omega, xi, order)?
        .pow(k)
        .scale(&(S::one() / factorial::<S>(k)));
    let wk = power_measure(omega, k);
    for n in 0..=order {
        let lhs = pair(&wk, &apply(kind, n, k, &power_fn(xi, n))?)? / factorial::<S>(n);
        r.check(&lhs, &rhs.coeff(n), || format!("{kind} k={k} coefficient {n}"));
    }
    Ok(r)
}

/// The Lah identities at `(n,k)` on `f = ξ^⊗n`: the defining expansion
/// `⟨(ω)^(n), f⟩ = Σ_j ⟨(ω)_j, 𝐋(n,j) f⟩`, the composition
/// `𝐋(n,k) = Σ_i 𝐒(i,k) 𝐜(n,i)`, the generating function, and the involution
/// `Σ_j (-1)^{n-j} 𝐋(j,k) 𝐋(n,j) = δ_{nk}`.
pub fn check_lah<S: Scalar>(n: usize, k: usize, omega: &PointMeasure<S>, xi: &PointFn<S>) -> Result<Report> {
    same_ground(omega.m(), xi.m())?;
    let mut r = Report::for_scalar::<S>("stirling.lah");
    let f = power_fn(xi, n);

    let mut expansion = S::zero();
    for j in 0..=n {
        expansion += pair(&falling(omega, j), &apply(Kind::Lah, n, j, &f)?)?;
    }
    r.check(&pair(&rising(omega, n), &f)?, &expansion, || {
        format!("defining expansion n={n}")
    });

    r.check(
        &apply(Kind::Lah, n, k, &f)?,
        &compose_sum(Kind::S2, Kind::C1, n, k, &f)?,
        || format!("composition n={n} k={k}"),
    );

    if k >= 1 && n >= k {
        r.absorb(&check_genfun_stirling(Kind::Lah, k, omega, xi, n)?);
    }

    let mut inv = SymFn::zero(xi.m(), k);
    for j in k..=n {
        let t = apply(Kind::Lah, j, k, &apply(Kind::Lah, n, j, &f)?)?;
        let sign = if (n - j).is_multiple_of(2) { S::one() } else { -S::one() };
        inv.add_scaled(&sign, &t);
    }
    r.check(&inv, &delta_or_zero(n, k, &f), || format!("involution n={n} k={k}"));
    Ok(r)
}

/// `Σ_{j=1}^n A(j+e, i) P_{e+j}(𝟏^(e) ⊗ B(n,j)) f`, with `B` acting on the
/// last `n` arguments of `f`.
fn olson_lhs<S: Scalar>(n: usize, extra: usize, i: usize, f: &SymFn<S>) -> Result<SymFn<S>> {
    let m = f.m();
    let alphas: Vec<Vec<usize>> = crate::multiset::enumerate(m, extra);
    let mut acc = SymFn::zero(m, i);
    for j in 1..=n {
        let g: Vec<SymFn<S>> = alphas
            .iter()
            .map(|alpha| apply(Kind::S1, n, j, &f.fix_prefix(alpha)))
            .collect::<Result<_>>()?;
        let h = symmetrize_split(m, extra, j, |alpha, beta| {
            g[crate::multiset::rank(m, alpha)].get(beta).clone()
        });
        acc.add_assign(&apply(Kind::S2, j + extra, i, &h)?);
    }
    Ok(acc)
}

/// `((-1)^i/i!) Σ_{η ⊆ [x_1..x_i], |η| >= n} (-1)^|η| ⟨(η)_n ⊙ η^⊗e, f⟩`.
fn olson_rhs<S: Scalar>(n: usize, extra: usize, i: usize, f: &SymFn<S>) -> Result<SymFn<S>> {
    let m = f.m();
    let fi = factorial::<S>(i);
    let mut out = SymFn::zero(m, i);
    for (x, _) in SymFn::<S>::zero(m, i).entries() {
        let mut acc = S::zero();
        for (eta, ways) in sub_multisets(&x) {
            if eta.len() < n {
                continue;
            }
            let conf = PointMeasure::configuration(m, &eta)?;
            let mu = sym_product_measure(&falling(&conf, n), &power_measure(&conf, extra))?;
            let t = S::from_i64(ways as i64) * pair(&mu, f)?;
            if (i - eta.len()).is_multiple_of(2) {
                acc += t;
            } else {
                acc -= t;
            }
        }
        out.set(&x, acc / fi.clone());
    }
    Ok(out)
}

/// The spatial Olson identity for `f` of rank `l = n + extra` and target
/// rank `i`, with the special values: zero for `i < n` or `i > l`, and at
/// `i = n` the sum `Σ_{j_1..j_e ∈ [n]} f(x_1..x_n, x_{j_1}..x_{j_e})`.
pub fn check_olson<S: Scalar>(n: usize, extra: usize, i: usize, f: &SymFn<S>) -> Result<Report> {
    let l = n + extra;
    if f.rank() != l {
        return Err(Error::RankMismatch {
            expected: l,
            got: f.rank(),
        });
    }
    if n == 0 || i == 0 {
        return Err(Error::InvalidArgument("Olson identity needs n >= 1 and i >= 1".into()));
    }
    let mut r = Report::for_scalar::<S>("stirling.olson");
    let lhs = olson_lhs(n, extra, i, f)?;
    r.check(&lhs, &olson_rhs(n, extra, i, f)?, || format!("n={n} e={extra} i={i}"));
    if i < n || i > l {
        r.check(&lhs, &SymFn::zero(f.m(), i), || {
            format!("vanishing n={n} e={extra} i={i}")
        });
    }
    if i == n {
        let m = f.m();
        let mut special = SymFn::zero(m, n);
        for (x, _) in SymFn::<S>::zero(m, n).entries() {
            let conf = PointMeasure::configuration(m, &x)?;
            special.set(&x, pair(&power_measure(&conf, extra), &f.fix_prefix(&x))?);
        }
        r.check(&lhs, &special, || format!("diagonal value n={n} e={extra}"));
    }
    Ok(r)
}

/// `P_{i+j}(A(k,i) ⊗ B(n-k,j)) f`.
fn tensor_apply<S: Scalar>(a: Kind, b: Kind, n: usize, k: usize, i: usize, j: usize, f: &SymFn<S>) -> Result<SymFn<S>> {
    let m = f.m();
    let alphas = crate::multiset::enumerate(m, k);
    let inner: Vec<SymFn<S>> = alphas
        .iter()
        .map(|alpha| apply(b, n - k, j, &f.fix_prefix(alpha)))
        .collect::<Result<_>>()?;
    let gammas = crate::multiset::enumerate(m, j);
    let outer: Vec<SymFn<S>> = gammas
        .iter()
        .map(|gamma| {
            let slice = SymFn::from_values(m, k, inner.iter().map(|h| h.get(gamma).clone()).collect())?;
            apply(a, k, i, &slice)
        })
        .collect::<Result<_>>()?;
    Ok(symmetrize_split(m, i, j, |beta, gamma| {
        outer[crate::multiset::rank(m, gamma)].get(beta).clone()
    }))
}

/// `C(i+j,i) A(n,i+j) f = Σ_{k=i}^{n-j} C(n,k) P_{i+j}(A(k,i) ⊗ A(n-k,j)) f`
/// for `A = 𝐬` and `A = 𝐒`.
pub fn check_convolution_identity<S: Scalar>(n: usize, i: usize, j: usize, f: &SymFn<S>) -> Result<Report> {
    if f.rank() != n {
        return Err(Error::RankMismatch {
            expected: n,
            got: f.rank(),
        });
    }
    if i + j > n {
        return Err(Error::InvalidArgument(format!(
            "convolution needs i + j <= n, got i={i} j={j} n={n}"
        )));
    }
    let mut r = Report::for_scalar::<S>("stirling.convolution");
    for kind in [Kind::S1, Kind::S2] {
        let lhs = apply(kind, n, i + j, f)?.scale(&binomial::<S>(i + j, i));
        let mut rhs = SymFn::zero(f.m(), i + j);
        for k in i..=n - j {
            rhs.add_scaled(&binomial::<S>(n, k), &tensor_apply(kind, kind, n, k, i, j, f)?);
        }
        r.check(&lhs, &rhs, || format!("{kind} n={n} i={i} j={j}"));
    }
    Ok(r)
}

fn neg_d_pow<S: Scalar>(f: &SymFn<S>, x: usize, k: usize) -> Result<SymFn<S>> {
    let mut g = f.clone();
    for _ in 0..k {
        g = script_d(&g, x)?.neg();
    }
    Ok(g)
}

/// The shift identities with `(𝒟_x f)(·) = n f(x,·)`:
///
/// `Σ_{k=1}^{n-i} (1/k!) (-𝒟_x)^k 𝐬(n,i+k) f = Σ_{k=1}^{n-i} 𝐬(n-k,i) (-𝒟_x)^k f`,
/// `Σ_{k=1}^{n-i} (-𝒟_x)^k 𝐒(n,i+k) f = Σ_{k=1}^{n-i} (1/k!) 𝐒(n-k,i) (-𝒟_x)^k f`.
pub fn check_shift_identity<S: Scalar>(n: usize, i: usize, x: usize, f: &SymFn<S>) -> Result<Report> {
    check_label(x, f.m())?;
    if f.rank() != n {
        return Err(Error::RankMismatch {
            expected: n,
            got: f.rank(),
        });
    }
    if i == 0 || i >= n {
        return Err(Error::InvalidArgument(format!(
            "shift identity needs 1 <= i < n, got i={i} n={n}"
        )));
    }
    let mut r = Report::for_scalar::<S>("stirling.shift");
    let m = f.m();
    for (kind, lhs_weighted) in [(Kind::S1, true), (Kind::S2, false)] {
        let mut lhs = SymFn::zero(m, i);
        let mut rhs = SymFn::zero(m, i);
        for k in 1..=n - i {
            let inv_fact = S::one() / factorial::<S>(k);
            let (wl, wr) = if lhs_weighted {
                (inv_fact, S::one())
            } else {
                (S::one(), inv_fact)
            };
            lhs.add_scaled(&wl, &neg_d_pow(&apply(kind, n, i + k, f)?, x, k)?);
            rhs.add_scaled(&wr, &apply(kind, n - k, i, &neg_d_pow(f, x, k)?)?);
        }
        r.check(&lhs, &rhs, || format!("{kind} n={n} i={i} x={x}"));
    }
    Ok(r)
}
