//! Touchard polynomials `T_n(ω)` as symmetric measures, and the Bell and
//! Rao–Uppuluri–Carpenter measures.

use rand::distr::weighted::WeightedIndex;
use rand::prelude::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;

use crate::combinat::shape_tally;
use crate::error::{Error, Result};
use crate::ground::{PointFn, PointMeasure};
use crate::poisson::poisson_expect_series;
use crate::polyop::euler_op;
use crate::report::Report;
use crate::scalar::{binomial, factorial, q_to_f64, Scalar};
use crate::series::ScalarSeries;
use crate::stirling::{adjoint_apply, apply, Kind};
use crate::symtensor::{
    diag_measure, eval_polynomial, pair, power_fn, power_measure, sym_product_measure, GradedFn, SymFn, SymMeasure,
};
use crate::Q;

/// `T_n(ω) = Σ_k Σ_{λ ∈ UP(n,k)} ω^[|λ_1|] ⊙ .. ⊙ ω^[|λ_k|]`, with `T_0 = 1`.
pub fn touchard_measure<S: Scalar>(omega: &PointMeasure<S>, n: usize) -> Result<SymMeasure<S>> {
    let m = omega.m();
    let mut out = SymMeasure::zero(m, n);
    if n == 0 {
        out.set(&[], S::one());
        return Ok(out);
    }
    for k in 1..=n {
        for (shape, count) in shape_tally(n, k) {
            let mut term = SymMeasure::scalar(m, S::one());
            for &size in &shape {
                term = sym_product_measure(&term, &diag_measure(omega, size)?)?;
            }
            out.add_scaled(&S::from_i64(count as i64), &term);
        }
    }
    Ok(out)
}

/// `T_n(ω) = Σ_k 𝐒(n,k)^* ω^⊗k`.
pub fn touchard_via_adjoint<S: Scalar>(omega: &PointMeasure<S>, n: usize) -> Result<SymMeasure<S>> {
    let mut out = SymMeasure::zero(omega.m(), n);
    for k in 0..=n {
        if k == 0 && n > 0 {
            continue;
        }
        out.add_assign(&adjoint_apply(Kind::S2, n, k, &power_measure(omega, k))?);
    }
    Ok(out)
}

/// `B_n(ν) = T_n(ν)` for a probability measure `ν`.
pub fn bell_measure(nu: &PointMeasure<Q>, n: usize) -> Result<SymMeasure<Q>> {
    if !nu.is_probability() {
        return Err(Error::NotProbability(format!(
            "{:?}",
            nu.weights().iter().map(ToString::to_string).collect::<Vec<_>>()
        )));
    }
    touchard_measure(nu, n)
}

/// `D_n(ν) = T_n(-ν)`.
pub fn ruc_measure<S: Scalar>(nu: &PointMeasure<S>, n: usize) -> Result<SymMeasure<S>> {
    touchard_measure(&nu.neg(), n)
}

/// Total mass `μ(X^n) = ⟨μ, 1⟩`.
pub fn total_mass<S: Scalar>(mu: &SymMeasure<S>) -> Result<S> {
    pair(mu, &SymFn::ones(mu.m(), mu.rank()))
}

/// `T_{n+1}(ω) = Σ_k C(n,k) T_k(ω) ⊙ ω^[n+1-k]`, and the same recurrence
/// with a minus sign for `D_{n+1}(ω)`.
pub fn check_touchard_recurrence<S: Scalar>(omega: &PointMeasure<S>, n: usize) -> Result<Report> {
    let m = omega.m();
    let mut r = Report::for_scalar::<S>("touchard.recurrence");
    for (label, sign) in [("T", S::one()), ("D", -S::one())] {
        let base = if label == "T" { omega.clone() } else { omega.neg() };
        let mut rhs = SymMeasure::zero(m, n + 1);
        for k in 0..=n {
            let term = sym_product_measure(&touchard_measure(&base, k)?, &diag_measure(omega, n + 1 - k)?)?;
            rhs.add_scaled(&(sign.clone() * binomial::<S>(n, k)), &term);
        }
        r.check(&touchard_measure(&base, n + 1)?, &rhs, || format!("{label} n={n}"));
    }
    Ok(r)
}

/// `T_n(ω+σ) = Σ_k C(n,k) T_k(ω) ⊙ T_{n-k}(σ)`.
pub fn check_touchard_binomial<S: Scalar>(
    omega: &PointMeasure<S>,
    sigma: &PointMeasure<S>,
    n: usize,
) -> Result<Report> {
    let sum = omega.add(sigma)?;
    let mut rhs = SymMeasure::zero(omega.m(), n);
    for k in 0..=n {
        let term = sym_product_measure(&touchard_measure(omega, k)?, &touchard_measure(sigma, n - k)?)?;
        rhs.add_scaled(&binomial::<S>(n, k), &term);
    }
    let mut r = Report::for_scalar::<S>("touchard.binomial");
    r.check(&touchard_measure(&sum, n)?, &rhs, || format!("n={n}"));
    Ok(r)
}

/// `Σ_n (z^n/n!) ⟨T_n(ω), ξ^⊗n⟩ = exp⟨ω, e^{zξ} - 1⟩` coefficientwise to `order`.
pub fn check_touchard_genfun<S: Scalar>(omega: &PointMeasure<S>, xi: &PointFn<S>, order: usize) -> Result<Report> {
    if omega.m() != xi.m() {
        return Err(Error::GroundMismatch {
            left: omega.m(),
            right: xi.m(),
        });
    }
    let mut inner = ScalarSeries::zero(order);
    for (w, c) in omega.weights().iter().zip(xi.weights()) {
        let e = ScalarSeries::var(order)
            .scale(c)
            .exp()?
            .sub(&ScalarSeries::one(order))?;
        inner = inner.add(&e.scale(w))?;
    }
    let rhs = inner.exp()?;
    let mut r = Report::for_scalar::<S>("touchard.genfun");
    for n in 0..=order {
        let lhs = pair(&touchard_measure(omega, n)?, &power_fn(xi, n))? / factorial::<S>(n);
        r.check(&lhs, &rhs.coeff(n), || format!("coefficient {n}"));
    }
    Ok(r)
}

/// The polynomial `ω ↦ ⟨T_n(ω), ξ^⊗n⟩ = Σ_k ⟨ω^⊗k, 𝐒(n,k) ξ^⊗n⟩`.
pub fn touchard_polynomial<S: Scalar>(xi: &PointFn<S>, n: usize) -> Result<GradedFn<S>> {
    let f = power_fn(xi, n);
    let comps = (0..=n).map(|k| apply(Kind::S2, n, k, &f)).collect::<Result<_>>()?;
    GradedFn::try_new(xi.m(), comps)
}

/// `⟨T_{n+1}(ω), ξ^⊗(n+1)⟩ = ⟨ω, ξ(∂+1)⟩ ⟨T_n(ω), ξ^⊗n⟩` as an identity of
/// polynomials, and at each of the given measures through the explicit
/// Touchard measure.
pub fn check_rho_recurrence<S: Scalar>(omegas: &[PointMeasure<S>], xi: &PointFn<S>, n: usize) -> Result<Report> {
    let p = touchard_polynomial(xi, n)?;
    let lhs = touchard_polynomial(xi, n + 1)?;
    let rhs = euler_op(xi, &p)?.add(&GradedFn::linear(xi).mul(&p)?)?;
    let mut r = Report::for_scalar::<S>("touchard.rho");
    r.check(&lhs, &rhs, || format!("polynomial n={n}"));
    for (j, om) in omegas.iter().enumerate() {
        let direct = pair(&touchard_measure(om, n + 1)?, &power_fn(xi, n + 1))?;
        r.check(&direct, &eval_polynomial(&rhs, om)?, || format!("n={n} at measure {j}"));
    }
    Ok(r)
}

/// `⟨B_n(ν), f⟩ = e^{-1} Σ_{k>=0} (1/k!) 𝔼 Σ_{i_1..i_n <= k} f(Z_{i_1}..Z_{i_n})`
/// for i.i.d. `Z_i ~ ν`, truncated at `k <= k_max`.
///
/// The inner sum equals `⟨η_k^⊗n, f⟩` for the configuration `η_k` of the
/// first `k` samples, so its expectation is an exact multinomial moment and
/// the series is the defining Poisson series at intensity `ν`. The `k = 0`
/// term is `f` on the empty tuple, present only for `n = 0`.
pub fn dobinski_series(nu: &PointMeasure<Q>, f: &SymFn<Q>, k_max: usize) -> Result<f64> {
    if !nu.is_probability() {
        return Err(Error::NotProbability(
            "Dobiński sampling needs a probability measure".into(),
        ));
    }
    poisson_expect_series(nu, &GradedFn::monomial(f), k_max)
}

/// Compares [`dobinski_series`] with the exact `⟨B_n(ν), f⟩` at tolerance `tol`.
pub fn dobinski_check(nu: &PointMeasure<Q>, f: &SymFn<Q>, k_max: usize, tol: f64) -> Result<Report> {
    let exact = q_to_f64(&pair(&bell_measure(nu, f.rank())?, f)?);
    let approx = dobinski_series(nu, f, k_max)?;
    let mut r = Report::with_tol("touchard.dobinski", tol);
    r.check_close((approx - exact).abs(), || {
        format!("n={} K={k_max}: {approx} vs {exact}", f.rank())
    });
    Ok(r)
}

/// Monte Carlo estimate of the Dobiński expectation: draw `N ~ Poisson(1)`,
/// then `N` points from `ν`, and average `⟨η^⊗n, f⟩`. Returns the mean and
/// its standard error.
pub fn dobinski_monte_carlo(nu: &PointMeasure<Q>, f: &SymFn<Q>, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if !nu.is_probability() {
        return Err(Error::NotProbability(
            "Dobiński sampling needs a probability measure".into(),
        ));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("Monte Carlo needs at least two samples".into()));
    }
    let m = nu.m();
    let weights: Vec<f64> = nu.weights().iter().map(q_to_f64).collect();
    let points = WeightedIndex::new(&weights).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let count = Poisson::new(1.0).expect("unit rate is valid");
    let ff = GradedFn::monomial(&SymFn::from_fn(m, f.rank(), |idx| q_to_f64(f.get(idx))));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let n = count.sample(&mut rng) as usize;
        let mut conf = vec![0.0; m];
        for _ in 0..n {
            conf[points.sample(&mut rng)] += 1.0;
        }
        let v = eval_polynomial(&ff, &PointMeasure::new(conf))?;
        sum += v;
        sum_sq += v * v;
    }
    let s = samples as f64;
    let mean = sum / s;
    let var = (sum_sq / s - mean * mean).max(0.0) * s / (s - 1.0);
    Ok((mean, (var / s).sqrt()))
}
