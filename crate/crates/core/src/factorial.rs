//! Falling and rising factorial measures.
//!
//! The ordered-tuple mass of `(ω)_n` at `(x_1..x_n)` is
//! `∏_k (ω_{x_k} - #{j < k : x_j = x_k})`; the rising factorial uses `+`.
//! The product only depends on the multiset, so it is evaluated once at the
//! sorted representative.

use crate::error::{Error, Result};
use crate::ground::{check_label, PointFn, PointMeasure};
use crate::report::Report;
use crate::scalar::{binomial, factorial, Scalar};
use crate::series::ScalarSeries;
use crate::symtensor::{pair, power_fn, sym_product_fn, sym_product_measure, SymMeasure};

/// Mass of the falling (`sign = -1`) or rising (`sign = +1`) factorial at
/// one ordered tuple.
pub fn ordered_mass<S: Scalar>(omega: &PointMeasure<S>, tuple: &[usize], sign: i64) -> S {
    let mut acc = S::one();
    for (k, &x) in tuple.iter().enumerate() {
        let seen = tuple[..k].iter().filter(|&&y| y == x).count() as i64;
        acc *= omega.at(x).clone() + S::from_i64(sign * seen);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// `(ω)_n`.
pub fn falling<S: Scalar>(omega: &PointMeasure<S>, n: usize) -> SymMeasure<S> {
    SymMeasure::from_fn(omega.m(), n, |z| ordered_mass(omega, z, -1))
}

/// `(ω)^(n)`.
pub fn rising<S: Scalar>(omega: &PointMeasure<S>, n: usize) -> SymMeasure<S> {
    SymMeasure::from_fn(omega.m(), n, |z| ordered_mass(omega, z, 1))
}

/// The spatial binomial coefficient `(ω)_n / n!`.
pub fn binom_measure<S: Scalar>(omega: &PointMeasure<S>, n: usize) -> SymMeasure<S> {
    falling(omega, n).scale(&(S::one() / factorial::<S>(n)))
}

fn same_ground(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GroundMismatch { left: a, right: b })
    }
}

/// `(ω+σ)_n = Σ_k C(n,k) (ω)_k ⊙ (σ)_{n-k}` and the rising analogue.
pub fn check_binomial<S: Scalar>(omega: &PointMeasure<S>, sigma: &PointMeasure<S>, n: usize) -> Result<Report> {
    same_ground(omega.m(), sigma.m())?;
    let mut r = Report::for_scalar::<S>("factorial.binomial");
    let sum = omega.add(sigma)?;
    for (kind, fact) in [
        ("falling", falling as fn(&PointMeasure<S>, usize) -> SymMeasure<S>),
        ("rising", rising),
    ] {
        let lhs = fact(&sum, n);
        let mut rhs = SymMeasure::zero(omega.m(), n);
        for k in 0..=n {
            let term = sym_product_measure(&fact(omega, k), &fact(sigma, n - k))?;
            rhs.add_scaled(&binomial::<S>(n, k), &term);
        }
        r.check(&lhs, &rhs, || format!("{kind} n={n}"));
    }
    Ok(r)
}

/// `(ω+δ_x)_n - (ω)_n = n δ_x ⊙ (ω)_{n-1}` and
/// `(ω)^(n) - (ω-δ_x)^(n) = n δ_x ⊙ (ω)^(n-1)`.
pub fn check_lowering<S: Scalar>(omega: &PointMeasure<S>, x: usize, n: usize) -> Result<Report> {
    check_label(x, omega.m())?;
    if n == 0 {
        return Err(Error::InvalidArgument("lowering needs n >= 1".into()));
    }
    let m = omega.m();
    let delta = PointMeasure::delta(m, x);
    let scaled = |mu: SymMeasure<S>| mu.scale(&S::from_i64(n as i64));
    let mut r = Report::for_scalar::<S>("factorial.lowering");

    let lhs = falling(&omega.add(&delta)?, n).sub(&falling(omega, n))?;
    let rhs = scaled(sym_product_measure(&falling(&delta, 1), &falling(omega, n - 1))?);
    r.check(&lhs, &rhs, || format!("falling x={x} n={n}"));

    let lhs = rising(omega, n).sub(&rising(&omega.sub(&delta)?, n))?;
    let rhs = scaled(sym_product_measure(&rising(&delta, 1), &rising(omega, n - 1))?);
    r.check(&lhs, &rhs, || format!("rising x={x} n={n}"));
    Ok(r)
}

/// `⟨(ω)_{n+1}, ξ^⊗(n+1)⟩ = ⟨(ω)_n, ξ^⊗n⟩⟨ω,ξ⟩ - n⟨(ω)_n, ξ²⊙ξ^⊗(n-1)⟩`,
/// and the rising version with `+`.
pub fn check_recurrence<S: Scalar>(omega: &PointMeasure<S>, xi: &PointFn<S>, n: usize) -> Result<Report> {
    same_ground(omega.m(), xi.m())?;
    if n == 0 {
        return Err(Error::InvalidArgument("recurrence needs n >= 1".into()));
    }
    let mut r = Report::for_scalar::<S>("factorial.recurrence");
    let lin = omega.integrate(xi)?;
    let mixed = sym_product_fn(&power_fn(&xi.pow(2), 1), &power_fn(xi, n - 1))?;
    let nn = S::from_i64(n as i64);
    for (kind, fact, sign) in [
        (
            "falling",
            falling as fn(&PointMeasure<S>, usize) -> SymMeasure<S>,
            -S::one(),
        ),
        ("rising", rising, S::one()),
    ] {
        let lhs = pair(&fact(omega, n + 1), &power_fn(xi, n + 1))?;
        let prev = fact(omega, n);
        let rhs = pair(&prev, &power_fn(xi, n))? * lin.clone() + sign * nn.clone() * pair(&prev, &mixed)?;
        r.check(&lhs, &rhs, || format!("{kind} n={n}"));
    }
    Ok(r)
}

/// `Σ (z^n/n!) ⟨(ω)_n, ξ^⊗n⟩ = exp⟨ω, log(1+zξ)⟩` and
/// `Σ (z^n/n!) ⟨(ω)^(n), ξ^⊗n⟩ = exp⟨ω, -log(1-zξ)⟩`, coefficientwise to order `order`.
pub fn check_genfun_factorial<S: Scalar>(omega: &PointMeasure<S>, xi: &PointFn<S>, order: usize) -> Result<Report> {
    same_ground(omega.m(), xi.m())?;
    let mut r = Report::for_scalar::<S>("factorial.genfun");
    let moment = |i: usize| omega.integrate(&xi.pow(i));
    let mut log_falling = vec![S::zero()];
    let mut log_rising = vec![S::zero()];
    for i in 1..=order {
        let t = moment(i)? / S::from_i64(i as i64);
        log_rising.push(t.clone());
        log_falling.push(if i % 2 == 1 { t } else { -t });
    }
    let ef = ScalarSeries::new(order, log_falling).exp()?;
    let er = ScalarSeries::new(order, log_rising).exp()?;
    for n in 0..=order {
        let xn = power_fn(xi, n);
        let nf = factorial::<S>(n);
        let lf = pair(&falling(omega, n), &xn)? / nf.clone();
        let lr = pair(&rising(omega, n), &xn)? / nf;
        r.check(&lf, &ef.coeff(n), || format!("falling coefficient {n}"));
        r.check(&lr, &er.coeff(n), || format!("rising coefficient {n}"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiset::{arrangements, enumerate};
    use crate::random::RatGen;
    use crate::scalar::falling_scalar;
    use crate::symtensor::SymFn;
    use crate::Q;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn total<S: Scalar>(mu: &SymMeasure<S>) -> S {
        pair(mu, &SymFn::ones(mu.m(), mu.rank())).unwrap()
    }

    #[test]
    fn single_point_values() {
        let w = PointMeasure::new(vec![q(3, 1)]);
        assert_eq!(total(&falling(&w, 2)), q(6, 1));
        assert_eq!(total(&rising(&w, 2)), q(12, 1));
        assert_eq!(falling(&w, 0).as_scalar(), &q(1, 1));
        let mut g = RatGen::new(1, 9);
        for _ in 0..10 {
            let z = g.next_rational();
            let w = PointMeasure::new(vec![z.clone()]);
            for n in 0..7 {
                assert_eq!(total(&falling(&w, n)), falling_scalar(&z, n));
                // rising factorial z(z+1)...(z+n-1) by direct expansion
                let r: Q = (0..n).map(|j| z.clone() + Q::from_i64(j as i64)).product();
                assert_eq!(total(&rising(&w, n)), r);
            }
        }
    }

    #[test]
    fn degree_one_is_identity() {
        let mut g = RatGen::new(2, 9);
        let w: PointMeasure<Q> = g.measure(3);
        assert_eq!(falling(&w, 1).values(), w.weights());
        assert_eq!(rising(&w, 1).values(), w.weights());
    }

    #[test]
    fn small_configurations_vanish() {
        // γ = δ_0 + δ_2 has two points
        let gamma = PointMeasure::<Q>::configuration(3, &[0, 2]).unwrap();
        assert!(falling(&gamma, 3).is_zero());
        assert!(!falling(&gamma, 2).is_zero());
    }

    #[test]
    fn configuration_counts_on_subsets() {
        // γ has k points in A; (γ)_n(A^n) = (k)_n
        let gamma = PointMeasure::<Q>::configuration(3, &[0, 0, 1, 2, 2, 2]).unwrap();
        for (a, k) in [(vec![0usize], 2i64), (vec![0, 1], 3), (vec![0, 1, 2], 6), (vec![2], 3)] {
            for n in 0..6 {
                let ind = SymFn::from_fn(3, n, |z| {
                    if z.iter().all(|x| a.contains(x)) {
                        q(1, 1)
                    } else {
                        q(0, 1)
                    }
                });
                assert_eq!(pair(&falling(&gamma, n), &ind).unwrap(), falling_scalar(&q(k, 1), n));
            }
        }
    }

    #[test]
    fn permutation_invariance_audit() {
        let mut g = RatGen::new(3, 9);
        for m in 1..=3 {
            let w: PointMeasure<Q> = g.measure(m);
            for n in 0..=6 {
                for z in enumerate(m, n) {
                    let f0 = ordered_mass(&w, &z, -1);
                    let r0 = ordered_mass(&w, &z, 1);
                    for t in arrangements(&z) {
                        assert_eq!(ordered_mass(&w, &t, -1), f0);
                        assert_eq!(ordered_mass(&w, &t, 1), r0);
                    }
                }
            }
        }
    }

    #[test]
    fn recurrence_examples() {
        let mut g = RatGen::new(4, 9);
        let w: PointMeasure<Q> = g.measure(2);
        let xi: PointFn<Q> = g.point_fn(2);
        assert!(check_recurrence(&w, &xi, 1).unwrap().passed());
        // n=1 by hand: ⟨(ω)_2, ξ^⊗2⟩ = ⟨ω,ξ⟩² − ⟨ω,ξ²⟩
        let lhs = pair(&falling(&w, 2), &power_fn(&xi, 2)).unwrap();
        let lin = w.integrate(&xi).unwrap();
        assert_eq!(lhs, lin.clone() * lin - w.integrate(&xi.pow(2)).unwrap());
        let one = PointMeasure::new(vec![q(5, 2)]);
        let ones = PointFn::constant(1, q(1, 1));
        for n in 1..6 {
            assert!(check_recurrence(&one, &ones, n).unwrap().passed());
        }
    }

    #[test]
    fn lowering_and_binomial_small_cases() {
        let mut g = RatGen::new(5, 9);
        let w: PointMeasure<Q> = g.measure(2);
        let s: PointMeasure<Q> = g.measure(2);
        assert!(check_binomial(&w, &PointMeasure::zero(2), 3).unwrap().passed());
        assert!(check_binomial(&w, &s, 0).unwrap().passed());
        assert!(check_binomial(&w, &s, 4).unwrap().passed());
        assert!(check_lowering(&w, 0, 1).unwrap().passed());
        assert!(check_lowering(&w, 0, 3).unwrap().passed());
        assert!(check_lowering(&w, 5, 3).is_err());
    }

    #[test]
    fn genfun_single_point_binomial_series() {
        // Σ (z0)_n t^n / n! = (1+t)^z0: coefficient n is C(z0, n), computed
        // as the product z0 (z0-1) .. / n!
        let z0 = q(7, 3);
        let w = PointMeasure::new(vec![z0.clone()]);
        let ones = PointFn::constant(1, q(1, 1));
        assert!(check_genfun_factorial(&w, &ones, 8).unwrap().passed());
        for n in 0..8 {
            let c: Q = (0..n).map(|j| z0.clone() - Q::from_i64(j)).product::<Q>() / factorial::<Q>(n as usize);
            assert_eq!(total(&binom_measure(&w, n as usize)), c);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn rising_is_signed_falling(seed in any::<u64>(), n in 0usize..7) {
            let mut g = RatGen::new(seed, 9);
            let w: PointMeasure<Q> = g.measure(3);
            let sign = if n % 2 == 0 { q(1, 1) } else { q(-1, 1) };
            prop_assert_eq!(rising(&w, n), falling(&w.neg(), n).scale(&sign));
        }

        #[test]
        fn identities_hold_on_random_inputs(seed in any::<u64>()) {
            let mut g = RatGen::new(seed, 9);
            let m = 1 + g.below(3);
            let w: PointMeasure<Q> = g.measure(m);
            let s: PointMeasure<Q> = g.measure(m);
            let xi: PointFn<Q> = g.point_fn(m);
            let x = g.below(m);
            for n in 1..=4 {
                prop_assert!(check_binomial(&w, &s, n).unwrap().passed());
                prop_assert!(check_lowering(&w, x, n).unwrap().passed());
                prop_assert!(check_recurrence(&w, &xi, n).unwrap().passed());
            }
            prop_assert!(check_genfun_factorial(&w, &xi, 6).unwrap().passed());
        }
    }
}
