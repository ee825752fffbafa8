//! The Poisson functional `𝔼_ω` on polynomials of a measure.
//!
//! Two exact routes ([`poisson_expect`] through `𝐒(n,k)`, and
//! [`poisson_expect_finite`] through a finite inclusion–exclusion sum) and one
//! floating-point route through the truncated defining series.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ground::{check_label, PointFn, PointMeasure};
use crate::multiset::enumerate;
use crate::polyop::{difference, falling_synthesis};
use crate::report::Report;
use crate::scalar::{factorial, q_to_f64, Scalar};
use crate::series::ScalarSeries;
use crate::stirling::{apply, Kind};
use crate::symtensor::{eval_polynomial, pair, power_fn, power_measure, GradedFn, SymFn};
use crate::Q;

fn same_ground(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GroundMismatch { left: a, right: b })
    }
}

/// `𝔼_ω(p) = Σ_n Σ_k ⟨ω^⊗k, 𝐒(n,k) f^(n)⟩`.
pub fn poisson_expect<S: Scalar>(omega: &PointMeasure<S>, p: &GradedFn<S>) -> Result<S> {
    same_ground(omega.m(), p.m())?;
    let mut acc = S::zero();
    for (n, f) in p.components().iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        for k in 0..=n {
            acc += pair(&power_measure(omega, k), &apply(Kind::S2, n, k, f)?)?;
        }
    }
    Ok(acc)
}

/// Labels touched by a nonzero entry of `p` of positive degree.
pub fn support<S: Scalar>(p: &GradedFn<S>) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for f in p.components() {
        for (idx, v) in f.entries() {
            if !v.is_zero() {
                out.extend(idx);
            }
        }
    }
    out
}

/// `ω` restricted to the labels in `lambda`.
pub fn restrict<S: Scalar>(omega: &PointMeasure<S>, lambda: &BTreeSet<usize>) -> Result<PointMeasure<S>> {
    for &x in lambda {
        check_label(x, omega.m())?;
    }
    Ok(PointMeasure::new(
        omega
            .weights()
            .iter()
            .enumerate()
            .map(|(x, w)| if lambda.contains(&x) { w.clone() } else { S::zero() })
            .collect(),
    ))
}

/// `𝔼_ω(p) = Σ_i (1/i!) ∫_{Λ^i} p([x_1..x_i]) ω^⊗i(dx) Σ_{k <= n-i} (-ω(Λ))^k / k!`
/// with `Λ` the whole ground set.
pub fn poisson_expect_finite<S: Scalar>(omega: &PointMeasure<S>, p: &GradedFn<S>) -> Result<S> {
    let all = (0..omega.m()).collect();
    poisson_expect_finite_on(omega, p, &all)
}

/// [`poisson_expect_finite`] over a set `Λ` containing the support of `p`.
pub fn poisson_expect_finite_on<S: Scalar>(
    omega: &PointMeasure<S>,
    p: &GradedFn<S>,
    lambda: &BTreeSet<usize>,
) -> Result<S> {
    same_ground(omega.m(), p.m())?;
    if !support(p).is_subset(lambda) {
        return Err(Error::SupportViolation);
    }
    let m = omega.m();
    let om = restrict(omega, lambda)?;
    let mass = -om.total();
    let n = p.degree();
    let mut acc = S::zero();
    for i in 0..=n {
        let on_conf = SymFn::from_fn(m, i, |x| {
            let conf = PointMeasure::configuration(m, x).expect("labels are in range");
            eval_polynomial(p, &conf).expect("same ground set")
        });
        let integral = pair(&power_measure(&om, i), &on_conf)? / factorial::<S>(i);
        let mut tail = S::zero();
        let mut term = S::one();
        for k in 0..=n - i {
            if k > 0 {
                term = term * mass.clone() / S::from_i64(k as i64);
            }
            tail += term.clone();
        }
        acc += integral * tail;
    }
    Ok(acc)
}

/// `e^{-ω(X)} Σ_{i<=K} (1/i!) ∫ p([x_1..x_i]) ω^⊗i(dx)` in floating point.
pub fn poisson_expect_series(omega: &PointMeasure<Q>, p: &GradedFn<Q>, k_max: usize) -> Result<f64> {
    same_ground(omega.m(), p.m())?;
    let m = omega.m();
    let w: Vec<f64> = omega.weights().iter().map(q_to_f64).collect();
    let pf = GradedFn::new(
        m,
        p.components()
            .iter()
            .map(|f| SymFn::from_fn(m, f.rank(), |idx| q_to_f64(f.get(idx))))
            .collect(),
    );
    let mut acc = 0.0;
    for i in 0..=k_max {
        for idx in enumerate(m, i) {
            // ∏ ω_x^{c_x} / c_x! over the counts of the multiset
            let mut weight = 1.0;
            for (x, c) in crate::multiset::runs(&idx) {
                for j in 1..=c {
                    weight *= w[x] / j as f64;
                }
            }
            if weight == 0.0 {
                continue;
            }
            let conf = PointMeasure::configuration(m, &idx)?;
            acc += weight * eval_polynomial(&pf, &conf)?;
        }
    }
    Ok((-w.iter().sum::<f64>()).exp() * acc)
}

/// `𝔼_ω(⟨(·)_k, g⟩) = ⟨ω^⊗k, g⟩`.
pub fn check_umbral<S: Scalar>(omega: &PointMeasure<S>, g: &SymFn<S>) -> Result<Report> {
    same_ground(omega.m(), g.m())?;
    let m = g.m();
    let k = g.rank();
    let mut basis: Vec<SymFn<S>> = (0..k).map(|j| SymFn::zero(m, j)).collect();
    basis.push(g.clone());
    let p = falling_synthesis(m, &basis)?;
    let mut r = Report::for_scalar::<S>("poisson.umbral");
    r.check(&poisson_expect(omega, &p)?, &pair(&power_measure(omega, k), g)?, || {
        format!("k={k}")
    });
    Ok(r)
}

/// The Mecke identity `∫𝑃(dη) ∫η(dx) F(η,x) = ∫𝑃(dη) ∫ω(dx) F(η+δ_x, x)` for
/// `F(·,x) = fs[x]`, both order by order in the defining series (the `n`-th
/// term on the left against the `(n-1)`-th on the right, `n <= order`) and
/// in full through [`poisson_expect`].
pub fn check_mecke_order<S: Scalar>(omega: &PointMeasure<S>, fs: &[GradedFn<S>], order: usize) -> Result<Report> {
    let m = omega.m();
    if fs.len() != m {
        return Err(Error::InvalidArgument(format!(
            "need one polynomial per point, got {} for {m} points",
            fs.len()
        )));
    }
    for f in fs {
        same_ground(m, f.m())?;
    }
    let conf_eval = |x: usize, idx: &[usize]| -> S {
        let conf = PointMeasure::configuration(m, idx).expect("labels are in range");
        eval_polynomial(&fs[x], &conf).expect("same ground set")
    };
    let mut r = Report::for_scalar::<S>("poisson.mecke");
    for n in 1..=order {
        let left = SymFn::from_fn(m, n, |y| y.iter().fold(S::zero(), |acc, &x| acc + conf_eval(x, y)));
        let right = SymFn::from_fn(m, n - 1, |y| {
            let mut acc = S::zero();
            for x in 0..m {
                let mut z = y.to_vec();
                z.push(x);
                z.sort_unstable();
                acc += omega.at(x).clone() * conf_eval(x, &z);
            }
            acc
        });
        let lhs = pair(&power_measure(omega, n), &left)? / factorial::<S>(n);
        let rhs = pair(&power_measure(omega, n - 1), &right)? / factorial::<S>(n - 1);
        r.check(&lhs, &rhs, || format!("order {n}"));
    }

    let mut integrand = GradedFn::zero(m, 0);
    let mut shifted = S::zero();
    for (x, f) in fs.iter().enumerate() {
        let count = GradedFn::linear(&PointFn::delta(m, x));
        integrand = integrand.add(&count.mul(f)?)?;
        let moved = f.add(&difference(f, x)?)?;
        shifted += omega.at(x).clone() * poisson_expect(omega, &moved)?;
    }
    r.check(&poisson_expect(omega, &integrand)?, &shifted, || "full identity".into());
    Ok(r)
}

fn check_supported<S: Scalar>(p: &GradedFn<S>, set: &BTreeSet<usize>) -> Result<()> {
    if support(p).is_subset(set) {
        Ok(())
    } else {
        Err(Error::SupportViolation)
    }
}

/// `𝔼_ω(p_A p_B) = 𝔼_ω(p_A) 𝔼_ω(p_B)` for polynomials supported on disjoint
/// label sets.
pub fn check_independence<S: Scalar>(
    omega: &PointMeasure<S>,
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
    pa: &GradedFn<S>,
    pb: &GradedFn<S>,
) -> Result<Report> {
    if let Some(&x) = a.intersection(b).next() {
        return Err(Error::SupportOverlap(x));
    }
    check_supported(pa, a)?;
    check_supported(pb, b)?;
    let mut r = Report::for_scalar::<S>("poisson.independence");
    let lhs = poisson_expect(omega, &pa.mul(pb)?)?;
    let rhs = poisson_expect(omega, pa)? * poisson_expect(omega, pb)?;
    r.check(&lhs, &rhs, || format!("degrees {} and {}", pa.degree(), pb.degree()));
    Ok(r)
}

/// `Σ_n (z^n/n!) 𝔼_ω(⟨·,ξ⟩^n) = exp⟨ω, e^{zξ} - 1⟩` coefficientwise to `order`.
pub fn laplace_coeffs<S: Scalar>(omega: &PointMeasure<S>, xi: &PointFn<S>, order: usize) -> Result<Report> {
    same_ground(omega.m(), xi.m())?;
    let mut inner = ScalarSeries::zero(order);
    for (w, c) in omega.weights().iter().zip(xi.weights()) {
        let e = ScalarSeries::var(order)
            .scale(c)
            .exp()?
            .sub(&ScalarSeries::one(order))?;
        inner = inner.add(&e.scale(w))?;
    }
    let rhs = inner.exp()?;
    let mut r = Report::for_scalar::<S>("poisson.laplace");
    for n in 0..=order {
        let lhs = poisson_expect(omega, &GradedFn::monomial(&power_fn(xi, n)))? / factorial::<S>(n);
        r.check(&lhs, &rhs.coeff(n), || format!("coefficient {n}"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::RatGen;
    use crate::{Qi, Q};

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn bell(n: usize) -> i64 {
        (0..=n).map(|k| crate::combinat::rgs(n, k).len() as i64).sum()
    }

    #[test]
    fn low_degree_values() {
        let mut g = RatGen::new(51, 6);
        let om: PointMeasure<Q> = g.measure(3);
        let xi: PointFn<Q> = g.point_fn(3);
        let lin = GradedFn::linear(&xi);
        let mean = om.integrate(&xi).unwrap();
        assert_eq!(poisson_expect(&om, &lin).unwrap(), mean);
        let sq = lin.mul(&lin).unwrap();
        let want = mean.clone() * mean + om.integrate(&xi.pow(2)).unwrap();
        assert_eq!(poisson_expect(&om, &sq).unwrap(), want);
        assert_eq!(poisson_expect_finite(&om, &sq).unwrap(), want);
        let c = GradedFn::constant(3, q(5));
        assert_eq!(poisson_expect_finite(&om, &c).unwrap(), q(5));
    }

    #[test]
    fn single_point_touchard_values() {
        // 𝔼 of t^n at intensity z is Σ_k S(n,k) z^k
        let z = Q::from_ratio(3, 2);
        let om = PointMeasure::new(vec![z.clone()]);
        for n in 0..=6 {
            let p = GradedFn::monomial(&SymFn::ones(1, n));
            let want: Q = (0..=n)
                .map(|k| q(crate::combinat::rgs(n, k).len() as i64) * crate::scalar::Scalar::pow_n(&z, k))
                .sum();
            assert_eq!(poisson_expect(&om, &p).unwrap(), want);
            assert_eq!(poisson_expect_finite(&om, &p).unwrap(), want);
        }
        let one = PointMeasure::new(vec![q(1)]);
        assert_eq!(
            poisson_expect_finite(&one, &GradedFn::monomial(&SymFn::ones(1, 2))).unwrap(),
            q(2)
        );
    }

    #[test]
    fn routes_agree_and_lambda_independent() {
        let mut g = RatGen::new(52, 5);
        for m in 1..=3 {
            let om: PointMeasure<Q> = g.measure(m);
            let mut p: GradedFn<Q> = g.graded(m, 5);
            assert_eq!(
                poisson_expect(&om, &p).unwrap(),
                poisson_expect_finite(&om, &p).unwrap()
            );
            if m > 1 {
                // zero every entry touching the last point
                for k in 1..=5 {
                    let c = p.component_mut(k);
                    *c = SymFn::from_fn(m, k, |idx| {
                        if idx.contains(&(m - 1)) {
                            q(0)
                        } else {
                            c.get(idx).clone()
                        }
                    });
                }
                let sup = support(&p);
                assert!(!sup.contains(&(m - 1)));
                assert_eq!(
                    poisson_expect_finite_on(&om, &p, &sup).unwrap(),
                    poisson_expect_finite(&om, &p).unwrap()
                );
            }
        }
    }

    #[test]
    fn linearity() {
        let mut g = RatGen::new(53, 5);
        let om: PointMeasure<Q> = g.measure(2);
        let (p, r): (GradedFn<Q>, GradedFn<Q>) = (g.graded(2, 4), g.graded(2, 3));
        let (a, b) = (g.next_rational(), g.next_rational());
        let comb = p.scale(&a).add(&r.scale(&b)).unwrap();
        assert_eq!(
            poisson_expect(&om, &comb).unwrap(),
            a * poisson_expect(&om, &p).unwrap() + b * poisson_expect(&om, &r).unwrap()
        );
    }

    #[test]
    fn series_route() {
        let c = GradedFn::constant(2, q(3));
        let om = PointMeasure::new(vec![Q::from_ratio(1, 2), Q::from_ratio(3, 4)]);
        assert!((poisson_expect_series(&om, &c, 60).unwrap() - 3.0).abs() < 1e-12);
        let one = PointMeasure::new(vec![q(1)]);
        let cube = GradedFn::monomial(&SymFn::ones(1, 3));
        assert!((poisson_expect_series(&one, &cube, 60).unwrap() - 5.0).abs() < 1e-9);
        let mut g = RatGen::new(54, 2);
        let om: PointMeasure<Q> = g.measure(2);
        let p: GradedFn<Q> = g.graded(2, 4);
        let exact = q_to_f64(&poisson_expect(&om, &p).unwrap());
        assert!((poisson_expect_series(&om, &p, 80).unwrap() - exact).abs() < 1e-8);
    }

    #[test]
    fn umbral() {
        let mut g = RatGen::new(55, 5);
        for m in 1..=3 {
            let om: PointMeasure<Q> = g.measure(m);
            for k in 0..=5 {
                assert!(check_umbral(&om, &g.sym_fn(m, k)).unwrap().passed());
            }
        }
    }

    #[test]
    fn mecke() {
        let mut g = RatGen::new(56, 5);
        let om: PointMeasure<Q> = g.measure(2);
        let fs: Vec<GradedFn<Q>> = (0..2).map(|_| g.graded(2, 3)).collect();
        let r = check_mecke_order(&om, &fs, 6).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.cases, 7);
        // F(η,x) = ξ(x)⟨η,ξ⟩
        let xi: PointFn<Q> = g.point_fn(2);
        let fs: Vec<GradedFn<Q>> = (0..2).map(|x| GradedFn::linear(&xi).scale(xi.at(x))).collect();
        assert!(check_mecke_order(&om, &fs, 6).unwrap().passed());
    }

    #[test]
    fn independence() {
        let mut g = RatGen::new(57, 5);
        let om: PointMeasure<Q> = g.measure(3);
        let a: BTreeSet<usize> = [0, 1].into();
        let b: BTreeSet<usize> = [2].into();
        let pa = GradedFn::linear(&PointFn::new(vec![q(2), q(-1), q(0)]))
            .mul(&GradedFn::linear(&PointFn::new(vec![q(1), q(3), q(0)])))
            .unwrap();
        let pb = GradedFn::monomial(&power_fn(&PointFn::delta(3, 2), 3))
            .add(&GradedFn::constant(3, q(2)))
            .unwrap();
        assert!(check_independence(&om, &a, &b, &pa, &pb).unwrap().passed());
        assert!(check_independence(&om, &a, &a, &pa, &pa).is_err());
        assert!(check_independence(&om, &b, &a, &pa, &pb).is_err());
    }

    #[test]
    fn laplace() {
        let one = PointMeasure::new(vec![q(1)]);
        let xi = PointFn::new(vec![q(1)]);
        assert!(laplace_coeffs(&one, &xi, 8).unwrap().passed());
        for n in 0..=8 {
            let p = GradedFn::monomial(&SymFn::ones(1, n));
            assert_eq!(poisson_expect(&one, &p).unwrap(), q(bell(n)));
        }
        let mut g = RatGen::new(58, 5);
        let om: PointMeasure<Qi> = g.measure(3);
        let xi: PointFn<Qi> = g.point_fn(3);
        assert!(laplace_coeffs(&om, &xi, 6).unwrap().passed());
    }
}
