//! The 𝒦-transform between functions on finite multisets and polynomials,
//! its inverse, and the ⋆-convolution.
//!
//! A multiset with repeated points is read as a configuration of labeled
//! copies, so sub-configurations and decompositions range over positions.

use crate::error::{Error, Result};
use crate::ground::PointMeasure;
use crate::multiset::{runs, sub_multisets};
use crate::report::Report;
use crate::scalar::{binomial, factorial, Scalar};
use crate::stirling::{apply, Kind};
use crate::symtensor::{eval_polynomial, GradedFn, SymFn};

/// `(𝒦f)(ω) = Σ_n ⟨(ω)_n / n!, f^(n)⟩`, returned in the monomial basis:
/// degree `k` collects `Σ_n 𝐬(n,k) f^(n) / n!`.
pub fn ktransform<S: Scalar>(f: &GradedFn<S>) -> Result<GradedFn<S>> {
    let m = f.m();
    let mut out = GradedFn::zero(m, f.max_degree());
    for (n, fn_) in f.components().iter().enumerate() {
        if fn_.is_zero() {
            continue;
        }
        let w = S::one() / factorial::<S>(n);
        for k in 0..=n {
            out.component_mut(k).add_scaled(&w, &apply(Kind::S1, n, k, fn_)?);
        }
    }
    Ok(out)
}

/// `(𝒦^{-1}p)(η) = Σ_{σ ⊆ η} (-1)^{|η|-|σ|} p(σ)`, for `|η|` up to the degree
/// of `p`.
pub fn kinverse<S: Scalar>(p: &GradedFn<S>) -> Result<GradedFn<S>> {
    let m = p.m();
    let top = p.degree();
    let mut memo = std::collections::HashMap::new();
    let mut comps = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut g = SymFn::zero(m, n);
        for (eta, _) in SymFn::<S>::zero(m, n).entries() {
            let mut acc = S::zero();
            for (sigma, ways) in sub_multisets(&eta) {
                let v: S = match memo.get(&sigma) {
                    Some(v) => Clone::clone(v),
                    None => {
                        let v = eval_polynomial(p, &PointMeasure::configuration(m, &sigma)?)?;
                        memo.insert(sigma.clone(), v.clone());
                        v
                    }
                };
                let t = S::from_i64(ways as i64) * v;
                if (n - sigma.len()) % 2 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            g.set(&eta, acc);
        }
        comps.push(g);
    }
    Ok(GradedFn::new(m, comps))
}

/// `Σ_{σ ⊆ γ} f(σ)` over sub-configurations of `γ`, counted by position.
pub fn subset_sum<S: Scalar>(f: &GradedFn<S>, gamma: &[usize]) -> Result<S> {
    let mut acc = S::zero();
    for (sigma, ways) in sub_multisets(gamma) {
        if sigma.len() > f.max_degree() {
            continue;
        }
        acc += S::from_i64(ways as i64) * f.components()[sigma.len()].get(&sigma).clone();
    }
    Ok(acc)
}

/// `(f⋆g)(η) = Σ_{σ_1+σ_2+σ_3 = η} f(σ_1+σ_2) g(σ_2+σ_3)`, with every position
/// of `η` assigned to one of the three blocks.
pub fn star<S: Scalar>(f: &GradedFn<S>, g: &GradedFn<S>) -> Result<GradedFn<S>> {
    if f.m() != g.m() {
        return Err(Error::GroundMismatch {
            left: f.m(),
            right: g.m(),
        });
    }
    let m = f.m();
    let (df, dg) = (f.max_degree(), g.max_degree());
    let comps = (0..=df + dg)
        .map(|n| {
            SymFn::from_fn(m, n, |eta| {
                let groups = runs(eta);
                let mut acc = S::zero();
                let mut left = Vec::with_capacity(n);
                let mut right = Vec::with_capacity(n);
                star_assign(&groups, 0, S::one(), &mut left, &mut right, &mut |l, r, w| {
                    if l.len() <= df && r.len() <= dg {
                        let a = f.components()[l.len()].get(l);
                        let b = g.components()[r.len()].get(r);
                        if !a.is_zero() && !b.is_zero() {
                            acc += w.clone() * a.clone() * b.clone();
                        }
                    }
                });
                acc
            })
        })
        .collect();
    Ok(GradedFn::new(m, comps))
}

/// Distributes the `c` copies of each point over the three blocks, with the
/// multinomial number of position assignments as weight.
fn star_assign<S: Scalar>(
    groups: &[(usize, usize)],
    at: usize,
    weight: S,
    left: &mut Vec<usize>,
    right: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize], &[usize], &S),
) {
    if at == groups.len() {
        emit(left, right, &weight);
        return;
    }
    let (x, c) = groups[at];
    let (ll, rl) = (left.len(), right.len());
    for a in 0..=c {
        for b in 0..=c - a {
            // a copies only in f, b shared, the rest only in g
            let w = weight.clone() * binomial::<S>(c, a) * binomial::<S>(c - a, b);
            left.extend(std::iter::repeat_n(x, a + b));
            right.extend(std::iter::repeat_n(x, c - a));
            star_assign(groups, at + 1, w, left, right, emit);
            left.truncate(ll);
            right.truncate(rl);
        }
    }
}

/// `(𝒦(f⋆g))(ω) = (𝒦f)(ω) (𝒦g)(ω)`.
pub fn check_star_homomorphism<S: Scalar>(f: &GradedFn<S>, g: &GradedFn<S>, omega: &PointMeasure<S>) -> Result<Report> {
    let mut r = Report::for_scalar::<S>("ktransform.star");
    let lhs = eval_polynomial(&ktransform(&star(f, g)?)?, omega)?;
    let rhs = eval_polynomial(&ktransform(f)?, omega)? * eval_polynomial(&ktransform(g)?, omega)?;
    r.check(&lhs, &rhs, || format!("degrees {} and {}", f.degree(), g.degree()));
    Ok(r)
}

/// `𝒦 ∘ 𝒦^{-1} = id` on `p` and `𝒦^{-1} ∘ 𝒦 = id` on `f`.
pub fn check_round_trip<S: Scalar>(p: &GradedFn<S>, f: &GradedFn<S>) -> Result<Report> {
    let mut r = Report::for_scalar::<S>("ktransform.round_trip");
    r.check(&ktransform(&kinverse(p)?)?, p, || {
        format!("K(K^-1 p), degree {}", p.degree())
    });
    r.check(&kinverse(&ktransform(f)?)?, f, || {
        format!("K^-1(K f), degree {}", f.degree())
    });
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiset::enumerate;
    use crate::random::RatGen;
    use crate::symtensor::{multiply_n, power_fn, sym_product_fn};
    use crate::Q;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    // every assignment of the positions of eta to blocks 0, 1, 2
    fn star_by_positions(f: &GradedFn<Q>, g: &GradedFn<Q>, eta: &[usize]) -> Q {
        let n = eta.len();
        let mut acc = q(0);
        for code in 0..3usize.pow(n as u32) {
            let (mut l, mut r) = (Vec::new(), Vec::new());
            let mut c = code;
            for &x in eta {
                match c % 3 {
                    0 => l.push(x),
                    1 => {
                        l.push(x);
                        r.push(x)
                    }
                    _ => r.push(x),
                }
                c /= 3;
            }
            if l.len() <= f.max_degree() && r.len() <= g.max_degree() {
                acc += f.components()[l.len()].get(&l).clone() * g.components()[r.len()].get(&r).clone();
            }
        }
        acc
    }

    #[test]
    fn constant_and_counting() {
        let c = GradedFn::constant(2, q(3));
        assert_eq!(ktransform(&c).unwrap(), c);
        // f = 1 in degree 1 counts points of γ
        let f: GradedFn<Q> = GradedFn::new(2, vec![SymFn::zero(2, 0), SymFn::ones(2, 1)]);
        let p = ktransform(&f).unwrap();
        for gamma in [vec![0, 0, 1], vec![1], vec![0, 1, 1, 1]] {
            let conf = PointMeasure::configuration(2, &gamma).unwrap();
            assert_eq!(eval_polynomial(&p, &conf).unwrap(), q(gamma.len() as i64));
        }
    }

    #[test]
    fn configurations_sum_subsets() {
        let mut g = RatGen::new(41, 6);
        for m in 1..=3 {
            let f: GradedFn<Q> = g.graded(m, 5);
            let p = ktransform(&f).unwrap();
            for size in 0..=5 {
                for gamma in enumerate(m, size) {
                    let conf = PointMeasure::configuration(m, &gamma).unwrap();
                    assert_eq!(eval_polynomial(&p, &conf).unwrap(), subset_sum(&f, &gamma).unwrap());
                }
            }
        }
    }

    #[test]
    fn round_trips() {
        let mut g = RatGen::new(42, 6);
        for m in 1..=3 {
            let p: GradedFn<Q> = g.graded(m, 5);
            let f: GradedFn<Q> = g.graded(m, 5);
            assert!(check_round_trip(&p, &f).unwrap().passed());
        }
        let c = GradedFn::constant(2, q(7));
        assert_eq!(kinverse(&c).unwrap(), c);
    }

    #[test]
    fn star_matches_position_enumeration() {
        let mut g = RatGen::new(43, 5);
        let f: GradedFn<Q> = g.graded(2, 3);
        let h: GradedFn<Q> = g.graded(2, 2);
        let s = star(&f, &h).unwrap();
        for n in 0..=5 {
            for eta in enumerate(2, n) {
                assert_eq!(s.components()[n].get(&eta), &star_by_positions(&f, &h, &eta));
            }
        }
    }

    #[test]
    fn star_special_cases() {
        let mut g = RatGen::new(44, 5);
        let f: GradedFn<Q> = g.graded(2, 3);
        let c = GradedFn::constant(2, q(4));
        assert_eq!(star(&f, &c).unwrap().trimmed(), f.scale(&q(4)).trimmed());
        // f^(n) ⋆ ξ = (n+1) f^(n) ⊙ ξ + N(ξ) f^(n)
        let xi = g.point_fn::<Q>(2);
        let fn3: SymFn<Q> = g.sym_fn(2, 3);
        let lhs = star(&GradedFn::monomial(&fn3), &GradedFn::linear(&xi)).unwrap();
        let mut want = GradedFn::monomial(&sym_product_fn(&fn3, &power_fn(&xi, 1)).unwrap().scale(&q(4)));
        *want.component_mut(3) = multiply_n(&xi, &fn3).unwrap();
        assert_eq!(lhs.trimmed(), want.trimmed());
    }

    #[test]
    fn star_single_point() {
        // (a⋆b)(n) = Σ_{i+j+k=n} n!/(i!j!k!) a(i+j) b(j+k)
        let mut g = RatGen::new(45, 5);
        let a: GradedFn<Q> = g.graded(1, 3);
        let b: GradedFn<Q> = g.graded(1, 3);
        let s = star(&a, &b).unwrap();
        let at = |p: &GradedFn<Q>, n: usize| p.component(n).values()[0].clone();
        for n in 0..=6usize {
            let mut want = q(0);
            for i in 0..=n {
                for j in 0..=n - i {
                    let k = n - i - j;
                    let multinom = crate::combinat::factorial_u128(n)
                        / (crate::combinat::factorial_u128(i)
                            * crate::combinat::factorial_u128(j)
                            * crate::combinat::factorial_u128(k));
                    want += q(multinom as i64) * at(&a, i + j) * at(&b, j + k);
                }
            }
            assert_eq!(at(&s, n), want);
        }
    }

    #[test]
    fn homomorphism_random() {
        let mut g = RatGen::new(46, 5);
        for _ in 0..20 {
            let m = 1 + g.below(3);
            let (df, dh) = (1 + g.below(4), 1 + g.below(4));
            let f: GradedFn<Q> = g.graded(m, df);
            let h: GradedFn<Q> = g.graded(m, dh);
            let om: PointMeasure<Q> = g.measure(m);
            assert!(check_star_homomorphism(&f, &h, &om).unwrap().passed());
        }
        let z = GradedFn::zero(2, 2);
        let f: GradedFn<Q> = g.graded(2, 2);
        assert!(check_star_homomorphism(&f, &z, &g.measure(2)).unwrap().passed());
    }

    #[test]
    fn associativity_through_transform() {
        let mut g = RatGen::new(47, 4);
        let (a, b, c): (GradedFn<Q>, GradedFn<Q>, GradedFn<Q>) = (g.graded(2, 2), g.graded(2, 2), g.graded(2, 2));
        let om: PointMeasure<Q> = g.measure(2);
        let left = eval_polynomial(&ktransform(&star(&star(&a, &b).unwrap(), &c).unwrap()).unwrap(), &om).unwrap();
        let prod: Q = [&a, &b, &c]
            .iter()
            .map(|p| eval_polynomial(&ktransform(p).unwrap(), &om).unwrap())
            .product();
        assert_eq!(left, prod);
        assert_eq!(star(&a, &b).unwrap(), star(&b, &a).unwrap());
    }
}
