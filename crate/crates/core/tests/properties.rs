use std::collections::BTreeSet;

use num_traits::{One, Zero};
use proptest::prelude::*;

use spatial_stirling::factorial::falling;
use spatial_stirling::ground::{PointFn, PointMeasure};
use spatial_stirling::ktransform::{kinverse, ktransform, star};
use spatial_stirling::multiset::multichoose;
use spatial_stirling::poisson::{poisson_expect, poisson_expect_finite, poisson_expect_finite_on, support};
use spatial_stirling::polyop::{difference, euler_expand, falling_synthesis, partial_derivative};
use spatial_stirling::scalar::{factorial, Scalar};
use spatial_stirling::stirling::{
    adjoint_apply, apply, apply_via_euler, apply_via_recurrence, check_orthogonality, operator_matrix, Kind,
};
use spatial_stirling::symtensor::{eval_polynomial, pair, power_measure, GradedFn, SymFn, SymMeasure};
use spatial_stirling::touchard::{check_touchard_recurrence, touchard_measure};
use spatial_stirling::wick::{check_ccr, check_katriel, check_quantum_poisson, RefMeasure, WickMonomial, WickPoly};
use spatial_stirling::Q;

fn rat() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Q::from_ratio(p, q))
}

fn nonzero_rat() -> impl Strategy<Value = Q> {
    (1i64..=6, 1i64..=4, any::<bool>()).prop_map(|(p, q, neg)| Q::from_ratio(if neg { -p } else { p }, q))
}

fn measure(m: usize) -> impl Strategy<Value = PointMeasure<Q>> {
    prop::collection::vec(rat(), m).prop_map(PointMeasure::new)
}

fn point_fn(m: usize) -> impl Strategy<Value = PointFn<Q>> {
    prop::collection::vec(rat(), m).prop_map(PointFn::new)
}

fn sym_fn(m: usize, n: usize) -> impl Strategy<Value = SymFn<Q>> {
    prop::collection::vec(rat(), multichoose(m, n)).prop_map(move |v| SymFn::from_values(m, n, v).unwrap())
}

fn sym_measure(m: usize, n: usize) -> impl Strategy<Value = SymMeasure<Q>> {
    prop::collection::vec(rat(), multichoose(m, n)).prop_map(move |v| SymMeasure::from_values(m, n, v).unwrap())
}

fn graded(m: usize, degree: usize) -> impl Strategy<Value = GradedFn<Q>> {
    (0..=degree)
        .map(|k| sym_fn(m, k))
        .collect::<Vec<_>>()
        .prop_map(move |comps| GradedFn::new(m, comps))
}

fn kind() -> impl Strategy<Value = Kind> {
    prop::sample::select(Kind::ALL.to_vec())
}

/// `(m, n, k, f)` with `k <= n`.
fn operator_input() -> impl Strategy<Value = (usize, usize, usize, SymFn<Q>)> {
    (1usize..=3, 0usize..=5).prop_flat_map(|(m, n)| (Just(m), Just(n), 0..=n, sym_fn(m, n)))
}

fn wick_input(max_n: usize) -> impl Strategy<Value = (RefMeasure<Q>, Vec<PointFn<Q>>)> {
    (1usize..=3, 1..=max_n).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(nonzero_rat(), m).prop_map(|w| RefMeasure::new(PointMeasure::new(w)).unwrap()),
            prop::collection::vec(point_fn(m), n),
        )
    })
}

fn wick_poly(refm: RefMeasure<Q>) -> impl Strategy<Value = WickPoly<Q>> {
    let m = refm.m();
    let mono = (
        prop::collection::vec(0..m, 0..=2),
        prop::collection::vec(0..m, 0..=1),
        rat(),
    );
    prop::collection::vec(mono, 1..=3).prop_map(move |terms| {
        let mut p = WickPoly::zero(&refm);
        for (cre, ann, c) in terms {
            p.add_term(WickMonomial::new(cre, ann), c);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn routes_agree((m, n, k, f) in operator_input()) {
        let base = apply(Kind::S2, n, k, &f).unwrap();
        prop_assert_eq!(&base, &apply_via_recurrence(Kind::S2, n, k, &f).unwrap());
        prop_assert_eq!(&base, &apply_via_euler(n, k, &f).unwrap());
        prop_assert_eq!(apply(Kind::S1, n, k, &f).unwrap(), apply_via_recurrence(Kind::S1, n, k, &f).unwrap());
        prop_assert_eq!(base.m(), m);
    }

    #[test]
    fn sign_law_on_matrices(m in 1usize..=3, n in 0usize..=5, k in 0usize..=5) {
        let s1 = operator_matrix::<Q>(Kind::S1, n, k, m);
        let c1 = operator_matrix::<Q>(Kind::C1, n, k, m);
        let sign = if (n + k) % 2 == 0 { Q::one() } else { -Q::one() };
        let signed = c1.scaled(&sign);
        prop_assert_eq!(s1.rows(), signed.rows());
    }

    #[test]
    fn adjoint_is_transpose_under_pairing(
        (kind, (n, k, f, mu)) in (kind(), operator_input().prop_flat_map(|(m, n, k, f)| (Just(n), Just(k), Just(f), sym_measure(m, k)))),
    ) {
        prop_assert_eq!(
            pair(&adjoint_apply(kind, n, k, &mu).unwrap(), &f).unwrap(),
            pair(&mu, &apply(kind, n, k, &f).unwrap()).unwrap()
        );
    }

    #[test]
    fn defining_expansions(
        (omega, f) in (1usize..=3, 0usize..=5).prop_flat_map(|(m, n)| (measure(m), sym_fn(m, n)))
    ) {
        let n = f.rank();
        let mut via_s1 = Q::zero();
        let mut via_s2 = Q::zero();
        for k in 0..=n {
            via_s1 += pair(&power_measure(&omega, k), &apply(Kind::S1, n, k, &f).unwrap()).unwrap();
            via_s2 += pair(&falling(&omega, k), &apply(Kind::S2, n, k, &f).unwrap()).unwrap();
        }
        prop_assert_eq!(pair(&falling(&omega, n), &f).unwrap(), via_s1);
        prop_assert_eq!(pair(&power_measure(&omega, n), &f).unwrap(), via_s2);
    }

    #[test]
    fn orthogonality((_, n, i, f) in operator_input()) {
        prop_assert!(check_orthogonality(n, i, &f).unwrap().passed());
    }

    #[test]
    fn derivative_lowers_degree(
        (p, x) in (1usize..=3, 1usize..=4).prop_flat_map(|(m, d)| (graded(m, d), 0..m))
    ) {
        let d = partial_derivative(&p, x).unwrap();
        prop_assert!(d.is_zero() || d.degree() < p.degree());
    }

    #[test]
    fn difference_is_exponential_of_derivative(
        (p, x) in (1usize..=3, 0usize..=4).prop_flat_map(|(m, d)| (graded(m, d), 0..m))
    ) {
        let mut sum = GradedFn::zero(p.m(), p.max_degree());
        let mut term = p.clone();
        for k in 1..=p.max_degree() {
            term = partial_derivative(&term, x).unwrap();
            sum = sum.add(&term.scale(&(Q::one() / factorial::<Q>(k)))).unwrap();
        }
        prop_assert_eq!(difference(&p, x).unwrap().trimmed(), sum.trimmed());
    }

    #[test]
    fn falling_basis_round_trip(p in (1usize..=3, 0usize..=5).prop_flat_map(|(m, d)| graded(m, d))) {
        let g = euler_expand(&p).unwrap();
        prop_assert_eq!(falling_synthesis(p.m(), &g).unwrap().trimmed(), p.trimmed());
        let again = euler_expand(&falling_synthesis(p.m(), &g).unwrap()).unwrap();
        for (a, b) in g.iter().zip(&again) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn euler_expansion_of_a_monomial_is_the_stirling_operator(
        f in (1usize..=3, 0usize..=5).prop_flat_map(|(m, n)| sym_fn(m, n))
    ) {
        let n = f.rank();
        let g = euler_expand(&GradedFn::monomial(&f)).unwrap();
        for k in 0..=n {
            let want = apply(Kind::S2, n, k, &f).unwrap();
            let got = g.get(k).cloned().unwrap_or_else(|| SymFn::zero(f.m(), k));
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn k_transform_is_a_bijection(
        (p, f) in (1usize..=3, 0usize..=4).prop_flat_map(|(m, d)| (graded(m, d), graded(m, d)))
    ) {
        prop_assert_eq!(ktransform(&kinverse(&p).unwrap()).unwrap().trimmed(), p.trimmed());
        prop_assert_eq!(kinverse(&ktransform(&f).unwrap()).unwrap().trimmed(), f.trimmed());
    }

    #[test]
    fn star_is_commutative_associative_and_degree_bounded(
        (f, g, h, omega) in (1usize..=2, 0usize..=2, 0usize..=2, 0usize..=2)
            .prop_flat_map(|(m, a, b, c)| (graded(m, a), graded(m, b), graded(m, c), measure(m)))
    ) {
        let fg = star(&f, &g).unwrap();
        prop_assert_eq!(fg.trimmed(), star(&g, &f).unwrap().trimmed());
        prop_assert!(fg.is_zero() || fg.degree() <= f.degree() + g.degree());
        let left = ktransform(&star(&fg, &h).unwrap()).unwrap();
        let right = ktransform(&star(&f, &star(&g, &h).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(eval_polynomial(&left, &omega).unwrap(), eval_polynomial(&right, &omega).unwrap());
    }

    #[test]
    fn poisson_routes_and_linearity(
        (omega, p, q, a, b) in (1usize..=3, 0usize..=4)
            .prop_flat_map(|(m, d)| (measure(m), graded(m, d), graded(m, d), rat(), rat()))
    ) {
        let e = |p: &GradedFn<Q>| poisson_expect(&omega, p).unwrap();
        prop_assert_eq!(e(&p), poisson_expect_finite(&omega, &p).unwrap());
        let combo = p.scale(&a).add(&q.scale(&b)).unwrap();
        prop_assert_eq!(e(&combo), a * e(&p) + b * e(&q));
    }

    #[test]
    fn finite_route_ignores_the_window(
        (omega, p) in (1usize..=3, 0usize..=4).prop_flat_map(|(m, d)| (measure(m), graded(m, d)))
    ) {
        let full: BTreeSet<usize> = (0..omega.m()).collect();
        prop_assert_eq!(
            poisson_expect_finite_on(&omega, &p, &support(&p)).unwrap(),
            poisson_expect_finite_on(&omega, &p, &full).unwrap()
        );
    }

    #[test]
    fn touchard_three_way(
        (omega, f) in (1usize..=3, 0usize..=5).prop_flat_map(|(m, n)| (measure(m), sym_fn(m, n)))
    ) {
        let n = f.rank();
        let direct = pair(&touchard_measure(&omega, n).unwrap(), &f).unwrap();
        let mut expansion = Q::zero();
        for k in 0..=n {
            expansion += pair(&power_measure(&omega, k), &apply(Kind::S2, n, k, &f).unwrap()).unwrap();
        }
        prop_assert_eq!(&direct, &expansion);
        prop_assert_eq!(direct, poisson_expect(&omega, &GradedFn::monomial(&f)).unwrap());
    }

    #[test]
    fn touchard_and_ruc_recurrences(
        (omega, n) in (1usize..=3, 0usize..=4).prop_flat_map(|(m, n)| (measure(m), Just(n)))
    ) {
        prop_assert!(check_touchard_recurrence(&omega, n).unwrap().passed());
    }

    #[test]
    fn wick_product_is_associative(
        (a, b, c) in (1usize..=2, prop::collection::vec(nonzero_rat(), 2))
            .prop_flat_map(|(m, w)| {
                let refm = RefMeasure::new(PointMeasure::new(w[..m].to_vec())).unwrap();
                (wick_poly(refm.clone()), wick_poly(refm.clone()), wick_poly(refm))
            })
    ) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn ccr_hold((refm, xis) in wick_input(2)) {
        let phi = &xis[0];
        let xi = xis.last().unwrap();
        prop_assert!(check_ccr(&refm, phi, xi).unwrap().passed());
    }

    #[test]
    fn katriel_and_quantum_poisson((refm, xis) in wick_input(4)) {
        prop_assert!(check_katriel(&refm, &xis).unwrap().passed());
        prop_assert!(check_quantum_poisson(&refm, &xis).unwrap().passed());
    }
}
