//! Named, seeded verification suites over random inputs.
//!
//! Every suite draws its inputs from a [`RatGen`] seeded by the run seed and
//! the suite's position in [`SUITES`], so a suite's outcome does not depend on
//! which other suites ran.

use std::collections::BTreeSet;

use crate::combinat::rgs;
use crate::error::{Error, Result};
use crate::factorial::{check_binomial, check_genfun_factorial, check_lowering, check_recurrence, falling, rising};
use crate::ground::{PointFn, PointMeasure};
use crate::ktransform::{check_round_trip, check_star_homomorphism};
use crate::poisson::{
    check_independence, check_mecke_order, check_umbral, laplace_coeffs, poisson_expect, poisson_expect_finite,
    poisson_expect_series,
};
use crate::polyop::{
    check_grunert, difference, difference_via_exp, euler_expand, eval_falling, falling_synthesis, sym_product_of,
};
use crate::random::RatGen;
use crate::report::{set_float_tolerance, Report, DEFAULT_FLOAT_TOL};
use crate::scalar::{q_to_f64, Scalar};
use crate::stirling::{
    apply, apply_via_compositions, apply_via_euler, apply_via_recurrence, check_convolution_identity,
    check_genfun_stirling, check_lah, check_olson, check_orthogonality, check_shift_identity, expand_in_falling, Kind,
};
use crate::symtensor::{eval_polynomial, pair, power_measure, GradedFn, SymFn};
use crate::touchard::{
    bell_measure, check_rho_recurrence, check_touchard_binomial, check_touchard_genfun, check_touchard_recurrence,
    dobinski_check, ruc_measure, total_mass, touchard_measure, touchard_via_adjoint,
};
use crate::wick::{
    check_ccr, check_katriel, check_lemma_r_normal, check_quantum_poisson, r_operator, vacuum, wick_rho_product,
    wick_rho_product_direct, RefMeasure, WickPoly,
};
use crate::Q;

pub const SUITES: &[&str] = &[
    "factorial.binomial",
    "factorial.lowering",
    "factorial.recurrence",
    "factorial.genfun",
    "stirling.routes",
    "stirling.expansions",
    "stirling.orthogonality",
    "stirling.sign",
    "stirling.lah",
    "stirling.olson",
    "stirling.convolution",
    "stirling.shift",
    "stirling.genfun",
    "polyop.difference",
    "polyop.euler",
    "polyop.grunert",
    "ktransform.round_trip",
    "ktransform.star",
    "poisson.routes",
    "poisson.umbral",
    "poisson.mecke",
    "poisson.independence",
    "poisson.laplace",
    "poisson.series",
    "touchard.measure",
    "touchard.recurrence",
    "touchard.binomial",
    "touchard.genfun",
    "touchard.rho",
    "touchard.dobinski",
    "wick.ccr",
    "wick.wick_product",
    "wick.katriel",
    "wick.quantum_poisson",
    "wick.r_expansion",
    "cross.triangle",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    /// Size of the ground set.
    pub m: usize,
    /// Largest tensor rank or polynomial degree exercised.
    pub nmax: usize,
    pub seed: u64,
    /// Bound on numerators and denominators of random inputs.
    pub bound: i64,
    /// Truncation of the float series.
    pub k_max: usize,
    /// Tolerance for float comparisons.
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            m: 3,
            nmax: 5,
            seed: 7,
            bound: 5,
            k_max: 100,
            tol: DEFAULT_FLOAT_TOL,
        }
    }
}

/// Suites whose name is `module` or starts with `module.`.
pub fn suites_of(module: &str) -> Vec<&'static str> {
    SUITES
        .iter()
        .copied()
        .filter(|s| *s == module || s.strip_prefix(module).is_some_and(|rest| rest.starts_with('.')))
        .collect()
}

pub fn run_suite<S: Scalar>(name: &str, cfg: &SuiteConfig) -> Result<Report> {
    let pos = SUITES
        .iter()
        .position(|s| *s == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {name:?}")))?;
    if cfg.m == 0 {
        return Err(Error::InvalidArgument("suites need m >= 1".into()));
    }
    set_float_tolerance(cfg.tol);
    let mut rng = RatGen::new(cfg.seed.wrapping_mul(1_000_003).wrapping_add(pos as u64), cfg.bound);
    let (m, nmax) = (cfg.m, cfg.nmax);
    let mut r = Report::for_scalar::<S>(name);
    match name {
        "factorial.binomial" => {
            for n in 0..=nmax {
                r.absorb(&check_binomial::<S>(&rng.measure(m), &rng.measure(m), n)?);
            }
        }
        "factorial.lowering" => {
            for n in 1..=nmax {
                let x = rng.below(m);
                r.absorb(&check_lowering::<S>(&rng.measure(m), x, n)?);
            }
        }
        "factorial.recurrence" => {
            for n in 1..=nmax {
                r.absorb(&check_recurrence::<S>(&rng.measure(m), &rng.point_fn(m), n)?);
            }
        }
        "factorial.genfun" => {
            r.absorb(&check_genfun_factorial::<S>(
                &rng.measure(m),
                &rng.point_fn(m),
                nmax.max(1),
            )?);
        }
        "stirling.routes" => routes::<S>(&mut r, &mut rng, m, nmax)?,
        "stirling.expansions" => {
            for n in 0..=nmax {
                let omega = rng.measure::<S>(m);
                let f = rng.sym_fn::<S>(m, n);
                let mut via_s1 = S::zero();
                let mut via_c1 = S::zero();
                for k in 0..=n {
                    via_s1 += pair(&power_measure(&omega, k), &apply(Kind::S1, n, k, &f)?)?;
                    via_c1 += pair(&power_measure(&omega, k), &apply(Kind::C1, n, k, &f)?)?;
                }
                r.check(&pair(&falling(&omega, n), &f)?, &via_s1, || format!("falling n={n}"));
                r.check(&pair(&rising(&omega, n), &f)?, &via_c1, || format!("rising n={n}"));
                r.check(
                    &pair(&power_measure(&omega, n), &f)?,
                    &expand_in_falling(&omega, Kind::S2, &f)?,
                    || format!("power n={n}"),
                );
            }
        }
        "stirling.orthogonality" => {
            for n in 0..=nmax {
                let f = rng.sym_fn::<S>(m, n);
                for i in 0..=n {
                    r.absorb(&check_orthogonality(n, i, &f)?);
                }
            }
        }
        "stirling.sign" => {
            for n in 0..=nmax {
                let f = rng.sym_fn::<S>(m, n);
                for k in 0..=n {
                    let sign = if (n - k) % 2 == 0 { S::one() } else { -S::one() };
                    r.check(
                        &apply(Kind::S1, n, k, &f)?,
                        &apply(Kind::C1, n, k, &f)?.scale(&sign),
                        || format!("n={n} k={k}"),
                    );
                }
            }
        }
        "stirling.lah" => {
            for n in 0..=nmax {
                let omega = rng.measure::<S>(m);
                let xi = rng.point_fn::<S>(m);
                for k in 0..=n {
                    r.absorb(&check_lah(n, k, &omega, &xi)?);
                }
            }
        }
        "stirling.olson" => {
            for l in 1..=nmax {
                let f = rng.sym_fn::<S>(m, l);
                for n in 1..=l {
                    for i in 1..=l + 1 {
                        r.absorb(&check_olson(n, l - n, i, &f)?);
                    }
                }
            }
        }
        "stirling.convolution" => {
            for n in 0..=nmax {
                let f = rng.sym_fn::<S>(m, n);
                for i in 0..=n {
                    for j in 0..=n - i {
                        r.absorb(&check_convolution_identity(n, i, j, &f)?);
                    }
                }
            }
        }
        "stirling.shift" => {
            for n in 2..=nmax {
                let f = rng.sym_fn::<S>(m, n);
                for i in 1..n {
                    r.absorb(&check_shift_identity(n, i, rng.below(m), &f)?);
                }
            }
        }
        "stirling.genfun" => {
            let order = nmax.max(1);
            for kind in Kind::ALL {
                let omega = rng.measure::<S>(m);
                let xi = rng.point_fn::<S>(m);
                for k in 1..=order {
                    r.absorb(&check_genfun_stirling(kind, k, &omega, &xi, order)?);
                }
            }
        }
        "polyop.difference" => {
            let p = rng.graded::<S>(m, nmax);
            let omega = rng.measure::<S>(m);
            for x in 0..m {
                let d = difference(&p, x)?;
                r.check(&d, &difference_via_exp(&p, x)?, || format!("exp route x={x}"));
                let moved = omega.add(&PointMeasure::delta(m, x))?;
                let want = eval_polynomial(&p, &moved)? - eval_polynomial(&p, &omega)?;
                r.check(&eval_polynomial(&d, &omega)?, &want, || format!("evaluation x={x}"));
            }
        }
        "polyop.euler" => {
            for degree in 0..=nmax {
                let p = rng.graded::<S>(m, degree);
                let g = euler_expand(&p)?;
                r.check(&falling_synthesis(m, &g)?, &p, || format!("synthesis degree {degree}"));
                let omega = rng.measure::<S>(m);
                r.check(&eval_falling(&g, &omega)?, &eval_polynomial(&p, &omega)?, || {
                    format!("evaluation degree {degree}")
                });
            }
        }
        "polyop.grunert" => {
            for n in 1..=nmax {
                let xis: Vec<PointFn<S>> = (0..n).map(|_| rng.point_fn(m)).collect();
                r.absorb(&check_grunert(&xis, &rng.graded(m, nmax))?);
            }
        }
        "ktransform.round_trip" => {
            for degree in 0..=nmax {
                r.absorb(&check_round_trip::<S>(&rng.graded(m, degree), &rng.graded(m, degree))?);
            }
        }
        "ktransform.star" => {
            for case in 0..20 {
                let a = case % (nmax + 1);
                let b = (case / (nmax + 1)) % (nmax + 1 - a);
                let (f, g) = (rng.graded::<S>(m, a), rng.graded::<S>(m, b));
                r.absorb(&check_star_homomorphism(&f, &g, &rng.measure(m))?);
            }
        }
        "poisson.routes" => {
            for degree in 0..=nmax {
                let omega = rng.measure::<S>(m);
                let p = rng.graded::<S>(m, degree);
                r.check(
                    &poisson_expect(&omega, &p)?,
                    &poisson_expect_finite(&omega, &p)?,
                    || format!("degree {degree}"),
                );
            }
        }
        "poisson.umbral" => {
            for k in 0..=nmax {
                r.absorb(&check_umbral::<S>(&rng.measure(m), &rng.sym_fn(m, k))?);
            }
        }
        "poisson.mecke" => {
            let omega = rng.measure::<S>(m);
            let fs: Vec<GradedFn<S>> = (0..m).map(|_| rng.graded(m, 2)).collect();
            r.absorb(&check_mecke_order(&omega, &fs, nmax.max(1) + 1)?);
        }
        "poisson.independence" => {
            let a: BTreeSet<usize> = (0..m.div_ceil(2)).collect();
            let b: BTreeSet<usize> = (m.div_ceil(2)..m).collect();
            for degree in 0..=nmax {
                let pa = supported_on(&rng.graded::<S>(m, degree), &a);
                let pb = supported_on(&rng.graded::<S>(m, nmax - degree), &b);
                r.absorb(&check_independence(&rng.measure(m), &a, &b, &pa, &pb)?);
            }
        }
        "poisson.laplace" => {
            r.absorb(&laplace_coeffs::<S>(&rng.measure(m), &rng.point_fn(m), nmax.max(1))?);
        }
        "poisson.series" => {
            r = Report::with_tol(name, cfg.tol);
            for degree in 0..=nmax {
                let omega = rng.probability(m).scale(&Q::from_i64(2));
                let p = rng.graded::<Q>(m, degree);
                let exact = q_to_f64(&poisson_expect(&omega, &p)?);
                let approx = poisson_expect_series(&omega, &p, cfg.k_max)?;
                r.check_close((approx - exact).abs(), || {
                    format!("degree {degree}: {approx} vs {exact}")
                });
            }
        }
        "touchard.measure" => {
            for n in 0..=nmax {
                let omega = rng.measure::<S>(m);
                r.check(&touchard_measure(&omega, n)?, &touchard_via_adjoint(&omega, n)?, || {
                    format!("adjoint route n={n}")
                });
                let nu = rng.probability(m);
                let (bell, ruc) = classical_bell(n);
                r.check(&total_mass(&bell_measure(&nu, n)?)?, &Q::from_i64(bell), || {
                    format!("Bell mass n={n}")
                });
                r.check(&total_mass(&ruc_measure(&nu, n)?)?, &Q::from_i64(ruc), || {
                    format!("RUC mass n={n}")
                });
            }
        }
        "touchard.recurrence" => {
            for n in 0..nmax {
                r.absorb(&check_touchard_recurrence::<S>(&rng.measure(m), n)?);
            }
        }
        "touchard.binomial" => {
            for n in 0..=nmax {
                r.absorb(&check_touchard_binomial::<S>(&rng.measure(m), &rng.measure(m), n)?);
            }
        }
        "touchard.genfun" => {
            r.absorb(&check_touchard_genfun::<S>(
                &rng.measure(m),
                &rng.point_fn(m),
                nmax.max(1),
            )?);
        }
        "touchard.rho" => {
            for n in 0..nmax {
                let omegas: Vec<PointMeasure<S>> = (0..3).map(|_| rng.measure(m)).collect();
                r.absorb(&check_rho_recurrence(&omegas, &rng.point_fn(m), n)?);
            }
        }
        "touchard.dobinski" => {
            r = Report::with_tol(name, cfg.tol);
            for n in 0..=nmax.min(6) {
                let nu = rng.probability(m);
                r.absorb(&dobinski_check(&nu, &SymFn::ones(m, n), cfg.k_max, cfg.tol)?);
                r.absorb(&dobinski_check(&nu, &rng.sym_fn(m, n), cfg.k_max, cfg.tol)?);
            }
        }
        "wick.ccr" => {
            for _ in 0..=nmax {
                let refm = RefMeasure::new(rng.nonzero_measure::<S>(m))?;
                r.absorb(&check_ccr(&refm, &rng.point_fn(m), &rng.point_fn(m))?);
            }
        }
        "wick.wick_product" => {
            for k in 1..=nmax.min(4) {
                let refm = RefMeasure::new(rng.nonzero_measure::<S>(m))?;
                let xis: Vec<PointFn<S>> = (0..k).map(|_| rng.point_fn(m)).collect();
                r.check(
                    &wick_rho_product(&refm, &xis)?,
                    &wick_rho_product_direct(&refm, &xis)?,
                    || format!("k={k}"),
                );
            }
        }
        "wick.katriel" => {
            for n in 1..=nmax {
                let refm = RefMeasure::new(rng.nonzero_measure::<S>(m))?;
                let xis: Vec<PointFn<S>> = (0..n).map(|_| rng.point_fn(m)).collect();
                r.absorb(&check_katriel(&refm, &xis)?);
            }
        }
        "wick.quantum_poisson" => {
            for n in 1..=nmax {
                let refm = RefMeasure::new(rng.nonzero_measure::<S>(m))?;
                let xis: Vec<PointFn<S>> = (0..n).map(|_| rng.point_fn(m)).collect();
                r.absorb(&check_quantum_poisson(&refm, &xis)?);
            }
        }
        "wick.r_expansion" => {
            for n in 1..=nmax.min(4) {
                let refm = RefMeasure::new(rng.nonzero_measure::<S>(m))?;
                let xis: Vec<PointFn<S>> = (0..n).map(|_| rng.point_fn(m)).collect();
                r.absorb(&check_lemma_r_normal(&refm, &xis)?);
            }
        }
        "cross.triangle" => {
            for n in 0..=nmax {
                let omega = rng.nonzero_measure::<S>(m);
                let xis: Vec<PointFn<S>> = (0..n).map(|_| rng.point_fn(m)).collect();
                let f = sym_product_of(m, &xis)?;
                let tau = cross_values(&omega, &f, &mut r, n)?;
                let refm = RefMeasure::new(omega)?;
                let mut word = WickPoly::one(&refm);
                for xi in &xis {
                    word = word.mul(&r_operator(&refm, xi)?)?;
                }
                r.check(&vacuum(&word), &tau, || format!("vacuum route n={n}"));
                let g = rng.sym_fn::<S>(m, n);
                cross_values(&rng.measure(m), &g, &mut r, n)?;
            }
        }
        _ => unreachable!("suite names come from SUITES"),
    }
    Ok(r)
}

/// Runs each named suite, in order.
pub fn run_suites<S: Scalar>(names: &[&str], cfg: &SuiteConfig) -> Result<Vec<Report>> {
    names.iter().map(|name| run_suite::<S>(name, cfg)).collect()
}

fn routes<S: Scalar>(r: &mut Report, rng: &mut RatGen, m: usize, nmax: usize) -> Result<()> {
    for n in 0..=nmax {
        for k in 0..=n {
            let f = rng.sym_fn::<S>(m, n);
            for kind in Kind::ALL {
                let base = apply(kind, n, k, &f)?;
                r.check(&base, &apply_via_compositions(kind, n, k, &f)?, || {
                    format!("{kind} compositions n={n} k={k}")
                });
                if matches!(kind, Kind::S2 | Kind::S1) {
                    r.check(&base, &apply_via_recurrence(kind, n, k, &f)?, || {
                        format!("{kind} recurrence n={n} k={k}")
                    });
                }
                if kind == Kind::S2 {
                    r.check(&base, &apply_via_euler(n, k, &f)?, || format!("S Euler n={n} k={k}"));
                }
            }
        }
    }
    Ok(())
}

/// Checks `⟨T_n(ω),f⟩ = Σ_k ⟨ω^⊗k, 𝐒(n,k) f⟩ = 𝔼_ω(⟨·^⊗n, f⟩)` and returns
/// the common value.
fn cross_values<S: Scalar>(omega: &PointMeasure<S>, f: &SymFn<S>, r: &mut Report, n: usize) -> Result<S> {
    let measure = pair(&touchard_measure(omega, n)?, f)?;
    let mut expansion = S::zero();
    for k in 0..=n {
        expansion += pair(&power_measure(omega, k), &apply(Kind::S2, n, k, f)?)?;
    }
    let expectation = poisson_expect(omega, &GradedFn::monomial(f))?;
    r.check(&measure, &expansion, || format!("measure vs expansion n={n}"));
    r.check(&expansion, &expectation, || format!("expansion vs expectation n={n}"));
    Ok(expectation)
}

/// Zeroes every coefficient of `p` touching a label outside `set`.
fn supported_on<S: Scalar>(p: &GradedFn<S>, set: &BTreeSet<usize>) -> GradedFn<S> {
    let comps = p
        .components()
        .iter()
        .map(|c| {
            SymFn::from_fn(c.m(), c.rank(), |idx| {
                if idx.iter().all(|x| set.contains(x)) {
                    c.get(idx).clone()
                } else {
                    S::zero()
                }
            })
        })
        .collect();
    GradedFn::new(p.m(), comps)
}

/// Bell and complementary Bell numbers by enumerating set partitions.
fn classical_bell(n: usize) -> (i64, i64) {
    let mut bell = 0;
    let mut ruc = 0;
    for k in 0..=n {
        let count = if n == 0 {
            i64::from(k == 0)
        } else {
            rgs(n, k).len() as i64
        };
        bell += count;
        ruc += if k % 2 == 0 { count } else { -count };
    }
    (bell, ruc)
}
