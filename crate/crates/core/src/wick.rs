//! Creation and annihilation operators over a weighted finite ground set,
//! kept in normal order.
//!
//! The smeared relation `[a^-(φ), a^+(ξ)] = ⟨σ, φξ⟩` forces the pointwise
//! contraction `[a^-(x), a^+(y)] = δ_{xy} κ_x` with `κ_x = 1/σ_x`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ground::{check_label, PointFn, PointMeasure};
use crate::multiset::{merge, perm_count, sub_multisets};
use crate::poisson::poisson_expect;
use crate::polyop::sym_product_of;
use crate::report::Report;
use crate::scalar::{binomial, factorial, Scalar};
use crate::stirling::{apply, Kind};
use crate::symtensor::{GradedFn, SymFn};

/// The reference measure `σ`; every weight must be nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct RefMeasure<S> {
    sigma: PointMeasure<S>,
    kappa: Vec<S>,
}

impl<S: Scalar> RefMeasure<S> {
    pub fn new(sigma: PointMeasure<S>) -> Result<Self> {
        let mut kappa = Vec::with_capacity(sigma.m());
        for (x, w) in sigma.weights().iter().enumerate() {
            if w.is_zero() {
                return Err(Error::ZeroReferenceWeight(x));
            }
            kappa.push(S::one() / w.clone());
        }
        Ok(RefMeasure { sigma, kappa })
    }

    pub fn m(&self) -> usize {
        self.sigma.m()
    }

    pub fn sigma(&self) -> &PointMeasure<S> {
        &self.sigma
    }

    /// `κ_x = 1/σ_x`.
    pub fn kappa(&self, x: usize) -> &S {
        &self.kappa[x]
    }
}

/// `a^+(A) a^-(B)` with `A`, `B` sorted multisets of labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WickMonomial {
    pub cre: Vec<usize>,
    pub ann: Vec<usize>,
}

impl WickMonomial {
    pub fn new(mut cre: Vec<usize>, mut ann: Vec<usize>) -> Self {
        cre.sort_unstable();
        ann.sort_unstable();
        WickMonomial { cre, ann }
    }

    pub fn unit() -> Self {
        WickMonomial {
            cre: Vec::new(),
            ann: Vec::new(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.cre.is_empty() && self.ann.is_empty()
    }
}

/// A linear combination of normal-ordered monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct WickPoly<S> {
    refm: RefMeasure<S>,
    terms: BTreeMap<WickMonomial, S>,
}

fn count_of(v: &[usize], x: usize) -> usize {
    v.iter().filter(|&&y| y == x).count()
}

fn remove_copies(v: &[usize], x: usize, j: usize) -> Vec<usize> {
    let mut left = j;
    v.iter()
        .copied()
        .filter(|&y| {
            if y == x && left > 0 {
                left -= 1;
                false
            } else {
                true
            }
        })
        .collect()
}

impl<S: Scalar> WickPoly<S> {
    pub fn zero(refm: &RefMeasure<S>) -> Self {
        WickPoly {
            refm: refm.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(refm: &RefMeasure<S>) -> Self {
        WickPoly::monomial(refm, WickMonomial::unit(), S::one())
    }

    pub fn monomial(refm: &RefMeasure<S>, mono: WickMonomial, c: S) -> Self {
        let mut p = WickPoly::zero(refm);
        p.add_term(mono, c);
        p
    }

    pub fn ref_measure(&self) -> &RefMeasure<S> {
        &self.refm
    }

    pub fn terms(&self) -> &BTreeMap<WickMonomial, S> {
        &self.terms
    }

    pub fn coeff(&self, mono: &WickMonomial) -> S {
        self.terms.get(mono).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: WickMonomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn same_ref(&self, other: &Self) -> Result<()> {
        if self.refm == other.refm {
            Ok(())
        } else {
            Err(Error::ReferenceMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ref(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = WickPoly::zero(&self.refm);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    /// Normal-ordered product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ref(other)?;
        let mut out = WickPoly::zero(&self.refm);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1.clone() * c2.clone();
                self.product_into(m1, m2, &c, &mut out);
            }
        }
        Ok(out)
    }

    /// `a^+(A1)a^-(B1) a^+(A2)a^-(B2)`: for each label, `j` of the `b`
    /// annihilators in `B1` contract with `j` of the `a` creators in `A2` in
    /// `C(b,j) C(a,j) j!` ways, each contraction contributing `κ_x`.
    fn product_into(&self, m1: &WickMonomial, m2: &WickMonomial, c: &S, out: &mut Self) {
        let mut labels: Vec<usize> = m1.ann.iter().copied().filter(|x| m2.cre.contains(x)).collect();
        labels.dedup();
        let mut partial = vec![(m1.cre.clone(), m1.ann.clone(), m2.cre.clone(), c.clone())];
        for &x in &labels {
            let b = count_of(&m1.ann, x);
            let a = count_of(&m2.cre, x);
            let mut next = Vec::new();
            for (cre1, ann1, cre2, w) in &partial {
                let mut kj = S::one();
                for j in 0..=a.min(b) {
                    if j > 0 {
                        kj *= self.refm.kappa(x).clone();
                    }
                    let ways = binomial::<S>(b, j) * binomial::<S>(a, j) * factorial::<S>(j);
                    next.push((
                        cre1.clone(),
                        remove_copies(ann1, x, j),
                        remove_copies(cre2, x, j),
                        w.clone() * ways * kj.clone(),
                    ));
                }
            }
            partial = next;
        }
        for (cre1, ann1, cre2, w) in partial {
            out.add_term(WickMonomial::new(merge(&cre1, &cre2), merge(&ann1, &m2.ann)), w);
        }
    }

    /// `[P, Q] = PQ - QP`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<&WickMonomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| (self.coeff(k) - other.coeff(k)).magnitude())
            .fold(0.0, f64::max)
    }

    /// Canonical JSON: terms sorted by monomial.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(k, v)| json!({"cre": k.cre, "ann": k.ann, "coef": v.to_json()}))
                .collect(),
        )
    }
}

impl<S: Scalar> crate::report::Discrepancy for WickPoly<S> {
    fn same(&self, other: &Self) -> bool {
        self == other
    }

    fn discrepancy(&self, other: &Self) -> f64 {
        self.max_diff(other)
    }
}

fn same_ground(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GroundMismatch { left: a, right: b })
    }
}

fn smeared<S: Scalar>(
    refm: &RefMeasure<S>,
    xi: &PointFn<S>,
    mono: impl Fn(usize) -> WickMonomial,
) -> Result<WickPoly<S>> {
    same_ground(refm.m(), xi.m())?;
    let mut p = WickPoly::zero(refm);
    for x in 0..refm.m() {
        p.add_term(mono(x), xi.at(x).clone() * refm.sigma().at(x).clone());
    }
    Ok(p)
}

/// `a^+(ξ) = ∫ ξ(x) a^+(x) σ(dx)`.
pub fn a_plus<S: Scalar>(refm: &RefMeasure<S>, xi: &PointFn<S>) -> Result<WickPoly<S>> {
    smeared(refm, xi, |x| WickMonomial::new(vec![x], vec![]))
}

/// `a^-(ξ) = ∫ ξ(x) a^-(x) σ(dx)`.
pub fn a_minus<S: Scalar>(refm: &RefMeasure<S>, xi: &PointFn<S>) -> Result<WickPoly<S>> {
    smeared(refm, xi, |x| WickMonomial::new(vec![], vec![x]))
}

/// `ρ(ξ) = ∫ ξ(x) a^+(x) a^-(x) σ(dx)`.
pub fn rho<S: Scalar>(refm: &RefMeasure<S>, xi: &PointFn<S>) -> Result<WickPoly<S>> {
    smeared(refm, xi, |x| WickMonomial::new(vec![x], vec![x]))
}

/// `R(ξ) = a^+(ξ) + a^-(ξ) + ρ(ξ) + ⟨σ, ξ⟩`.
pub fn r_operator<S: Scalar>(refm: &RefMeasure<S>, xi: &PointFn<S>) -> Result<WickPoly<S>> {
    let mean = refm.sigma().integrate(xi)?;
    a_plus(refm, xi)?
        .add(&a_minus(refm, xi)?)?
        .add(&rho(refm, xi)?)?
        .add(&WickPoly::one(refm).scale(&mean))
}

/// `∫ f(x_1..x_k) :ρ(x_1)⋯ρ(x_k): σ^⊗k`, summed over ordered tuples.
pub fn wick_kernel<S: Scalar>(refm: &RefMeasure<S>, f: &SymFn<S>) -> Result<WickPoly<S>> {
    same_ground(refm.m(), f.m())?;
    let mut p = WickPoly::zero(refm);
    for (idx, v) in f.entries() {
        if v.is_zero() {
            continue;
        }
        let mass = idx.iter().fold(S::one(), |acc, &x| acc * refm.sigma().at(x).clone());
        let c = S::from_i64(perm_count(&idx) as i64) * v.clone() * mass;
        p.add_term(WickMonomial::new(idx.clone(), idx), c);
    }
    Ok(p)
}

/// The smeared Wick product `∫ (ξ_1⊙..⊙ξ_k) :ρ⋯ρ: σ^⊗k` from the recursion
/// `W(ξ_1..ξ_k) = ρ(ξ_1) W(ξ_2..ξ_k) - Σ_{i>=2} W(ξ_2, .., ξ_1ξ_i, .., ξ_k)`.
pub fn wick_rho_product<S: Scalar>(refm: &RefMeasure<S>, xis: &[PointFn<S>]) -> Result<WickPoly<S>> {
    match xis {
        [] => Ok(WickPoly::one(refm)),
        [xi] => rho(refm, xi),
        [first, rest @ ..] => {
            let mut out = rho(refm, first)?.mul(&wick_rho_product(refm, rest)?)?;
            for i in 0..rest.len() {
                let mut merged = rest.to_vec();
                merged[i] = first.mul(&rest[i])?;
                out = out.sub(&wick_rho_product(refm, &merged)?)?;
            }
            Ok(out)
        }
    }
}

/// The same product built directly from the kernel `ξ_1⊙..⊙ξ_k`.
pub fn wick_rho_product_direct<S: Scalar>(refm: &RefMeasure<S>, xis: &[PointFn<S>]) -> Result<WickPoly<S>> {
    wick_kernel(refm, &sym_product_of(refm.m(), xis)?)
}

/// `Σ_k ∫ (𝐒(n,k)(ξ_1⊙..⊙ξ_n)) :ρ⋯ρ: σ^⊗k`.
pub fn katriel_rhs<S: Scalar>(refm: &RefMeasure<S>, xis: &[PointFn<S>]) -> Result<WickPoly<S>> {
    let n = xis.len();
    let prod = sym_product_of(refm.m(), xis)?;
    let mut out = WickPoly::zero(refm);
    for k in 1..=n {
        out = out.add(&wick_kernel(refm, &apply(Kind::S2, n, k, &prod)?)?)?;
    }
    Ok(out)
}

/// `ρ(ξ_1) ⋯ ρ(ξ_n)` normal ordered from the left.
pub fn rho_product<S: Scalar>(refm: &RefMeasure<S>, xis: &[PointFn<S>]) -> Result<WickPoly<S>> {
    let mut out = WickPoly::one(refm);
    for xi in xis {
        out = out.mul(&rho(refm, xi)?)?;
    }
    Ok(out)
}

/// `ρ(ξ_1)⋯ρ(ξ_n) = Σ_k ∫ (𝐒(n,k)(ξ_1⊙..⊙ξ_n)) :ρ⋯ρ: σ^⊗k`.
pub fn check_katriel<S: Scalar>(refm: &RefMeasure<S>, xis: &[PointFn<S>]) -> Result<Report> {
    if xis.is_empty() {
        return Err(Error::InvalidArgument("Katriel's formula needs n >= 1".into()));
    }
    let mut r = Report::for_scalar::<S>("wick.katriel");
    r.check(&rho_product(refm, xis)?, &katriel_rhs(refm, xis)?, || {
        format!("n={}", xis.len())
    });
    Ok(r)
}

/// `τ_σ(P)`: the coefficient of the identity.
pub fn vacuum<S: Scalar>(p: &WickPoly<S>) -> S {
    p.coeff(&WickMonomial::unit())
}

/// `τ_σ(R(ξ_1)⋯R(ξ_n)) = 𝔼_σ(⟨·,ξ_1⟩⋯⟨·,ξ_n⟩)`.
pub fn check_quantum_poisson<S: Scalar>(refm: &RefMeasure<S>, xis: &[PointFn<S>]) -> Result<Report> {
    let m = refm.m();
    let mut word = WickPoly::one(refm);
    let mut poly = GradedFn::constant(m, S::one());
    for xi in xis {
        word = word.mul(&r_operator(refm, xi)?)?;
        poly = poly.mul(&GradedFn::linear(xi))?;
    }
    let mut r = Report::for_scalar::<S>("wick.quantum_poisson");
    r.check(&vacuum(&word), &poisson_expect(refm.sigma(), &poly)?, || {
        format!("n={}", xis.len())
    });
    Ok(r)
}

/// `∫ f(x) (a^+(x_1)+1)⋯(a^+(x_k)+1)(a^-(x_k)+1)⋯(a^-(x_1)+1) σ^⊗k(dx)`.
pub fn shifted_kernel<S: Scalar>(refm: &RefMeasure<S>, f: &SymFn<S>) -> Result<WickPoly<S>> {
    same_ground(refm.m(), f.m())?;
    let mut p = WickPoly::zero(refm);
    for (idx, v) in f.entries() {
        if v.is_zero() {
            continue;
        }
        let mass = idx.iter().fold(S::one(), |acc, &x| acc * refm.sigma().at(x).clone());
        let c = S::from_i64(perm_count(&idx) as i64) * v.clone() * mass;
        let subs = sub_multisets(&idx);
        for (cre, wc) in &subs {
            for (ann, wa) in &subs {
                let ways = S::from_i64((wc * wa) as i64);
                p.add_term(WickMonomial::new(cre.clone(), ann.clone()), c.clone() * ways);
            }
        }
    }
    Ok(p)
}

/// `R(ξ_1)⋯R(ξ_n) = Σ_k ∫ (𝐒(n,k)(ξ_1⊙..⊙ξ_n)) (a^++1)⋯(a^-+1)⋯ σ^⊗k`.
pub fn check_lemma_r_normal<S: Scalar>(refm: &RefMeasure<S>, xis: &[PointFn<S>]) -> Result<Report> {
    let n = xis.len();
    if n == 0 {
        return Err(Error::InvalidArgument("the R-expansion needs n >= 1".into()));
    }
    let mut lhs = WickPoly::one(refm);
    for xi in xis {
        lhs = lhs.mul(&r_operator(refm, xi)?)?;
    }
    let prod = sym_product_of(refm.m(), xis)?;
    let mut rhs = WickPoly::zero(refm);
    for k in 1..=n {
        rhs = rhs.add(&shifted_kernel(refm, &apply(Kind::S2, n, k, &prod)?)?)?;
    }
    let mut r = Report::for_scalar::<S>("wick.r_expansion");
    r.check(&lhs, &rhs, || format!("n={n}"));
    Ok(r)
}

/// The smeared commutation relations on `φ`, `ξ`:
/// `[a^-(φ), a^+(ξ)] = ⟨σ,φξ⟩`, `[ρ(φ), a^+(ξ)] = a^+(φξ)`,
/// `[ρ(φ), a^-(ξ)] = -a^-(φξ)`, `[ρ(φ), ρ(ξ)] = 0`, `[R(φ), R(ξ)] = 0`.
pub fn check_ccr<S: Scalar>(refm: &RefMeasure<S>, phi: &PointFn<S>, xi: &PointFn<S>) -> Result<Report> {
    let mut r = Report::for_scalar::<S>("wick.ccr");
    let pxi = phi.mul(xi)?;
    let zero = WickPoly::zero(refm);
    r.check(
        &a_minus(refm, phi)?.commutator(&a_plus(refm, xi)?)?,
        &WickPoly::one(refm).scale(&refm.sigma().integrate(&pxi)?),
        || "[a-, a+]".into(),
    );
    r.check(
        &rho(refm, phi)?.commutator(&a_plus(refm, xi)?)?,
        &a_plus(refm, &pxi)?,
        || "[rho, a+]".into(),
    );
    r.check(
        &rho(refm, phi)?.commutator(&a_minus(refm, xi)?)?,
        &a_minus(refm, &pxi)?.scale(&-S::one()),
        || "[rho, a-]".into(),
    );
    r.check(&rho(refm, phi)?.commutator(&rho(refm, xi)?)?, &zero, || {
        "[rho, rho]".into()
    });
    r.check(
        &r_operator(refm, phi)?.commutator(&r_operator(refm, xi)?)?,
        &zero,
        || "[R, R]".into(),
    );
    Ok(r)
}

/// One factor of an operator word.
#[derive(Debug, Clone, PartialEq)]
pub enum WordOp<S> {
    /// `a^+(x)`, `a^-(x)`, `ρ(x) = a^+(x)a^-(x)` at a point.
    CreateAt(usize),
    AnnihilateAt(usize),
    RhoAt(usize),
    /// Smeared versions.
    Create(PointFn<S>),
    Annihilate(PointFn<S>),
    Rho(PointFn<S>),
}

impl<S: Scalar> WordOp<S> {
    pub fn to_poly(&self, refm: &RefMeasure<S>) -> Result<WickPoly<S>> {
        let at = |x: usize, mono: WickMonomial| -> Result<WickPoly<S>> {
            check_label(x, refm.m())?;
            Ok(WickPoly::monomial(refm, mono, S::one()))
        };
        match self {
            WordOp::CreateAt(x) => at(*x, WickMonomial::new(vec![*x], vec![])),
            WordOp::AnnihilateAt(x) => at(*x, WickMonomial::new(vec![], vec![*x])),
            WordOp::RhoAt(x) => at(*x, WickMonomial::new(vec![*x], vec![*x])),
            WordOp::Create(xi) => a_plus(refm, xi),
            WordOp::Annihilate(xi) => a_minus(refm, xi),
            WordOp::Rho(xi) => rho(refm, xi),
        }
    }

    /// `{"op": "a+" | "a-" | "rho", "point": x}` or `{"op": .., "fn": [..]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let op = v
            .get("op")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json("word factor needs an \"op\" string".into()))?;
        if let Some(p) = v.get("point") {
            let x = p
                .as_u64()
                .ok_or_else(|| Error::Json("\"point\" must be a nonnegative integer".into()))?
                as usize;
            return match op {
                "a+" => Ok(WordOp::CreateAt(x)),
                "a-" => Ok(WordOp::AnnihilateAt(x)),
                "rho" => Ok(WordOp::RhoAt(x)),
                _ => Err(Error::Json(format!("unknown operator {op:?}"))),
            };
        }
        let f = v
            .get("fn")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("word factor needs \"point\" or \"fn\"".into()))?;
        let xi = PointFn::new(f.iter().map(S::from_json).collect::<Result<_>>()?);
        match op {
            "a+" => Ok(WordOp::Create(xi)),
            "a-" => Ok(WordOp::Annihilate(xi)),
            "rho" => Ok(WordOp::Rho(xi)),
            _ => Err(Error::Json(format!("unknown operator {op:?}"))),
        }
    }
}

/// Normal order of a word, multiplied left to right.
pub fn normal_order<S: Scalar>(refm: &RefMeasure<S>, word: &[WordOp<S>]) -> Result<WickPoly<S>> {
    let mut out = WickPoly::one(refm);
    for op in word {
        out = out.mul(&op.to_poly(refm)?)?;
    }
    Ok(out)
}
