//! Pass/fail bookkeeping for identity checks.

use std::cell::Cell;
use std::fmt;

use serde_json::{json, Value};

use crate::scalar::Scalar;
use crate::symtensor::{GradedFn, SymFn, SymMeasure};

/// Tolerance used by identity checks over inexact scalars.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-8;

thread_local! {
    static FLOAT_TOL: Cell<f64> = const { Cell::new(DEFAULT_FLOAT_TOL) };
}

/// Sets the tolerance picked up by [`Report::for_scalar`] on this thread.
pub fn set_float_tolerance(tol: f64) {
    FLOAT_TOL.with(|t| t.set(tol));
}

pub fn float_tolerance() -> f64 {
    FLOAT_TOL.with(Cell::get)
}

/// Objects that can be compared by an identity check.
pub trait Discrepancy {
    /// Exact equality.
    fn same(&self, other: &Self) -> bool;
    /// Size of the difference, for reporting.
    fn discrepancy(&self, other: &Self) -> f64;
}

impl<S: Scalar> Discrepancy for S {
    fn same(&self, other: &Self) -> bool {
        self == other
    }

    fn discrepancy(&self, other: &Self) -> f64 {
        (self.clone() - other.clone()).magnitude()
    }
}

impl<S: Scalar> Discrepancy for SymFn<S> {
    fn same(&self, other: &Self) -> bool {
        self == other
    }

    fn discrepancy(&self, other: &Self) -> f64 {
        self.max_diff(other)
    }
}

impl<S: Scalar> Discrepancy for SymMeasure<S> {
    fn same(&self, other: &Self) -> bool {
        self == other
    }

    fn discrepancy(&self, other: &Self) -> f64 {
        self.max_diff(other)
    }
}

impl<S: Scalar> Discrepancy for GradedFn<S> {
    fn same(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }

    fn discrepancy(&self, other: &Self) -> f64 {
        self.max_diff(other)
    }
}

/// Outcome of a family of identity checks.
///
/// With `tol == 0` a case passes only on exact equality; otherwise it passes
/// when the discrepancy is at most `tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub max_discrepancy: f64,
    pub tol: f64,
    pub first_failure: Option<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report::with_tol(name, 0.0)
    }

    /// Exact for exact scalars, otherwise at [`float_tolerance`].
    pub fn for_scalar<S: Scalar>(name: impl Into<String>) -> Self {
        Report::with_tol(name, if S::EXACT { 0.0 } else { float_tolerance() })
    }

    pub fn with_tol(name: impl Into<String>, tol: f64) -> Self {
        Report {
            name: name.into(),
            cases: 0,
            failures: 0,
            max_discrepancy: 0.0,
            tol,
            first_failure: None,
        }
    }

    pub fn check<T: Discrepancy>(&mut self, lhs: &T, rhs: &T, what: impl FnOnce() -> String) -> bool {
        let d = lhs.discrepancy(rhs);
        let ok = if self.tol == 0.0 { lhs.same(rhs) } else { d <= self.tol };
        self.record(ok, d, what)
    }

    /// Records a case from an already computed float discrepancy.
    pub fn check_close(&mut self, d: f64, what: impl FnOnce() -> String) -> bool {
        let ok = d <= self.tol;
        self.record(ok, d, what)
    }

    pub fn check_true(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        self.record(ok, if ok { 0.0 } else { 1.0 }, what)
    }

    fn record(&mut self, ok: bool, d: f64, what: impl FnOnce() -> String) -> bool {
        self.cases += 1;
        let d = if d.is_nan() { f64::INFINITY } else { d };
        if d > self.max_discrepancy {
            self.max_discrepancy = d;
        }
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
        ok
    }

    /// Folds another report's counts into this one.
    pub fn absorb(&mut self, other: &Report) {
        self.cases += other.cases;
        self.failures += other.failures;
        self.max_discrepancy = self.max_discrepancy.max(other.max_discrepancy);
        self.tol = self.tol.max(other.tol);
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure.as_ref().map(|f| format!("{}: {f}", other.name));
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "suite": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "max_discrepancy": self.max_discrepancy,
        });
        if self.tol > 0.0 {
            v["tol"] = json!(self.tol);
        }
        if let Some(f) = &self.first_failure {
            v["first_failure"] = json!(f);
        }
        v
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} cases, {} failures, max discrepancy {:e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.failures,
            self.max_discrepancy
        )?;
        if let Some(first) = &self.first_failure {
            write!(f, " (first: {first})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn exact_and_tolerant_checks() {
        let mut r = Report::new("exact");
        assert!(r.check(&Q::from_i64(2), &Q::from_i64(2), || "a".into()));
        assert!(!r.check(&Q::from_i64(2), &Q::from_ratio(5, 2), || "b".into()));
        assert_eq!((r.cases, r.failures), (2, 1));
        assert_eq!(r.max_discrepancy, 0.5);
        assert_eq!(r.first_failure.as_deref(), Some("b"));

        let mut t = Report::with_tol("float", 1e-8);
        assert!(t.check(&1.0f64, &(1.0 + 1e-10), String::new));
        assert!(!t.check(&1.0f64, &1.1, String::new));
        r.absorb(&t);
        assert_eq!((r.cases, r.failures), (4, 2));
        assert!(!r.passed());
    }

    #[test]
    fn scalar_dependent_tolerance() {
        assert_eq!(Report::for_scalar::<Q>("q").tol, 0.0);
        assert_eq!(Report::for_scalar::<f64>("f").tol, DEFAULT_FLOAT_TOL);
        set_float_tolerance(1e-3);
        assert_eq!(Report::for_scalar::<f64>("f").tol, 1e-3);
        set_float_tolerance(DEFAULT_FLOAT_TOL);
    }
}
