//! Structured verification records.
//!
//! A check passes iff `residual ≤ tol`. Each check also states whether it is
//! expected to pass; negative controls are expected to fail, and a run is
//! green only when every check matches its expectation.

use serde::ser::{Serialize, SerializeStruct, Serializer};

/// Topical anchors tying each check to the construct it exercises.
pub mod anchor {
    pub const HAMILTONIAN: &str = "dirac-hamiltonian";
    pub const CLIFFORD: &str = "clifford-relations";
    pub const SPIN: &str = "spin-generators";
    pub const PROJECTORS: &str = "subsidiary-projectors";
    pub const HELICITY: &str = "helicity-operator";
    pub const POINCARE: &str = "poincare-generators";
    pub const IRREPS: &str = "irrep-decomposition";
    pub const DISCRETE: &str = "cpt-relations";
    pub const INTERTWINING: &str = "cpt-intertwining";
    pub const CLASSIFICATION: &str = "cpt-classification";
    pub const MODES: &str = "mode-equations";
    pub const WEYL: &str = "weyl-reduction";
    pub const REDUCED: &str = "reduced-equations";
    pub const CENSUS: &str = "subsidiary-census";
    pub const SO4: &str = "so4-helicity";
    pub const BRANCHING: &str = "so4-branching";
    pub const NILPOTENT: &str = "nilpotent-equivalence";
    pub const SCALAR_PRODUCT: &str = "modified-scalar-product";
    pub const TRANSFORMED_OPS: &str = "transformed-cpt";
    pub const PLUMBING: &str = "plumbing";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub expect: Expectation,
    pub paper_anchor: String,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64, expect: Expectation, anchor: &str) -> Self {
        Self {
            name: name.into(),
            residual,
            tol,
            pass: residual <= tol,
            expect,
            paper_anchor: anchor.to_string(),
        }
    }

    /// True when the outcome matches the expectation.
    pub fn ok(&self) -> bool {
        self.pass == (self.expect == Expectation::Pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub expected_failures: usize,
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    /// Residual check expected to pass. Returns whether it passed.
    pub fn record(&mut self, name: impl Into<String>, residual: f64, tol: f64, anchor: &str) -> bool {
        let chk = Check::new(name, residual, tol, Expectation::Pass, anchor);
        let pass = chk.pass;
        self.checks.push(chk);
        pass
    }

    /// Negative control: `residual ≤ tol` would be a (wrong) pass.
    pub fn record_expected_fail(&mut self, name: impl Into<String>, residual: f64, tol: f64, anchor: &str) -> bool {
        let chk = Check::new(name, residual, tol, Expectation::Fail, anchor);
        let failed = !chk.pass;
        self.checks.push(chk);
        failed
    }

    /// Exact integer comparison, recorded as residual `|actual − expected|`
    /// with tolerance 0.
    pub fn record_count(&mut self, name: impl Into<String>, actual: usize, expected: usize, anchor: &str) -> bool {
        let residual = (actual as f64 - expected as f64).abs();
        self.record(name, residual, 0.0, anchor)
    }

    /// Boolean claim, residual 0 when it holds and 1 otherwise.
    pub fn record_flag(&mut self, name: impl Into<String>, holds: bool, anchor: &str) -> bool {
        self.record(name, if holds { 0.0 } else { 1.0 }, 0.0, anchor)
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Append another report's checks, prefixing names with its suite.
    pub fn absorb(&mut self, other: VerificationReport) {
        let prefix = other.suite;
        for mut chk in other.checks {
            chk.name = format!("{prefix}: {}", chk.name);
            self.checks.push(chk);
        }
    }

    pub fn summary(&self) -> Summary {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        Summary {
            total: self.checks.len(),
            passed,
            failed: self.checks.len() - passed,
            expected_failures: self
                .checks
                .iter()
                .filter(|c| c.expect == Expectation::Fail && !c.pass)
                .count(),
            mismatches: self.checks.iter().filter(|c| !c.ok()).count(),
        }
    }

    /// Every expected-pass check passed and every negative control failed.
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    /// Whether every check expected to pass did pass (ignores negative controls).
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.expect == Expectation::Pass)
            .all(|c| c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok())
    }
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("VerificationReport", 4)?;
        st.serialize_field("suite", &self.suite)?;
        st.serialize_field("ok", &self.all_ok())?;
        st.serialize_field("summary", &self.summary())?;
        st.serialize_field("checks", &self.checks)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_residual_within_tol() {
        let c = Check::new("a", 1e-12, 1e-10, Expectation::Pass, anchor::PLUMBING);
        assert!(c.pass && c.ok());
        let c = Check::new("b", 1e-9, 1e-10, Expectation::Pass, anchor::PLUMBING);
        assert!(!c.pass && !c.ok());
        let c = Check::new("nan", f64::NAN, 1e-10, Expectation::Pass, anchor::PLUMBING);
        assert!(!c.pass);
    }

    #[test]
    fn negative_control_is_green_when_it_fails() {
        let mut r = VerificationReport::new("t");
        assert!(r.record_expected_fail("ctrl", 2.0, 0.1, anchor::PLUMBING));
        assert!(r.all_ok());
        let s = r.summary();
        assert_eq!(
            (s.total, s.passed, s.failed, s.expected_failures, s.mismatches),
            (1, 0, 1, 1, 0)
        );
        r.record_expected_fail("bad ctrl", 0.0, 0.1, anchor::PLUMBING);
        assert!(!r.all_ok());
        assert_eq!(r.summary().mismatches, 1);
    }

    #[test]
    fn summary_counts_consistent() {
        let mut r = VerificationReport::new("t");
        r.record("x", 0.0, 1.0, anchor::PLUMBING);
        r.record_count("n", 3, 3, anchor::PLUMBING);
        r.record_count("m", 2, 3, anchor::PLUMBING);
        r.record_flag("f", true, anchor::PLUMBING);
        let s = r.summary();
        assert_eq!(s.total, 4);
        assert_eq!(s.passed + s.failed, s.total);
        assert_eq!(s.failed, 1);
        assert!(!r.passed());
    }
}
