//! Check outcomes.

use std::fmt;

use crate::scalar::Scalar;
use crate::symalg::ModElem;

/// One failing instance of an identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation<C> {
    pub tuple: Vec<String>,
    pub lhs: ModElem<C>,
    pub rhs: ModElem<C>,
}

impl<C: Scalar> Violation<C> {
    pub fn residual(&self) -> ModElem<C> {
        &self.lhs - &self.rhs
    }
}

/// Outcome of one named identity over all tuples it quantifies over.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult<C> {
    pub name: String,
    pub violations: Vec<Violation<C>>,
}

impl<C: Scalar> CheckResult<C> {
    pub fn new(name: impl Into<String>) -> Self {
        CheckResult { name: name.into(), violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records a violation unless `lhs == rhs`.
    pub fn compare<S: AsRef<str>>(&mut self, tuple: &[S], lhs: ModElem<C>, rhs: ModElem<C>) {
        if lhs != rhs {
            self.violations.push(Violation { tuple: tuple.iter().map(|s| s.as_ref().to_string()).collect(), lhs, rhs });
        }
    }

    /// Records a violation unless `value` is zero; the right side is zero.
    pub fn expect_zero<S: AsRef<str>>(&mut self, tuple: &[S], value: ModElem<C>) {
        let rank = value.rank();
        self.compare(tuple, value, ModElem::zero(rank));
    }
}

/// Ordered list of check results about one subject.
#[derive(Clone, Debug, PartialEq)]
pub struct Report<C> {
    pub subject: String,
    pub checks: Vec<CheckResult<C>>,
    pub notes: Vec<String>,
}

impl<C: Scalar> Report<C> {
    pub fn new(subject: impl Into<String>) -> Self {
        Report { subject: subject.into(), checks: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, check: CheckResult<C>) {
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Appends all checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report<C>) {
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}/{}", c.name);
            }
            self.checks.push(c);
        }
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult<C>> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Names of failing checks, in report order.
    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect()
    }
}

impl<C: Scalar> fmt::Display for Report<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.subject, if self.passed() { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "FAIL" };
            writeln!(f, "  {:<28} {status}", c.name)?;
            for v in c.violations.iter().take(3) {
                writeln!(f, "    at ({}): residual {}", v.tuple.join(","), v.residual())?;
            }
            if c.violations.len() > 3 {
                writeln!(f, "    ... {} more", c.violations.len() - 3)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
