//! Structured verification reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Residue text beyond this many terms is elided.
pub const RESIDUE_TERM_CAP: usize = 50;
/// At most this many residues are stored per report; the tally still counts all of them.
pub const RESIDUE_CAP: usize = 64;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ReportOnlyMismatch,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ReportOnlyMismatch => "report-only-mismatch",
        }
    }
}

/// A nonzero residue and where it was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residue {
    pub location: String,
    pub residue: String,
    pub terms: usize,
}

/// Counts of coefficient identities by outcome.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    /// Identities that reduced to zero after nontrivial work.
    pub zero: usize,
    /// Identities whose two sides were identical before reduction.
    pub trivial: usize,
    /// Identities with a nonzero residue.
    pub nonzero: usize,
    /// Coefficients that could not be decided inside the truncation.
    pub skipped: usize,
}

impl Tally {
    pub fn checked(&self) -> usize {
        self.zero + self.trivial + self.nonzero
    }

    pub fn merge(&mut self, other: &Tally) {
        self.zero += other.zero;
        self.trivial += other.trivial;
        self.nonzero += other.nonzero;
        self.skipped += other.skipped;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub equation: String,
    pub status: Status,
    pub report_only: bool,
    pub tally: Tally,
    pub residues: Vec<Residue>,
    pub provenance: BTreeMap<String, String>,
    pub timing_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// True unless this is a hard failure.
    pub fn acceptable(&self) -> bool {
        self.status != Status::Fail
    }

    /// The report with its timing field cleared, for determinism comparisons.
    pub fn without_timing(&self) -> VerificationReport {
        VerificationReport {
            timing_ms: 0,
            ..self.clone()
        }
    }
}

/// Accumulates outcomes and produces a [`VerificationReport`].
#[derive(Debug)]
pub struct ReportBuilder {
    check_id: String,
    equation: String,
    report_only: bool,
    tally: Tally,
    residues: Vec<Residue>,
    provenance: BTreeMap<String, String>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(check_id: impl Into<String>, equation: impl Into<String>) -> ReportBuilder {
        ReportBuilder {
            check_id: check_id.into(),
            equation: equation.into(),
            report_only: false,
            tally: Tally::default(),
            residues: Vec::new(),
            provenance: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    pub fn report_only(mut self, yes: bool) -> ReportBuilder {
        self.report_only = yes;
        self
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.provenance.insert(key.into(), value.into());
    }

    pub fn zero(&mut self) {
        self.tally.zero += 1;
    }

    pub fn trivial(&mut self) {
        self.tally.trivial += 1;
    }

    pub fn skipped(&mut self) {
        self.tally.skipped += 1;
    }

    pub fn residue(&mut self, location: impl Into<String>, residue: impl Into<String>, terms: usize) {
        self.tally.nonzero += 1;
        if self.residues.len() < RESIDUE_CAP {
            self.residues.push(Residue {
                location: location.into(),
                residue: residue.into(),
                terms,
            });
        }
    }

    pub fn merge_tally(&mut self, t: &Tally) {
        self.tally.merge(t);
    }

    pub fn absorb(&mut self, other: Outcome) {
        match other {
            Outcome::Zero => self.zero(),
            Outcome::Trivial => self.trivial(),
            Outcome::Skipped => self.skipped(),
            Outcome::Residue {
                location,
                residue,
                terms,
            } => self.residue(location, residue, terms),
        }
    }

    pub fn finish(self) -> VerificationReport {
        let status = if self.tally.nonzero == 0 {
            Status::Pass
        } else if self.report_only {
            Status::ReportOnlyMismatch
        } else {
            Status::Fail
        };
        VerificationReport {
            check_id: self.check_id,
            equation: self.equation,
            status,
            report_only: self.report_only,
            tally: self.tally,
            residues: self.residues,
            provenance: self.provenance,
            timing_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

/// Outcome of a single coefficient identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Zero,
    Trivial,
    Skipped,
    Residue {
        location: String,
        residue: String,
        terms: usize,
    },
}

/// Aggregate over a run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub summary: bool,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub report_only_mismatches: usize,
    pub exit_code: i32,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Summary {
        let mut s = Summary {
            summary: true,
            checks: reports.len(),
            ..Summary::default()
        };
        for r in reports {
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::ReportOnlyMismatch => s.report_only_mismatches += 1,
            }
        }
        s.exit_code = if s.failed > 0 { 1 } else { 0 };
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_rules() {
        let mut b = ReportBuilder::new("x", "a = b");
        b.zero();
        b.trivial();
        assert_eq!(b.finish().status, Status::Pass);
        let mut b = ReportBuilder::new("x", "a = b");
        b.residue("(0,0)", "p", 1);
        assert_eq!(b.finish().status, Status::Fail);
        let mut b = ReportBuilder::new("x", "a = b").report_only(true);
        b.residue("(0,0)", "p", 1);
        let r = b.finish();
        assert_eq!(r.status, Status::ReportOnlyMismatch);
        assert!(r.acceptable());
    }

    #[test]
    fn summary_counts() {
        let mut b = ReportBuilder::new("a", "");
        b.residue("l", "1", 1);
        let bad = b.finish();
        let good = ReportBuilder::new("b", "").finish();
        let s = Summary::of(&[bad, good]);
        assert_eq!((s.checks, s.passed, s.failed, s.exit_code), (2, 1, 1, 1));
    }
}
