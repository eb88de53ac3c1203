use serde::{Deserialize, Serialize};

/// Outcome of comparing a measured left-hand side against a bound.
///
/// `pass` is always `ratio <= 1 + tolerance`. Checks whose right-hand side
/// carries no known constant are tagged `measured`; their ratio is an
/// empirical constant rather than a verdict, and suites report them without
/// gating on them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub measured: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<u64>,
}

impl CheckResult {
    pub fn new(lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let ratio = ratio(lhs, rhs);
        CheckResult {
            lhs,
            rhs,
            ratio,
            tolerance,
            pass: ratio <= 1.0 + tolerance,
            measured: false,
            fingerprint: None,
        }
    }

    pub fn measured(lhs: f64, rhs: f64) -> Self {
        CheckResult { measured: true, ..Self::new(lhs, rhs, 0.0) }
    }

    pub fn with_fingerprint(mut self, fp: u64) -> Self {
        self.fingerprint = Some(fp);
        self
    }

    /// Whether this check should fail a suite.
    pub fn is_violation(&self) -> bool {
        !self.measured && !self.pass
    }
}

/// `lhs / rhs` with `0/0 = 0`.
pub fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 && rhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_tracks_ratio() {
        assert!(CheckResult::new(1.0, 1.0, 0.0).pass);
        assert!(!CheckResult::new(1.0 + 1e-9, 1.0, 1e-10).pass);
        assert!(CheckResult::new(0.0, 0.0, 0.0).pass);
        assert!(!CheckResult::new(1.0, 0.0, 0.0).pass);
        let m = CheckResult::measured(3.0, 1.0);
        assert!(!m.pass && !m.is_violation());
    }
}
