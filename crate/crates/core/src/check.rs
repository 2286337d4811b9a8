//! Outcome of a single identity check: pass/fail, a witness on failure, and
//! any derived constants worth recording.

use std::collections::BTreeMap;

use serde_json::Value;

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub witness: Option<String>,
    pub derived: BTreeMap<String, Value>,
}

impl Outcome {
    pub fn pass() -> Self {
        Self { passed: true, witness: None, derived: BTreeMap::new() }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Self { passed: false, witness: Some(witness.into()), derived: BTreeMap::new() }
    }

    /// `pass()` if `ok`, otherwise `fail(witness())`.
    pub fn expect(ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass()
        } else {
            Self::fail(witness())
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl Into<Value>) -> Self {
        self.derived.insert(key.into(), value.into());
        self
    }

    pub fn record(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.derived.insert(key.into(), value.into());
    }

    /// Conjunction: fails with the first failing witness, keeps all derived data.
    pub fn and(mut self, other: Outcome) -> Self {
        if self.passed && !other.passed {
            self.passed = false;
            self.witness = other.witness;
        }
        self.derived.extend(other.derived);
        self
    }

    /// Fails with `witness` unless `ok`, keeping the first failure.
    pub fn require(self, ok: bool, witness: impl FnOnce() -> String) -> Self {
        self.and(Self::expect(ok, witness))
    }
}

/// Conjunction over a sequence, starting from `pass()`.
pub fn all(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
    outcomes.into_iter().fold(Outcome::pass(), Outcome::and)
}

/// Passes iff `residual` is zero; the witness names the identity.
pub fn zero_residual(name: &str, residual: &crate::algebra::Polynomial) -> Outcome {
    Outcome::expect(residual.is_zero(), || format!("{name}: residual {residual}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_keeps_first_witness() {
        let o = all([Outcome::pass().with("a", 1), Outcome::fail("first"), Outcome::fail("second")]);
        assert!(!o.passed);
        assert_eq!(o.witness.as_deref(), Some("first"));
        assert_eq!(o.derived["a"], Value::from(1));
    }
}
