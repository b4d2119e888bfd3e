//! Machine-checkable records of verified claims.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// How far a passing verdict reaches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProofStatus {
    /// Only the recorded range was checked.
    RangeOnly,
    /// The checked quantity is periodic with the given period and a full
    /// period (plus base cases) was exhausted, so the claim holds for all n.
    PeriodicityComplete { period: u64 },
}

/// The index range a certificate speaks about, inclusive on both ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifiedRange {
    pub variable: String,
    pub from: u64,
    pub to: u64,
}

impl VerifiedRange {
    pub fn new(variable: &str, from: u64, to: u64) -> Self {
        VerifiedRange {
            variable: variable.to_string(),
            from,
            to,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: String,
    pub parameters: Value,
    pub range: VerifiedRange,
    pub proof: ProofStatus,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Value>,
    /// Sub-certificates of a composite claim; the verdict is their conjunction.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<Certificate>,
}

impl Certificate {
    pub fn new(claim: &str, parameters: Value, range: VerifiedRange) -> Self {
        Certificate {
            claim: claim.to_string(),
            parameters,
            range,
            proof: ProofStatus::RangeOnly,
            verdict: Verdict::Pass,
            counterexample: None,
            witnesses: Vec::new(),
            parts: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Marks the certificate failed with the given counterexample. Only the
    /// first failure is kept.
    pub fn fail(&mut self, counterexample: Value) {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::Fail;
            self.counterexample = Some(counterexample);
        }
    }

    pub fn with_proof(mut self, proof: ProofStatus) -> Self {
        self.proof = proof;
        self
    }

    pub fn push_part(&mut self, part: Certificate) {
        if !part.passed() && self.verdict == Verdict::Pass {
            self.verdict = Verdict::Fail;
            self.counterexample = Some(serde_json::json!({ "failed_part": part.claim }));
        }
        self.parts.push(part);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn first_failure_wins() {
        let mut c = Certificate::new("x", json!({}), VerifiedRange::new("n", 1, 3));
        assert!(c.passed());
        c.fail(json!({"n": 2}));
        c.fail(json!({"n": 3}));
        assert_eq!(c.counterexample, Some(json!({"n": 2})));
    }

    #[test]
    fn composite_fails_with_any_part() {
        let mut top = Certificate::new("top", json!({}), VerifiedRange::new("n", 1, 1));
        let ok = Certificate::new("a", json!({}), VerifiedRange::new("n", 1, 1));
        let mut bad = Certificate::new("b", json!({}), VerifiedRange::new("n", 1, 1));
        bad.fail(json!(0));
        top.push_part(ok);
        assert!(top.passed());
        top.push_part(bad);
        assert!(!top.passed());
        let round: Certificate = serde_json::from_str(&serde_json::to_string(&top).unwrap()).unwrap();
        assert_eq!(round, top);
    }
}
