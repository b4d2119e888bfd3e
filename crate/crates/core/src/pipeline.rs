//! End to end: from a gap set with fast growth to a certified coloring.
//!
//! growth check → nested intervals → `{α·d} ∈ [ε₁, (r−1)/r]` over the
//! listed terms → fractional-part coloring → diffsequence scan.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{Certificate, VerifiedRange};
use crate::construct::{build_alpha_for_terms, diffseq_bound_from_eps, growth_factor, AlphaCertificate, ConstructError};
use crate::exactnum::{format_rational, BigRational, Q5};
use crate::gapsets::{enumerate, growth_certificate_terms, GapSetError, GapSetSpec};
use crate::search::{doa_evidence_with_terms, SearchError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    GapSet(#[from] GapSetError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{kind} has only {have} elements up to {bound}; the construction needs {need}")]
    NotEnoughTerms {
        kind: &'static str,
        have: usize,
        need: usize,
        bound: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineParams {
    pub spec: GapSetSpec,
    pub r: u32,
    pub delta: BigRational,
    /// Number of nested intervals.
    pub steps: usize,
    /// Length of the scanned coloring.
    pub n: usize,
    /// One-based index of the first element from which growth holds.
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineResult {
    pub alpha: AlphaCertificate,
    pub forbidden_length: u64,
    pub certificate: Certificate,
}

/// Elements `d₁, …, d_count`, exactly.
fn leading_terms(spec: &GapSetSpec, count: usize, fallback_bound: u64) -> Result<Vec<BigInt>, PipelineError> {
    match spec.terms(count) {
        Ok(t) => Ok(t),
        Err(GapSetError::NoIndexedForm(kind)) => {
            let view = enumerate(spec, fallback_bound)?;
            if view.len() < count {
                return Err(PipelineError::NotEnoughTerms {
                    kind,
                    have: view.len(),
                    need: count,
                    bound: fallback_bound,
                });
            }
            Ok(view.elements()[..count].iter().map(|&d| BigInt::from(d)).collect())
        }
        Err(e) => Err(e.into()),
    }
}

pub fn run_pipeline(p: &PipelineParams) -> Result<PipelineResult, PipelineError> {
    let count = p.start.saturating_sub(1) + p.steps;
    let terms = leading_terms(&p.spec, count, p.n.max(1) as u64)?;
    let alpha = build_alpha_for_terms(&terms, p.start, p.r, &p.delta, p.steps)?;

    let mut cert = Certificate::new(
        "pipeline",
        json!({
            "set": p.spec,
            "r": p.r,
            "delta": format_rational(&p.delta),
            "steps": p.steps,
            "n": p.n,
            "start": p.start,
            "alpha": format_rational(&alpha.alpha),
            "eps": format_rational(&alpha.eps),
            "eps1": format_rational(&alpha.eps1),
        }),
        VerifiedRange::new("x", 1, p.n as u64),
    );
    cert.push_part(growth_certificate_terms(
        &terms,
        &growth_factor(p.r, &p.delta),
        p.start - 1,
    ));

    let view = enumerate(&p.spec, p.n.max(1) as u64)?;
    let mut all: Vec<BigInt> = view.to_bigints();
    all.extend(terms.iter().cloned());
    all.sort();
    all.dedup();
    let evidence = doa_evidence_with_terms(&view, &all, &Q5::from_rational(alpha.alpha.clone()), &alpha.eps1, p.r, p.n)?;
    cert.push_part(evidence);

    Ok(PipelineResult {
        forbidden_length: diffseq_bound_from_eps(p.r, &alpha.eps1)?,
        alpha,
        certificate: cert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::epsilon_of;
    use crate::exactnum::rat;

    fn params(spec: GapSetSpec, r: u32, delta: BigRational, steps: usize, n: usize) -> PipelineParams {
        PipelineParams {
            spec,
            r,
            delta,
            steps,
            n,
            start: 1,
        }
    }

    #[test]
    fn geometric_four() {
        let res = run_pipeline(&params(GapSetSpec::Geometric { base: 4 }, 2, rat(1, 1), 20, 5_000)).unwrap();
        assert!(res.certificate.passed(), "{:?}", res.certificate);
        assert_eq!(res.alpha.eps, rat(1, 8));
        assert_eq!(res.forbidden_length, 5);
        assert_eq!(&res.alpha.z[..4], &[0, 1, 5, 21].map(BigInt::from));
    }

    #[test]
    fn fibonacci_is_too_slow() {
        let e = run_pipeline(&params(GapSetSpec::Fibonacci, 2, rat(1, 2), 10, 100)).unwrap_err();
        assert!(
            matches!(e, PipelineError::Construct(ConstructError::GrowthViolated { index: 1, .. })),
            "{e}"
        );
    }

    #[test]
    fn three_colors() {
        let res = run_pipeline(&params(GapSetSpec::Geometric { base: 8 }, 3, rat(1, 1), 12, 5_000)).unwrap();
        assert!(res.certificate.passed());
        assert_eq!(res.alpha.eps, epsilon_of(3, &rat(1, 1)).unwrap());
        assert_eq!(res.forbidden_length, 3);
    }

    #[test]
    fn late_growth_uses_rescaled_epsilon() {
        // 1, 2, 3 grow slowly; from 3 on each step is ×4.
        let spec = GapSetSpec::explicit([1, 2, 3, 12, 48, 192, 768, 3072]);
        let mut p = params(spec, 2, rat(1, 1), 6, 4_000);
        p.start = 3;
        let res = run_pipeline(&p).unwrap();
        assert_eq!(res.alpha.eps1, rat(1, 24));
        assert_eq!(res.forbidden_length, 13);
        assert!(res.certificate.passed(), "{:?}", res.certificate);
        p.steps = 7;
        assert!(matches!(run_pipeline(&p), Err(PipelineError::NotEnoughTerms { .. })));
    }
}
