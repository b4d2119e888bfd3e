//! Nested-interval construction of a rotation number α whose multiples
//! `{α·qₙ}` stay inside `[ε, (r−1)/r]` for a fast-growing sequence qₙ, and
//! the certificate machinery that turns such an α into a bound on
//! monochromatic D-diffsequences.
//!
//! With growth factor `g = 2 + 1/(r−1) + δ` and
//! `ε = δ(r−1) / (r·g)`, the recursion keeps
//!
//! ```text
//! I_k = [(z_k + ε)/q_k, (r·z_k + (r−1))/(r·q_k)]
//! ```
//!
//! and picks `z_{k+1} = ⌈q_{k+1}(z_k + ε)/q_k⌉`, the smallest integer whose
//! ratio with `q_{k+1}` lands in the left sub-interval of width `1/q_{k+1}`.
//! All endpoints are exact rationals and every nesting step is asserted.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{Certificate, VerifiedRange};
use crate::exactnum::{
    ceil_rational, format_rational, int, serde_bigint, serde_rational, BigRational, Q5, RatInterval,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("growth hypothesis violated at n = {index}: q_(n+1) = {next} < ({factor})·q_n = ({factor})·{current}")]
    GrowthViolated {
        index: usize,
        current: String,
        next: String,
        factor: String,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

/// `ε = δ(r−1) / (r(2 + (r−1)⁻¹ + δ))`.
pub fn epsilon_of(r: u32, delta: &BigRational) -> Result<BigRational, ConstructError> {
    check_r_delta(r, delta)?;
    let rm1 = int(r - 1);
    Ok(delta * &rm1 / (int(r) * growth_factor(r, delta)))
}

/// `2 + (r−1)⁻¹ + δ`.
pub fn growth_factor(r: u32, delta: &BigRational) -> BigRational {
    int(2) + BigRational::new(BigInt::one(), BigInt::from(r - 1)) + delta
}

fn check_r_delta(r: u32, delta: &BigRational) -> Result<(), ConstructError> {
    if r < 2 {
        return Err(ConstructError::InvalidParameter(format!("r = {r} must be at least 2")));
    }
    if !delta.is_positive() {
        return Err(ConstructError::InvalidParameter(format!(
            "δ = {} must be positive",
            format_rational(delta)
        )));
    }
    Ok(())
}

/// State of the recursion after `step` intervals have been fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedState {
    pub r: u32,
    #[serde(with = "serde_rational")]
    pub delta: BigRational,
    #[serde(with = "serde_rational")]
    pub eps: BigRational,
    #[serde(with = "bigint_list")]
    pub q: Vec<BigInt>,
    #[serde(with = "bigint_list")]
    pub z: Vec<BigInt>,
    pub interval: RatInterval,
    pub step: usize,
}

impl NestedState {
    fn initial(q: &[BigInt], r: u32, delta: &BigRational, eps: BigRational) -> Self {
        let q1 = int(q[0].clone());
        let lo = &eps / &q1;
        let hi = int(r - 1) / (int(r) * &q1);
        NestedState {
            r,
            delta: delta.clone(),
            eps,
            q: q.to_vec(),
            z: vec![BigInt::zero()],
            interval: RatInterval::new(lo, hi).expect("ε ≤ (r−1)/r"),
            step: 1,
        }
    }

    /// `[(z+ε)/q, (r·z + (r−1))/(r·q)]`.
    fn interval_for(&self, z: &BigInt, q: &BigInt) -> Result<RatInterval, ConstructError> {
        let q = int(q.clone());
        let r = int(self.r);
        let lo = (int(z.clone()) + &self.eps) / &q;
        let hi = (&r * int(z.clone()) + int(self.r - 1)) / (&r * &q);
        RatInterval::new(lo, hi).map_err(|e| ConstructError::Internal(e.to_string()))
    }

    /// `((r−1) − rε)/(r·q_k)`.
    fn expected_width(&self, qk: &BigInt) -> BigRational {
        let r = int(self.r);
        (int(self.r - 1) - &r * &self.eps) / (r * int(qk.clone()))
    }

    /// Advances from `I_k` to `I_{k+1}`.
    fn advance(&mut self) -> Result<(), ConstructError> {
        let k = self.step;
        let qk = int(self.q[k - 1].clone());
        let qn = self.q[k].clone();
        let left = (int(self.z[k - 1].clone()) + &self.eps) / &qk;
        let z_next = ceil_rational(&(&left * int(qn.clone())));

        let ratio = BigRational::new(z_next.clone(), qn.clone());
        let sub = RatInterval::new(left.clone(), &left + BigRational::new(BigInt::one(), qn.clone()))
            .map_err(|e| ConstructError::Internal(e.to_string()))?;
        if !sub.contains(&ratio) {
            return Err(ConstructError::Internal(format!(
                "z_{} / q_{} = {} is outside the left sub-interval {sub}",
                k + 1,
                k + 1,
                format_rational(&ratio)
            )));
        }
        let next = self.interval_for(&z_next, &qn)?;
        if !next.is_subset_of(&self.interval) {
            return Err(ConstructError::Internal(format!(
                "I_{} = {next} is not nested in I_{k} = {}",
                k + 1,
                self.interval
            )));
        }
        if next.width() != self.expected_width(&qn) {
            return Err(ConstructError::Internal(format!("|I_{}| has the wrong width", k + 1)));
        }
        self.z.push(z_next);
        self.interval = next;
        self.step += 1;
        Ok(())
    }
}

mod bigint_list {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| BigInt::from_str(s).map_err(D::Error::custom))
            .collect()
    }
}

/// Per-index check of `{α·qₙ} ∈ [ε, (r−1)/r]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FracVerdict {
    pub n: usize,
    #[serde(with = "serde_bigint")]
    pub q: BigInt,
    #[serde(with = "serde_rational")]
    pub frac: BigRational,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaCertificate {
    #[serde(with = "serde_rational")]
    pub alpha: BigRational,
    pub enclosure: RatInterval,
    #[serde(with = "serde_rational")]
    pub eps: BigRational,
    /// ε rescaled to cover the elements before the growth index: `ε·d₁/d_N`.
    #[serde(with = "serde_rational")]
    pub eps1: BigRational,
    pub r: u32,
    pub steps: usize,
    /// One-based index N into D where the q-sequence starts (qₙ = d_{n+N−1}).
    pub start: usize,
    #[serde(with = "bigint_list")]
    pub z: Vec<BigInt>,
    pub intervals: Vec<RatInterval>,
    pub verdicts: Vec<FracVerdict>,
}

impl AlphaCertificate {
    pub fn all_verdicts_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.ok)
    }

    pub fn alpha_q5(&self) -> Q5 {
        Q5::from_rational(self.alpha.clone())
    }
}

fn frac_rational(x: &BigRational) -> BigRational {
    x - int(x.floor().to_integer())
}

/// Runs the nested-interval recursion over `q₁ … q_m`.
pub fn build_alpha(
    q: &[BigInt],
    r: u32,
    delta: &BigRational,
    steps: usize,
) -> Result<AlphaCertificate, ConstructError> {
    check_r_delta(r, delta)?;
    if steps == 0 || steps > q.len() {
        return Err(ConstructError::InvalidParameter(format!(
            "step count {steps} must be in 1..={}",
            q.len()
        )));
    }
    let q = &q[..steps];
    if let Some(i) = q.iter().position(|x| !x.is_positive()) {
        return Err(ConstructError::InvalidParameter(format!("q_{} is not positive", i + 1)));
    }
    let factor = growth_factor(r, delta);
    for (i, w) in q.windows(2).enumerate() {
        if int(w[1].clone()) < &factor * int(w[0].clone()) {
            return Err(ConstructError::GrowthViolated {
                index: i + 1,
                current: w[0].to_string(),
                next: w[1].to_string(),
                factor: format_rational(&factor),
            });
        }
    }

    let eps = epsilon_of(r, delta)?;
    let mut state = NestedState::initial(q, r, delta, eps.clone());
    let mut intervals = vec![state.interval.clone()];
    if state.interval.width() != state.expected_width(&q[0]) {
        return Err(ConstructError::Internal("|I_1| has the wrong width".into()));
    }
    while state.step < steps {
        state.advance()?;
        intervals.push(state.interval.clone());
    }

    let alpha = state.interval.midpoint();
    let upper = BigRational::new(BigInt::from(r - 1), BigInt::from(r));
    let verdicts = q
        .iter()
        .enumerate()
        .map(|(i, qn)| {
            let frac = frac_rational(&(&alpha * int(qn.clone())));
            let ok = frac >= eps && frac <= upper;
            FracVerdict {
                n: i + 1,
                q: qn.clone(),
                frac,
                ok,
            }
        })
        .collect();

    Ok(AlphaCertificate {
        alpha,
        enclosure: state.interval,
        eps1: eps.clone(),
        eps,
        r,
        steps,
        start: 1,
        z: state.z,
        intervals,
        verdicts,
    })
}

/// Builds α from a gap set's terms `d₁ < d₂ < …`, using qₙ = d_{n+N−1}
/// (`start` = N, one-based) and reporting the rescaled `ε₁ = ε·d₁/d_N`
/// that covers the skipped prefix.
pub fn build_alpha_for_terms(
    terms: &[BigInt],
    start: usize,
    r: u32,
    delta: &BigRational,
    steps: usize,
) -> Result<AlphaCertificate, ConstructError> {
    if start == 0 || start > terms.len() {
        return Err(ConstructError::InvalidParameter(format!(
            "start index {start} must be in 1..={}",
            terms.len()
        )));
    }
    let q = &terms[start - 1..];
    let mut cert = build_alpha(q, r, delta, steps).map_err(|e| match e {
        ConstructError::GrowthViolated {
            index,
            current,
            next,
            factor,
        } => ConstructError::GrowthViolated {
            index: index + start - 1,
            current,
            next,
            factor,
        },
        other => other,
    })?;
    cert.start = start;
    cert.eps1 = &cert.eps * BigRational::new(terms[0].clone(), terms[start - 1].clone());
    Ok(cert)
}

/// Checks `{α·d} ∈ [ε, (r−1)/r]` exactly for every listed `d`.
///
/// The certificate covers only the listed terms; nothing is claimed beyond them.
pub fn certify_fracs(
    alpha: &Q5,
    terms: &[BigInt],
    eps: &BigRational,
    r: u32,
) -> Result<Certificate, ConstructError> {
    if r < 2 {
        return Err(ConstructError::InvalidParameter(format!("r = {r} must be at least 2")));
    }
    let upper = BigRational::new(BigInt::from(r - 1), BigInt::from(r));
    if !eps.is_positive() || *eps > upper {
        return Err(ConstructError::InvalidParameter(format!(
            "ε = {} must lie in (0, (r−1)/r]",
            format_rational(eps)
        )));
    }
    let mut cert = Certificate::new(
        "frac_window",
        json!({
            "alpha": alpha,
            "eps": format_rational(eps),
            "r": r,
            "terms": terms.len(),
            "largest": terms.iter().max().map(|d| d.to_string()),
        }),
        VerifiedRange::new("n", 1, terms.len() as u64),
    );
    for (i, d) in terms.iter().enumerate() {
        let f = alpha.mul_int(d).frac();
        let below = f.cmp_rational(eps).is_lt();
        let above = f.cmp_rational(&upper).is_gt();
        if below || above {
            cert.fail(json!({ "n": i + 1, "d": d.to_string(), "frac": f, "approx": f.to_f64() }));
            break;
        }
    }
    Ok(cert)
}

/// `⌈1/(rε)⌉ + 1`: colorings certified with this ε have no monochromatic
/// diffsequence of this many terms.
pub fn diffseq_bound_from_eps(r: u32, eps: &BigRational) -> Result<u64, ConstructError> {
    let upper = BigRational::new(BigInt::from(r.saturating_sub(1)), BigInt::from(r.max(1)));
    if r < 2 || !eps.is_positive() || *eps > upper {
        return Err(ConstructError::InvalidParameter(format!(
            "need r ≥ 2 and 0 < ε ≤ (r−1)/r, got r = {r}, ε = {}",
            format_rational(eps)
        )));
    }
    let inv = (int(r) * eps).recip();
    let c = ceil_rational(&inv);
    u64::try_from(c + 1).map_err(|_| ConstructError::InvalidParameter("bound overflows u64".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn big(xs: &[u64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_of(2, &rat(1, 2)).unwrap(), rat(1, 14));
        assert_eq!(epsilon_of(2, &rat(1, 1)).unwrap(), rat(1, 8));
        assert_eq!(epsilon_of(3, &rat(1, 1)).unwrap(), rat(4, 21));
        assert!(epsilon_of(1, &rat(1, 1)).is_err());
        assert!(epsilon_of(2, &rat(0, 1)).is_err());
    }

    #[test]
    fn worked_trace() {
        let c = build_alpha(&big(&[1, 4, 16, 64]), 2, &rat(1, 1), 4).unwrap();
        assert_eq!(c.z, big(&[0, 1, 5, 21]));
        assert_eq!(c.enclosure, RatInterval::new(rat(169, 512), rat(43, 128)).unwrap());
        assert_eq!(c.alpha, rat(341, 1024));
        assert!(c.all_verdicts_pass());
        let fr: Vec<f64> = c
            .verdicts
            .iter()
            .map(|v| num_traits::ToPrimitive::to_f64(&v.frac).unwrap())
            .collect();
        assert!((fr[0] - 0.3330).abs() < 1e-4);
        assert!((fr[1] - 0.3320).abs() < 1e-4);
        assert!((fr[2] - 0.3281).abs() < 1e-4);
        assert_eq!(c.verdicts[3].frac, rat(5, 16));
    }

    #[test]
    fn growth_violation_is_reported() {
        let e = build_alpha(&big(&[1, 2]), 2, &rat(1, 1), 2).unwrap_err();
        assert!(matches!(e, ConstructError::GrowthViolated { index: 1, .. }), "{e}");
        let e = build_alpha_for_terms(&big(&[1, 5, 20, 40]), 2, 2, &rat(1, 1), 3).unwrap_err();
        assert!(matches!(e, ConstructError::GrowthViolated { index: 3, .. }), "{e}");
    }

    #[test]
    fn single_step_base_case() {
        let c = build_alpha(&big(&[1, 4]), 2, &rat(1, 1), 1).unwrap();
        assert_eq!(c.enclosure, RatInterval::new(rat(1, 8), rat(1, 2)).unwrap());
        assert_eq!(c.alpha, rat(5, 16));
        assert_eq!(c.verdicts.len(), 1);
        assert_eq!(c.verdicts[0].frac, rat(5, 16));
        assert!(c.verdicts[0].ok);
    }

    #[test]
    fn rescaled_epsilon() {
        let terms = big(&[1, 2, 3, 12, 48, 192, 768]);
        let c = build_alpha_for_terms(&terms, 3, 2, &rat(1, 1), 5).unwrap();
        assert_eq!(c.eps1, rat(1, 8) * rat(1, 3));
        let cert = certify_fracs(&c.alpha_q5(), &terms, &c.eps1, 2).unwrap();
        assert!(cert.passed(), "{cert:?}");
    }

    #[test]
    fn certify_examples() {
        let c = certify_fracs(&Q5::from_rational(rat(1, 2)), &big(&[2]), &rat(1, 4), 2).unwrap();
        assert!(!c.passed());
        assert_eq!(c.counterexample.as_ref().unwrap()["frac"], json!({"a": "0", "b": "0"}));
        let c = certify_fracs(&Q5::from_rational(rat(341, 1024)), &big(&[1, 4, 16, 64]), &rat(1, 8), 2)
            .unwrap();
        assert!(c.passed());
        assert!(certify_fracs(&Q5::one(), &big(&[1]), &rat(0, 1), 2).is_err());
        assert!(certify_fracs(&Q5::one(), &big(&[1]), &rat(3, 4), 2).is_err());
    }

    #[test]
    fn bound_examples() {
        assert_eq!(diffseq_bound_from_eps(2, &rat(21, 100)).unwrap(), 4);
        assert_eq!(diffseq_bound_from_eps(2, &rat(1, 10)).unwrap(), 6);
        assert_eq!(diffseq_bound_from_eps(2, &rat(1, 2)).unwrap(), 2);
        assert_eq!(diffseq_bound_from_eps(2, &rat(1, 8)).unwrap(), 5);
        assert!(diffseq_bound_from_eps(2, &rat(0, 1)).is_err());
    }

    #[test]
    fn trace_json_round_trip() {
        let c = build_alpha(&big(&[1, 4, 16]), 2, &rat(1, 1), 3).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["alpha"], json!("85/256"));
        assert_eq!(v["z"], json!(["0", "1", "5"]));
        let back: AlphaCertificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }
}
