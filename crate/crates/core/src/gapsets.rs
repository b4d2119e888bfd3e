//! Gap sets `D ⊆ ℕ`: rule descriptions, bounded enumeration, and the
//! divide / filter-multiples transforms.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{Certificate, VerifiedRange};
use crate::exactnum::{format_rational, int, serde_rational_vec, BigRational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GapSetError {
    #[error("invalid set definition: {0}")]
    InvalidSpec(String),
    #[error("enumeration bound must be at least 1")]
    ZeroBound,
    #[error("set kind `{0}` has no indexed term form")]
    NoIndexedForm(&'static str),
    #[error("invalid view: {0}")]
    InvalidView(String),
}

/// A rule describing a set of positive integers.
///
/// JSON form is tagged by `kind`, e.g. `{"kind":"geometric","base":2}` or
/// `{"kind":"polynomial","coeffs":["1/2","0"]}` (coefficients from the
/// leading term down to the constant term).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GapSetSpec {
    /// {1, 2, 3, 5, 8, …}: Fibonacci numbers as a set, the repeated 1 removed.
    Fibonacci,
    /// f₃ₙ for n ≥ 1: {2, 8, 34, …}.
    EvenFibonacci,
    /// Pell numbers {1, 2, 5, 12, 29, …}.
    Pell,
    /// {1, b, b², …}.
    Geometric { base: u64 },
    /// {p(n) : n ≥ 1} ∩ ℕ for p with rational coefficients, positive leading
    /// coefficient and p(0) = 0.
    Polynomial {
        #[serde(with = "serde_rational_vec")]
        coeffs: Vec<BigRational>,
    },
    /// Vₘ = {n : m ∤ n}.
    Nonmultiples { m: u64 },
    Primes,
    Explicit { elements: Vec<u64> },
    Union { of: Vec<GapSetSpec> },
    /// {a/d : a ∈ A, d | a}.
    Divided { of: Box<GapSetSpec>, d: u64 },
    /// {a ∈ A : d | a}.
    MultiplesFiltered { of: Box<GapSetSpec>, d: u64 },
    /// {a + c : a ∈ A} ∩ ℕ.
    Shifted { of: Box<GapSetSpec>, c: i64 },
}

impl GapSetSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            GapSetSpec::Fibonacci => "fibonacci",
            GapSetSpec::EvenFibonacci => "even_fibonacci",
            GapSetSpec::Pell => "pell",
            GapSetSpec::Geometric { .. } => "geometric",
            GapSetSpec::Polynomial { .. } => "polynomial",
            GapSetSpec::Nonmultiples { .. } => "nonmultiples",
            GapSetSpec::Primes => "primes",
            GapSetSpec::Explicit { .. } => "explicit",
            GapSetSpec::Union { .. } => "union",
            GapSetSpec::Divided { .. } => "divided",
            GapSetSpec::MultiplesFiltered { .. } => "multiples_filtered",
            GapSetSpec::Shifted { .. } => "shifted",
        }
    }

    pub fn explicit(elements: impl IntoIterator<Item = u64>) -> Self {
        GapSetSpec::Explicit {
            elements: elements.into_iter().collect(),
        }
    }

    pub fn polynomial(coeffs: Vec<BigRational>) -> Result<Self, GapSetError> {
        let spec = GapSetSpec::Polynomial { coeffs };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks every hypothesis a kind carries, recursively.
    pub fn validate(&self) -> Result<(), GapSetError> {
        let bad = |m: String| Err(GapSetError::InvalidSpec(m));
        match self {
            GapSetSpec::Geometric { base } if *base < 2 => bad(format!("geometric base {base} < 2")),
            GapSetSpec::Polynomial { coeffs } => {
                if coeffs.len() < 2 {
                    return bad("polynomial needs degree ≥ 1 (at least two coefficients)".into());
                }
                if !coeffs[0].is_positive() {
                    return bad(format!(
                        "polynomial leading coefficient {} is not positive",
                        format_rational(&coeffs[0])
                    ));
                }
                let constant = coeffs.last().expect("nonempty");
                if !constant.is_zero() {
                    return bad(format!(
                        "polynomial constant term {} is not zero",
                        format_rational(constant)
                    ));
                }
                Ok(())
            }
            GapSetSpec::Nonmultiples { m } if *m == 0 => bad("nonmultiples of 0".into()),
            GapSetSpec::Explicit { elements } if elements.contains(&0) => {
                bad("explicit sets hold positive integers only".into())
            }
            GapSetSpec::Union { of } => of.iter().try_for_each(|s| s.validate()),
            GapSetSpec::Divided { d: 0, .. } | GapSetSpec::MultiplesFiltered { d: 0, .. } => {
                bad("divisor must be at least 1".into())
            }
            GapSetSpec::Divided { of, .. }
            | GapSetSpec::MultiplesFiltered { of, .. }
            | GapSetSpec::Shifted { of, .. } => of.validate(),
            _ => Ok(()),
        }
    }

    /// The first `count` elements d₁ < d₂ < … as unbounded integers. Only
    /// the recurrence-defined kinds have this form; these are the ones whose
    /// elements outgrow machine integers.
    pub fn terms(&self, count: usize) -> Result<Vec<BigInt>, GapSetError> {
        self.validate()?;
        let out = match self {
            GapSetSpec::Fibonacci => fibonacci_numbers(count + 2).into_iter().skip(2).take(count).collect(),
            GapSetSpec::EvenFibonacci => fibonacci_numbers(3 * count + 1)
                .into_iter()
                .enumerate()
                .filter(|(i, _)| *i > 0 && i % 3 == 0)
                .map(|(_, f)| f)
                .take(count)
                .collect(),
            GapSetSpec::Pell => {
                let mut v = Vec::with_capacity(count);
                let (mut a, mut b) = (BigInt::one(), BigInt::from(2));
                for _ in 0..count {
                    v.push(a.clone());
                    let next = &b * 2 + &a;
                    a = std::mem::replace(&mut b, next);
                }
                v
            }
            GapSetSpec::Geometric { base } => {
                let base = BigInt::from(*base);
                let mut x = BigInt::one();
                let mut v = Vec::with_capacity(count);
                for _ in 0..count {
                    v.push(x.clone());
                    x *= &base;
                }
                v
            }
            other => return Err(GapSetError::NoIndexedForm(other.kind_name())),
        };
        Ok(out)
    }
}

/// Fibonacci numbers f₀ … f_{n−1} with f₀ = 0, f₁ = f₂ = 1.
pub fn fibonacci_numbers(n: usize) -> Vec<BigInt> {
    let mut v = Vec::with_capacity(n);
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        v.push(a.clone());
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    v
}

/// Sorted prefix of a gap set, complete up to `bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSetView {
    elements: Vec<u64>,
    bound: u64,
}

impl GapSetView {
    /// Builds a view from elements that must already be strictly increasing,
    /// positive, and at most `bound`.
    pub fn new(elements: Vec<u64>, bound: u64) -> Result<Self, GapSetError> {
        if elements.first() == Some(&0) {
            return Err(GapSetError::InvalidView("elements must be positive".into()));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GapSetError::InvalidView("elements must be strictly increasing".into()));
        }
        if elements.last().is_some_and(|&x| x > bound) {
            return Err(GapSetError::InvalidView("element exceeds bound".into()));
        }
        Ok(GapSetView { elements, bound })
    }

    fn from_unsorted(mut elements: Vec<u64>, bound: u64) -> Self {
        elements.retain(|&x| x >= 1 && x <= bound);
        elements.sort_unstable();
        elements.dedup();
        GapSetView { elements, bound }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Elements strictly below `x`.
    pub fn below(&self, x: u64) -> &[u64] {
        let end = self.elements.partition_point(|&d| d < x);
        &self.elements[..end]
    }

    /// The same set cut down to a smaller bound.
    pub fn truncate(&self, bound: u64) -> GapSetView {
        let end = self.elements.partition_point(|&d| d <= bound);
        GapSetView {
            elements: self.elements[..end].to_vec(),
            bound: bound.min(self.bound),
        }
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        self.elements.iter().map(|&d| BigInt::from(d)).collect()
    }
}

/// All members of `spec` that are ≤ `bound`, sorted and deduplicated.
pub fn enumerate(spec: &GapSetSpec, bound: u64) -> Result<GapSetView, GapSetError> {
    if bound == 0 {
        return Err(GapSetError::ZeroBound);
    }
    spec.validate()?;
    Ok(GapSetView::from_unsorted(raw_members(spec, bound), bound))
}

fn raw_members(spec: &GapSetSpec, n: u64) -> Vec<u64> {
    match spec {
        GapSetSpec::Fibonacci => {
            let (mut a, mut b) = (1u64, 2u64);
            let mut v = Vec::new();
            while a <= n {
                v.push(a);
                let Some(next) = a.checked_add(b) else {
                    if b <= n {
                        v.push(b);
                    }
                    break;
                };
                a = std::mem::replace(&mut b, next);
            }
            v
        }
        GapSetSpec::EvenFibonacci => {
            // every third Binet-indexed Fibonacci number, starting at f₃
            let (mut a, mut b) = (0u64, 1u64);
            let mut v = Vec::new();
            let mut i = 0u64;
            loop {
                if i > 0 && i % 3 == 0 {
                    if a > n {
                        break;
                    }
                    v.push(a);
                }
                let Some(next) = a.checked_add(b) else {
                    if (i + 1) % 3 == 0 && b <= n {
                        v.push(b);
                    }
                    break;
                };
                a = std::mem::replace(&mut b, next);
                i += 1;
            }
            v
        }
        GapSetSpec::Pell => {
            let (mut a, mut b) = (1u64, 2u64);
            let mut v = Vec::new();
            while a <= n {
                v.push(a);
                let Some(next) = b.checked_mul(2).and_then(|x| x.checked_add(a)) else {
                    if b <= n {
                        v.push(b);
                    }
                    break;
                };
                a = std::mem::replace(&mut b, next);
            }
            v
        }
        GapSetSpec::Geometric { base } => {
            let mut v = Vec::new();
            let mut x = 1u64;
            while x <= n {
                v.push(x);
                match x.checked_mul(*base) {
                    Some(y) => x = y,
                    None => break,
                }
            }
            v
        }
        GapSetSpec::Polynomial { coeffs } => polynomial_members(coeffs, n),
        GapSetSpec::Nonmultiples { m } => (1..=n).filter(|x| x % m != 0).collect(),
        GapSetSpec::Primes => primes_upto(n),
        GapSetSpec::Explicit { elements } => elements.clone(),
        GapSetSpec::Union { of } => {
            let mut all: BTreeSet<u64> = BTreeSet::new();
            for s in of {
                all.extend(raw_members(s, n));
            }
            all.into_iter().collect()
        }
        GapSetSpec::Divided { of, d } => raw_members(of, n.saturating_mul(*d))
            .into_iter()
            .filter(|a| a % d == 0)
            .map(|a| a / d)
            .collect(),
        GapSetSpec::MultiplesFiltered { of, d } => {
            raw_members(of, n).into_iter().filter(|a| a % d == 0).collect()
        }
        GapSetSpec::Shifted { of, c } => {
            if *c >= 0 {
                let c = *c as u64;
                if n <= c {
                    return Vec::new();
                }
                raw_members(of, n - c).into_iter().map(|a| a + c).collect()
            } else {
                let c = c.unsigned_abs();
                raw_members(of, n.saturating_add(c))
                    .into_iter()
                    .filter(|&a| a > c)
                    .map(|a| a - c)
                    .collect()
            }
        }
    }
}

fn polynomial_members(coeffs: &[BigRational], n: u64) -> Vec<u64> {
    // Clear denominators: L·p(x) has integer coefficients.
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * int(lcm.clone())).to_integer())
        .collect();
    // For x ≥ 1, p(x) ≥ x^{k−1}(a_k·x − Σ|a_i|), so p(x) > n once
    // x > (n + Σ|a_i|)/a_k.
    let lead = &coeffs[0];
    let tail: BigRational = coeffs[1..].iter().map(|c| c.abs()).sum();
    let limit: BigInt = ((int(n) + tail) / lead).floor().to_integer() + 1;
    let limit = limit.to_u64().unwrap_or(u64::MAX);
    let bound = BigInt::from(n) * &lcm;
    let mut v = Vec::new();
    for x in 1..=limit {
        let x = BigInt::from(x);
        let val = ints.iter().fold(BigInt::zero(), |acc, c| acc * &x + c);
        if val.is_positive() && val <= bound && val.is_multiple_of(&lcm) {
            if let Some(m) = (val / &lcm).to_u64() {
                v.push(m);
            }
        }
    }
    v
}

fn primes_upto(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(i, _)| i as u64)
        .collect()
}

/// `{a/d : a ∈ A, d | a}` as a new rule.
pub fn divide(spec: &GapSetSpec, d: u64) -> Result<GapSetSpec, GapSetError> {
    match d {
        0 => Err(GapSetError::InvalidSpec("divisor must be at least 1".into())),
        1 => Ok(spec.clone()),
        _ => Ok(GapSetSpec::Divided {
            of: Box::new(spec.clone()),
            d,
        }),
    }
}

/// `{a ∈ A : d | a}` as a new rule.
pub fn filter_multiples(spec: &GapSetSpec, d: u64) -> Result<GapSetSpec, GapSetError> {
    match d {
        0 => Err(GapSetError::InvalidSpec("divisor must be at least 1".into())),
        1 => Ok(spec.clone()),
        _ => Ok(GapSetSpec::MultiplesFiltered {
            of: Box::new(spec.clone()),
            d,
        }),
    }
}

/// Checks `d_{i+1} ≥ ρ·d_i` for every consecutive pair starting at the
/// zero-based position `start`.
pub fn growth_certificate(view: &GapSetView, rho: &BigRational, start: usize) -> Certificate {
    growth_certificate_terms(&view.to_bigints(), rho, start)
}

/// [`growth_certificate`] over explicit unbounded terms.
pub fn growth_certificate_terms(terms: &[BigInt], rho: &BigRational, start: usize) -> Certificate {
    let last = terms.len().saturating_sub(1) as u64;
    let mut cert = Certificate::new(
        "growth",
        json!({ "rho": format_rational(rho), "start": start, "terms": terms.len() }),
        VerifiedRange::new("i", start as u64, last),
    );
    for i in start..terms.len().saturating_sub(1) {
        let lhs = int(terms[i + 1].clone());
        let rhs = rho * int(terms[i].clone());
        if lhs < rhs {
            cert.fail(json!({
                "index": i,
                "d": terms[i].to_string(),
                "next": terms[i + 1].to_string(),
            }));
            break;
        }
    }
    cert
}

/// Positive pairwise differences of the view's elements.
pub fn difference_set(view: &GapSetView) -> GapSetView {
    let xs = view.elements();
    let mut diffs = Vec::with_capacity(xs.len() * xs.len().saturating_sub(1) / 2);
    for (i, &a) in xs.iter().enumerate() {
        for &b in &xs[i + 1..] {
            diffs.push(b - a);
        }
    }
    GapSetView::from_unsorted(diffs, view.bound())
}
