//! Exhaustive scans of colored prefixes for monochromatic D-diffsequences and
//! D-APs, and the Fibonacci facts behind the two explicit 2-colorings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{Certificate, ProofStatus, VerifiedRange};
use crate::colorings::Coloring;
use crate::exactnum::{format_rational, int, BigRational, Q5};
use crate::gapsets::{fibonacci_numbers, GapSetSpec, GapSetView};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("gap set enumerated only to {bound}, but the coloring has {n} positions")]
    ViewTooShort { bound: u64, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown fact {name:?}; known facts: {}", FACTS.join(", "), name = .0)]
    UnknownFact(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    Diffsequence,
    Ap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub length: usize,
    pub witness: Vec<u64>,
    pub scanned: usize,
    pub structure: Structure,
}

fn check_view(c: &Coloring, d: &GapSetView) -> Result<(), VerifyError> {
    if c.len() > 1 && d.bound() < (c.len() - 1) as u64 {
        return Err(VerifyError::ViewTooShort {
            bound: d.bound(),
            n: c.len(),
        });
    }
    Ok(())
}

/// Longest monochromatic D-diffsequence in the coloring, by the DP
/// `L(x) = 1 + max{L(x−d) : d ∈ D, χ(x−d) = χ(x)}`.
pub fn longest_mono_diffseq(c: &Coloring, d: &GapSetView) -> Result<ScanResult, VerifyError> {
    check_view(c, d)?;
    let n = c.len();
    let w = c.word();
    let gaps = d.below(n as u64);
    let mut len = vec![0u32; n + 1];
    let mut back = vec![0u32; n + 1];
    let (mut best, mut best_at) = (0u32, 0usize);
    for x in 1..=n {
        let cx = w[x - 1];
        let (mut l, mut from) = (1u32, 0u32);
        for &g in gaps {
            let g = g as usize;
            if g >= x {
                break;
            }
            let y = x - g;
            if w[y - 1] == cx && len[y] + 1 > l {
                l = len[y] + 1;
                from = y as u32;
            }
        }
        len[x] = l;
        back[x] = from;
        if l > best {
            best = l;
            best_at = x;
        }
    }
    let mut witness = Vec::with_capacity(best as usize);
    let mut x = best_at;
    while x != 0 {
        witness.push(x as u64);
        x = back[x] as usize;
    }
    witness.reverse();
    Ok(ScanResult {
        length: best as usize,
        witness,
        scanned: n,
        structure: Structure::Diffsequence,
    })
}

/// Longest monochromatic progression `a, a+d, …` with a single gap `d ∈ D`.
/// Gaps are scanned in parallel; ties go to the smallest gap, then the
/// earliest progression.
pub fn longest_mono_ap(c: &Coloring, d: &GapSetView) -> Result<ScanResult, VerifyError> {
    check_view(c, d)?;
    let n = c.len();
    let w = c.word();
    let gaps = d.below(n as u64);
    // (length, gap, end position) per gap.
    let best = gaps
        .par_iter()
        .map(|&g| {
            let g = g as usize;
            let mut run = vec![1u32; n + 1];
            let (mut l, mut end) = (1u32, 1usize);
            for x in g + 1..=n {
                if w[x - 1] == w[x - g - 1] {
                    run[x] = run[x - g] + 1;
                    if run[x] > l {
                        l = run[x];
                        end = x;
                    }
                }
            }
            (l, g, end)
        })
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let (length, witness) = match best {
        _ if n == 0 => (0, Vec::new()),
        Some((l, g, end)) if l > 1 => {
            let start = end - (l as usize - 1) * g;
            (l as usize, (0..l as usize).map(|i| (start + i * g) as u64).collect())
        }
        _ => (1, vec![1]),
    };
    Ok(ScanResult {
        length,
        witness,
        scanned: n,
        structure: Structure::Ap,
    })
}

/// Looks for two same-colored positions whose difference lies in D. The
/// result has length 2 and the first such pair (by larger element, then by
/// smaller gap) when one exists, else length 1.
pub fn chromatically_intersective_check(c: &Coloring, d: &GapSetView) -> Result<ScanResult, VerifyError> {
    check_view(c, d)?;
    let n = c.len();
    let w = c.word();
    for x in 1..=n {
        for &g in d.below(x as u64) {
            let y = x - g as usize;
            if w[y - 1] == w[x - 1] {
                return Ok(ScanResult {
                    length: 2,
                    witness: vec![y as u64, x as u64],
                    scanned: n,
                    structure: Structure::Diffsequence,
                });
            }
        }
    }
    Ok(ScanResult {
        length: n.min(1),
        witness: if n > 0 { vec![1] } else { Vec::new() },
        scanned: n,
        structure: Structure::Diffsequence,
    })
}

/// Whether `xs` is a monochromatic strictly increasing chain with every
/// consecutive gap in D (or, for APs, one common gap in D).
pub fn is_mono_chain(c: &Coloring, d: &GapSetView, xs: &[u64], structure: Structure) -> bool {
    if xs.is_empty() || xs.iter().any(|&x| x == 0 || x as usize > c.len()) {
        return false;
    }
    let col = c.color(xs[0] as usize);
    if xs.iter().any(|&x| c.color(x as usize) != col) {
        return false;
    }
    let gaps: Vec<u64> = xs.windows(2).map(|p| p[1].wrapping_sub(p[0])).collect();
    if xs.windows(2).any(|p| p[1] <= p[0]) || !gaps.iter().all(|&g| d.contains(g)) {
        return false;
    }
    match structure {
        Structure::Diffsequence => true,
        Structure::Ap => gaps.windows(2).all(|p| p[0] == p[1]),
    }
}

/// Least `P > 0` with `(f_{n+P}, f_{n+P+1}) ≡ (f_n, f_{n+1}) (mod m)`.
pub fn pisano_period(m: u64) -> Result<u64, VerifyError> {
    if m < 2 {
        return Err(VerifyError::InvalidParameter(format!("modulus {m} must be at least 2")));
    }
    // The step (a, b) ↦ (b, a+b) is invertible mod m, so the orbit of (0, 1)
    // is a pure cycle.
    let (mut a, mut b, mut p) = (0u64, 1u64, 0u64);
    loop {
        let next = ((a as u128 + b as u128) % m as u128) as u64;
        a = b;
        b = next;
        p += 1;
        if a == 0 && b == 1 {
            return Ok(p);
        }
    }
}

pub const FACTS: &[&str] = &[
    "mod8_nonzero",
    "mod4_one",
    "binet_sqrt5",
    "binet_one_plus_phi",
    "even_fib_recurrence",
];

fn fib_mod(n: u64, m: u64) -> u64 {
    let (mut a, mut b) = (0u64, 1u64 % m);
    for _ in 0..n {
        let next = (a + b) % m;
        a = b;
        b = next;
    }
    a
}

/// Checks a registered Fibonacci fact for `n = 1..=bound` and, for the
/// modular facts, over a full period, which proves them for every n.
pub fn check_fib_fact(id: &str, bound: u64) -> Result<Certificate, VerifyError> {
    if bound == 0 {
        return Err(VerifyError::InvalidParameter("range bound must be positive".into()));
    }
    match id {
        "mod8_nonzero" => Ok(mod8_nonzero(bound)),
        "mod4_one" => Ok(mod4_one(bound)),
        "binet_sqrt5" => Ok(binet_identity(id, bound, |f_prev, f_n, f_next, conj_pow| {
            // √5·fₙ = f_{n−1} + f_{n+1} − 2φ̄ⁿ
            let lhs = Q5::sqrt5().mul_int(f_n);
            let rhs = Q5::from_integer(f_prev + f_next) - conj_pow.mul_int(&BigInt::from(2));
            (lhs, rhs)
        })),
        "binet_one_plus_phi" => Ok(binet_identity(id, bound, |_, f_n, f_next, conj_pow| {
            // (1+φ)·fₙ = fₙ + f_{n+1} − φ̄ⁿ
            let lhs = (Q5::one() + Q5::phi()).mul_int(f_n);
            let rhs = Q5::from_integer(f_n + f_next) - conj_pow.clone();
            (lhs, rhs)
        })),
        "even_fib_recurrence" => Ok(even_fib_recurrence(bound)),
        other => Err(VerifyError::UnknownFact(other.to_string())),
    }
}

fn mod8_nonzero(bound: u64) -> Certificate {
    let period = pisano_period(8).expect("8 ≥ 2");
    let mut cert = Certificate::new(
        "mod8_nonzero",
        json!({ "statement": "f(n-1) + f(n+1) != 0 mod 8", "modulus": 8 }),
        VerifiedRange::new("n", 1, bound.max(period + 1)),
    );
    // The residue of f_{n−1} + f_{n+1} depends only on n mod P, so a full
    // period plus one step covers every n ≥ 1.
    for n in 1..=period + 1 {
        let s = (fib_mod(n - 1, 8) + fib_mod(n + 1, 8)) % 8;
        if s == 0 {
            cert.fail(json!({ "n": n, "route": "period" }));
        }
    }
    let fibs = fibonacci_numbers(bound as usize + 2);
    let eight = BigInt::from(8);
    for n in 1..=bound as usize {
        if ((&fibs[n - 1] + &fibs[n + 1]) % &eight).is_zero() {
            cert.fail(json!({ "n": n, "route": "range" }));
        }
    }
    if cert.passed() {
        cert = cert.with_proof(ProofStatus::PeriodicityComplete { period });
    }
    cert
}

fn mod4_one(bound: u64) -> Certificate {
    let period = pisano_period(4).expect("4 ≥ 2");
    // f_{3n} mod 4 repeats when 3n advances by a multiple of P.
    let index_period = period / period.gcd(&3);
    let mut cert = Certificate::new(
        "mod4_one",
        json!({
            "statement": "f(3n) + f(3n+1) == 1 mod 4",
            "modulus": 4,
            "index_period": index_period,
        }),
        VerifiedRange::new("n", 1, bound.max(index_period + 1)),
    );
    for n in 1..=index_period + 1 {
        let s = (fib_mod(3 * n, 4) + fib_mod(3 * n + 1, 4)) % 4;
        if s != 1 {
            cert.fail(json!({ "n": n, "route": "period", "residue": s }));
        }
    }
    let fibs = fibonacci_numbers(3 * bound as usize + 2);
    let four = BigInt::from(4);
    for n in 1..=bound as usize {
        let s = (&fibs[3 * n] + &fibs[3 * n + 1]) % &four;
        if s != BigInt::from(1) {
            cert.fail(json!({ "n": n, "route": "range", "residue": s.to_string() }));
        }
    }
    if cert.passed() {
        cert = cert.with_proof(ProofStatus::PeriodicityComplete { period });
    }
    cert
}

fn binet_identity<F>(id: &str, bound: u64, sides: F) -> Certificate
where
    F: Fn(&BigInt, &BigInt, &BigInt, &Q5) -> (Q5, Q5),
{
    let mut cert = Certificate::new(id, json!({ "field": "Q(sqrt5)" }), VerifiedRange::new("n", 1, bound));
    let fibs = fibonacci_numbers(bound as usize + 2);
    let conj = Q5::phi_conj();
    let mut conj_pow = Q5::one();
    for n in 1..=bound as usize {
        conj_pow = &conj_pow * &conj;
        let (lhs, rhs) = sides(&fibs[n - 1], &fibs[n], &fibs[n + 1], &conj_pow);
        if lhs != rhs {
            cert.fail(json!({ "n": n, "lhs": lhs, "rhs": rhs }));
            break;
        }
    }
    cert
}

fn even_fib_recurrence(bound: u64) -> Certificate {
    let mut cert = Certificate::new(
        "even_fib_recurrence",
        json!({ "statement": "e(n) = 4 e(n-1) + e(n-2)" }),
        VerifiedRange::new("n", 3, bound),
    );
    let e = GapSetSpec::EvenFibonacci
        .terms(bound as usize)
        .expect("even_fibonacci has indexed terms");
    let four = BigInt::from(4);
    for n in 2..e.len() {
        if e[n] != &four * &e[n - 1] + &e[n - 2] {
            cert.fail(json!({ "n": n + 1, "e": e[n].to_string() }));
            break;
        }
    }
    cert
}

/// Which fractional-part inequality to check per element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum FracBound {
    /// `‖α·s‖ > bound`.
    DistNearest {
        #[serde(with = "crate::exactnum::serde_rational")]
        bound: BigRational,
    },
    /// `lo < {α·s} < hi`.
    FracWindow {
        #[serde(with = "crate::exactnum::serde_rational")]
        lo: BigRational,
        #[serde(with = "crate::exactnum::serde_rational")]
        hi: BigRational,
    },
}

/// Exact per-element check of a fractional-part bound over `seq`.
pub fn frac_bound_scan(alpha: &Q5, seq: &[BigInt], bound: &FracBound) -> Result<Certificate, VerifyError> {
    if seq.is_empty() {
        return Err(VerifyError::InvalidParameter("sequence is empty".into()));
    }
    let params = match bound {
        FracBound::DistNearest { bound } => json!({ "alpha": alpha, "mode": "dist_nearest", "bound": format_rational(bound) }),
        FracBound::FracWindow { lo, hi } => {
            json!({ "alpha": alpha, "mode": "frac_window", "lo": format_rational(lo), "hi": format_rational(hi) })
        }
    };
    let mut cert = Certificate::new("frac_bound", params, VerifiedRange::new("n", 1, seq.len() as u64));
    for (i, s) in seq.iter().enumerate() {
        let x = alpha.mul_int(s);
        let (ok, value) = match bound {
            FracBound::DistNearest { bound } => {
                let v = x.dist_nearest_int();
                (v.cmp_rational(bound).is_gt(), v)
            }
            FracBound::FracWindow { lo, hi } => {
                let v = x.frac();
                (v.cmp_rational(lo).is_gt() && v.cmp_rational(hi).is_lt(), v)
            }
        };
        if !ok {
            cert.fail(json!({ "n": i + 1, "s": s.to_string(), "value": value, "approx": value.to_f64() }));
            break;
        }
    }
    Ok(cert)
}

/// Smallest value of the checked quantity over the sequence, as a double.
/// Reporting aid only; verdicts come from [`frac_bound_scan`].
pub fn min_dist_nearest(alpha: &Q5, seq: &[BigInt]) -> Option<f64> {
    seq.iter()
        .map(|s| alpha.mul_int(s).dist_nearest_int().to_f64())
        .min_by(|a, b| a.total_cmp(b))
}

/// `‖·‖` bound as a rational, for callers that hold a decimal-free string.
pub fn dist_bound(num: i64, den: i64) -> FracBound {
    FracBound::DistNearest {
        bound: int(num) / int(den),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorings::{block_coloring, residue_coloring, Provenance};
    use crate::exactnum::rat;
    use crate::gapsets::enumerate;
    use proptest::prelude::*;

    fn col(r: u32, w: Vec<u16>) -> Coloring {
        Coloring::new(r, w, Provenance::Explicit).unwrap()
    }

    fn view(xs: &[u64], bound: u64) -> GapSetView {
        GapSetView::new(xs.to_vec(), bound).unwrap()
    }

    fn alternating(n: usize) -> Coloring {
        block_coloring(1, n).unwrap()
    }

    /// Every monochromatic chain, by depth-first extension from each start.
    fn brute_longest(c: &Coloring, d: &GapSetView) -> usize {
        fn extend(c: &Coloring, d: &GapSetView, x: usize) -> usize {
            let mut best = 1;
            for y in x + 1..=c.len() {
                if c.color(y) == c.color(x) && d.contains((y - x) as u64) {
                    best = best.max(1 + extend(c, d, y));
                }
            }
            best
        }
        (1..=c.len()).map(|x| extend(c, d, x)).max().unwrap_or(0)
    }

    #[test]
    fn diffseq_examples() {
        let r = longest_mono_diffseq(&alternating(10), &view(&[2], 10)).unwrap();
        assert_eq!(r.length, 5);
        assert_eq!(r.witness, vec![1, 3, 5, 7, 9]);
        assert_eq!(longest_mono_diffseq(&alternating(10), &view(&[1], 10)).unwrap().length, 1);
        let b = block_coloring(2, 16).unwrap();
        let d = view(&[1, 2], 16);
        let r = longest_mono_diffseq(&b, &d).unwrap();
        assert_eq!(r.length, brute_longest(&b, &d));
        assert_eq!(r.length, 2);
    }

    #[test]
    fn ap_examples() {
        let ones = col(1, vec![1; 10]);
        let r = longest_mono_ap(&ones, &view(&[3], 10)).unwrap();
        assert_eq!((r.length, r.witness.clone()), (4, vec![1, 4, 7, 10]));
        assert_eq!(longest_mono_ap(&alternating(12), &view(&[2], 12)).unwrap().length, 6);
        let b = block_coloring(3, 30).unwrap();
        let r = longest_mono_ap(&b, &view(&[2], 30)).unwrap();
        assert_eq!(r.length, 2);
        assert!(is_mono_chain(&b, &view(&[2], 30), &r.witness, Structure::Ap));
    }

    #[test]
    fn short_views_are_rejected() {
        assert!(matches!(
            longest_mono_diffseq(&alternating(10), &view(&[2], 5)),
            Err(VerifyError::ViewTooShort { .. })
        ));
    }

    #[test]
    fn intersective_examples() {
        let v3 = enumerate(&GapSetSpec::Nonmultiples { m: 3 }, 30).unwrap();
        let r = chromatically_intersective_check(&residue_coloring(3, 30).unwrap(), &v3).unwrap();
        assert_eq!(r.length, 1);
        let r = chromatically_intersective_check(&col(1, vec![1; 3]), &view(&[2], 3)).unwrap();
        assert_eq!((r.length, r.witness), (2, vec![1, 3]));
        let r = chromatically_intersective_check(&col(2, vec![1, 2]), &view(&[1], 2)).unwrap();
        assert_eq!(r.length, 1);
    }

    #[test]
    fn pisano_examples() {
        assert_eq!(pisano_period(8).unwrap(), 12);
        assert_eq!(pisano_period(2).unwrap(), 3);
        assert_eq!(pisano_period(4).unwrap(), 6);
        assert_eq!(pisano_period(10).unwrap(), 60);
        assert!(pisano_period(1).is_err());
    }

    #[test]
    fn pisano_matches_direct_recomputation() {
        // Independent route: least P where f_P ≡ 0 and f_{P+1} ≡ 1, from the
        // exact sequence.
        let fibs = fibonacci_numbers(2000);
        for m in 2u64..=40 {
            let mb = BigInt::from(m);
            let direct = (1..1998)
                .find(|&p| (&fibs[p] % &mb).is_zero() && &fibs[p + 1] % &mb == BigInt::from(1))
                .unwrap() as u64;
            assert_eq!(pisano_period(m).unwrap(), direct, "m = {m}");
        }
    }

    #[test]
    fn fib_facts() {
        let c = check_fib_fact("mod8_nonzero", 200).unwrap();
        assert!(c.passed());
        assert_eq!(c.proof, ProofStatus::PeriodicityComplete { period: 12 });
        let c = check_fib_fact("mod4_one", 1000).unwrap();
        assert!(c.passed());
        assert_eq!(c.proof, ProofStatus::PeriodicityComplete { period: 6 });
        for id in ["binet_sqrt5", "binet_one_plus_phi", "even_fib_recurrence"] {
            let c = check_fib_fact(id, 200).unwrap();
            assert!(c.passed(), "{id}: {c:?}");
            assert_eq!(c.proof, ProofStatus::RangeOnly);
        }
        assert!(matches!(check_fib_fact("nope", 10), Err(VerifyError::UnknownFact(_))));
    }

    #[test]
    fn frac_scan_examples() {
        let a = Q5::new(rat(0, 1), rat(1, 8));
        let fib200 = GapSetSpec::Fibonacci.terms(200).unwrap();
        assert!(frac_bound_scan(&a, &fib200, &dist_bound(1, 10)).unwrap().passed());
        assert!(frac_bound_scan(&a, &fib200[..4], &dist_bound(16, 100)).unwrap().passed());
        let c = frac_bound_scan(&Q5::from_rational(rat(1, 2)), &[BigInt::from(2)], &dist_bound(1, 10)).unwrap();
        assert!(!c.passed());
        assert!(frac_bound_scan(&a, &[], &dist_bound(1, 10)).is_err());
        let e = GapSetSpec::EvenFibonacci.terms(200).unwrap();
        let w = FracBound::FracWindow {
            lo: rat(21, 100),
            hi: rat(31, 100),
        };
        let phi_sq_quarter = Q5::new(rat(3, 8), rat(1, 8));
        assert!(frac_bound_scan(&phi_sq_quarter, &e, &w).unwrap().passed());
    }

    #[test]
    fn frac_scan_is_tight() {
        // The window fails once pushed past the observed extremes.
        let e = GapSetSpec::EvenFibonacci.terms(50).unwrap();
        let a = Q5::new(rat(3, 8), rat(1, 8));
        let w = FracBound::FracWindow {
            lo: rat(24, 100),
            hi: rat(31, 100),
        };
        assert!(!frac_bound_scan(&a, &e, &w).unwrap().passed());
    }

    #[test]
    fn fibonacci_prefix_is_one_chain() {
        let f = enumerate(&GapSetSpec::Fibonacci, 10_000).unwrap();
        let xs = f.elements();
        for p in xs.windows(2) {
            assert!(f.contains(p[1] - p[0]));
        }
    }

    proptest! {
        #[test]
        fn dp_matches_brute_force(
            word in prop::collection::vec(1u16..=2, 1..=20),
            gaps in prop::collection::btree_set(1u64..=8, 0..=4),
        ) {
            let c = col(2, word);
            let d = view(&gaps.into_iter().collect::<Vec<_>>(), 20);
            let r = longest_mono_diffseq(&c, &d).unwrap();
            prop_assert_eq!(r.length, brute_longest(&c, &d));
            prop_assert_eq!(r.witness.len(), r.length);
            prop_assert!(is_mono_chain(&c, &d, &r.witness, Structure::Diffsequence));
        }

        #[test]
        fn ap_witness_is_valid(
            word in prop::collection::vec(1u16..=3, 1..=60),
            gaps in prop::collection::btree_set(1u64..=10, 1..=4),
        ) {
            let c = col(3, word);
            let d = view(&gaps.into_iter().collect::<Vec<_>>(), 60);
            let r = longest_mono_ap(&c, &d).unwrap();
            prop_assert!(is_mono_chain(&c, &d, &r.witness, Structure::Ap));
            let s = longest_mono_diffseq(&c, &d).unwrap();
            prop_assert!(r.length <= s.length);
        }

        #[test]
        fn enlarging_d_never_shortens(
            word in prop::collection::vec(1u16..=2, 1..=40),
            gaps in prop::collection::btree_set(1u64..=10, 0..=3),
            extra in 1u64..=10,
        ) {
            let c = col(2, word);
            let small: Vec<u64> = gaps.iter().copied().collect();
            let mut big = small.clone();
            big.push(extra);
            big.sort();
            big.dedup();
            let (s, b) = (view(&small, 40), view(&big, 40));
            prop_assert!(longest_mono_diffseq(&c, &s).unwrap().length <= longest_mono_diffseq(&c, &b).unwrap().length);
            prop_assert!(longest_mono_ap(&c, &s).unwrap().length <= longest_mono_ap(&c, &b).unwrap().length);
        }

        #[test]
        fn block_coloring_bound(m in 1u64..=6, n in 1usize..=120, gaps in prop::collection::btree_set(1u64..=6, 1..=6)) {
            let d: Vec<u64> = gaps.into_iter().filter(|&g| g <= m).collect();
            prop_assume!(!d.is_empty());
            let c = block_coloring(m, n).unwrap();
            let v = view(&d, (n as u64).max(6));
            prop_assert!(longest_mono_diffseq(&c, &v).unwrap().length as u64 <= m);
            prop_assert!(longest_mono_ap(&c, &v).unwrap().length as u64 <= m);
        }

        #[test]
        fn residue_coloring_has_no_v_m_pair(m in 2u64..=7, n in 1usize..=100) {
            let v = enumerate(&GapSetSpec::Nonmultiples { m }, n as u64).unwrap();
            let r = chromatically_intersective_check(&residue_coloring(m, n).unwrap(), &v).unwrap();
            prop_assert_eq!(r.length, 1);
        }
    }
}
