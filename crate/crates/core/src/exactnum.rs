//! Exact arithmetic over ℚ and the real quadratic field ℚ(√5).
//!
//! Every comparison that ends up in a certificate goes through [`Q5::cmp_zero`],
//! which never consults floating point. Floats are only used to seed the
//! bracketing search in [`Q5::floor`], and the returned value is always
//! confirmed by exact comparison.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rational `{0}`: expected `p/q` or an integer")]
    InvalidRational(String),
    #[error("invalid interval: lower end {lo} exceeds upper end {hi}")]
    InvalidInterval { lo: String, hi: String },
}

/// Shorthand for the rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parses `p/q` or `p`. Decimal notation is rejected on purpose: every
/// numeric parameter must be exact.
pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let bad = || ExactError::InvalidRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical text form: `p/q`, or just `p` when the denominator is 1.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `#[serde(with = "serde_rational")]` for fields holding a [`BigRational`].
pub mod serde_rational {
    use super::{format_rational, parse_rational, BigRational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "serde_rational_vec")]` for lists of rationals.
pub mod serde_rational_vec {
    use super::{format_rational, parse_rational, BigRational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

/// `#[serde(with = "serde_bigint")]`: unbounded integers as decimal strings.
pub mod serde_bigint {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        BigInt::from_str(s.trim()).map_err(D::Error::custom)
    }
}

/// Floor of a rational as an integer.
pub fn floor_rational(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Smallest integer ≥ `x`.
pub fn ceil_rational(x: &BigRational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// The four field operations, for callers that pick the operation at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element `a + b√5` of ℚ(√5).
///
/// Both parts are kept in lowest terms by `BigRational`, and `√5` is
/// irrational, so the representation is unique and derived equality is
/// numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Q5Repr", into = "Q5Repr")]
pub struct Q5 {
    a: BigRational,
    b: BigRational,
}

#[derive(Serialize, Deserialize)]
struct Q5Repr {
    a: String,
    b: String,
}

impl TryFrom<Q5Repr> for Q5 {
    type Error = ExactError;

    fn try_from(r: Q5Repr) -> Result<Self, Self::Error> {
        Ok(Q5::new(parse_rational(&r.a)?, parse_rational(&r.b)?))
    }
}

impl From<Q5> for Q5Repr {
    fn from(x: Q5) -> Self {
        Q5Repr {
            a: format_rational(&x.a),
            b: format_rational(&x.b),
        }
    }
}

impl Q5 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Q5 { a, b }
    }

    pub fn zero() -> Self {
        Q5::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Q5::from_rational(BigRational::one())
    }

    pub fn from_rational(a: BigRational) -> Self {
        Q5::new(a, BigRational::zero())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Q5::from_rational(int(n))
    }

    pub fn sqrt5() -> Self {
        Q5::new(BigRational::zero(), BigRational::one())
    }

    /// φ = (1+√5)/2.
    pub fn phi() -> Self {
        Q5::new(rat(1, 2), rat(1, 2))
    }

    /// φ̄ = (1−√5)/2, the conjugate of φ.
    pub fn phi_conj() -> Self {
        Q5::new(rat(1, 2), rat(-1, 2))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Q5 {
        Q5::new(self.a.clone(), -&self.b)
    }

    /// Field norm a² − 5b², the product of `self` and its conjugate.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - int(5) * &self.b * &self.b
    }

    /// Exact sign of the real number `a + b√5`.
    pub fn cmp_zero(&self) -> Ordering {
        let sa = self.a.numer().sign();
        let sb = self.b.numer().sign();
        match (sa, sb) {
            (Sign::NoSign, Sign::NoSign) => Ordering::Equal,
            (Sign::Minus, Sign::Minus) | (Sign::Minus, Sign::NoSign) | (Sign::NoSign, Sign::Minus) => {
                Ordering::Less
            }
            (Sign::Plus, Sign::Plus) | (Sign::Plus, Sign::NoSign) | (Sign::NoSign, Sign::Plus) => {
                Ordering::Greater
            }
            // Opposite signs: whichever of |a| and |b|√5 is larger wins.
            // a² = 5b² is impossible for nonzero rationals.
            _ => {
                let a2 = &self.a * &self.a;
                let b2 = int(5) * &self.b * &self.b;
                let dominant = if a2 > b2 { sa } else { sb };
                if dominant == Sign::Plus {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    /// Sign as −1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match self.cmp_zero() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        Q5::new(&self.a - q, self.b.clone()).cmp_zero()
    }

    fn cmp_int(&self, n: &BigInt) -> Ordering {
        Q5::new(&self.a - int(n.clone()), self.b.clone()).cmp_zero()
    }

    pub fn recip(&self) -> Result<Q5, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Q5::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, rhs: &Q5) -> Result<Q5, ExactError> {
        Ok(self * &rhs.recip()?)
    }

    pub fn apply(&self, op: FieldOp, rhs: &Q5) -> Result<Q5, ExactError> {
        Ok(match op {
            FieldOp::Add => self + rhs,
            FieldOp::Sub => self - rhs,
            FieldOp::Mul => self * rhs,
            FieldOp::Div => self.checked_div(rhs)?,
        })
    }

    pub fn scale(&self, q: &BigRational) -> Q5 {
        Q5::new(&self.a * q, &self.b * q)
    }

    pub fn mul_int(&self, n: &BigInt) -> Q5 {
        self.scale(&int(n.clone()))
    }

    pub fn pow(&self, mut e: u32) -> Q5 {
        let mut base = self.clone();
        let mut acc = Q5::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Approximate value; never used to decide anything.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 5f64.sqrt()
    }

    /// Starting guess for the floor search.
    fn floor_seed(&self) -> BigInt {
        let est = self.to_f64();
        if est.is_finite() && est.abs() < 4.0e15 {
            return BigInt::from(est.floor() as i64);
        }
        // Out of double range: floor(a) ± isqrt(5b²), off by at most a few units.
        let root = floor_rational(&(int(5) * &self.b * &self.b)).sqrt();
        let surd = if self.b.is_negative() { -root } else { root };
        floor_rational(&self.a) + surd
    }

    /// The unique integer `n` with `n ≤ self < n + 1`.
    ///
    /// Brackets the seed by ±2, widens geometrically until the bracket is
    /// certified, then bisects with exact comparisons.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return floor_rational(&self.a);
        }
        let seed = self.floor_seed();
        let mut step = BigInt::from(2);
        let mut lo = &seed - &step;
        while self.cmp_int(&lo) == Ordering::Less {
            step <<= 1;
            lo -= &step;
        }
        let mut step = BigInt::from(2);
        let mut hi = &seed + &step;
        while self.cmp_int(&hi) != Ordering::Less {
            step <<= 1;
            hi += &step;
        }
        // lo ≤ self < hi
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
            if self.cmp_int(&mid) == Ordering::Less {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }

    /// Fractional part `self − ⌊self⌋ ∈ [0, 1)`.
    pub fn frac(&self) -> Q5 {
        let n = self.floor();
        Q5::new(&self.a - int(n), self.b.clone())
    }

    /// Distance to the nearest integer, `min({x}, 1 − {x}) ∈ [0, 1/2]`.
    pub fn dist_nearest_int(&self) -> Q5 {
        let f = self.frac();
        let g = &Q5::one() - &f;
        if f <= g {
            f
        } else {
            g
        }
    }
}

impl From<BigRational> for Q5 {
    fn from(a: BigRational) -> Self {
        Q5::from_rational(a)
    }
}

impl PartialOrd for Q5 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q5 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).cmp_zero()
    }
}

impl<'a> Add<&'a Q5> for &'a Q5 {
    type Output = Q5;
    fn add(self, rhs: &Q5) -> Q5 {
        Q5::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a Q5> for &'a Q5 {
    type Output = Q5;
    fn sub(self, rhs: &Q5) -> Q5 {
        Q5::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a Q5> for &'a Q5 {
    type Output = Q5;
    fn mul(self, rhs: &Q5) -> Q5 {
        let a = &self.a * &rhs.a + int(5) * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Q5::new(a, b)
    }
}

impl Add for Q5 {
    type Output = Q5;
    fn add(self, rhs: Q5) -> Q5 {
        &self + &rhs
    }
}

impl Sub for Q5 {
    type Output = Q5;
    fn sub(self, rhs: Q5) -> Q5 {
        &self - &rhs
    }
}

impl Mul for Q5 {
    type Output = Q5;
    fn mul(self, rhs: Q5) -> Q5 {
        &self * &rhs
    }
}

impl Neg for Q5 {
    type Output = Q5;
    fn neg(self) -> Q5 {
        Q5::new(-self.a, -self.b)
    }
}

impl Neg for &Q5 {
    type Output = Q5;
    fn neg(self) -> Q5 {
        Q5::new(-&self.a, -&self.b)
    }
}

impl fmt::Display for Q5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", format_rational(&self.a))
        } else {
            write!(f, "{}+{}*sqrt5", format_rational(&self.a), format_rational(&self.b))
        }
    }
}

impl fmt::Debug for Q5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q5({self} ≈ {:.6})", self.to_f64())
    }
}

impl FromStr for Q5 {
    type Err = ExactError;

    /// Accepts `A`, `A,B` (meaning A + B√5), the display form `A+B*sqrt5`,
    /// or the JSON object `{"a":"A","b":"B"}`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.starts_with('{') {
            let r: Q5Repr =
                serde_json::from_str(t).map_err(|_| ExactError::InvalidRational(t.to_string()))?;
            return Q5::try_from(r);
        }
        if let Some((a, b)) = t.split_once(',') {
            return Ok(Q5::new(parse_rational(a)?, parse_rational(b)?));
        }
        if let Some(head) = t.strip_suffix("*sqrt5") {
            // split at the last sign that is not a leading sign
            let cut = head
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .last()
                .map(|(i, _)| i);
            return match cut {
                Some(i) => {
                    let a = parse_rational(&head[..i])?;
                    let b = parse_rational(head[i..].trim_start_matches('+'))?;
                    Ok(Q5::new(a, b))
                }
                None => Ok(Q5::new(BigRational::zero(), parse_rational(head)?)),
            };
        }
        Ok(Q5::from_rational(parse_rational(t)?))
    }
}

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IntervalRepr", into = "IntervalRepr")]
pub struct RatInterval {
    lo: BigRational,
    hi: BigRational,
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: String,
    hi: String,
}

impl TryFrom<IntervalRepr> for RatInterval {
    type Error = ExactError;
    fn try_from(r: IntervalRepr) -> Result<Self, Self::Error> {
        RatInterval::new(parse_rational(&r.lo)?, parse_rational(&r.hi)?)
    }
}

impl From<RatInterval> for IntervalRepr {
    fn from(i: RatInterval) -> Self {
        IntervalRepr {
            lo: format_rational(&i.lo),
            hi: format_rational(&i.hi),
        }
    }
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self, ExactError> {
        if lo > hi {
            return Err(ExactError::InvalidInterval {
                lo: format_rational(&lo),
                hi: format_rational(&hi),
            });
        }
        Ok(RatInterval { lo, hi })
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_q5(&self, x: &Q5) -> bool {
        x.cmp_rational(&self.lo) != Ordering::Less && x.cmp_rational(&self.hi) != Ordering::Greater
    }

    pub fn is_subset_of(&self, other: &RatInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}
