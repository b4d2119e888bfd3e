//! Finite colorings of `1..=N` and the generators used throughout: fractional
//! part colorings, block and residue colorings, products, and circle-rotation
//! words. Words are materialized; positions are one-based in the API and
//! zero-based in `word`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactnum::{int, BigRational, Q5};

/// Hard cap on materialized word length. A word costs two bytes per position,
/// so the cap is 20 MB per coloring; the DP verifier needs another 8 bytes
/// per position on top.
pub const MAX_LENGTH: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColoringError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("length {0} exceeds the cap of {MAX_LENGTH} positions")]
    TooLong(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("color {color} at position {position} is outside 1..={r}")]
    ColorOutOfRange { position: usize, color: u16, r: u32 },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Half-open interval `[lo, hi)` on the circle `[0, 1)`. Endpoints may be
/// irrational: a rotation by irrational α coded by an interval is Sturmian
/// only when the interval length lies in ℤα + ℤ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutInterval {
    pub lo: Q5,
    pub hi: Q5,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Frac {
        alpha: Q5,
        r: u32,
    },
    Block {
        m: u64,
    },
    Residue {
        m: u64,
    },
    Product {
        left: Box<Provenance>,
        right: Box<Provenance>,
    },
    Rotation {
        alpha: Q5,
        x0: Q5,
        intervals: Vec<CutInterval>,
    },
    /// Read from a file or built by hand.
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coloring {
    r: u32,
    word: Vec<u16>,
    provenance: Provenance,
}

impl Coloring {
    pub fn new(r: u32, word: Vec<u16>, provenance: Provenance) -> Result<Self, ColoringError> {
        if r == 0 || r > u16::MAX as u32 {
            return Err(ColoringError::InvalidParameter(format!("color count {r}")));
        }
        if word.len() > MAX_LENGTH {
            return Err(ColoringError::TooLong(word.len()));
        }
        if let Some((i, &c)) = word.iter().enumerate().find(|(_, &c)| c == 0 || c as u32 > r) {
            return Err(ColoringError::ColorOutOfRange {
                position: i + 1,
                color: c,
                r,
            });
        }
        Ok(Coloring { r, word, provenance })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[u16] {
        &self.word
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Color of position `x` (one-based).
    pub fn color(&self, x: usize) -> u16 {
        self.word[x - 1]
    }

    pub fn prefix(&self, n: usize) -> Coloring {
        Coloring {
            r: self.r,
            word: self.word[..n.min(self.word.len())].to_vec(),
            provenance: self.provenance.clone(),
        }
    }

    /// Run-length form: `(color, count)` pairs.
    pub fn runs(&self) -> Vec<(u16, usize)> {
        let mut out: Vec<(u16, usize)> = Vec::new();
        for &c in &self.word {
            match out.last_mut() {
                Some((last, n)) if *last == c => *n += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    pub fn to_rle(&self) -> RleColoring {
        RleColoring {
            r: self.r,
            length: self.word.len(),
            runs: self.runs(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_rle(rle: &RleColoring) -> Result<Self, ColoringError> {
        let total: usize = rle.runs.iter().map(|&(_, n)| n).sum();
        if total != rle.length {
            return Err(ColoringError::LengthMismatch(total, rle.length));
        }
        if total > MAX_LENGTH {
            return Err(ColoringError::TooLong(total));
        }
        let mut word = Vec::with_capacity(total);
        for &(c, n) in &rle.runs {
            word.extend(std::iter::repeat(c).take(n));
        }
        Coloring::new(rle.r, word, rle.provenance.clone())
    }

    /// One digit per position. Only defined for `r ≤ 9`.
    pub fn to_digits(&self) -> Result<String, ColoringError> {
        if self.r > 9 {
            return Err(ColoringError::InvalidParameter(format!(
                "digit export needs r ≤ 9, got {}",
                self.r
            )));
        }
        Ok(self.word.iter().map(|&c| char::from(b'0' + c as u8)).collect())
    }

    /// Parses one digit per position, ignoring whitespace. `r` defaults to
    /// the largest digit seen.
    pub fn from_digits(text: &str, r: Option<u32>) -> Result<Self, ColoringError> {
        let mut word = Vec::new();
        for ch in text.chars().filter(|c| !c.is_whitespace()) {
            let d = ch
                .to_digit(10)
                .filter(|&d| d > 0)
                .ok_or_else(|| ColoringError::Parse(format!("unexpected character {ch:?}")))?;
            word.push(d as u16);
        }
        let r = r.unwrap_or_else(|| word.iter().copied().max().unwrap_or(1) as u32);
        Coloring::new(r, word, Provenance::Explicit)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RleColoring {
    pub r: u32,
    pub length: usize,
    pub runs: Vec<(u16, usize)>,
    pub provenance: Provenance,
}

fn check_len(n: usize) -> Result<(), ColoringError> {
    if n > MAX_LENGTH {
        Err(ColoringError::TooLong(n))
    } else {
        Ok(())
    }
}

const CHUNK: usize = 4096;

/// Builds `word[x−1] = f(x)` over parallel chunks; the result does not depend
/// on the thread count.
fn generate<F>(n: usize, f: F) -> Vec<u16>
where
    F: Fn(usize) -> u16 + Sync,
{
    let mut word = vec![0u16; n];
    word.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
        for (j, slot) in chunk.iter_mut().enumerate() {
            *slot = f(ci * CHUNK + j + 1);
        }
    });
    word
}

/// `χ(x) = i` iff `{αx} ∈ [(i−1)/r, i/r)`.
pub fn frac_coloring(alpha: &Q5, r: u32, n: usize) -> Result<Coloring, ColoringError> {
    if r < 2 {
        return Err(ColoringError::InvalidParameter(format!("r = {r} must be at least 2")));
    }
    check_len(n)?;
    let rq = int(r);
    let word = generate(n, |x| {
        let f = alpha.mul_int(&BigInt::from(x)).frac();
        let class = f.scale(&rq).floor();
        1 + class.to_u16().expect("class index in 0..r")
    });
    Coloring::new(
        r,
        word,
        Provenance::Frac {
            alpha: alpha.clone(),
            r,
        },
    )
}

/// Two colors in blocks of `m`: `χ(x) = 1` iff `x mod 2m ∈ {1, …, m}`.
pub fn block_coloring(m: u64, n: usize) -> Result<Coloring, ColoringError> {
    if m == 0 {
        return Err(ColoringError::InvalidParameter("block size must be positive".into()));
    }
    check_len(n)?;
    let word = (1..=n as u64)
        .map(|x| {
            let t = x % (2 * m);
            if (1..=m).contains(&t) {
                1
            } else {
                2
            }
        })
        .collect();
    Coloring::new(2, word, Provenance::Block { m })
}

/// `χ(x) = (x mod m) + 1`.
pub fn residue_coloring(m: u64, n: usize) -> Result<Coloring, ColoringError> {
    if m < 2 || m > u16::MAX as u64 {
        return Err(ColoringError::InvalidParameter(format!("modulus {m} must be in 2..=65535")));
    }
    check_len(n)?;
    let word = (1..=n as u64).map(|x| (x % m) as u16 + 1).collect();
    Coloring::new(m as u32, word, Provenance::Residue { m })
}

/// `χ(x) = (χ₁(x) − 1)·r₂ + χ₂(x)`.
pub fn product_coloring(a: &Coloring, b: &Coloring) -> Result<Coloring, ColoringError> {
    if a.len() != b.len() {
        return Err(ColoringError::LengthMismatch(a.len(), b.len()));
    }
    let r = a.r as u64 * b.r as u64;
    if r > u16::MAX as u64 {
        return Err(ColoringError::InvalidParameter(format!("product has {r} colors")));
    }
    let word = a
        .word
        .iter()
        .zip(&b.word)
        .map(|(&c1, &c2)| (c1 - 1) * b.r as u16 + c2)
        .collect();
    Coloring::new(
        r as u32,
        word,
        Provenance::Product {
            left: Box::new(a.provenance.clone()),
            right: Box::new(b.provenance.clone()),
        },
    )
}

/// `χ(n) = 1` iff `{x₀ + nα} ∈ [0, cut)`, else 2.
pub fn rotation_word(alpha: &Q5, x0: &Q5, cut: &Q5, n: usize) -> Result<Coloring, ColoringError> {
    if cut.signum() <= 0 || *cut >= Q5::one() {
        return Err(ColoringError::InvalidParameter(format!("cut {cut} must lie in (0, 1)")));
    }
    rotation_word_multi(
        alpha,
        x0,
        &[CutInterval {
            lo: Q5::zero(),
            hi: cut.clone(),
        }],
        n,
    )
}

/// The rotation by φ−1 coded by `[0, φ−1)`: the Fibonacci Sturmian word.
pub fn golden_rotation_word(n: usize) -> Result<Coloring, ColoringError> {
    let alpha = Q5::phi() - Q5::one();
    rotation_word(&alpha, &Q5::zero(), &alpha, n)
}

/// Rotation word whose first class is a finite union of half-open intervals
/// `[lo, hi) ⊆ [0, 1)`.
pub fn rotation_word_multi(
    alpha: &Q5,
    x0: &Q5,
    intervals: &[CutInterval],
    n: usize,
) -> Result<Coloring, ColoringError> {
    check_len(n)?;
    for iv in intervals {
        if iv.lo.signum() < 0 || iv.lo >= iv.hi || iv.hi > Q5::one() {
            return Err(ColoringError::InvalidParameter(format!(
                "interval [{}, {}) is not inside [0, 1)",
                iv.lo, iv.hi
            )));
        }
    }
    let word = generate(n, |k| {
        let f = (x0 + &alpha.mul_int(&BigInt::from(k))).frac();
        let inside = intervals
            .iter()
            .any(|iv| f >= iv.lo && f < iv.hi);
        if inside {
            1
        } else {
            2
        }
    });
    Coloring::new(
        2,
        word,
        Provenance::Rotation {
            alpha: alpha.clone(),
            x0: x0.clone(),
            intervals: intervals.to_vec(),
        },
    )
}

/// Number of distinct length-`n` factors of the word.
pub fn complexity(c: &Coloring, n: usize) -> Result<usize, ColoringError> {
    if n == 0 || n > c.len() {
        return Err(ColoringError::InvalidParameter(format!(
            "factor length {n} must be in 1..={}",
            c.len()
        )));
    }
    Ok(c.word.windows(n).collect::<HashSet<_>>().len())
}

pub const PRESETS: &[&str] = &["sqrt5over8", "oneplusphiover4"];

/// The rotation number behind a named preset.
pub fn preset_alpha(name: &str) -> Result<Q5, ColoringError> {
    match name {
        "sqrt5over8" => Ok(Q5::new(BigRational::zero(), BigRational::new(1.into(), 8.into()))),
        "oneplusphiover4" => Ok(Q5::new(
            BigRational::new(3.into(), 8.into()),
            BigRational::new(1.into(), 8.into()),
        )),
        other => Err(ColoringError::UnknownPreset(other.to_string())),
    }
}

/// Named 2-colorings: `sqrt5over8` is the fractional-part coloring by √5/8,
/// `oneplusphiover4` the one by (1+φ)/4 = (3+√5)/8.
pub fn preset(name: &str, n: usize) -> Result<Coloring, ColoringError> {
    frac_coloring(&preset_alpha(name)?, 2, n)
}
