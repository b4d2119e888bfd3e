//! Exhaustive search for Δ(D, k; r) and chromatic numbers of prefix distance
//! graphs.
//!
//! The engine colors positions 1, 2, … left to right. Because every gap is
//! positive, the chain length `L(x)` (longest monochromatic D-diffsequence
//! ending at x) is final once x is colored, so a branch dies exactly when
//! some `L(x)` reaches k. Position 1 always gets color 1 and a new color is
//! only ever introduced as the next unused one.
//!
//! Two interchangeable ways to compute `L(x)` for a candidate color:
//!
//! * `List` walks the gaps `d < x` and looks at `x − d`.
//! * `Bitset` keeps, per color c and level ℓ, the set of positions with color
//!   c and `L ≥ ℓ`, stored in reversed coordinates (position p at bit
//!   `budget − p`). For x the predecessors `x − d` then sit at bits `s + d`
//!   with `s = budget − x`, so "some predecessor at level ℓ" is a word-wise
//!   AND of the gap mask with the plane shifted right by s.
//!
//! For parallel runs the tree is cut at a fixed depth; subtrees are searched
//! independently and merged in index order, so the result (verdict and
//! witness) matches the sequential run exactly.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{Certificate, VerifiedRange};
use crate::colorings::{frac_coloring, Coloring, ColoringError, Provenance};
use crate::construct::{certify_fracs, diffseq_bound_from_eps, ConstructError};
use crate::exactnum::{format_rational, BigRational, Q5};
use crate::gapsets::{GapSetSpec, GapSetView};
use crate::verify::{longest_mono_diffseq, VerifyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("gap set enumerated only to {bound}, search needs gaps up to {needed}")]
    ViewTooShort { bound: u64, needed: u64 },
    #[error("could not build thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    Auto,
    List,
    Bitset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads. `None` uses rayon's global pool; `Some(1)` runs the
    /// plain sequential search.
    pub threads: Option<usize>,
    pub strategy: Strategy,
    /// Depth at which the tree is cut into parallel subtrees.
    pub split_depth: usize,
    /// Fix position 1 to color 1 and introduce colors in order. Turning this
    /// off never changes a verdict, only the running time.
    pub symmetry_breaking: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            threads: None,
            strategy: Strategy::Auto,
            split_depth: 14,
            symmetry_breaking: true,
        }
    }
}

impl SearchOptions {
    pub fn sequential() -> Self {
        SearchOptions {
            threads: Some(1),
            ..Self::default()
        }
    }

    pub fn with_threads(threads: usize) -> Self {
        SearchOptions {
            threads: Some(threads),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeltaVerdict {
    /// Every r-coloring of `1..=n` has a monochromatic k-term diffsequence,
    /// and some coloring of `1..=n−1` has none.
    Delta { n: usize },
    /// An avoider of length `budget` exists; Δ is larger, if it exists.
    Unknown { budget: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaResult {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<GapSetSpec>,
    pub k: u32,
    pub r: u32,
    pub budget: usize,
    pub verdict: DeltaVerdict,
    /// Avoider of length Δ−1, or of length `budget` when the verdict is unknown.
    pub witness: Vec<u16>,
    pub strategy: Strategy,
    /// Search nodes visited. Depends on the thread count when the search is
    /// cut short by an early avoider.
    pub nodes: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl DeltaResult {
    pub fn delta(&self) -> Option<usize> {
        match self.verdict {
            DeltaVerdict::Delta { n } => Some(n),
            DeltaVerdict::Unknown { .. } => None,
        }
    }

    pub fn witness_coloring(&self) -> Result<Coloring, ColoringError> {
        Coloring::new(self.r, self.witness.clone(), Provenance::Explicit)
    }

    pub fn with_set(mut self, spec: &GapSetSpec) -> Self {
        self.set = Some(spec.clone());
        self
    }

    /// Drops the fields that vary between runs with identical parameters.
    pub fn without_stats(mut self) -> Self {
        self.nodes = 0;
        self.elapsed_ms = None;
        self
    }
}

#[derive(Clone)]
struct Engine<'a> {
    gaps: &'a [u64],
    k: u32,
    r: u16,
    budget: usize,
    symmetry: bool,
    use_bits: bool,
    colors: Vec<u16>,
    lens: Vec<u32>,
    maxc: Vec<u16>,
    /// Bit d set iff d ∈ D; shared between subtree engines.
    gap_mask: Arc<Vec<u64>>,
    /// Plane (c, ℓ) at index `(c−1)·(k−1) + (ℓ−1)`.
    planes: Vec<Vec<u64>>,
    nodes: u64,
}

struct Outcome {
    best: usize,
    witness: Vec<u16>,
    reached: bool,
    nodes: u64,
}

impl<'a> Engine<'a> {
    fn new(gaps: &'a [u64], k: u32, r: u16, budget: usize, symmetry: bool, use_bits: bool) -> Self {
        let (gap_mask, planes) = if use_bits {
            let words = budget / 64 + 2;
            let mut mask = vec![0u64; words];
            for &d in gaps {
                mask[d as usize / 64] |= 1 << (d % 64);
            }
            let count = r as usize * (k as usize - 1);
            (mask, vec![vec![0u64; words]; count])
        } else {
            (Vec::new(), Vec::new())
        };
        Engine {
            gaps,
            k,
            r,
            budget,
            symmetry,
            use_bits,
            colors: vec![0; budget + 1],
            lens: vec![0; budget + 1],
            maxc: vec![0; budget + 1],
            gap_mask: Arc::new(gap_mask),
            planes,
            nodes: 0,
        }
    }

    #[inline]
    fn plane_index(&self, c: u16, level: u32) -> usize {
        (c as usize - 1) * (self.k as usize - 1) + (level as usize - 1)
    }

    /// Whether some `x − d` (d ∈ D) lies in the plane.
    #[inline]
    fn plane_hits(&self, plane: &[u64], gap_mask: &[u64], x: usize) -> bool {
        let s = self.budget - x;
        let last_word = (x - 1) / 64;
        for (j, &gm) in gap_mask.iter().enumerate().take(last_word + 1) {
            if gm == 0 {
                continue;
            }
            let bit = s + 64 * j;
            let (w, o) = (bit / 64, bit % 64);
            let lo = plane.get(w).copied().unwrap_or(0);
            let shifted = if o == 0 {
                lo
            } else {
                let hi = plane.get(w + 1).copied().unwrap_or(0);
                (lo >> o) | (hi << (64 - o))
            };
            if gm & shifted != 0 {
                return true;
            }
        }
        false
    }

    /// `1 + max L(x − d)` over same-colored predecessors, capped at k.
    #[inline]
    fn chain_len(&self, x: usize, c: u16) -> u32 {
        if self.use_bits {
            let mut l = 1;
            while l < self.k {
                let p = &self.planes[self.plane_index(c, l)];
                if !self.plane_hits(p, &self.gap_mask, x) {
                    break;
                }
                l += 1;
            }
            l
        } else {
            let mut l = 1;
            for &d in self.gaps {
                let d = d as usize;
                if d >= x {
                    break;
                }
                let y = x - d;
                if self.colors[y] == c && self.lens[y] + 1 > l {
                    l = self.lens[y] + 1;
                    if l >= self.k {
                        break;
                    }
                }
            }
            l
        }
    }

    #[inline]
    fn assign(&mut self, x: usize, c: u16, l: u32) {
        self.colors[x] = c;
        self.lens[x] = l;
        self.maxc[x] = self.maxc[x - 1].max(c);
        if self.use_bits {
            let i = self.budget - x;
            for level in 1..=l {
                let p = self.plane_index(c, level);
                self.planes[p][i / 64] |= 1 << (i % 64);
            }
        }
    }

    #[inline]
    fn unassign(&mut self, x: usize) {
        if self.use_bits {
            let (c, l) = (self.colors[x], self.lens[x]);
            let i = self.budget - x;
            for level in 1..=l {
                let p = self.plane_index(c, level);
                self.planes[p][i / 64] &= !(1 << (i % 64));
            }
        }
        self.colors[x] = 0;
        self.lens[x] = 0;
    }

    /// Replays a prefix found by an earlier enumeration.
    fn load_prefix(&mut self, prefix: &[u16]) {
        for (i, &c) in prefix.iter().enumerate() {
            let x = i + 1;
            let l = self.chain_len(x, c);
            debug_assert!(l < self.k);
            self.assign(x, c, l);
        }
    }

    /// Depth-first search over positions `start..=target`, with positions
    /// before `start` already assigned. With `collect`, every avoiding prefix
    /// of length `target` is recorded and the search backtracks from it;
    /// otherwise the search stops at the first prefix of length `target`.
    fn explore(
        &mut self,
        start: usize,
        target: usize,
        mut collect: Option<&mut Vec<Vec<u16>>>,
        stop: &dyn Fn() -> bool,
    ) -> Outcome {
        let mut best = start - 1;
        let mut witness = self.colors[1..start].to_vec();
        let mut reached = start > target;
        if reached {
            return Outcome {
                best,
                witness,
                reached,
                nodes: 0,
            };
        }
        let mut next = vec![1u16; target + 2];
        let mut x = start;
        let mut ticks: u32 = 0;
        loop {
            ticks = ticks.wrapping_add(1);
            if ticks % 1024 == 0 && stop() {
                break;
            }
            let limit = if self.symmetry {
                self.r.min(self.maxc[x - 1] + 1)
            } else {
                self.r
            };
            let mut placed = false;
            while next[x] <= limit {
                let c = next[x];
                next[x] += 1;
                let l = self.chain_len(x, c);
                if l < self.k {
                    self.assign(x, c, l);
                    placed = true;
                    break;
                }
            }
            if placed {
                self.nodes += 1;
                if x > best {
                    best = x;
                    witness = self.colors[1..=x].to_vec();
                }
                if x == target {
                    match collect.as_deref_mut() {
                        Some(out) => {
                            out.push(self.colors[1..=x].to_vec());
                            self.unassign(x);
                            continue;
                        }
                        None => {
                            reached = true;
                            break;
                        }
                    }
                }
                x += 1;
                next[x] = 1;
            } else {
                if x == start {
                    break;
                }
                x -= 1;
                self.unassign(x);
            }
        }
        Outcome {
            best,
            witness,
            reached,
            nodes: self.nodes,
        }
    }
}

fn pick_bitset(strategy: Strategy, gaps: &[u64], k: u32, budget: usize) -> bool {
    match strategy {
        Strategy::List => false,
        Strategy::Bitset => true,
        // A list test costs |D ∩ [1, x)| lookups; a bitset test costs up to
        // (k−1)·x/64 word operations.
        Strategy::Auto => gaps.len() as u64 * 64 > (k as u64 - 1) * budget as u64,
    }
}

/// Largest n ≤ budget admitting an r-coloring of `1..=n` with no
/// monochromatic k-term D-diffsequence, with a witness.
pub fn max_avoidable(
    d: &GapSetView,
    k: u32,
    r: u32,
    budget: usize,
    opts: &SearchOptions,
) -> Result<DeltaResult, SearchError> {
    if budget < 1 {
        return Err(SearchError::InvalidParameter("budget must be at least 1".into()));
    }
    if k < 2 {
        return Err(SearchError::InvalidParameter(format!("k = {k} must be at least 2")));
    }
    if r < 1 || r > u16::MAX as u32 {
        return Err(SearchError::InvalidParameter(format!("r = {r} out of range")));
    }
    let needed = budget as u64 - 1;
    if d.bound() < needed {
        return Err(SearchError::ViewTooShort {
            bound: d.bound(),
            needed,
        });
    }
    let started = Instant::now();
    let gaps = d.below(budget as u64);
    let use_bits = pick_bitset(opts.strategy, gaps, k, budget);
    let strategy = if use_bits { Strategy::Bitset } else { Strategy::List };
    let base = Engine::new(gaps, k, r as u16, budget, opts.symmetry_breaking, use_bits);

    let (outcome, nodes) = match opts.threads {
        Some(1) => {
            let mut e = base;
            let o = e.explore(1, budget, None, &|| false);
            let n = o.nodes;
            (o, n)
        }
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| SearchError::ThreadPool(e.to_string()))?;
            pool.install(|| split_search(&base, opts.split_depth))
        }
        None => split_search(&base, opts.split_depth),
    };

    let verdict = if outcome.reached {
        DeltaVerdict::Unknown { budget }
    } else {
        DeltaVerdict::Delta { n: outcome.best + 1 }
    };
    Ok(DeltaResult {
        set: None,
        k,
        r,
        budget,
        verdict,
        witness: outcome.witness,
        strategy,
        nodes,
        elapsed_ms: Some(started.elapsed().as_secs_f64() * 1e3),
    })
}

fn split_search(base: &Engine<'_>, split_depth: usize) -> (Outcome, u64) {
    let depth = split_depth.max(1);
    if base.budget <= depth {
        let mut e = base.clone();
        let o = e.explore(1, base.budget, None, &|| false);
        let n = o.nodes;
        return (o, n);
    }
    let mut prefixes = Vec::new();
    let mut shallow = base.clone();
    let head = shallow.explore(1, depth, Some(&mut prefixes), &|| false);
    if prefixes.is_empty() {
        let n = head.nodes;
        return (head, n);
    }
    let winner = AtomicUsize::new(usize::MAX);
    let results: Vec<Option<Outcome>> = prefixes
        .par_iter()
        .enumerate()
        .map(|(i, prefix)| {
            if winner.load(Ordering::Relaxed) < i {
                return None;
            }
            let mut e = base.clone();
            e.load_prefix(prefix);
            let o = e.explore(depth + 1, base.budget, None, &|| winner.load(Ordering::Relaxed) < i);
            if o.reached {
                winner.fetch_min(i, Ordering::Relaxed);
            }
            Some(o)
        })
        .collect();
    let nodes = head.nodes + results.iter().flatten().map(|o| o.nodes).sum::<u64>();
    let w = winner.load(Ordering::Relaxed);
    if w != usize::MAX {
        let o = results.into_iter().nth(w).flatten().expect("winning subtree finished");
        return (o, nodes);
    }
    // Every subtree ran to completion: deepest wins, earliest on ties.
    let best = results
        .into_iter()
        .map(|o| o.expect("no subtree aborts without a winner"))
        .reduce(|a, b| if b.best > a.best { b } else { a })
        .expect("at least one prefix");
    (best, nodes)
}

/// Δ(D, k; r), or `Unknown(budget)` if an avoider of length `budget` exists.
/// Δ(D, 1; r) = 1 since one position is already a 1-term diffsequence.
pub fn delta(
    d: &GapSetView,
    k: u32,
    r: u32,
    budget: usize,
    opts: &SearchOptions,
) -> Result<DeltaResult, SearchError> {
    if budget < 1 {
        return Err(SearchError::InvalidParameter("budget must be at least 1".into()));
    }
    match k {
        0 => Err(SearchError::InvalidParameter("k must be at least 1".into())),
        1 => Ok(DeltaResult {
            set: None,
            k,
            r,
            budget,
            verdict: DeltaVerdict::Delta { n: 1 },
            witness: Vec::new(),
            strategy: Strategy::List,
            nodes: 0,
            elapsed_ms: Some(0.0),
        }),
        _ => max_avoidable(d, k, r, budget, opts),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChromaticResult {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<GapSetSpec>,
    pub n: usize,
    pub lower: u32,
    pub upper: u32,
    pub exact: bool,
    /// Proper coloring of `1..=n` with `upper` colors.
    pub coloring: Vec<u16>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clique: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd_cycle: Option<Vec<u64>>,
}

impl ChromaticResult {
    pub fn with_set(mut self, spec: &GapSetSpec) -> Self {
        self.set = Some(spec.clone());
        self
    }
}

/// Whether no two positions with the same color differ by an element of D.
pub fn is_proper(d: &GapSetView, coloring: &[u16]) -> bool {
    let n = coloring.len();
    (1..=n).all(|x| d.below(x as u64).iter().all(|&g| coloring[x - 1] != coloring[x - 1 - g as usize]))
}

fn greedy_coloring(gaps: &[u64], n: usize) -> Vec<u16> {
    let mut col = vec![0u16; n + 1];
    let mut used = Vec::new();
    for x in 1..=n {
        used.clear();
        for &d in gaps {
            if d as usize >= x {
                break;
            }
            used.push(col[x - d as usize]);
        }
        let mut c = 1;
        while used.contains(&c) {
            c += 1;
        }
        col[x] = c;
    }
    col.split_off(1)
}

/// A large clique by branch and bound, within a node budget. Any clique it
/// returns is genuine; it is maximum only if the budget was not exhausted.
fn find_clique(d: &GapSetView, n: usize, node_budget: u64) -> Vec<u64> {
    let adj = |a: usize, b: usize| d.contains(a.abs_diff(b) as u64);
    let mut best: Vec<usize> = Vec::new();
    let mut nodes = 0u64;
    fn expand(
        cur: &mut Vec<usize>,
        cand: Vec<usize>,
        best: &mut Vec<usize>,
        nodes: &mut u64,
        budget: u64,
        adj: &dyn Fn(usize, usize) -> bool,
    ) {
        *nodes += 1;
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        if *nodes > budget {
            return;
        }
        for (i, &v) in cand.iter().enumerate() {
            if cur.len() + cand.len() - i <= best.len() {
                return;
            }
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&u| adj(u, v)).collect();
            cur.push(v);
            expand(cur, next, best, nodes, budget, adj);
            cur.pop();
        }
    }
    expand(&mut Vec::new(), (1..=n).collect(), &mut best, &mut nodes, node_budget, &adj);
    best.into_iter().map(|v| v as u64).collect()
}

/// An odd cycle in the prefix graph, from a breadth-first 2-coloring.
fn find_odd_cycle(d: &GapSetView, n: usize) -> Option<Vec<u64>> {
    let gaps = d.below(n as u64);
    let mut level = vec![usize::MAX; n + 1];
    let mut parent = vec![0usize; n + 1];
    for root in 1..=n {
        if level[root] != usize::MAX {
            continue;
        }
        level[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let neighbors = gaps
                .iter()
                .flat_map(|&g| [u.checked_sub(g as usize), Some(u + g as usize)])
                .flatten()
                .filter(|&v| v >= 1 && v <= n);
            for v in neighbors {
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if level[v] == level[u] {
                    // Walk both tree paths up to their meeting point.
                    let (mut a, mut b) = (u, v);
                    let (mut left, mut right) = (vec![a], vec![b]);
                    while a != b {
                        a = parent[a];
                        b = parent[b];
                        left.push(a);
                        right.push(b);
                    }
                    right.pop();
                    right.reverse();
                    left.extend(right);
                    return Some(left.into_iter().map(|x| x as u64).collect());
                }
            }
        }
    }
    None
}

/// Whether consecutive vertices (cyclically) differ by elements of D.
pub fn is_cycle(d: &GapSetView, cycle: &[u64]) -> bool {
    let m = cycle.len();
    m >= 3
        && (0..m).all(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % m]);
            d.contains(a.abs_diff(b))
        })
}

/// The cycle `1, 2k+1, 4k+1, …, (2k)²+1` of length 2k+1 in the distance
/// graph of `{(2k)ⁿ : n ≥ 0}`.
pub fn power_gap_odd_cycle(k: u64) -> Vec<u64> {
    (0..=2 * k).map(|j| 1 + 2 * k * j).collect()
}

/// Bounds on the chromatic number of the distance graph on `1..=n`, exact
/// when `n ≤ exact_limit`. Any value here is a lower bound for the whole
/// graph on ℕ.
pub fn chromatic_number_prefix(
    d: &GapSetView,
    n: usize,
    exact_limit: usize,
    opts: &SearchOptions,
) -> Result<ChromaticResult, SearchError> {
    if n < 1 {
        return Err(SearchError::InvalidParameter("N must be at least 1".into()));
    }
    if d.bound() < n as u64 - 1 {
        return Err(SearchError::ViewTooShort {
            bound: d.bound(),
            needed: n as u64 - 1,
        });
    }
    let gaps = d.below(n as u64);
    let mut coloring = greedy_coloring(gaps, n);
    let mut upper = coloring.iter().copied().max().unwrap_or(1) as u32;
    let clique = find_clique(d, n, 200_000);
    let odd_cycle = find_odd_cycle(d, n);
    let mut lower = (clique.len() as u32).max(1);
    if odd_cycle.is_some() {
        lower = lower.max(3);
    }
    let exact = n <= exact_limit;
    if exact {
        for c in lower..upper {
            let res = max_avoidable(d, 2, c, n, opts)?;
            if matches!(res.verdict, DeltaVerdict::Unknown { .. }) {
                coloring = res.witness;
                upper = c;
                break;
            }
        }
        lower = upper;
    }
    Ok(ChromaticResult {
        set: None,
        n,
        lower,
        upper,
        exact,
        coloring,
        clique: (clique.len() >= 2).then_some(clique),
        odd_cycle,
    })
}

/// Finite-range evidence that D is not r-accessible: the fractional parts
/// `{α·d}` stay in `[ε, (r−1)/r]` for every listed d, and the induced
/// coloring of `1..=n` has no monochromatic `(⌈1/(rε)⌉+1)`-term
/// D-diffsequence. This is evidence on a prefix, not a proof over ℕ.
pub fn doa_evidence(
    d: &GapSetView,
    alpha: &Q5,
    eps: &BigRational,
    r: u32,
    n: usize,
) -> Result<Certificate, SearchError> {
    doa_evidence_with_terms(d, &d.to_bigints(), alpha, eps, r, n)
}

/// [`doa_evidence`] certifying the fractional parts over `terms` (which may
/// reach far beyond the scanned prefix).
pub fn doa_evidence_with_terms(
    d: &GapSetView,
    terms: &[BigInt],
    alpha: &Q5,
    eps: &BigRational,
    r: u32,
    n: usize,
) -> Result<Certificate, SearchError> {
    let bound = diffseq_bound_from_eps(r, eps)?;
    let mut cert = Certificate::new(
        "doa_evidence",
        json!({
            "alpha": alpha,
            "eps": format_rational(eps),
            "r": r,
            "n": n,
            "forbidden_length": bound,
            "scope": "finite range",
        }),
        VerifiedRange::new("x", 1, n as u64),
    );
    cert.push_part(certify_fracs(alpha, terms, eps, r)?);

    let coloring = frac_coloring(alpha, r, n)?;
    let view = d.truncate(n as u64);
    let view = if view.bound() + 1 < n as u64 {
        return Err(SearchError::ViewTooShort {
            bound: d.bound(),
            needed: n as u64 - 1,
        });
    } else {
        view
    };
    let scan = longest_mono_diffseq(&coloring, &view)?;
    let mut part = Certificate::new(
        "no_long_mono_diffseq",
        json!({ "forbidden_length": bound, "longest": scan.length }),
        VerifiedRange::new("x", 1, n as u64),
    );
    part.witnesses.push(json!({ "longest_chain": scan.witness }));
    if scan.length as u64 >= bound {
        part.fail(json!({ "chain": scan.witness }));
    }
    cert.push_part(part);
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorings::residue_coloring;
    use crate::exactnum::rat;
    use crate::gapsets::enumerate;

    fn view(xs: &[u64], bound: u64) -> GapSetView {
        GapSetView::new(xs.to_vec(), bound).unwrap()
    }

    fn naturals(n: u64) -> GapSetView {
        view(&(1..=n).collect::<Vec<_>>(), n)
    }

    fn all_options() -> Vec<SearchOptions> {
        let mut v = Vec::new();
        for strategy in [Strategy::List, Strategy::Bitset] {
            for threads in [Some(1), Some(3)] {
                for split_depth in [1, 4] {
                    v.push(SearchOptions {
                        threads,
                        strategy,
                        split_depth,
                        symmetry_breaking: true,
                    });
                }
            }
        }
        v
    }

    #[test]
    fn v3_pairs() {
        let v3 = enumerate(&GapSetSpec::Nonmultiples { m: 3 }, 10).unwrap();
        let res = delta(&v3, 2, 2, 10, &SearchOptions::sequential()).unwrap();
        assert_eq!(res.verdict, DeltaVerdict::Delta { n: 3 });
        assert_eq!(res.witness, vec![1, 2]);
    }

    #[test]
    fn pigeonhole() {
        for r in 2..=5 {
            let res = delta(&naturals(10), 2, r, 10, &SearchOptions::sequential()).unwrap();
            assert_eq!(res.delta(), Some(r as usize + 1));
        }
    }

    #[test]
    fn unit_gap_never_forces_a_pair() {
        let res = delta(&view(&[1], 50), 2, 2, 50, &SearchOptions::default()).unwrap();
        assert_eq!(res.verdict, DeltaVerdict::Unknown { budget: 50 });
        let alt: Vec<u16> = (0..50).map(|i| 1 + (i % 2) as u16).collect();
        assert_eq!(res.witness, alt);
    }

    #[test]
    fn gap_two_blocks() {
        let res = delta(&view(&[2], 40), 2, 2, 40, &SearchOptions::default()).unwrap();
        assert_eq!(res.verdict, DeltaVerdict::Unknown { budget: 40 });
        let w = res.witness_coloring().unwrap();
        assert_eq!(longest_mono_diffseq(&w, &view(&[2], 40)).unwrap().length, 1);
    }

    #[test]
    fn k_one_is_trivial() {
        let res = delta(&view(&[1, 2], 5), 1, 2, 5, &SearchOptions::default()).unwrap();
        assert_eq!(res.delta(), Some(1));
        assert!(delta(&view(&[1], 5), 2, 2, 0, &SearchOptions::default()).is_err());
    }

    #[test]
    fn short_view_is_rejected() {
        assert!(matches!(
            max_avoidable(&view(&[1], 5), 2, 2, 20, &SearchOptions::default()),
            Err(SearchError::ViewTooShort { .. })
        ));
    }

    #[test]
    fn strategies_and_thread_counts_agree() {
        let cases: Vec<(GapSetView, u32, u32, usize)> = vec![
            (enumerate(&GapSetSpec::Nonmultiples { m: 3 }, 40).unwrap(), 3, 2, 40),
            (view(&[1, 2, 4, 8, 16, 32], 60), 3, 2, 60),
            (view(&[1, 3], 40), 4, 2, 40),
            (naturals(30), 3, 3, 30),
            (view(&[2, 3, 5], 120), 3, 2, 120),
        ];
        for (d, k, r, budget) in cases {
            let reference = max_avoidable(&d, k, r, budget, &SearchOptions::sequential())
                .unwrap()
                .without_stats();
            for opts in all_options() {
                let mut got = max_avoidable(&d, k, r, budget, &opts).unwrap().without_stats();
                got.strategy = reference.strategy;
                assert_eq!(got, reference, "{opts:?}");
            }
        }
    }

    /// Plain enumeration of all r-colorings of 1..=n, with no pruning.
    fn avoider_exists(d: &GapSetView, k: u32, r: u32, n: usize) -> bool {
        let total = (r as u64).pow(n as u32);
        (0..total).any(|mut code| {
            let w: Vec<u16> = (0..n)
                .map(|_| {
                    let c = (code % r as u64) as u16 + 1;
                    code /= r as u64;
                    c
                })
                .collect();
            let c = Coloring::new(r, w, Provenance::Explicit).unwrap();
            (longest_mono_diffseq(&c, d).unwrap().length as u32) < k
        })
    }

    #[test]
    fn matches_unpruned_enumeration() {
        let sets: Vec<Vec<u64>> = vec![vec![1], vec![2], vec![1, 2], vec![1, 3], vec![2, 3, 5], vec![1, 4]];
        for gaps in sets {
            let d = view(&gaps, 12);
            for k in 2..=3 {
                let res = max_avoidable(&d, k, 2, 12, &SearchOptions::sequential()).unwrap();
                let brute = (1..=12).find(|&n| !avoider_exists(&d, k, 2, n));
                assert_eq!(res.delta(), brute, "D = {gaps:?}, k = {k}");
            }
        }
    }

    #[test]
    fn symmetry_breaking_keeps_verdicts() {
        for gaps in [vec![1, 2], vec![1, 3, 4], vec![2, 3]] {
            let d = view(&gaps, 16);
            for (k, r) in [(2, 2), (3, 2), (2, 3)] {
                let on = max_avoidable(&d, k, r, 16, &SearchOptions::sequential()).unwrap();
                let off = max_avoidable(
                    &d,
                    k,
                    r,
                    16,
                    &SearchOptions {
                        symmetry_breaking: false,
                        ..SearchOptions::sequential()
                    },
                )
                .unwrap();
                assert_eq!(on.verdict, off.verdict, "D = {gaps:?}, k = {k}, r = {r}");
            }
        }
    }

    #[test]
    fn monotone_in_k_and_r() {
        let d = view(&[1, 2, 4], 40);
        let value = |k, r| match delta(&d, k, r, 40, &SearchOptions::default()).unwrap().verdict {
            DeltaVerdict::Delta { n } => n,
            DeltaVerdict::Unknown { .. } => usize::MAX,
        };
        for k in 1..4 {
            for r in 1..3 {
                assert!(value(k, r) <= value(k + 1, r));
                assert!(value(k, r) <= value(k, r + 1));
            }
        }
    }

    #[test]
    fn chromatic_examples() {
        let pow2 = enumerate(&GapSetSpec::Geometric { base: 2 }, 5).unwrap();
        let res = chromatic_number_prefix(&pow2, 5, 0, &SearchOptions::default()).unwrap();
        assert!(res.lower >= 3);
        assert!(is_cycle(&pow2, &[1, 3, 5]));
        assert_eq!(res.clique.as_ref().map(|c| c.len()), Some(3));
        assert!(is_proper(&pow2, &res.coloring));

        let v3 = enumerate(&GapSetSpec::Nonmultiples { m: 3 }, 12).unwrap();
        let res = chromatic_number_prefix(&v3, 12, 12, &SearchOptions::default()).unwrap();
        assert!(res.exact);
        assert_eq!((res.lower, res.upper), (3, 3));
        assert!(is_proper(&v3, &res.coloring));
        // Colors are forced by residues mod 3, so the witness is the residue
        // coloring up to renaming.
        let residue = residue_coloring(3, 12).unwrap();
        let rename = |c: u16| residue.word()[res.coloring.iter().position(|&x| x == c).unwrap()];
        assert!(res.coloring.iter().zip(residue.word()).all(|(&a, &b)| rename(a) == b));

        let res = chromatic_number_prefix(&view(&[1], 10), 10, 10, &SearchOptions::default()).unwrap();
        assert_eq!((res.lower, res.upper), (2, 2));
        assert!(res.odd_cycle.is_none());
    }

    #[test]
    fn odd_cycles_in_power_gap_graphs() {
        for k in 1..=4u64 {
            let cyc = power_gap_odd_cycle(k);
            assert_eq!(cyc.len() as u64, 2 * k + 1);
            let top = *cyc.last().unwrap();
            let d = enumerate(&GapSetSpec::Geometric { base: 2 * k }, top).unwrap();
            assert!(is_cycle(&d, &cyc), "k = {k}");
            let res = chromatic_number_prefix(&d, top as usize, 0, &SearchOptions::default()).unwrap();
            let found = res.odd_cycle.expect("graph is not bipartite");
            assert!(found.len() % 2 == 1 && is_cycle(&d, &found));
            assert!(res.lower >= 3);
        }
    }

    #[test]
    fn doa_evidence_examples() {
        let ef = enumerate(&GapSetSpec::EvenFibonacci, 5_000).unwrap();
        let alpha = Q5::new(rat(3, 8), rat(1, 8));
        let cert = doa_evidence(&ef, &alpha, &rat(21, 100), 2, 5_000).unwrap();
        assert!(cert.passed(), "{cert:?}");
        assert_eq!(cert.parameters["forbidden_length"], 4);

        let one = view(&[1], 100);
        let cert = doa_evidence(&one, &Q5::from_rational(rat(1, 2)), &rat(1, 2), 2, 100).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.parameters["forbidden_length"], 2);

        // A rational α with 1024·α integral puts {α·1024} at 0.
        let g4 = enumerate(&GapSetSpec::Geometric { base: 4 }, 2_000).unwrap();
        let cert = doa_evidence(&g4, &Q5::from_rational(rat(341, 1024)), &rat(1, 8), 2, 2_000).unwrap();
        assert!(!cert.passed());
    }
}
