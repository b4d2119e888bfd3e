//! The reproduction suite: a fixed, ordered list of claims about the explicit
//! colorings, the Fibonacci facts, the constructor pipeline and the Δ engine.

use std::collections::BTreeMap;
use std::time::Instant;

use diffseq_core::colorings::{block_coloring, complexity, frac_coloring, golden_rotation_word, preset_alpha, PRESETS};
use diffseq_core::exactnum::{format_rational, rat};
use diffseq_core::gapsets::{enumerate, filter_multiples, GapSetSpec, GapSetView};
use diffseq_core::pipeline::{run_pipeline, PipelineParams};
use diffseq_core::search::{chromatic_number_prefix, delta, is_cycle, max_avoidable, DeltaVerdict, SearchOptions};
use diffseq_core::verify::{check_fib_fact, frac_bound_scan, longest_mono_ap, longest_mono_diffseq, pisano_period, FracBound};
use diffseq_core::{ProofStatus, Q5, Verdict};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Quick,
    Full,
}

impl Scale {
    /// Length of the scanned colorings.
    pub fn n(self) -> usize {
        match self {
            Scale::Quick => 10_000,
            Scale::Full => 50_000,
        }
    }

    /// Number of Fibonacci terms in the exact fractional-part checks.
    pub fn terms(self) -> usize {
        match self {
            Scale::Quick => 100,
            Scale::Full => 200,
        }
    }

    fn pipeline_n(self) -> usize {
        match self {
            Scale::Quick => 10_000,
            Scale::Full => 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimOutcome {
    pub id: String,
    pub anchor: String,
    pub parameters: Value,
    pub verdict: Verdict,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub scale: Scale,
    /// Preset rotation numbers replaced on the command line.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<String, Q5>,
    pub claims: Vec<ClaimOutcome>,
    pub pass: bool,
}

impl ReproReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        let width = self.claims.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.claims {
            let v = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            };
            let t = c.elapsed_ms.map(|ms| format!(" ({ms:.0} ms)")).unwrap_or_default();
            out.push_str(&format!("{v}  {:<width$}  {}{t}\n", c.id, c.detail));
        }
        let passed = self.claims.iter().filter(|c| c.verdict == Verdict::Pass).count();
        out.push_str(&format!("{passed} of {} claims passed\n", self.claims.len()));
        out
    }
}

struct Ctx {
    scale: Scale,
    overrides: BTreeMap<String, Q5>,
}

impl Ctx {
    fn alpha(&self, name: &str) -> Q5 {
        self.overrides
            .get(name)
            .cloned()
            .unwrap_or_else(|| preset_alpha(name).expect("registered preset"))
    }
}

type Check = Result<(bool, String), String>;

struct Claim {
    id: &'static str,
    anchor: &'static str,
    parameters: fn(&Ctx) -> Value,
    run: fn(&Ctx) -> Check,
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn sqrt5over8_distance(ctx: &Ctx) -> Check {
    let alpha = ctx.alpha("sqrt5over8");
    let fib = GapSetSpec::Fibonacci.terms(ctx.scale.terms()).map_err(e)?;
    let wide = frac_bound_scan(&alpha, &fib, &FracBound::DistNearest { bound: rat(1, 10) }).map_err(e)?;
    let head = frac_bound_scan(&alpha, &fib[..4], &FracBound::DistNearest { bound: rat(16, 100) }).map_err(e)?;
    let ok = wide.passed() && head.passed();
    let detail = match (&wide.counterexample, &head.counterexample) {
        (Some(c), _) | (None, Some(c)) => format!("violated: {c}"),
        _ => format!("distance > 1/10 for {} terms, > 16/100 for the first 4", fib.len()),
    };
    Ok((ok, detail))
}

fn sqrt5over8_aps(ctx: &Ctx) -> Check {
    let n = ctx.scale.n();
    let c = frac_coloring(&ctx.alpha("sqrt5over8"), 2, n).map_err(e)?;
    let f = enumerate(&GapSetSpec::Fibonacci, n as u64).map_err(e)?;
    let scan = longest_mono_ap(&c, &f).map_err(e)?;
    Ok((scan.length <= 5, format!("longest monochromatic F-AP on [1, {n}]: {} terms", scan.length)))
}

fn oneplusphiover4_window(ctx: &Ctx) -> Check {
    let alpha = ctx.alpha("oneplusphiover4");
    let terms = GapSetSpec::EvenFibonacci.terms(ctx.scale.terms()).map_err(e)?;
    let window = FracBound::FracWindow {
        lo: rat(21, 100),
        hi: rat(31, 100),
    };
    let cert = frac_bound_scan(&alpha, &terms, &window).map_err(e)?;
    let detail = match &cert.counterexample {
        Some(c) => format!("violated: {c}"),
        None => format!("fractional part in (21/100, 31/100) for {} terms", terms.len()),
    };
    Ok((cert.passed(), detail))
}

fn oneplusphiover4_chains(ctx: &Ctx) -> Check {
    let n = ctx.scale.n();
    let c = frac_coloring(&ctx.alpha("oneplusphiover4"), 2, n).map_err(e)?;
    let fe = enumerate(&GapSetSpec::EvenFibonacci, n as u64).map_err(e)?;
    let scan = longest_mono_diffseq(&c, &fe).map_err(e)?;
    Ok((
        scan.length <= 3,
        format!("longest monochromatic F_E-diffsequence on [1, {n}]: {} terms", scan.length),
    ))
}

fn modular_facts(ctx: &Ctx) -> Check {
    let p8 = pisano_period(8).map_err(e)?;
    let bound = ctx.scale.terms() as u64;
    let c8 = check_fib_fact("mod8_nonzero", bound).map_err(e)?;
    let c4 = check_fib_fact("mod4_one", bound).map_err(e)?;
    let complete = |c: &diffseq_core::Certificate| matches!(c.proof, ProofStatus::PeriodicityComplete { .. });
    let ok = p8 == 12 && c8.passed() && c4.passed() && complete(&c8) && complete(&c4);
    Ok((
        ok,
        format!(
            "Pisano period mod 8 is {p8}; mod 8 fact {:?}, mod 4 fact {:?}, both over a full period",
            c8.verdict, c4.verdict
        ),
    ))
}

fn binet(ctx: &Ctx) -> Check {
    let bound = ctx.scale.terms() as u64;
    let mut failed = Vec::new();
    for id in ["binet_sqrt5", "binet_one_plus_phi"] {
        if !check_fib_fact(id, bound).map_err(e)?.passed() {
            failed.push(id);
        }
    }
    let detail = if failed.is_empty() {
        format!("both identities hold exactly for n = 1..{bound}")
    } else {
        format!("failed: {}", failed.join(", "))
    };
    Ok((failed.is_empty(), detail))
}

fn even_fibonacci(ctx: &Ctx) -> Check {
    let count = ctx.scale.terms() as u64 / 2;
    let rec = check_fib_fact("even_fib_recurrence", count).map_err(e)?;
    let filtered = filter_multiples(&GapSetSpec::Fibonacci, 2).map_err(e)?;
    let a = enumerate(&filtered, 1_000_000).map_err(e)?;
    let b = enumerate(&GapSetSpec::EvenFibonacci, 1_000_000).map_err(e)?;
    Ok((
        rec.passed() && a == b,
        format!(
            "recurrence over {count} terms {:?}; filtered Fibonacci equals F_E up to 10^6: {}",
            rec.verdict,
            a == b
        ),
    ))
}

fn pipeline(ctx: &Ctx) -> Check {
    let res = run_pipeline(&PipelineParams {
        spec: GapSetSpec::Geometric { base: 4 },
        r: 2,
        delta: rat(1, 1),
        steps: 20,
        n: ctx.scale.pipeline_n(),
        start: 1,
    })
    .map_err(e)?;
    let z_ok = res.alpha.z[..4] == [0, 1, 5, 21].map(BigInt::from);
    let i4 = &res.alpha.intervals[3];
    let i4_ok = *i4.lo() == rat(169, 512) && *i4.hi() == rat(43, 128);
    let ok = z_ok && i4_ok && res.certificate.passed() && res.forbidden_length <= 6;
    Ok((
        ok,
        format!(
            "alpha = {}, certificate {:?}, no monochromatic {}-term diffsequence",
            format_rational(&res.alpha.alpha),
            res.certificate.verdict,
            res.forbidden_length
        ),
    ))
}

fn small_deltas(_: &Ctx) -> Check {
    let opts = SearchOptions::sequential();
    let v3 = enumerate(&GapSetSpec::Nonmultiples { m: 3 }, 10).map_err(e)?;
    let d_v3 = delta(&v3, 2, 2, 10, &opts).map_err(e)?.delta();
    let nat = GapSetView::new((1..=10).collect(), 10).map_err(e)?;
    let mut nat_ok = true;
    for r in 2..=5u32 {
        nat_ok &= delta(&nat, 2, r, 10, &opts).map_err(e)?.delta() == Some(r as usize + 1);
    }
    let one = GapSetView::new(vec![1], 50).map_err(e)?;
    let res = max_avoidable(&one, 2, 2, 50, &opts).map_err(e)?;
    let alternating = res.witness.iter().enumerate().all(|(i, &c)| c == 1 + (i % 2) as u16);
    let ok = d_v3 == Some(3) && nat_ok && res.verdict == (DeltaVerdict::Unknown { budget: 50 }) && alternating;
    Ok((
        ok,
        format!("Δ(V3,2;2) = {d_v3:?}; Δ(N,2;r) = r+1 for r = 2..5: {nat_ok}; D = [1] alternating avoider: {alternating}"),
    ))
}

fn chromatic(_: &Ctx) -> Check {
    let opts = SearchOptions::sequential();
    let pow2 = enumerate(&GapSetSpec::Geometric { base: 2 }, 64).map_err(e)?;
    let cycle = is_cycle(&pow2, &[1, 3, 5]);
    let p = chromatic_number_prefix(&pow2, 5, 0, &opts).map_err(e)?;
    let v3 = enumerate(&GapSetSpec::Nonmultiples { m: 3 }, 12).map_err(e)?;
    let v = chromatic_number_prefix(&v3, 12, 12, &opts).map_err(e)?;
    let ok = cycle && p.lower >= 3 && v.exact && v.upper == 3;
    Ok((
        ok,
        format!("powers of 2 on [1,5]: χ ≥ {}; V3 on [1,12]: χ = {}", p.lower, v.upper),
    ))
}

fn coloring_families(ctx: &Ctx) -> Check {
    let n = 300;
    let mut worst = 0u64;
    for m in 1..=6u64 {
        let c = block_coloring(m, n).map_err(e)?;
        let view = GapSetView::new((1..=m).collect(), n as u64).map_err(e)?;
        let s = longest_mono_diffseq(&c, &view).map_err(e)?.length as u64;
        let a = longest_mono_ap(&c, &view).map_err(e)?.length as u64;
        worst = worst.max(s.max(a).saturating_sub(m));
    }
    let w = golden_rotation_word(ctx.scale.n()).map_err(e)?;
    let mut sturmian = true;
    for k in 1..=12 {
        sturmian &= complexity(&w, k).map_err(e)? == k + 1;
    }
    Ok((
        worst == 0 && sturmian,
        format!(
            "block colorings stay within m for D = [1..m], m ≤ 6: {}; golden word p(n) = n+1 for n ≤ 12: {sturmian}",
            worst == 0
        ),
    ))
}

fn claims() -> Vec<Claim> {
    vec![
        Claim {
            id: "sqrt5over8_distance",
            anchor: "distance of √5·fₙ/8 to the nearest integer",
            parameters: |ctx| json!({ "alpha": ctx.alpha("sqrt5over8"), "terms": ctx.scale.terms(), "bound": "1/10", "head_bound": "16/100" }),
            run: sqrt5over8_distance,
        },
        Claim {
            id: "sqrt5over8_no_6_term_f_ap",
            anchor: "√5/8 coloring has no monochromatic 6-term F-AP",
            parameters: |ctx| json!({ "alpha": ctx.alpha("sqrt5over8"), "r": 2, "n": ctx.scale.n() }),
            run: sqrt5over8_aps,
        },
        Claim {
            id: "oneplusphiover4_window",
            anchor: "window for the fractional parts of (1+φ)·f₃ₙ/4",
            parameters: |ctx| json!({ "alpha": ctx.alpha("oneplusphiover4"), "terms": ctx.scale.terms(), "lo": "21/100", "hi": "31/100" }),
            run: oneplusphiover4_window,
        },
        Claim {
            id: "oneplusphiover4_no_4_term_fe_diffseq",
            anchor: "(1+φ)/4 coloring has no monochromatic 4-term F_E-diffsequence",
            parameters: |ctx| json!({ "alpha": ctx.alpha("oneplusphiover4"), "r": 2, "n": ctx.scale.n() }),
            run: oneplusphiover4_chains,
        },
        Claim {
            id: "fibonacci_modular_facts",
            anchor: "Fibonacci residues mod 8 and mod 4",
            parameters: |ctx| json!({ "moduli": [8, 4], "n": ctx.scale.terms() }),
            run: modular_facts,
        },
        Claim {
            id: "binet_identities",
            anchor: "Binet-form identities in ℚ(√5)",
            parameters: |ctx| json!({ "n": ctx.scale.terms() }),
            run: binet,
        },
        Claim {
            id: "even_fibonacci",
            anchor: "recurrence and characterization of the even Fibonacci numbers",
            parameters: |ctx| json!({ "terms": ctx.scale.terms() / 2, "filter_bound": 1_000_000 }),
            run: even_fibonacci,
        },
        Claim {
            id: "pipeline_powers_of_4",
            anchor: "nested-interval construction for powers of 4",
            parameters: |ctx| json!({ "set": GapSetSpec::Geometric { base: 4 }, "r": 2, "delta": "1", "steps": 20, "n": ctx.scale.pipeline_n() }),
            run: pipeline,
        },
        Claim {
            id: "delta_small_values",
            anchor: "small values of Δ(D, k; r)",
            parameters: |_| json!({ "k": 2, "budget": [10, 50] }),
            run: small_deltas,
        },
        Claim {
            id: "chromatic_prefix",
            anchor: "chromatic numbers of distance-graph prefixes",
            parameters: |_| json!({ "powers_of_2_n": 5, "v3_n": 12 }),
            run: chromatic,
        },
        Claim {
            id: "coloring_families",
            anchor: "block colorings and the golden rotation word",
            parameters: |ctx| json!({ "block_n": 300, "m": [1, 6], "golden_n": ctx.scale.n(), "factor_lengths": [1, 12] }),
            run: coloring_families,
        },
    ]
}

/// Runs every claim in order. Overrides replace preset rotation numbers and
/// exist so the suite can be shown to fail on a wrong α.
pub fn reproduce(scale: Scale, overrides: BTreeMap<String, Q5>, timings: bool) -> Result<ReproReport, CliError> {
    if let Some(bad) = overrides.keys().find(|k| !PRESETS.contains(&k.as_str())) {
        return Err(CliError::Input(format!(
            "cannot override {bad:?}; known presets: {}",
            PRESETS.join(", ")
        )));
    }
    let ctx = Ctx { scale, overrides };
    let mut outcomes = Vec::new();
    for claim in claims() {
        let t0 = Instant::now();
        let (ok, detail) = match (claim.run)(&ctx) {
            Ok(r) => r,
            Err(msg) => (false, format!("error: {msg}")),
        };
        outcomes.push(ClaimOutcome {
            id: claim.id.to_string(),
            anchor: claim.anchor.to_string(),
            parameters: (claim.parameters)(&ctx),
            verdict: Verdict::from_bool(ok),
            detail,
            elapsed_ms: timings.then(|| t0.elapsed().as_secs_f64() * 1e3),
        });
    }
    let pass = outcomes.iter().all(|c| c.verdict == Verdict::Pass);
    Ok(ReproReport {
        scale,
        overrides: ctx.overrides,
        claims: outcomes,
        pass,
    })
}
