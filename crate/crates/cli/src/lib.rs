//! The `diffseq` command line. Every command prints JSON on stdout.
//!
//! Exit codes: 0 when the command succeeded and any assertion held, 1 when an
//! assertion failed (the JSON is still printed), 2 on bad input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diffseq_core::construct::{build_alpha_for_terms, ConstructError};
use diffseq_core::gapsets::{difference_set, divide, enumerate, filter_multiples, growth_certificate, GapSetSpec};
use diffseq_core::pipeline::{run_pipeline, PipelineError, PipelineParams};
use diffseq_core::search::{chromatic_number_prefix, delta, SearchOptions, Strategy};
use diffseq_core::verify::{longest_mono_ap, longest_mono_diffseq};
use serde::Serialize;
use serde_json::json;

pub mod input;
pub mod repro;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Parser, Debug)]
#[command(name = "diffseq", version, about = "Monochromatic diffsequences: exact constructions, scans and searches")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SetArgs {
    /// JSON set definition file.
    #[arg(long = "set", value_name = "FILE")]
    pub set: Option<PathBuf>,
    /// Inline JSON set definition, e.g. '{"kind":"geometric","base":4}'.
    #[arg(long = "set-json", value_name = "JSON")]
    pub set_json: Option<String>,
}

impl SetArgs {
    fn spec(&self) -> Result<GapSetSpec, CliError> {
        input::gap_set(self.set.as_ref(), self.set_json.as_deref())
    }
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Worker threads; 1 runs sequentially.
    #[arg(long, env = "DIFFSEQ_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 14)]
    pub split_depth: usize,
}

impl SearchArgs {
    fn options(&self) -> Result<SearchOptions, CliError> {
        if self.threads == Some(0) {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        Ok(SearchOptions {
            threads: self.threads,
            strategy: match self.strategy {
                StrategyArg::Auto => Strategy::Auto,
                StrategyArg::List => Strategy::List,
                StrategyArg::Bitset => Strategy::Bitset,
            },
            split_depth: self.split_depth,
            ..SearchOptions::default()
        })
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum StrategyArg {
    Auto,
    List,
    Bitset,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum StructureArg {
    Diffseq,
    Ap,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Rle,
    Digits,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate a gap set up to a bound.
    Set {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        bound: u64,
        /// Replace D by {d/m : d ∈ D, m | d}.
        #[arg(long, value_name = "M")]
        divide: Option<u64>,
        /// Keep only the multiples of M.
        #[arg(long, value_name = "M")]
        filter_multiples: Option<u64>,
        /// Print the difference set D − D instead of D.
        #[arg(long)]
        differences: bool,
        /// Check d_{n+1}/d_n ≥ RHO from the zero-based index --growth-start on.
        #[arg(long, value_name = "RHO")]
        growth: Option<String>,
        #[arg(long, default_value_t = 0)]
        growth_start: usize,
    },
    /// Run the nested-interval construction and print the trace.
    Alpha {
        #[command(flatten)]
        set: SetArgs,
        #[arg(short = 'r', default_value_t = 2)]
        r: u32,
        #[arg(long, default_value = "1")]
        delta: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// One-based index from which the growth condition holds.
        #[arg(long, default_value_t = 1)]
        start: usize,
    },
    /// Generate a coloring and export it.
    Color {
        /// Preset name, golden, frac:ALPHA:R, block:M, residue:M,
        /// rotation:ALPHA:X0:CUT, or a coloring file.
        source: String,
        #[arg(short = 'N')]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Rle)]
        format: Format,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Longest monochromatic D-diffsequence or D-AP in a coloring.
    Scan {
        #[arg(long)]
        coloring: String,
        #[arg(short = 'N')]
        n: Option<usize>,
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, value_enum, default_value_t = StructureArg::Diffseq)]
        structure: StructureArg,
        /// Assert that the longest monochromatic structure has at most K terms.
        #[arg(long, value_name = "K")]
        max_k: Option<usize>,
    },
    /// Δ(D, k; r) by exhaustive search, or a lower bound if the budget runs out.
    Delta {
        #[command(flatten)]
        set: SetArgs,
        #[arg(short = 'k')]
        k: u32,
        #[arg(short = 'r', default_value_t = 2)]
        r: u32,
        #[arg(long)]
        budget: usize,
        #[command(flatten)]
        search: SearchArgs,
        /// Write the witness coloring as run-length JSON.
        #[arg(long, value_name = "FILE")]
        emit_witness: Option<PathBuf>,
        /// Include node counts and wall time (not reproducible across runs).
        #[arg(long)]
        stats: bool,
    },
    /// Bounds on the chromatic number of the distance graph on 1..=N.
    Chromatic {
        #[command(flatten)]
        set: SetArgs,
        #[arg(short = 'N')]
        n: usize,
        /// Compute the exact value when N is at most this.
        #[arg(long, default_value_t = 0)]
        exact_limit: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Factor complexity p(n) for n = 1..=max-n.
    Complexity {
        source: String,
        #[arg(short = 'N')]
        n: Option<usize>,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Assert p(n) = n + 1 for every listed n.
        #[arg(long)]
        assert_sturmian: bool,
    },
    /// Growth check, construction, certified coloring and scan in one go.
    Pipeline {
        #[command(flatten)]
        set: SetArgs,
        #[arg(short = 'r', default_value_t = 2)]
        r: u32,
        #[arg(long, default_value = "1")]
        delta: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(short = 'N', default_value_t = 20_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        start: usize,
    },
    /// Run the full claim list and report pass/fail per claim.
    Reproduce {
        #[arg(long, value_enum, default_value_t = repro::Scale::Quick)]
        scale: repro::Scale,
        /// Replace a preset rotation number, e.g. sqrt5over8=1/3.
        #[arg(long = "override", value_name = "NAME=VALUE")]
        overrides: Vec<String>,
        /// Record the time per claim.
        #[arg(long)]
        timings: bool,
        /// Also write the JSON report to FILE.
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
    },
}

/// What a command produced: JSON for stdout and whether its assertion held.
pub struct Outcome {
    pub json: String,
    pub ok: bool,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn ok<T: Serialize>(v: &T) -> Result<Outcome, CliError> {
    Ok(Outcome { json: to_json(v), ok: true })
}

pub fn execute(cmd: &Command, log: &mut dyn Write) -> Result<Outcome, CliError> {
    match cmd {
        Command::Set {
            set,
            bound,
            divide: div,
            filter_multiples: filt,
            differences,
            growth,
            growth_start,
        } => {
            let mut spec = set.spec()?;
            if let Some(m) = filt {
                spec = filter_multiples(&spec, *m).map_err(input)?;
            }
            if let Some(m) = div {
                spec = divide(&spec, *m).map_err(input)?;
            }
            let mut view = enumerate(&spec, *bound).map_err(input)?;
            if *differences {
                view = difference_set(&view);
            }
            let growth = growth
                .as_deref()
                .map(|rho| input::rational(rho).map(|rho| growth_certificate(&view, &rho, *growth_start)))
                .transpose()?;
            let held = growth.as_ref().is_none_or(|c| c.passed());
            Ok(Outcome {
                json: to_json(&json!({
                    "spec": spec,
                    "bound": view.bound(),
                    "count": view.len(),
                    "elements": view.elements(),
                    "growth": growth,
                })),
                ok: held,
            })
        }
        Command::Alpha {
            set,
            r,
            delta,
            steps,
            start,
        } => {
            let spec = set.spec()?;
            let delta = input::rational(delta)?;
            let count = start.saturating_sub(1) + steps;
            let terms = spec.terms(count).or_else(|_| {
                let view = enumerate(&spec, 1 << 20).map_err(input)?;
                if view.len() < count {
                    return Err(CliError::Input(format!(
                        "{} elements up to 2^20, the construction needs {count}",
                        view.len()
                    )));
                }
                Ok(view.to_bigints()[..count].to_vec())
            })?;
            let cert = build_alpha_for_terms(&terms, *start, *r, &delta, *steps).map_err(construct_error)?;
            Ok(Outcome {
                json: to_json(&cert),
                ok: cert.all_verdicts_pass(),
            })
        }
        Command::Color { source, n, format, output } => {
            let c = input::coloring(source, *n)?;
            let text = match format {
                Format::Rle => to_json(&c.to_rle()),
                Format::Digits => c.to_digits().map_err(input)?,
            };
            match output {
                Some(path) => {
                    fs::write(path, format!("{text}\n"))?;
                    ok(&json!({ "written": path, "length": c.len(), "r": c.r(), "format": format_name(*format) }))
                }
                None => Ok(Outcome { json: text, ok: true }),
            }
        }
        Command::Scan {
            coloring,
            n,
            set,
            structure,
            max_k,
        } => {
            let c = input::coloring(coloring, *n)?;
            let spec = set.spec()?;
            let view = enumerate(&spec, c.len().max(1) as u64).map_err(input)?;
            let res = match structure {
                StructureArg::Diffseq => longest_mono_diffseq(&c, &view),
                StructureArg::Ap => longest_mono_ap(&c, &view),
            }
            .map_err(input)?;
            Ok(Outcome {
                json: to_json(&res),
                ok: max_k.is_none_or(|k| res.length <= k),
            })
        }
        Command::Delta {
            set,
            k,
            r,
            budget,
            search,
            emit_witness,
            stats,
        } => {
            let spec = set.spec()?;
            let view = enumerate(&spec, *budget as u64).map_err(input)?;
            let t0 = Instant::now();
            let mut res = delta(&view, *k, *r, *budget, &search.options()?).map_err(input)?.with_set(&spec);
            if *stats {
                res.elapsed_ms = Some(t0.elapsed().as_secs_f64() * 1e3);
            } else {
                res = res.without_stats();
            }
            if let Some(path) = emit_witness {
                let w = res.witness_coloring().map_err(input)?;
                fs::write(path, format!("{}\n", to_json(&w.to_rle())))?;
                writeln!(log, "witness of length {} written to {}", w.len(), path.display())?;
            }
            ok(&res)
        }
        Command::Chromatic {
            set,
            n,
            exact_limit,
            search,
        } => {
            let spec = set.spec()?;
            let view = enumerate(&spec, *n as u64).map_err(input)?;
            let res = chromatic_number_prefix(&view, *n, *exact_limit, &search.options()?)
                .map_err(input)?
                .with_set(&spec);
            ok(&res)
        }
        Command::Complexity {
            source,
            n,
            max_n,
            assert_sturmian,
        } => {
            let c = input::coloring(source, *n)?;
            let mut rows = Vec::new();
            let mut sturmian = true;
            for len in 1..=*max_n {
                let p = diffseq_core::colorings::complexity(&c, len).map_err(input)?;
                sturmian &= p == len + 1;
                rows.push(json!({ "n": len, "p": p }));
            }
            Ok(Outcome {
                json: to_json(&json!({ "length": c.len(), "complexity": rows, "sturmian_prefix": sturmian })),
                ok: !assert_sturmian || sturmian,
            })
        }
        Command::Pipeline {
            set,
            r,
            delta,
            steps,
            n,
            start,
        } => {
            let params = PipelineParams {
                spec: set.spec()?,
                r: *r,
                delta: input::rational(delta)?,
                steps: *steps,
                n: *n,
                start: *start,
            };
            let res = run_pipeline(&params).map_err(|e| match e {
                PipelineError::Construct(c) => construct_error(c),
                other => input(other),
            })?;
            Ok(Outcome {
                json: to_json(&res),
                ok: res.certificate.passed(),
            })
        }
        Command::Reproduce {
            scale,
            overrides,
            timings,
            json: path,
        } => {
            let overrides = overrides
                .iter()
                .map(|s| input::override_pair(s))
                .collect::<Result<BTreeMap<_, _>, _>>()?;
            let report = repro::reproduce(*scale, overrides, *timings)?;
            write!(log, "{}", report.table())?;
            let text = to_json(&report);
            if let Some(p) = path {
                fs::write(p, format!("{text}\n"))?;
            }
            Ok(Outcome {
                json: text,
                ok: report.pass,
            })
        }
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Rle => "rle",
        Format::Digits => "digits",
    }
}

fn construct_error(e: ConstructError) -> CliError {
    match e {
        ConstructError::GrowthViolated {
            index,
            current,
            next,
            factor,
        } => CliError::Input(format!(
            "growth condition fails at index {index}: {next}/{current} < {factor}"
        )),
        other => input(other),
    }
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli.command, err) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.json);
            if o.ok {
                0
            } else {
                let _ = writeln!(err, "assertion failed");
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
