//! Parsing of set definitions, coloring sources and exact numbers from the
//! command line.

use std::fs;
use std::path::{Path, PathBuf};

use diffseq_core::colorings::{
    block_coloring, frac_coloring, golden_rotation_word, preset, residue_coloring, rotation_word, Coloring,
    RleColoring, PRESETS,
};
use diffseq_core::exactnum::parse_rational;
use diffseq_core::gapsets::GapSetSpec;
use diffseq_core::{BigRational, Q5};

use crate::CliError;

pub fn rational(s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).map_err(|e| CliError::Input(e.to_string()))
}

pub fn q5(s: &str) -> Result<Q5, CliError> {
    s.parse::<Q5>().map_err(|e| CliError::Input(format!("{s:?}: {e}")))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// A gap set from `--set FILE` or `--set-json TEXT`.
pub fn gap_set(file: Option<&PathBuf>, inline: Option<&str>) -> Result<GapSetSpec, CliError> {
    let text = match (file, inline) {
        (Some(p), None) => read(p)?,
        (None, Some(t)) => t.to_string(),
        (Some(_), Some(_)) => return Err(CliError::Input("give either --set or --set-json, not both".into())),
        (None, None) => return Err(CliError::Input("a gap set is required (--set FILE or --set-json JSON)".into())),
    };
    let spec: GapSetSpec =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("bad set definition: {e}")))?;
    spec.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(spec)
}

/// Coloring sources:
///
/// - a preset name (`sqrt5over8`, `oneplusphiover4`) or `golden`
/// - `frac:ALPHA:R`, `block:M`, `residue:M`, `rotation:ALPHA:X0:CUT`
/// - a path to a run-length JSON file or a digit file
///
/// Generated sources need a length; files are truncated to it when given.
pub fn coloring(source: &str, n: Option<usize>) -> Result<Coloring, CliError> {
    let need_n = || n.ok_or_else(|| CliError::Input(format!("coloring {source:?} needs a length (-N)")));
    let parts: Vec<&str> = source.split(':').collect();
    let generated = match parts.as_slice() {
        [name] if PRESETS.contains(name) => Some(preset(name, need_n()?)),
        ["golden"] => Some(golden_rotation_word(need_n()?)),
        ["frac", alpha, r] => Some(frac_coloring(&q5(alpha)?, count(r)?, need_n()?)),
        ["block", m] => Some(block_coloring(count(m)?, need_n()?)),
        ["residue", m] => Some(residue_coloring(count(m)?, need_n()?)),
        ["rotation", alpha, x0, cut] => Some(rotation_word(&q5(alpha)?, &q5(x0)?, &q5(cut)?, need_n()?)),
        _ => None,
    };
    if let Some(c) = generated {
        return c.map_err(|e| CliError::Input(e.to_string()));
    }
    let path = Path::new(source);
    if !path.is_file() {
        return Err(CliError::Input(format!(
            "{source:?} is neither a known coloring ({}, golden, frac:, block:, residue:, rotation:) nor a file",
            PRESETS.join(", ")
        )));
    }
    let text = read(path)?;
    let c = if text.trim_start().starts_with('{') {
        let rle: RleColoring =
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Coloring::from_rle(&rle)
    } else {
        Coloring::from_digits(&text, None)
    }
    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    match n {
        Some(n) if n > c.len() => Err(CliError::Input(format!(
            "{} holds {} positions, {n} requested",
            path.display(),
            c.len()
        ))),
        Some(n) => Ok(c.prefix(n)),
        None => Ok(c),
    }
}

fn count<T: std::str::FromStr>(s: &str) -> Result<T, CliError> {
    s.parse().map_err(|_| CliError::Input(format!("{s:?} is not a non-negative integer")))
}

/// `NAME=VALUE` pairs for `--override`.
pub fn override_pair(s: &str) -> Result<(String, Q5), CliError> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| CliError::Input(format!("override {s:?} is not NAME=VALUE")))?;
    Ok((name.to_string(), q5(value)?))
}
