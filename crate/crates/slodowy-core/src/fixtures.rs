//! Loading of the worked-example fixtures (sl3 quantum, sl4 classical).
//!
//! Fixtures are versioned JSON files in a data directory; the location is
//! taken from the `SLODOWY_FIXTURES` environment variable, a `fixtures`
//! directory under the current directory, or the workspace-root fallback.

use crate::error::{CoreError, Result};
use crate::lie::Mat;
use crate::rat::{parse_rat, Rat};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Resolve the fixture directory.
pub fn default_fixture_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("SLODOWY_FIXTURES") {
        return PathBuf::from(dir);
    }
    let cwd = PathBuf::from("fixtures");
    if cwd.is_dir() {
        return cwd;
    }
    // workspace root relative to this crate, for test binaries
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[derive(Debug, Deserialize)]
struct WordTerm {
    coeff: String,
    word: Vec<String>,
    #[serde(default)]
    hbar: usize,
}

#[derive(Debug, Deserialize)]
struct Sl3Raw {
    n: usize,
    /// The fixture's Cartan symbols denote the library's Cartan letters
    /// shifted by this multiple of hbar (a normalization dictionary).
    #[serde(default)]
    cartan_shift_hbar: Option<String>,
    #[serde(default)]
    #[allow(dead_code)]
    notes: Vec<String>,
    generators: BTreeMap<String, Mat>,
    z1: Vec<WordTerm>,
    z2: Vec<WordTerm>,
    lift1: Vec<WordTerm>,
    lift2: Vec<WordTerm>,
}

/// Resolved sl3 fixture: formulas as coefficient-word-hbar terms.
#[derive(Debug, Clone)]
pub struct Sl3Fixture {
    /// Shift of Cartan word factors, in units of hbar.
    pub cartan_shift: Rat,
    pub z1: Vec<(Rat, Vec<Mat>, usize)>,
    pub z2: Vec<(Rat, Vec<Mat>, usize)>,
    pub lift1: Vec<(Rat, Vec<Mat>, usize)>,
    pub lift2: Vec<(Rat, Vec<Mat>, usize)>,
}

fn resolve_terms(
    raw: &[WordTerm],
    generators: &BTreeMap<String, Mat>,
    n: usize,
) -> Result<Vec<(Rat, Vec<Mat>, usize)>> {
    raw.iter()
        .map(|t| {
            let coeff = parse_rat(&t.coeff).map_err(CoreError::Fixture)?;
            let word = t
                .word
                .iter()
                .map(|name| {
                    generators
                        .get(name)
                        .cloned()
                        .ok_or_else(|| CoreError::Fixture(format!("unknown generator {name:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if word.iter().any(|m| m.dim() != n) {
                return Err(CoreError::Fixture("generator of wrong dimension".into()));
            }
            Ok((coeff, word, t.hbar))
        })
        .collect()
}

/// Load the sl3 worked-example formulas.
pub fn load_sl3(dir: &Path) -> Result<Sl3Fixture> {
    let path = dir.join("sl3.json");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CoreError::Fixture(format!("cannot read {}: {e}", path.display())))?;
    let raw: Sl3Raw = serde_json::from_str(&text)?;
    let cartan_shift = match &raw.cartan_shift_hbar {
        Some(s) => parse_rat(s).map_err(CoreError::Fixture)?,
        None => Rat::from_integer(0.into()),
    };
    Ok(Sl3Fixture {
        cartan_shift,
        z1: resolve_terms(&raw.z1, &raw.generators, raw.n)?,
        z2: resolve_terms(&raw.z2, &raw.generators, raw.n)?,
        lift1: resolve_terms(&raw.lift1, &raw.generators, raw.n)?,
        lift2: resolve_terms(&raw.lift2, &raw.generators, raw.n)?,
    })
}

/// Raw polynomial: list of (coefficient, exponent vector).
pub type RawPoly = Vec<(String, Vec<u32>)>;

/// The sl4 worked-example data: two matrix sections with polynomial
/// entries, the two expected bracket tables, and the comparison map.
#[derive(Debug, Clone, Deserialize)]
pub struct Sl4Fixture {
    pub n: usize,
    pub slice_vars: Vec<String>,
    /// slice_section[i][j] is the (i+1, j+1) entry as a polynomial in the
    /// slice variables.
    pub slice_section: Vec<Vec<RawPoly>>,
    pub reduced_vars: Vec<String>,
    pub reduced_section: Vec<Vec<RawPoly>>,
    /// nonzero brackets {lhs, rhs} among the slice variables.
    pub slice_brackets: Vec<BracketEntry>,
    pub reduced_brackets: Vec<BracketEntry>,
    /// the comparison map on slice variables, valued in reduced variables.
    pub phi: BTreeMap<String, RawPoly>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct BracketEntry {
    pub lhs: String,
    pub rhs: String,
    pub value: RawPoly,
}

/// Load the sl4 worked-example data.
pub fn load_sl4(dir: &Path) -> Result<Sl4Fixture> {
    let path = dir.join("sl4.json");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CoreError::Fixture(format!("cannot read {}: {e}", path.display())))?;
    let fx: Sl4Fixture = serde_json::from_str(&text)?;
    if fx.slice_section.len() != fx.n
        || fx.slice_section.iter().any(|row| row.len() != fx.n)
        || fx.reduced_section.len() != fx.n
        || fx.reduced_section.iter().any(|row| row.len() != fx.n)
    {
        return Err(CoreError::Fixture("section matrices must be n x n".into()));
    }
    Ok(fx)
}
