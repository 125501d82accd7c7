use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use quotient_hardy::invariant::BasicMap;
use quotient_hardy::poly::{LaurentPoly, MixedPoly, PolyJson};
use quotient_hardy::toeplitz::Symbol;
use serde::de::DeserializeOwned;
use serde::Deserialize;

/// Reads JSON given inline, as a file path, or as `-` for stdin.
pub fn read_json<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let text = if arg == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).context("reading stdin")?;
        buf
    } else if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).with_context(|| format!("reading {arg}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from {}", if arg == "-" { "stdin" } else { arg }))
}

/// How a symbol's exponents are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Coords {
    /// A polynomial in `t` and `conj(t)` on the image (`ebar` holds the
    /// conjugate exponents).
    Theta,
    /// An invariant Laurent polynomial on the torus.
    Torus,
}

pub fn read_symbol(arg: &str, coords: Coords, map: &BasicMap) -> Result<Symbol> {
    let json: PolyJson = read_json(arg)?;
    let symbol = match coords {
        Coords::Theta => Symbol::from_theta(map, MixedPoly::from_json(&json)?)?,
        Coords::Torus => Symbol::from_pulled(map, LaurentPoly::from_json(&json)?)?,
    };
    Ok(symbol)
}

pub fn read_laurent(arg: &str) -> Result<LaurentPoly> {
    Ok(LaurentPoly::from_json(&read_json(arg)?)?)
}

/// A pair of points, either `{"z": [...], "w": [...]}` or `[z, w]`, each
/// point a list of `[re, im]`.
#[derive(Deserialize)]
#[serde(untagged)]
enum PairJson {
    Named { z: Vec<[f64; 2]>, w: Vec<[f64; 2]> },
    Bare([Vec<[f64; 2]>; 2]),
}

pub type PointPair = (Vec<Complex64>, Vec<Complex64>);

pub fn read_pairs(arg: &str) -> Result<Vec<PointPair>> {
    let raw: Vec<PairJson> = read_json(arg)?;
    let point = |v: &[[f64; 2]]| v.iter().map(|c| Complex64::new(c[0], c[1])).collect::<Vec<_>>();
    let pairs: Vec<PointPair> = raw
        .iter()
        .map(|p| match p {
            PairJson::Named { z, w } => (point(z), point(w)),
            PairJson::Bare([z, w]) => (point(z), point(w)),
        })
        .collect();
    if let Some((z, w)) = pairs.iter().find(|(z, w)| z.len() != w.len()) {
        bail!("point pair has mismatched dimensions {} and {}", z.len(), w.len());
    }
    Ok(pairs)
}
