//! Products of Toeplitz operators on finite windows: semi-commuting,
//! commuting, zero products and finite product chains.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{apply_unchecked, toeplitz_window_theta, GammaCache, Symbol};
use crate::error::{Error, Result};
use crate::group::Character;
use crate::invariant::BasisIndexSet;
use crate::poly::{torus_inner, LaurentPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductMode {
    /// `T_u T_v - T_{uv}`.
    Semi,
    /// `T_u T_v - T_v T_u`.
    Commute,
    /// `T_u T_v`.
    ZeroProduct,
    /// `T_{u_1} ... T_{u_k}`.
    FiniteProduct,
}

impl ProductMode {
    pub fn parse(s: &str) -> Option<ProductMode> {
        match s {
            "semi" => Some(ProductMode::Semi),
            "commute" => Some(ProductMode::Commute),
            "zero-product" | "zeroProduct" | "zero" => Some(ProductMode::ZeroProduct),
            "finite-product" | "finiteProduct" | "finite" => Some(ProductMode::FiniteProduct),
            _ => None,
        }
    }
}

/// Where the operators are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Realization {
    /// Windows in the coordinates `t` of the image, paired through the
    /// pushforward measure and multiplied as matrices.
    Quotient,
    /// Exact chains of `T_{u~}` on the isotypic component of `H^2(D^n)`.
    Ambient,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductReport {
    pub mode: ProductMode,
    pub realization: Realization,
    pub character: String,
    pub degree_bound: u32,
    pub rows: Vec<Vec<i32>>,
    pub cols: Vec<Vec<i32>>,
    #[serde(skip)]
    pub residual: DMatrix<Complex64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ProductReport {
    pub fn residual_rows(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.residual.nrows())
            .map(|i| (0..self.residual.ncols()).map(|j| [self.residual[(i, j)].re, self.residual[(i, j)].im]).collect())
            .collect()
    }
}

/// Largest sup-norm a column index may have so that every intermediate index
/// of the product stays inside a window of bound `d`.
fn column_bound(symbols: &[Symbol], mode: ProductMode, d: u32) -> Result<u32> {
    let total: u32 = symbols.iter().map(Symbol::radius).sum();
    if d < total {
        return Err(Error::MarginTooSmall { required: total, got: d });
    }
    let reach = match mode {
        ProductMode::Commute => symbols.iter().map(Symbol::radius).max().unwrap_or(0),
        _ => symbols[1..].iter().map(Symbol::radius).sum(),
    };
    Ok(d - reach)
}

fn check_arity(symbols: &[Symbol], mode: ProductMode) -> Result<()> {
    let ok = match mode {
        ProductMode::FiniteProduct => !symbols.is_empty(),
        _ => symbols.len() == 2,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{mode:?} takes {} symbols, got {}", if mode == ProductMode::FiniteProduct { "one or more" } else { "two" }, symbols.len())))
    }
}

/// Computes the residual operator of `mode` on the safe sub-window: all rows
/// of the window and the columns whose products never leave it.
pub fn product_compare(
    symbols: &[Symbol],
    mode: ProductMode,
    chi: &Character,
    d: u32,
    realization: Realization,
) -> Result<ProductReport> {
    check_arity(symbols, mode)?;
    let bound = column_bound(symbols, mode, d)?;
    let set = BasisIndexSet::new(chi, d, true);
    let cols: Vec<usize> = (0..set.len())
        .filter(|&j| set.reps[j].iter().all(|&x| x <= bound as i32))
        .collect();
    let scale: f64 = symbols.iter().map(|s| s.l1().max(1.0)).product();
    let tol = 1e-9 * scale;

    let residual = match realization {
        Realization::Ambient => ambient_residual(symbols, mode, chi, &set, &cols),
        Realization::Quotient => quotient_residual(symbols, mode, chi, d, &cols)?,
    };
    let max_residual = residual.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(ProductReport {
        mode,
        realization,
        character: chi.name().as_str().to_string(),
        degree_bound: d,
        rows: set.reps.clone(),
        cols: cols.iter().map(|&j| set.reps[j].clone()).collect(),
        residual,
        max_residual,
        tolerance: tol,
        passed: max_residual <= tol,
    })
}

fn chain(symbols: &[&Symbol], chi: &Character, f: &LaurentPoly) -> LaurentPoly {
    // the rightmost operator acts first
    symbols.iter().rev().fold(f.clone(), |acc, s| apply_unchecked(&s.pulled, chi, &acc))
}

fn residual_vector(symbols: &[Symbol], mode: ProductMode, chi: &Character, f: &LaurentPoly) -> LaurentPoly {
    let (u, v) = (&symbols[0], symbols.get(1));
    match mode {
        ProductMode::Semi => {
            let v = v.expect("arity checked");
            chain(&[u, v], chi, f).sub(&chain(&[&u.mul(v)], chi, f))
        }
        ProductMode::Commute => {
            let v = v.expect("arity checked");
            chain(&[u, v], chi, f).sub(&chain(&[v, u], chi, f))
        }
        ProductMode::ZeroProduct | ProductMode::FiniteProduct => {
            let refs: Vec<&Symbol> = symbols.iter().collect();
            chain(&refs, chi, f)
        }
    }
}

fn ambient_residual(
    symbols: &[Symbol],
    mode: ProductMode,
    chi: &Character,
    set: &BasisIndexSet,
    cols: &[usize],
) -> DMatrix<Complex64> {
    let mut cache = GammaCache::new(chi);
    let mut out = DMatrix::from_element(set.len(), cols.len(), Complex64::new(0.0, 0.0));
    for (jc, &j) in cols.iter().enumerate() {
        let gp = cache.get(&set.reps[j]).clone();
        let img = residual_vector(symbols, mode, chi, &gp);
        if img.is_zero() {
            continue;
        }
        for (i, m) in set.reps.iter().enumerate() {
            out[(i, jc)] = torus_inner(&img, cache.get(m)).expect("matching dimensions");
        }
    }
    out
}

fn quotient_residual(
    symbols: &[Symbol],
    mode: ProductMode,
    chi: &Character,
    d: u32,
    cols: &[usize],
) -> Result<DMatrix<Complex64>> {
    let win = |s: &Symbol| toeplitz_window_theta(s, chi, d).map(|w| w.entries);
    let full = match mode {
        ProductMode::Semi => win(&symbols[0])? * win(&symbols[1])? - win(&symbols[0].mul(&symbols[1]))?,
        ProductMode::Commute => {
            let (a, b) = (win(&symbols[0])?, win(&symbols[1])?);
            &a * &b - &b * &a
        }
        ProductMode::ZeroProduct | ProductMode::FiniteProduct => {
            let mut acc = win(&symbols[0])?;
            for s in &symbols[1..] {
                acc *= win(s)?;
            }
            acc
        }
    };
    Ok(full.select_columns(cols))
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceEntry {
    pub character: String,
    pub realization: Realization,
    pub max_residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub mode: ProductMode,
    pub entries: Vec<CorrespondenceEntry>,
    pub agree: bool,
}

/// Runs `product_compare` for every character in both realizations and
/// reports whether all verdicts coincide.
pub fn correspondence_check(
    symbols: &[Symbol],
    mode: ProductMode,
    characters: &[Character],
    d: u32,
) -> Result<CorrespondenceReport> {
    let mut entries = Vec::new();
    for chi in characters {
        for realization in [Realization::Quotient, Realization::Ambient] {
            let r = product_compare(symbols, mode, chi, d, realization)?;
            entries.push(CorrespondenceEntry {
                character: r.character,
                realization,
                max_residual: r.max_residual,
                passed: r.passed,
            });
        }
    }
    let agree = entries.windows(2).all(|w| w[0].passed == w[1].passed);
    Ok(CorrespondenceReport { mode, entries, agree })
}
