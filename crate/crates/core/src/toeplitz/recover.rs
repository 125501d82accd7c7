//! Recovering an invariant symbol from a finite window of an operator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::{GammaCache, ToeplitzWindow};
use crate::error::{Error, Result};
use crate::group::{Character, CharacterName, GroupKind};
use crate::invariant::{project, BasicMap, BasisIndexSet};
use crate::poly::{torus_inner, LaurentPoly, MixedPoly, PolyJson};

pub const STABILITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct SymbolEstimate {
    /// Least-squares symbol `u~` as an invariant Laurent polynomial.
    pub symbol: LaurentPoly,
    /// The same symbol in the coordinates of the image, when the fit is
    /// invariant to working precision.
    pub theta: Option<MixedPoly>,
    /// Sup-norm bound of the exponents searched.
    pub radius: u32,
    /// Euclidean norm of the misfit over all matched entries.
    pub residual: f64,
    pub equations: usize,
    pub unknowns: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolEstimateJson {
    pub symbol: PolyJson,
    pub theta: Option<PolyJson>,
    pub radius: u32,
    pub residual: f64,
    pub equations: usize,
    pub unknowns: usize,
}

impl SymbolEstimate {
    pub fn to_json(&self) -> SymbolEstimateJson {
        SymbolEstimateJson {
            symbol: self.symbol.to_json(),
            theta: self.theta.as_ref().map(MixedPoly::to_json),
            radius: self.radius,
            residual: self.residual,
            equations: self.equations,
            unknowns: self.unknowns,
        }
    }
}

/// Entries along each chain `(m + q r 1, p + q r 1)` must agree; returns the
/// value deepest in the window for every pair.
fn stabilise(window: &ToeplitzWindow, q: i32) -> Result<DMatrix<Complex64>> {
    let mut out = window.entries.clone();
    for (im, m) in window.reps.iter().enumerate() {
        for (ip, p) in window.reps.iter().enumerate() {
            let mut prev = window.entries[(im, ip)];
            let mut r = 1;
            loop {
                let ms: Vec<i32> = m.iter().map(|x| x + q * r).collect();
                let ps: Vec<i32> = p.iter().map(|x| x + q * r).collect();
                let Some(v) = window.get(&ms, &ps) else { break };
                let spread = (v - prev).norm();
                if spread >= STABILITY_TOL {
                    return Err(Error::NotStabilising { row: m.clone(), col: p.clone(), spread });
                }
                prev = v;
                r += 1;
            }
            out[(im, ip)] = prev;
        }
    }
    Ok(out)
}

/// Fits `u~ = sum x_k P_tr z^k` to the window by least squares. The exponent
/// search radius is the largest `|m - p|_inf` over nonzero entries.
pub fn symbol_recover(window: &ToeplitzWindow, map: &BasicMap) -> Result<SymbolEstimate> {
    let g = window.group();
    if g.spec().kind != GroupKind::Gmpn {
        return Err(Error::Unsupported(format!("symbol recovery needs a group G(m,p,n), got {}", g.spec())));
    }
    let q = g.spec().q() as i32;
    let stable = stabilise(window, q)?;
    let n = g.dim();
    let scale = window.max_abs();
    let zero_tol = 1e-12 * scale.max(1.0);

    let mut radius = 0u32;
    for (im, m) in window.reps.iter().enumerate() {
        for (ip, p) in window.reps.iter().enumerate() {
            if stable[(im, ip)].norm() > zero_tol {
                let d = m.iter().zip(p).map(|(a, b)| (a - b).unsigned_abs()).max().unwrap_or(0);
                radius = radius.max(d);
            }
        }
    }
    if stable.iter().all(|z| z.norm() <= zero_tol) {
        return Ok(SymbolEstimate { symbol: LaurentPoly::zero(n), theta: None, radius: 0, residual: 0.0, equations: 0, unknowns: 0 });
    }

    let tr = Character::builtin(g, CharacterName::Trivial)?;
    let orbit_set = BasisIndexSet::new(&tr, radius, false);
    let basis: Vec<LaurentPoly> = orbit_set
        .reps
        .iter()
        .map(|k| {
            let b = project(&tr, &LaurentPoly::monomial(k.clone(), Complex64::new(1.0, 0.0)));
            let lead = b.coeff(k);
            b.scale(lead.inv())
        })
        .collect();

    let chi = &window.character;
    let mut cache = GammaCache::new(chi);
    let rows = window.reps.len() * window.reps.len();
    let mut a = DMatrix::from_element(rows, basis.len(), Complex64::new(0.0, 0.0));
    let mut b = DVector::from_element(rows, Complex64::new(0.0, 0.0));
    for (ip, p) in window.reps.iter().enumerate() {
        let gp = cache.get(p).clone();
        let images: Vec<LaurentPoly> = basis.iter().map(|bk| bk.mul(&gp)).collect();
        for (im, m) in window.reps.iter().enumerate() {
            let row = ip * window.reps.len() + im;
            b[row] = stable[(im, ip)];
            let gm = cache.get(m).clone();
            for (k, img) in images.iter().enumerate() {
                a[(row, k)] = torus_inner(img, &gm)?;
            }
        }
    }
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-12)
        .map_err(|e| Error::Unsupported(format!("least squares failed: {e}")))?;
    let residual = (&a * &x - &b).norm();
    let mut symbol = LaurentPoly::zero(n);
    for (k, bk) in basis.iter().enumerate() {
        symbol = symbol.add(&bk.scale(x[k]));
    }
    symbol.cleanup(scale.max(1.0) * 1e2);
    let theta = map.theta_form(&symbol).ok();
    Ok(SymbolEstimate { symbol, theta, radius, residual, equations: rows, unknowns: basis.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use crate::toeplitz::{toeplitz_window, Symbol};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn recovers_real_symbol() {
        let g = Group::parse("G(1,1,2)").unwrap();
        let map = BasicMap::new(&g);
        let sgn = Character::builtin(&g, CharacterName::Sgn).unwrap();
        let u = map.theta(1).add(&map.theta(1).conj_torus());
        let w = toeplitz_window(&Symbol::from_pulled(&map, u.clone()).unwrap(), &sgn, 5);
        let est = symbol_recover(&w, &map).unwrap();
        for e in [[1, 0], [0, 1], [-1, 0], [0, -1]] {
            assert!((est.symbol.coeff(&e) - 1.0).norm() < 1e-9, "{e:?}: {}", est.symbol);
        }
        assert!(est.symbol.approx_eq(&u, 1e-9));
        assert!(est.residual < 1e-9);
    }

    #[test]
    fn identity_gives_one() {
        let g = Group::parse("G(1,1,2)").unwrap();
        let map = BasicMap::new(&g);
        let sgn = Character::builtin(&g, CharacterName::Sgn).unwrap();
        let est = symbol_recover(&ToeplitzWindow::identity(&sgn, 4), &map).unwrap();
        assert!(est.symbol.approx_eq(&LaurentPoly::one(2), 1e-10));
    }

    #[test]
    fn zero_window_gives_zero() {
        let g = Group::parse("G(2,1,2)").unwrap();
        let map = BasicMap::new(&g);
        let sgn = Character::builtin(&g, CharacterName::Sgn).unwrap();
        let n = BasisIndexSet::new(&sgn, 6, true).len();
        let w = ToeplitzWindow::from_matrix(&sgn, 6, DMatrix::from_element(n, n, c(0.0))).unwrap();
        assert!(symbol_recover(&w, &map).unwrap().symbol.is_zero());
    }

    #[test]
    fn shifted_diagonal_is_rejected() {
        let g = Group::parse("G(1,1,2)").unwrap();
        let map = BasicMap::new(&g);
        let sgn = Character::builtin(&g, CharacterName::Sgn).unwrap();
        let n = BasisIndexSet::new(&sgn, 4, true).len();
        let w = ToeplitzWindow::from_matrix(&sgn, 4, DMatrix::from_fn(n, n, |i, j| if i == j { c(i as f64) } else { c(0.0) })).unwrap();
        assert!(matches!(symbol_recover(&w, &map), Err(Error::NotStabilising { .. })));
    }
}
