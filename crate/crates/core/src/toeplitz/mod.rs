//! Toeplitz operators on the quotient Hardy spaces, computed exactly on finite
//! windows of the orthonormal basis `gamma_m`.
//!
//! For a `G`-invariant symbol `u~ = u o theta` the operator `T_u` on the
//! quotient space attached to `chi` is unitarily equivalent to the restriction
//! of `T_{u~}` to the isotypic component, so the window entries are the exact
//! pairings `<u~ gamma_p, gamma_m>` on the torus.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Character, CharacterName, Group};
use crate::invariant::{canonical, divide, gamma, is_relatively_invariant, project, BasicMap, BasisIndexSet, Domain, EllPoly, Lift};
use crate::poly::{torus_inner, LaurentPoly, MixedPoly};

pub mod ball;
pub mod bh;
pub mod product;
pub mod recover;
pub mod semd2;

pub use bh::{bh_check, compactness_probe, BhReport, CompactnessReport};
pub use product::{correspondence_check, product_compare, CorrespondenceReport, ProductMode, ProductReport, Realization};
pub use recover::{symbol_recover, SymbolEstimate};
pub use semd2::{semd2_check, Semd2Report};

/// A symbol on the quotient, kept both as `u(t, conj t)` and as the invariant
/// torus polynomial `u~ = u o theta`.
#[derive(Clone, Debug)]
pub struct Symbol {
    pub theta: MixedPoly,
    pub pulled: LaurentPoly,
}

impl Symbol {
    /// From an invariant Laurent polynomial on the torus.
    pub fn from_pulled(map: &BasicMap, pulled: LaurentPoly) -> Result<Symbol> {
        let g = map.group();
        for el in g.elements() {
            if !pulled.act(el).approx_eq(&pulled, 1e-12) {
                return Err(Error::NotInvariant);
            }
        }
        let theta = map.theta_form(&pulled)?;
        Ok(Symbol { theta, pulled })
    }

    /// From a polynomial in `t`, `conj(t)`.
    pub fn from_theta(map: &BasicMap, theta: MixedPoly) -> Result<Symbol> {
        if theta.dim() != map.dim() {
            return Err(Error::WrongDimension { expected: map.dim(), got: theta.dim() });
        }
        let pulled = map.pull_symbol(&theta)?;
        Ok(Symbol { theta, pulled })
    }

    /// Sup-norm radius of `u~` in the cover coordinates.
    pub fn radius(&self) -> u32 {
        self.pulled.radius()
    }

    pub fn conj(&self) -> Symbol {
        Symbol { theta: self.theta.conj(), pulled: self.pulled.conj_torus() }
    }

    pub fn mul(&self, other: &Symbol) -> Symbol {
        Symbol { theta: self.theta.mul(&other.theta), pulled: self.pulled.mul(&other.pulled) }
    }

    /// Sum of the absolute values of the coefficients of `u~`.
    pub fn l1(&self) -> f64 {
        self.pulled.iter().map(|(_, c)| c.norm()).sum()
    }
}

#[derive(Clone, Debug)]
pub enum HardySpace<'a> {
    Full,
    Isotypic(&'a Character),
}

/// Szegő projection of a torus polynomial, optionally followed by the isotypic
/// projection.
pub fn hol_project(f: &LaurentPoly, space: HardySpace<'_>) -> LaurentPoly {
    let h = f.analytic_part();
    match space {
        HardySpace::Full => h,
        HardySpace::Isotypic(chi) => project(chi, &h),
    }
}

/// `T_{u~} f` for `f` in the isotypic component of `chi`.
pub fn apply_toeplitz(symbol: &Symbol, chi: &Character, f: &LaurentPoly) -> Result<LaurentPoly> {
    if !is_relatively_invariant(chi, f, 1e-10) {
        return Err(Error::NotIsotypic("argument of the Toeplitz operator".into()));
    }
    Ok(apply_unchecked(&symbol.pulled, chi, f))
}

pub(crate) fn apply_unchecked(pulled: &LaurentPoly, chi: &Character, f: &LaurentPoly) -> LaurentPoly {
    // u~ is invariant, so u~ f already lies in the chi-component of L^2
    let _ = chi;
    pulled.mul(f).analytic_part()
}

/// Finite section of a Toeplitz operator (or of any operator presented in the
/// `gamma` basis) with rows and columns indexed by the same index set.
#[derive(Clone, Debug)]
pub struct ToeplitzWindow {
    pub character: Character,
    pub degree_bound: u32,
    pub reps: Vec<Vec<i32>>,
    /// `entries[(row, col)] = <T gamma_col, gamma_row>`.
    pub entries: DMatrix<Complex64>,
}

impl ToeplitzWindow {
    pub fn index(&self, m: &[i32]) -> Option<usize> {
        self.reps.binary_search_by(|r| r.as_slice().cmp(m)).ok()
    }

    pub fn get(&self, m: &[i32], p: &[i32]) -> Option<Complex64> {
        Some(self.entries[(self.index(m)?, self.index(p)?)])
    }

    pub fn group(&self) -> &Arc<Group> {
        self.character.group()
    }

    /// Window of an arbitrary matrix over the index set (for testing the
    /// verifiers on operators that are not Toeplitz).
    pub fn from_matrix(chi: &Character, d: u32, entries: DMatrix<Complex64>) -> Result<ToeplitzWindow> {
        let set = BasisIndexSet::new(chi, d, true);
        if entries.nrows() != set.len() || entries.ncols() != set.len() {
            return Err(Error::DimensionMismatch { left: entries.nrows(), right: set.len() });
        }
        Ok(ToeplitzWindow { character: chi.clone(), degree_bound: d, reps: set.reps, entries })
    }

    pub fn identity(chi: &Character, d: u32) -> ToeplitzWindow {
        let set = BasisIndexSet::new(chi, d, true);
        let n = set.len();
        ToeplitzWindow {
            character: chi.clone(),
            degree_bound: d,
            reps: set.reps,
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Reads a window written by [`ToeplitzWindow::to_json`]; the labels must
    /// match the index set of the named character.
    pub fn from_json(json: &WindowJson) -> Result<ToeplitzWindow> {
        let group = Group::parse(&json.group)?;
        let chi = Character::parse(&group, &json.character)?;
        let set = BasisIndexSet::new(&chi, json.degree_bound, true);
        if json.rows != set.reps || json.cols != set.reps {
            return Err(Error::Json(format!(
                "window labels do not match the index set of {} at D = {}",
                json.character, json.degree_bound
            )));
        }
        let n = set.len();
        if json.entries.len() != n || json.entries.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { left: json.entries.len(), right: n });
        }
        let entries = DMatrix::from_fn(n, n, |i, j| Complex64::new(json.entries[i][j][0], json.entries[i][j][1]));
        ToeplitzWindow::from_matrix(&chi, json.degree_bound, entries)
    }

    pub fn to_json(&self) -> WindowJson {
        WindowJson {
            group: self.group().spec().to_string(),
            character: self.character.name().as_str().to_string(),
            degree_bound: self.degree_bound,
            rows: self.reps.clone(),
            cols: self.reps.clone(),
            entries: (0..self.entries.nrows())
                .map(|i| (0..self.entries.ncols()).map(|j| [self.entries[(i, j)].re, self.entries[(i, j)].im]).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowJson {
    pub group: String,
    pub character: String,
    pub degree_bound: u32,
    pub rows: Vec<Vec<i32>>,
    pub cols: Vec<Vec<i32>>,
    pub entries: Vec<Vec<[f64; 2]>>,
}

/// Cache of basis vectors `gamma_m` for one character.
#[derive(Debug)]
pub struct GammaCache {
    chi: Character,
    cache: HashMap<Vec<i32>, LaurentPoly>,
}

impl GammaCache {
    pub fn new(chi: &Character) -> GammaCache {
        GammaCache { chi: chi.clone(), cache: HashMap::new() }
    }

    pub fn get(&mut self, m: &[i32]) -> &LaurentPoly {
        let chi = &self.chi;
        self.cache.entry(m.to_vec()).or_insert_with(|| gamma(chi, m))
    }

    /// Coordinates `(k, <f, gamma_k>)` of an isotypic polynomial in the basis.
    pub fn expand(&mut self, f: &LaurentPoly) -> Vec<(Vec<i32>, Complex64)> {
        let g = self.chi.group().clone();
        let mut keys: Vec<Vec<i32>> = f.iter().map(|(e, _)| canonical(&g, e)).collect();
        keys.sort();
        keys.dedup();
        let mut out = Vec::new();
        for k in keys {
            let gk = self.get(&k);
            if gk.is_zero() {
                continue;
            }
            let c = torus_inner(f, gk).expect("matching dimensions");
            if c.norm() > 1e-13 * f.max_abs() {
                out.push((k, c));
            }
        }
        out
    }
}

/// Exact window `<u~ gamma_p, gamma_m>` for `m`, `p` in the holomorphic index
/// set of sup-norm at most `d`.
pub fn toeplitz_window(symbol: &Symbol, chi: &Character, d: u32) -> ToeplitzWindow {
    let set = BasisIndexSet::new(chi, d, true);
    let basis: Vec<LaurentPoly> = set.reps.iter().map(|m| gamma(chi, m)).collect();
    let n = basis.len();
    let mut entries = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (j, gp) in basis.iter().enumerate() {
        let image = apply_unchecked(&symbol.pulled, chi, gp);
        if image.is_zero() {
            continue;
        }
        for (i, gm) in basis.iter().enumerate() {
            entries[(i, j)] = torus_inner(&image, gm).expect("matching dimensions");
        }
    }
    ToeplitzWindow { character: chi.clone(), degree_bound: d, reps: set.reps, entries }
}

/// The same window computed in the quotient: the lowered basis `e_m` is paired
/// through the pushforward measure, `(1/c^2) int u e_p conj(e_m) dTheta_chi`.
pub fn toeplitz_window_theta(symbol: &Symbol, chi: &Character, d: u32) -> Result<ToeplitzWindow> {
    let lift = Lift::new(chi)?;
    let set = BasisIndexSet::new(chi, d, true);
    let c2 = lift.ell.cnorm * lift.ell.cnorm;
    let u = lift.map.pull_symbol(&symbol.theta)?;
    let mut pulled_basis = Vec::with_capacity(set.len());
    for m in &set.reps {
        let e = lift.lower(&gamma(chi, m))?;
        pulled_basis.push(lift.map.compose(&e)?.mul(&lift.ell.poly));
    }
    let n = set.len();
    let mut entries = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (j, ap) in pulled_basis.iter().enumerate() {
        let up = u.mul(ap);
        for (i, am) in pulled_basis.iter().enumerate() {
            entries[(i, j)] = torus_inner(&up, am)? / c2;
        }
    }
    Ok(ToeplitzWindow { character: chi.clone(), degree_bound: d, reps: set.reps, entries })
}

/// Writes `T_{u~}(l f)` as `l g` for an invariant holomorphic `f` and returns
/// `g`, which is again invariant: the operator preserves `l * P_tr(H^2)`.
pub fn invariant_subspace_quotient(symbol: &Symbol, chi: &Character, f: &LaurentPoly) -> Result<LaurentPoly> {
    let ell = EllPoly::new(chi, Domain::Polydisc)?.poly;
    let image = apply_toeplitz(symbol, chi, &ell.mul(f))?;
    let (quot, rem) = divide(&image, &ell)?;
    if rem.norm() > 1e-10 * image.norm().max(1.0) {
        return Err(Error::NotIsotypic(format!("image is not a multiple of the relative invariant (remainder {:e})", rem.norm())));
    }
    let tr = Character::builtin(chi.group(), CharacterName::Trivial)?;
    if !is_relatively_invariant(&tr, &quot, 1e-10) {
        return Err(Error::NotInvariant);
    }
    Ok(quot)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn setup(s: &str) -> (Arc<Group>, BasicMap, Character) {
        let g = Group::parse(s).unwrap();
        let map = BasicMap::new(&g);
        let sgn = Character::builtin(&g, CharacterName::Sgn).unwrap();
        (g, map, sgn)
    }

    fn mono(e: &[i32]) -> LaurentPoly {
        LaurentPoly::monomial(e.to_vec(), c(1.0))
    }

    #[test]
    fn hol_project_examples() {
        let f = mono(&[-1, 2]).add(&mono(&[1, 0]));
        assert_eq!(hol_project(&f, HardySpace::Full), mono(&[1, 0]));
        let (_, map, sgn) = setup("G(1,1,2)");
        let g02 = gamma(&sgn, &[0, 2]);
        let g01 = gamma(&sgn, &[0, 1]);
        let img = hol_project(&map.theta(1).conj_torus().mul(&g02), HardySpace::Isotypic(&sgn));
        assert!(img.approx_eq(&g01, 1e-14));
        assert_eq!(hol_project(map.theta(1), HardySpace::Full), map.theta(1).clone());
    }

    #[test]
    fn apply_examples() {
        let (_, map, sgn) = setup("G(1,1,2)");
        let t1 = Symbol::from_pulled(&map, map.theta(1).clone()).unwrap();
        let g01 = gamma(&sgn, &[0, 1]);
        let g02 = gamma(&sgn, &[0, 2]);
        assert!(apply_toeplitz(&t1, &sgn, &g01).unwrap().approx_eq(&g02, 1e-14));
        assert!(apply_toeplitz(&t1.conj(), &sgn, &g02).unwrap().approx_eq(&g01, 1e-14));
        let one = Symbol::from_pulled(&map, LaurentPoly::one(2)).unwrap();
        assert!(apply_toeplitz(&one, &sgn, &g02).unwrap().approx_eq(&g02, 1e-15));
        assert!(apply_toeplitz(&one, &sgn, &mono(&[1, 0])).is_err());
        assert!(Symbol::from_pulled(&map, mono(&[1, 0])).is_err());
    }

    #[test]
    fn window_examples() {
        let (_, map, sgn) = setup("G(1,1,2)");
        let one = Symbol::from_pulled(&map, LaurentPoly::one(2)).unwrap();
        let w = toeplitz_window(&one, &sgn, 3);
        assert!((w.entries.clone() - DMatrix::identity(w.reps.len(), w.reps.len())).norm() < 1e-14);

        let t1 = Symbol::from_pulled(&map, map.theta(1).clone()).unwrap();
        let w = toeplitz_window(&t1, &sgn, 3);
        assert!((w.get(&[0, 2], &[0, 1]).unwrap() - 1.0).norm() < 1e-14);
        assert!(w.get(&[0, 1], &[0, 2]).unwrap().norm() < 1e-14);

        let mixed = Symbol::from_pulled(&map, mono(&[1, -1]).add(&mono(&[-1, 1]))).unwrap();
        let w = toeplitz_window(&mixed, &sgn, 4);
        assert!((w.entries.clone() - w.entries.transpose()).norm() < 1e-14);
        assert!(w.entries.iter().all(|z| z.im.abs() < 1e-14));
    }

    #[test]
    fn adjoint_symmetry() {
        let (_, map, sgn) = setup("G(2,1,2)");
        let u = map.theta(1).conj_torus().mul(map.theta(2)).add(&map.theta(1).scale(Complex64::new(0.5, 1.0)));
        let s = Symbol::from_pulled(&map, u).unwrap();
        let w = toeplitz_window(&s, &sgn, 6);
        let wc = toeplitz_window(&s.conj(), &sgn, 6);
        assert!((w.entries.adjoint() - wc.entries).norm() < 1e-13);
    }

    #[test]
    fn theta_realization_agrees() {
        for name in ["G(1,1,2)", "G(2,2,2)"] {
            let (g, map, _) = setup(name);
            let mut rng = crate::sampling::rng(11);
            let u = crate::sampling::invariant_symbol(&mut rng, &g, 2, 4);
            let s = Symbol::from_pulled(&map, u).unwrap();
            for chi in Character::all_builtin(&g) {
                let a = toeplitz_window(&s, &chi, 4);
                let b = toeplitz_window_theta(&s, &chi, 4).unwrap();
                assert!((a.entries - b.entries).norm() < 1e-10, "{name} {:?}", chi.name());
            }
        }
    }

    #[test]
    fn invariant_subspace_is_preserved() {
        let (g, map, _) = setup("G(2,1,2)");
        let mut rng = crate::sampling::rng(5);
        let u = crate::sampling::invariant_symbol(&mut rng, &g, 2, 5);
        let s = Symbol::from_pulled(&map, u).unwrap();
        let f = map.theta(1).mul(map.theta(2)).add(&LaurentPoly::one(2));
        for chi in Character::all_builtin(&g) {
            let q = invariant_subspace_quotient(&s, &chi, &f).unwrap();
            let ell = EllPoly::new(&chi, Domain::Polydisc).unwrap().poly;
            let direct = apply_toeplitz(&s, &chi, &ell.mul(&f)).unwrap();
            assert!(ell.mul(&q).approx_eq(&direct, 1e-12));
        }
    }

    #[test]
    fn projection_does_not_factor_through_the_relative_invariant() {
        // T_{|t1|^2}(z2 - z1) = z2 - z1, while (z2 - z1) P_tr(|t1|^2) = 2 (z2 - z1)
        let (_, map, sgn) = setup("G(1,1,2)");
        let t1 = map.theta(1);
        let s = Symbol::from_pulled(&map, t1.mul(&t1.conj_torus())).unwrap();
        let ell = EllPoly::new(&sgn, Domain::Polydisc).unwrap().poly;
        let lhs = apply_toeplitz(&s, &sgn, &ell).unwrap();
        let tr = Character::builtin(sgn.group(), CharacterName::Trivial).unwrap();
        let rhs = ell.mul(&hol_project(&s.pulled, HardySpace::Isotypic(&tr)));
        assert!(lhs.approx_eq(&ell, 1e-14));
        assert!(rhs.approx_eq(&ell.scale_real(2.0), 1e-14));
        assert_eq!(invariant_subspace_quotient(&s, &sgn, &LaurentPoly::one(2)).unwrap().coeff(&[0, 0]), c(1.0));
    }
}
