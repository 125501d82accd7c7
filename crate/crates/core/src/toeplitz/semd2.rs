//! Semi-commuting criteria on the bidisc through Wirtinger derivatives of the
//! pluriharmonic extensions of the pulled-back symbols.

use serde::Serialize;

use super::product::{product_compare, ProductMode, Realization};
use super::Symbol;
use crate::error::{Error, Result};
use crate::group::Character;
use crate::poly::{harmonic_extension, vanishes_on_disc_times_circle, wirtinger_d, LaurentPoly, Wirtinger};

const SYMBOLIC_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct Semd2Report {
    /// `D_1(u~, v~)(z, xi) = 0` on `D x T`.
    pub d1: bool,
    /// `D_2(u~, v~)(xi, z) = 0` on `T x D`.
    pub d2: bool,
    /// `D_12(u~, v~) = 0` on `D^2`.
    pub d12: bool,
    pub symbolic: bool,
    /// For each coordinate, `conj(u~)` or `v~` is holomorphic in it.
    pub holomorphic_split: bool,
    /// Verdict of the exact window comparison `T_u T_v - T_{uv}`.
    pub window: bool,
    pub window_residual: f64,
    pub degree_bound: u32,
    pub agree: bool,
}

fn holomorphic_in(f: &LaurentPoly, i: usize) -> bool {
    f.iter().all(|(e, _)| e[i] >= 0)
}

/// Evaluates the three conditions for `T_u T_v = T_{uv}` on the image of the
/// bidisc and compares them with an exact window computation on the
/// component of `chi`.
pub fn semd2_check(u: &Symbol, v: &Symbol, chi: &Character) -> Result<Semd2Report> {
    for n in [u.pulled.dim(), v.pulled.dim(), chi.group().dim()] {
        if n != 2 {
            return Err(Error::WrongDimension { expected: 2, got: n });
        }
    }
    let hu = harmonic_extension(&u.pulled);
    let hv = harmonic_extension(&v.pulled);
    let d1 = vanishes_on_disc_times_circle(&wirtinger_d(&hu, &hv, Wirtinger::D1)?, 0, SYMBOLIC_TOL);
    let d2 = vanishes_on_disc_times_circle(&wirtinger_d(&hu, &hv, Wirtinger::D2)?, 1, SYMBOLIC_TOL);
    let mut h12 = wirtinger_d(&hu, &hv, Wirtinger::D12)?;
    h12.cleanup(hu.max_abs() * hv.max_abs());
    let d12 = h12.is_zero();
    let symbolic = d1 && d2 && d12;

    let ubar = u.pulled.conj_torus();
    let holomorphic_split = (0..2).all(|i| holomorphic_in(&ubar, i) || holomorphic_in(&v.pulled, i));

    let d = u.radius() + v.radius() + 4;
    let rep = product_compare(&[u.clone(), v.clone()], ProductMode::Semi, chi, d, Realization::Ambient)?;
    Ok(Semd2Report {
        d1,
        d2,
        d12,
        symbolic,
        holomorphic_split,
        window: rep.passed,
        window_residual: rep.max_residual,
        degree_bound: d,
        agree: symbolic == rep.passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{CharacterName, Group};
    use crate::invariant::BasicMap;

    fn setup() -> (BasicMap, Character) {
        let g = Group::parse("G(1,1,2)").unwrap();
        (BasicMap::new(&g), Character::builtin(&g, CharacterName::Sgn).unwrap())
    }

    #[test]
    fn coanalytic_left_factor() {
        let (map, sgn) = setup();
        let u = Symbol::from_pulled(&map, map.theta(1).conj_torus()).unwrap();
        let v = Symbol::from_pulled(&map, map.theta(2).clone()).unwrap();
        let r = semd2_check(&u, &v, &sgn).unwrap();
        assert!(r.d1 && r.d2 && r.d12 && r.window && r.agree && r.holomorphic_split);
    }

    #[test]
    fn real_symbol_fails() {
        let (map, sgn) = setup();
        let h = Symbol::from_pulled(&map, map.theta(1).add(&map.theta(1).conj_torus())).unwrap();
        let r = semd2_check(&h, &h, &sgn).unwrap();
        assert!(!r.d1 && !r.d2 && !r.symbolic && !r.window && r.agree);
    }

    #[test]
    fn order_matters() {
        let (map, sgn) = setup();
        let t = Symbol::from_pulled(&map, map.theta(1).clone()).unwrap();
        let r = semd2_check(&t, &t.conj(), &sgn).unwrap();
        assert!(!r.symbolic && !r.window && r.agree && !r.holomorphic_split);
        let r = semd2_check(&t.conj(), &t, &sgn).unwrap();
        assert!(r.symbolic && r.window && r.agree);
    }

    #[test]
    fn needs_bidisc() {
        let g = Group::parse("G(1,1,3)").unwrap();
        let map = BasicMap::new(&g);
        let sgn = Character::builtin(&g, CharacterName::Sgn).unwrap();
        let t = Symbol::from_pulled(&map, map.theta(1).clone()).unwrap();
        assert!(semd2_check(&t, &t, &sgn).is_err());
    }
}
