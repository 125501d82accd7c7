use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use quotient_hardy::group::{Character, CharacterName, Group};
use quotient_hardy::invariant::{project, BasicMap, Lift};
use quotient_hardy::poly::{
    ball_basis_constant, ball_basis_constant_sq_direct, harmonic_extension, torus_inner, LaurentPoly, MixedPoly, PolyJson,
};
use quotient_hardy::sampling;
use quotient_hardy::toeplitz::{bh_check, toeplitz_window, Symbol};

const GROUPS: [&str; 8] = ["G(1,1,2)", "G(2,1,2)", "G(2,2,2)", "G(3,3,2)", "G(4,2,2)", "G(1,1,3)", "G(2,2,3)", "Z(3)@2^2"];

fn group(i: usize) -> Arc<Group> {
    Group::parse(GROUPS[i % GROUPS.len()]).unwrap()
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn laurent(n: usize, r: i32) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-r..=r, n), complex()), 1..6).prop_map(move |t| LaurentPoly::from_terms(n, t))
}

fn analytic(n: usize, d: i32) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(0..=d, n), complex()), 1..5).prop_map(move |t| LaurentPoly::from_terms(n, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_axioms(gi in 0usize..8, a in 0usize..1000, b in 0usize..1000, c in 0usize..1000) {
        let g = group(gi);
        let (a, b, c) = (a % g.order(), b % g.order(), c % g.order());
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.identity()), a);
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
        prop_assert_eq!(g.det(g.mul(a, b)), g.det(a).mul(g.det(b)));
        for chi in Character::all_builtin(&g) {
            prop_assert_eq!(chi.value(g.mul(a, b)), chi.value(a).mul(chi.value(b)));
        }
    }

    #[test]
    fn action_is_a_unitary_homomorphism(gi in 0usize..8, a in 0usize..1000, b in 0usize..1000, seed in any::<u64>()) {
        let g = group(gi);
        let (a, b) = (a % g.order(), b % g.order());
        let mut rng = sampling::rng(seed);
        let f = sampling::laurent(&mut rng, g.dim(), 3, 5);
        let h = sampling::laurent(&mut rng, g.dim(), 3, 5);
        let (ea, eb) = (g.element(a), g.element(b));
        let lhs = f.act(g.element(g.mul(a, b)));
        let rhs = f.act(eb).act(ea);
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
        let before = torus_inner(&f, &h).unwrap();
        let after = torus_inner(&f.act(ea), &h.act(ea)).unwrap();
        prop_assert!((before - after).norm() < 1e-12);
    }

    #[test]
    fn projections_are_orthogonal_idempotents(gi in 0usize..8, seed in any::<u64>()) {
        let g = group(gi);
        let mut rng = sampling::rng(seed);
        let f = sampling::laurent(&mut rng, g.dim(), 3, 6);
        let chars = Character::all_builtin(&g);
        for chi in &chars {
            let pf = project(chi, &f);
            prop_assert!(project(chi, &pf).approx_eq(&pf, 1e-12));
            for psi in &chars {
                if psi.values() != chi.values() {
                    prop_assert!(project(psi, &pf).max_abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn conjugation_is_an_involution(f in laurent(3, 3)) {
        prop_assert!(f.conj_torus().conj_torus().approx_eq(&f, 0.0));
        let m = harmonic_extension(&f);
        prop_assert!(m.conj().conj().sub(&m).max_abs() == 0.0);
    }

    #[test]
    fn harmonic_extension_restricts_back(f in laurent(2, 4)) {
        prop_assert!(harmonic_extension(&f).restrict_torus().approx_eq(&f, 1e-14));
    }

    #[test]
    fn ball_constants_agree(a in prop::collection::vec(0i32..8, 1..4)) {
        let k = ball_basis_constant(&a);
        let direct = ball_basis_constant_sq_direct(&a);
        prop_assert!((k * k - direct).abs() < 1e-9 * direct);
    }

    #[test]
    fn lift_then_lower_is_identity(gi in 0usize..5, f in analytic(2, 4), ci in 0usize..4) {
        let g = group(gi);
        let chars = Character::all_builtin(&g);
        let chi = &chars[ci % chars.len()];
        let lift = Lift::new(chi).unwrap();
        let big = lift.lift(&f).unwrap();
        prop_assert!(quotient_hardy::invariant::is_relatively_invariant(chi, &big, 1e-10));
        prop_assert!(lift.lower(&big).unwrap().approx_eq(&f, 1e-9));
    }

    #[test]
    fn rewrite_inverts_composition(gi in 0usize..8, seed in any::<u64>()) {
        let g = group(gi);
        let map = BasicMap::new(&g);
        let mut rng = sampling::rng(seed);
        let f = sampling::laurent(&mut rng, g.dim(), 2, 4).analytic_part();
        let composed = map.compose(&f).unwrap();
        prop_assert!(map.rewrite(&composed).unwrap().approx_eq(&f, 1e-9));
    }

    #[test]
    fn poly_json_round_trips(f in laurent(3, 4)) {
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        prop_assert!(LaurentPoly::from_json(&back).unwrap().approx_eq(&f, 0.0));
        let m = harmonic_extension(&f);
        let text = serde_json::to_string(&m.to_json()).unwrap();
        let back = MixedPoly::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert!(back.sub(&m).max_abs() == 0.0);
    }

    #[test]
    fn character_json_round_trips(gi in 0usize..8) {
        let g = group(gi);
        for chi in Character::all_builtin(&g) {
            let text = serde_json::to_string(&chi.to_json()).unwrap();
            let back = Character::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            prop_assert_eq!(back.values(), chi.values());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn adjoint_symbol_gives_adjoint_window(gi in 0usize..5, seed in any::<u64>()) {
        let g = group(gi);
        let map = BasicMap::new(&g);
        let chi = Character::builtin(&g, CharacterName::Sgn).unwrap();
        let mut rng = sampling::rng(seed);
        let u = Symbol::from_pulled(&map, sampling::invariant_symbol(&mut rng, &g, 2, 4)).unwrap();
        let w = toeplitz_window(&u, &chi, 5);
        let wc = toeplitz_window(&u.conj(), &chi, 5);
        prop_assert!((w.entries.adjoint() - &wc.entries).camax() < 1e-12);
    }

    #[test]
    fn random_symbols_satisfy_shift_relations(gi in 0usize..5, seed in any::<u64>()) {
        let g = group(gi);
        let map = BasicMap::new(&g);
        let chi = Character::builtin(&g, CharacterName::Sgn).unwrap();
        let mut rng = sampling::rng(seed);
        let u = Symbol::from_pulled(&map, sampling::invariant_symbol(&mut rng, &g, 2, 4)).unwrap();
        let rep = bh_check(&toeplitz_window(&u, &chi, 6), &map).unwrap();
        prop_assert!(rep.passed, "{}", rep.max_violation);
    }
}
