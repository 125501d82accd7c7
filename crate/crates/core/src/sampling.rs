//! Seeded random points and symbols for experiments and tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{Character, CharacterName, Group};
use crate::invariant::project;
use crate::poly::LaurentPoly;

/// Default radius bound for interior points.
pub const DEFAULT_RADIUS: f64 = 0.8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `r e^{i phi}` with `r` uniform in `[0, rmax)` and `phi` uniform.
fn polar<R: Rng>(rng: &mut R, rmax: f64) -> Complex64 {
    let r = rng.gen_range(0.0..rmax);
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Point of the polydisc with every `|z_i| <= radius`.
pub fn polydisc_point<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<Complex64> {
    (0..n).map(|_| polar(rng, radius)).collect()
}

/// Point of the ball with `|z| <= radius`.
pub fn ball_point<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<Complex64> {
    let raw: Vec<Complex64> = (0..n).map(|_| polar(rng, 1.0)).collect();
    let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1e-12);
    let r = rng.gen_range(0.0..radius);
    raw.into_iter().map(|c| c * (r / norm)).collect()
}

/// `(z_1, z_2, z_3)` with Frobenius norm of `[[z_1, z_3], [z_3, z_2]]` at most `radius`.
pub fn cartan3_point<R: Rng>(rng: &mut R, radius: f64) -> Vec<Complex64> {
    let s = radius / 2.0;
    vec![polar(rng, s), polar(rng, s), polar(rng, s)]
}

/// Random Laurent polynomial with exponents in `[-radius, radius]^n` and
/// `terms` coefficients uniform in the unit square.
pub fn laurent<R: Rng>(rng: &mut R, n: usize, radius: i32, terms: usize) -> LaurentPoly {
    LaurentPoly::from_terms(
        n,
        (0..terms).map(|_| {
            let e = (0..n).map(|_| rng.gen_range(-radius..=radius)).collect();
            (e, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        }),
    )
}

/// Random group-invariant Laurent symbol with exponent radius at most `radius`.
pub fn invariant_symbol<R: Rng>(rng: &mut R, group: &std::sync::Arc<Group>, radius: i32, terms: usize) -> LaurentPoly {
    let tr = Character::builtin(group, CharacterName::Trivial).expect("trivial character");
    loop {
        let f = laurent(rng, group.dim(), radius, terms);
        let u = project(&tr, &f);
        if !u.is_zero() {
            return u;
        }
    }
}
