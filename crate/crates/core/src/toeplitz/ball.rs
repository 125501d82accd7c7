//! Toeplitz windows on the Hardy space of the ball and of its quotients by a
//! coordinate cyclic group, in the normalized monomial basis `k_a z^a`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Character, GroupKind};
use crate::invariant::projection_nonzero;
use crate::poly::{ball_basis_constant, sphere_pair_integral, MixedPoly};

/// `<u k_p z^p, k_m z^m>` over the unit sphere of `C^n`.
pub fn ball_toeplitz_entry(u: &MixedPoly, p: &[i32], m: &[i32], n: usize) -> Result<Complex64> {
    if u.dim() != n || p.len() != n || m.len() != n {
        return Err(Error::WrongDimension { expected: n, got: u.dim() });
    }
    if p.iter().chain(m).any(|&x| x < 0) {
        return Err(Error::NotAnalytic);
    }
    let mut s = Complex64::new(0.0, 0.0);
    for ((b, g), c) in u.terms() {
        let a: Vec<i32> = b.iter().zip(p).map(|(&x, &y)| x as i32 + y).collect();
        let d: Vec<i32> = g.iter().zip(m).map(|(&x, &y)| x as i32 + y).collect();
        s += c * sphere_pair_integral(&a, &d, n);
    }
    Ok(s * ball_basis_constant(p) * ball_basis_constant(m))
}

/// Multi-indices of total degree at most `d` spanning the isotypic component
/// of `chi`, in lexicographic order.
pub fn ball_index_set(chi: &Character, d: u32) -> Vec<Vec<i32>> {
    let n = chi.group().dim();
    let mut out = Vec::new();
    let mut a = vec![0i32; n];
    loop {
        if a.iter().sum::<i32>() <= d as i32 && projection_nonzero(chi, &a) {
            out.push(a.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if a[i] < d as i32 {
                a[i] += 1;
                a.iter_mut().skip(i + 1).for_each(|x| *x = 0);
                break;
            }
        }
    }
}

fn check_invariant(chi: &Character, u: &MixedPoly) -> Result<()> {
    let spec = chi.group().spec();
    if spec.kind != GroupKind::CyclicCoord {
        return Err(Error::Unsupported(format!("ball windows need a coordinate cyclic group, got {spec}")));
    }
    let c = spec.coord - 1;
    let m = spec.m as i64;
    for (b, g) in u.terms().keys() {
        if (b[c] as i64 - g[c] as i64).rem_euclid(m) != 0 {
            return Err(Error::NotInvariant);
        }
    }
    Ok(())
}

/// Window of `T_u` on the isotypic component of `chi` in `H^2(B_n)`.
pub fn ball_window(u: &MixedPoly, chi: &Character, d: u32) -> Result<(Vec<Vec<i32>>, DMatrix<Complex64>)> {
    check_invariant(chi, u)?;
    let n = chi.group().dim();
    let reps = ball_index_set(chi, d);
    let mut w = DMatrix::from_element(reps.len(), reps.len(), Complex64::new(0.0, 0.0));
    for (j, p) in reps.iter().enumerate() {
        for (i, m) in reps.iter().enumerate() {
            w[(i, j)] = ball_toeplitz_entry(u, p, m, n)?;
        }
    }
    Ok((reps, w))
}

/// Which of the sufficient conditions for commuting a pair satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommutingCase {
    BothAnalytic,
    BothCoanalytic,
    Constant,
    Affine,
}

pub fn commuting_case(u: &MixedPoly, v: &MixedPoly) -> Option<CommutingCase> {
    let analytic = |f: &MixedPoly| f.terms().keys().all(|(_, g)| g.iter().all(|&x| x == 0));
    let coanalytic = |f: &MixedPoly| f.terms().keys().all(|(b, _)| b.iter().all(|&x| x == 0));
    let constant = |f: &MixedPoly| analytic(f) && coanalytic(f);
    if constant(u) || constant(v) {
        return Some(CommutingCase::Constant);
    }
    if analytic(u) && analytic(v) {
        return Some(CommutingCase::BothAnalytic);
    }
    if coanalytic(u) && coanalytic(v) {
        return Some(CommutingCase::BothCoanalytic);
    }
    let zero = vec![0u32; u.dim()];
    let (key, cv) = v.terms().iter().find(|((b, g), _)| *b != zero || *g != zero)?;
    let ratio = u.terms().get(key).copied().unwrap_or_default() / cv;
    let mut diff = u.sub(&v.scale(ratio));
    diff.cleanup(u.max_abs().max(v.max_abs()));
    if ratio.norm() > 0.0 && constant(&diff) {
        return Some(CommutingCase::Affine);
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct BallCommuteReport {
    pub degree_bound: u32,
    pub columns: usize,
    pub max_residual: f64,
    pub passed: bool,
    pub case: Option<CommutingCase>,
}

/// `T_u T_v - T_v T_u` on the columns of total degree at most
/// `d - max(deg_z u, deg_z v)`, where every product is exact.
pub fn ball_commute_check(u: &MixedPoly, v: &MixedPoly, chi: &Character, d: u32) -> Result<BallCommuteReport> {
    let reach = |f: &MixedPoly| f.terms().keys().map(|(b, _)| b.iter().sum::<u32>()).max().unwrap_or(0);
    let r = reach(u).max(reach(v));
    if d < r {
        return Err(Error::MarginTooSmall { required: r, got: d });
    }
    let (reps, wu) = ball_window(u, chi, d)?;
    let (_, wv) = ball_window(v, chi, d)?;
    let comm = &wu * &wv - &wv * &wu;
    let cols: Vec<usize> = (0..reps.len()).filter(|&j| reps[j].iter().sum::<i32>() <= (d - r) as i32).collect();
    let max_residual = cols
        .iter()
        .flat_map(|&j| comm.column(j).iter().map(|z| z.norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    let scale = (u.max_abs() * v.max_abs()).max(1.0);
    Ok(BallCommuteReport {
        degree_bound: d,
        columns: cols.len(),
        max_residual,
        passed: max_residual <= 1e-10 * scale,
        case: commuting_case(u, v),
    })
}
