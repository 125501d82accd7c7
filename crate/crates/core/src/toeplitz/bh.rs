//! Brown–Halmos type relations for windows over `G(m,p,n)` and the
//! shift-persistence probe used to rule out compact Toeplitz operators.

use num_complex::Complex64;
use serde::Serialize;

use super::{GammaCache, ToeplitzWindow};
use crate::error::{Error, Result};
use crate::group::GroupKind;
use crate::invariant::BasicMap;
use crate::poly::LaurentPoly;

/// Largest absolute violation of the relations, with the pair where it occurs.
#[derive(Clone, Debug, Serialize)]
pub struct BhReport {
    pub max_violation: f64,
    pub relation: Option<String>,
    pub row: Option<Vec<i32>>,
    pub col: Option<Vec<i32>>,
    pub checked: usize,
    pub tolerance: f64,
    pub passed: bool,
}

/// Coefficients of a vector in the basis `gamma_k`.
type Expansion = Vec<(Vec<i32>, Complex64)>;

pub const BH_TOL: f64 = 1e-10;

struct Tracker {
    max: f64,
    relation: Option<String>,
    row: Option<Vec<i32>>,
    col: Option<Vec<i32>>,
    checked: usize,
}

impl Tracker {
    fn record(&mut self, relation: &str, m: &[i32], p: &[i32], lhs: Complex64, rhs: Complex64) {
        self.checked += 1;
        let v = (lhs - rhs).norm();
        if self.relation.is_none() || v > self.max {
            self.max = v;
            self.relation = Some(relation.to_string());
            self.row = Some(m.to_vec());
            self.col = Some(p.to_vec());
        }
    }
}

/// Pairing `<A gamma_p', gamma_m'>` summed over the expansions
/// `a = sum c_k gamma_k` and `b = sum d_j gamma_j`:
/// `sum conj(c_k) d_j W[k, j]`; `None` if an index leaves the window.
fn bilinear(
    w: &ToeplitzWindow,
    a: &[(Vec<i32>, Complex64)],
    b: &[(Vec<i32>, Complex64)],
) -> Option<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, ck) in a {
        let ik = w.index(k)?;
        for (j, dj) in b {
            let ij = w.index(j)?;
            acc += ck.conj() * dj * w.entries[(ik, ij)];
        }
    }
    Some(acc)
}

/// Checks, for every pair of window indices where both sides are computable,
///
/// * `<T theta_n gamma_p, theta_n gamma_m> = <T gamma_p, gamma_m>`, and
/// * `<T theta_n^p gamma_p, theta_i gamma_m> = <T theta_{n-i} gamma_p, gamma_m>`
///   for `1 <= i < n`,
///
/// which together characterise Toeplitz operators on the quotient.
pub fn bh_check(window: &ToeplitzWindow, map: &BasicMap) -> Result<BhReport> {
    let g = window.group();
    let spec = *g.spec();
    if spec.kind != GroupKind::Gmpn {
        return Err(Error::Unsupported(format!("Brown-Halmos relations need a group G(m,p,n), got {spec}")));
    }
    let n = spec.n;
    let chi = &window.character;
    let mut cache = GammaCache::new(chi);
    let theta_n = map.theta(n).clone();
    let theta_n_p = theta_n.pow(spec.p);
    let mut t = Tracker { max: 0.0, relation: None, row: None, col: None, checked: 0 };

    let expand_times = |cache: &mut GammaCache, f: &LaurentPoly, m: &[i32]| {
        let gm = cache.get(m).clone();
        cache.expand(&f.mul(&gm))
    };

    let mut shifted: Vec<Expansion> = Vec::with_capacity(window.reps.len());
    let mut raised: Vec<Expansion> = Vec::with_capacity(window.reps.len());
    let mut by_theta: Vec<Vec<Expansion>> = Vec::with_capacity(window.reps.len());
    for m in &window.reps {
        shifted.push(expand_times(&mut cache, &theta_n, m));
        raised.push(expand_times(&mut cache, &theta_n_p, m));
        by_theta.push((1..=n).map(|i| expand_times(&mut cache, map.theta(i), m)).collect());
    }

    let single = |m: &Vec<i32>| vec![(m.clone(), Complex64::new(1.0, 0.0))];
    for (im, m) in window.reps.iter().enumerate() {
        for (ip, p) in window.reps.iter().enumerate() {
            let base = window.entries[(im, ip)];
            if let Some(lhs) = bilinear(window, &shifted[im], &shifted[ip]) {
                t.record("shift by theta_n", m, p, lhs, base);
            }
            for i in 1..n {
                let lhs = bilinear(window, &by_theta[im][i - 1], &raised[ip]);
                let rhs = bilinear(window, &single(m), &by_theta[ip][n - i - 1]);
                if let (Some(lhs), Some(rhs)) = (lhs, rhs) {
                    t.record(&format!("theta_n^p against theta_{i}"), m, p, lhs, rhs);
                }
            }
        }
    }
    Ok(BhReport {
        max_violation: t.max,
        relation: t.relation,
        row: t.row,
        col: t.col,
        checked: t.checked,
        tolerance: BH_TOL,
        passed: t.max <= BH_TOL,
    })
}

/// Behaviour of the window entries along the diagonal shifts
/// `(m, p) -> (m + q k 1, p + q k 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct CompactnessReport {
    pub degree_bounds: Vec<u32>,
    /// Largest change of an entry along its shift chain, over all windows.
    pub max_shift_spread: f64,
    /// Number of nonzero entries in the largest window.
    pub nonzero_entries: usize,
    /// Smallest modulus among nonzero entries that recur at least once
    /// further along their chain.
    pub persistent_floor: f64,
    /// True when every nonzero entry is repeated unchanged along its chain,
    /// so a nonzero operator cannot be compact.
    pub non_compact: bool,
}

/// Runs the shift-constancy test on each window and reports whether nonzero
/// entries persist. Windows must belong to the same `G(m,p,n)` and character.
pub fn compactness_probe(windows: &[ToeplitzWindow]) -> Result<CompactnessReport> {
    let first = windows.first().ok_or_else(|| Error::Unsupported("no windows to probe".into()))?;
    let spec = *first.group().spec();
    if spec.kind != GroupKind::Gmpn {
        return Err(Error::Unsupported(format!("shift probe needs a group G(m,p,n), got {spec}")));
    }
    let q = spec.q() as i32;
    let mut spread: f64 = 0.0;
    let mut nonzero = 0;
    let mut floor = f64::INFINITY;
    let largest = windows.iter().max_by_key(|w| w.degree_bound).expect("non-empty");
    for w in windows {
        if w.character.values() != first.character.values() {
            return Err(Error::Unsupported("windows of different characters".into()));
        }
        let tol = 1e-12 * w.max_abs().max(1.0);
        for (im, m) in w.reps.iter().enumerate() {
            for (ip, p) in w.reps.iter().enumerate() {
                let base = w.entries[(im, ip)];
                let mut k = 1;
                let mut recurs = false;
                loop {
                    let ms: Vec<i32> = m.iter().map(|x| x + q * k).collect();
                    let ps: Vec<i32> = p.iter().map(|x| x + q * k).collect();
                    let Some(v) = w.get(&ms, &ps) else { break };
                    spread = spread.max((v - base).norm());
                    recurs = true;
                    k += 1;
                }
                if std::ptr::eq(w, largest) && base.norm() > tol {
                    nonzero += 1;
                    if recurs {
                        floor = floor.min(base.norm());
                    }
                }
            }
        }
    }
    let floor = if floor.is_finite() { floor } else { 0.0 };
    Ok(CompactnessReport {
        degree_bounds: windows.iter().map(|w| w.degree_bound).collect(),
        max_shift_spread: spread,
        nonzero_entries: nonzero,
        persistent_floor: floor,
        non_compact: spread <= BH_TOL && nonzero > 0 && floor > 0.0,
    })
}
