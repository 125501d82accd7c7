//! Basic invariants, relative invariants and isotypic projections.
//!
//! Relative invariance is read pointwise: `f` lies in the component of `chi`
//! when `f(rho(g) z) = chi(g) f(z)` for every `g`. The Jacobian of a basic map
//! transforms by `det(g)^{-1} = sgn(g)` under this rule, so `l_sgn = J_theta`
//! and the exponent rule `chi(a_i) = det(a_i)^{c_i}` hold without extra
//! conjugations.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Character, CharacterName, Group, GroupKind, ReflectionDatum};
use crate::poly::{grevlex_cmp, sphere_inner, torus_inner, Exponent, LaurentPoly, MixedPoly};

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Elementary symmetric polynomial `e_k(x_1, ..., x_n)` of the given polynomials.
fn elementary_symmetric(xs: &[LaurentPoly], k: usize) -> LaurentPoly {
    let dim = xs[0].dim();
    // e_j after processing a prefix, updated in place from the top
    let mut e = vec![LaurentPoly::zero(dim); k + 1];
    e[0] = LaurentPoly::one(dim);
    for x in xs {
        for j in (1..=k).rev() {
            let t = e[j - 1].mul(x);
            e[j] = e[j].add(&t);
        }
    }
    e[k].clone()
}

/// Leibniz determinant of a square matrix of polynomials.
pub fn poly_determinant(mat: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = mat.len();
    let dim = mat[0][0].dim();
    let mut total = LaurentPoly::zero(dim);
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm keeps track of the sign as it swaps
    let mut c = vec![0usize; n];
    let mut sign = 1.0;
    let term = |perm: &[usize], sign: f64| {
        let mut t = LaurentPoly::constant(dim, c64(sign));
        for (i, &j) in perm.iter().enumerate() {
            if t.is_zero() {
                break;
            }
            t = t.mul(&mat[i][j]);
        }
        t
    };
    total = total.add(&term(&perm, sign));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            total = total.add(&term(&perm, sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    total
}

/// Partial derivative `d/dz_i` of a Laurent polynomial.
pub fn derivative(f: &LaurentPoly, i: usize) -> LaurentPoly {
    LaurentPoly::from_terms(
        f.dim(),
        f.iter().filter(|(e, _)| e[i] != 0).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[i] -= 1;
            (e2, c * e[i] as f64)
        }),
    )
}

/// A basic polynomial map `theta = (theta_1, ..., theta_n)` generating the
/// invariant ring.
#[derive(Clone, Debug)]
pub struct BasicMap {
    group: Arc<Group>,
    components: Vec<LaurentPoly>,
}

impl BasicMap {
    /// `theta_i = e_i(z_1^m, ..., z_n^m)` for `i < n` and
    /// `theta_n = (z_1 ... z_n)^q`; for `Z(m)@k^n`, `z_k -> z_k^m`.
    pub fn new(group: &Arc<Group>) -> BasicMap {
        let s = *group.spec();
        let n = s.n;
        let components = match s.kind {
            GroupKind::Gmpn => {
                let powers: Vec<LaurentPoly> = (0..n)
                    .map(|i| {
                        let mut e = vec![0; n];
                        e[i] = s.m as i32;
                        LaurentPoly::monomial(e, c64(1.0))
                    })
                    .collect();
                let mut comps: Vec<LaurentPoly> = (1..n).map(|k| elementary_symmetric(&powers, k)).collect();
                comps.push(LaurentPoly::monomial(vec![s.q() as i32; n], c64(1.0)));
                comps
            }
            GroupKind::CyclicCoord => (0..n)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i] = if i + 1 == s.coord { s.m as i32 } else { 1 };
                    LaurentPoly::monomial(e, c64(1.0))
                })
                .collect(),
        };
        BasicMap { group: group.clone(), components }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[LaurentPoly] {
        &self.components
    }

    /// `theta_i`, 1-based as in the usual notation.
    pub fn theta(&self, i: usize) -> &LaurentPoly {
        &self.components[i - 1]
    }

    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.components.iter().map(|c| c.eval(z)).collect()
    }

    /// Components that have modulus one on the torus (monomials); a symbol with
    /// negative exponents is cleared by multiplying with powers of these.
    fn unimodular(&self) -> Vec<usize> {
        match self.group.spec().kind {
            GroupKind::Gmpn => vec![self.dim() - 1],
            GroupKind::CyclicCoord => (0..self.dim()).collect(),
        }
    }

    /// Symbolic Jacobian determinant `det(d theta_i / d z_j)`.
    pub fn jacobian(&self) -> LaurentPoly {
        let n = self.dim();
        let mat: Vec<Vec<LaurentPoly>> = self
            .components
            .iter()
            .map(|t| (0..n).map(|j| derivative(t, j)).collect())
            .collect();
        poly_determinant(&mat)
    }

    /// `(m^n/p)(z_1...z_n)^{q-1} prod_{i<j}(z_i^m - z_j^m)` for `G(m,p,n)`,
    /// `m z_k^{m-1}` for the cyclic groups.
    pub fn jacobian_closed_form(&self) -> LaurentPoly {
        let s = *self.group.spec();
        let n = s.n;
        match s.kind {
            GroupKind::Gmpn => {
                let lead = (s.m as f64).powi(n as i32) / s.p as f64;
                let mut out = LaurentPoly::monomial(vec![s.q() as i32 - 1; n], c64(lead));
                for i in 0..n {
                    for j in i + 1..n {
                        let mut a = vec![0; n];
                        a[i] = s.m as i32;
                        let mut b = vec![0; n];
                        b[j] = s.m as i32;
                        let f = LaurentPoly::monomial(a, c64(1.0)).sub(&LaurentPoly::monomial(b, c64(1.0)));
                        out = out.mul(&f);
                    }
                }
                out
            }
            GroupKind::CyclicCoord => {
                let mut e = vec![0; n];
                e[s.coord - 1] = s.m as i32 - 1;
                LaurentPoly::monomial(e, c64(s.m as f64))
            }
        }
    }

    /// `theta^k = prod theta_i^{k_i}`, memoised per call site.
    fn power_product(&self, k: &[u32], cache: &mut HashMap<Vec<u32>, LaurentPoly>) -> LaurentPoly {
        if let Some(p) = cache.get(k) {
            return p.clone();
        }
        let mut out = LaurentPoly::one(self.group.dim());
        for (i, &e) in k.iter().enumerate() {
            if e > 0 {
                out = out.mul(&self.components[i].pow(e));
            }
        }
        cache.insert(k.to_vec(), out.clone());
        out
    }

    /// Exponent `k` with `LT(theta^k) = z^beta`, if one exists.
    fn leading_preimage(&self, beta: &[i32]) -> Option<Vec<u32>> {
        let s = *self.group.spec();
        let n = s.n;
        if beta.iter().any(|&b| b < 0) {
            return None;
        }
        match s.kind {
            GroupKind::Gmpn => {
                let m = s.m as i32;
                let q = s.q() as i32;
                let mut k = vec![0u32; n];
                if beta[n - 1] % q != 0 {
                    return None;
                }
                k[n - 1] = (beta[n - 1] / q) as u32;
                for i in 0..n - 1 {
                    let d = beta[i] - beta[i + 1];
                    if d < 0 || d % m != 0 {
                        return None;
                    }
                    k[i] = (d / m) as u32;
                }
                Some(k)
            }
            GroupKind::CyclicCoord => {
                let c = s.coord - 1;
                if beta[c] % s.m as i32 != 0 {
                    return None;
                }
                Some(
                    beta.iter()
                        .enumerate()
                        .map(|(i, &b)| if i == c { (b / s.m as i32) as u32 } else { b as u32 })
                        .collect(),
                )
            }
        }
    }

    /// Writes an invariant holomorphic polynomial as a polynomial in `theta`
    /// by eliminating grevlex leading terms.
    pub fn rewrite(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        if !f.is_analytic() {
            return Err(Error::NotAnalytic);
        }
        let scale = f.max_abs();
        let tol = 1e-10 * scale;
        let mut rem = f.clone();
        let mut out: Vec<(Exponent, Complex64)> = Vec::new();
        let mut cache = HashMap::new();
        while let Some((beta, c)) = rem.leading_term().map(|(b, c)| (b.clone(), *c)) {
            let Some(k) = self.leading_preimage(&beta) else {
                if c.norm() <= tol {
                    rem = LaurentPoly::from_terms(rem.dim(), rem.iter().filter(|(e, _)| **e != beta).map(|(e, c)| (e.clone(), *c)));
                    continue;
                }
                return Err(Error::NotInvariant);
            };
            let t = self.power_product(&k, &mut cache);
            rem = rem.sub(&t.scale(c));
            // the subtraction may leave rounding debris at the old leading exponent
            let mut kept: Vec<(Exponent, Complex64)> = rem.iter().map(|(e, c)| (e.clone(), *c)).collect();
            kept.retain(|(e, c)| !(c.norm() <= tol && grevlex_cmp(e, &beta).is_ge()));
            rem = LaurentPoly::from_terms(rem.dim(), kept);
            out.push((k.iter().map(|&x| x as i32).collect(), c));
        }
        Ok(LaurentPoly::from_terms(self.dim(), out))
    }

    /// Writes an invariant Laurent polynomial on the torus as a symbol in
    /// `t, conj(t)`: negative exponents are cleared by the unimodular
    /// components `theta_j`, whose conjugates are their inverses on the torus.
    pub fn theta_form(&self, u: &LaurentPoly) -> Result<MixedPoly> {
        let n = self.dim();
        let mut r = vec![0u32; n];
        for j in self.unimodular() {
            let e = self.components[j].iter().next().expect("monomial").0.clone();
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let worst = u.iter().map(|(a, _)| (-a[i]).max(0)).max().unwrap_or(0);
                r[j] = r[j].max(((worst + ei - 1) / ei) as u32);
            }
        }
        let mut shifted = u.clone();
        let mut kbar = vec![0u32; n];
        for j in 0..n {
            if r[j] > 0 {
                shifted = shifted.mul(&self.components[j].pow(r[j]));
                kbar[j] = r[j];
            }
        }
        let poly = self.rewrite(&shifted)?;
        let holo = MixedPoly::from_analytic(&poly)?;
        Ok(holo.mul(&MixedPoly::term(vec![0; n], kbar, c64(1.0))))
    }

    /// `u o theta` on the torus for a symbol `u(t, conj t)`.
    pub fn pull_symbol(&self, u: &MixedPoly) -> Result<LaurentPoly> {
        u.substitute_torus(&self.components)
    }

    /// `f o theta` for a holomorphic `f` in the coordinates `t`.
    pub fn compose(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        f.compose(&self.components)
    }
}

/// `P_chi f = (1/|G|) sum_g conj(chi(g)) f o rho(g)`.
pub fn project(chi: &Character, f: &LaurentPoly) -> LaurentPoly {
    let g = chi.group();
    let inv_order = 1.0 / g.order() as f64;
    let mut acc: HashMap<Exponent, Complex64> = HashMap::new();
    for (idx, el) in g.elements().iter().enumerate() {
        let w = chi.value(idx).inv().to_complex() * inv_order;
        for (e, c) in f.iter() {
            let (ph, b) = el.pullback_monomial(e);
            *acc.entry(b).or_insert(Complex64::new(0.0, 0.0)) += c * w * ph.to_complex();
        }
    }
    let mut out = LaurentPoly::zero(f.dim());
    let mut terms: Vec<_> = acc.into_iter().collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    let scale = f.max_abs();
    out = out.add(&LaurentPoly::from_terms(f.dim(), terms));
    out.cleanup(scale);
    out
}

/// Whether `f(rho(g) z) = chi(g) f(z)` for every `g`, within `tol`.
pub fn is_relatively_invariant(chi: &Character, f: &LaurentPoly, tol: f64) -> bool {
    let g = chi.group();
    g.elements()
        .iter()
        .enumerate()
        .all(|(i, el)| f.pullback(el).approx_eq(&f.scale(chi.value(i).to_complex()), tol))
}

/// Exact test for `P_chi z^alpha != 0`: the pullback phase of `z^alpha`
/// must agree with `chi` on the stabiliser of `alpha`.
pub fn projection_nonzero(chi: &Character, alpha: &[i32]) -> bool {
    chi.group().elements().iter().enumerate().all(|(i, el)| {
        let (ph, b) = el.pullback_monomial(alpha);
        b != alpha || ph == chi.value(i)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Polydisc,
    Ball,
}

/// A relative invariant `l_chi` together with its norm `c_chi`.
#[derive(Clone, Debug)]
pub struct EllPoly {
    pub character: Character,
    pub poly: LaurentPoly,
    pub cnorm: f64,
    pub domain: Domain,
}

impl EllPoly {
    /// `l_chi = prod L_i^{c_i}` over the reflecting hyperplanes, except that
    /// `l_sgn` is the Jacobian of the basic map.
    pub fn new(chi: &Character, domain: Domain) -> Result<EllPoly> {
        let g = chi.group();
        if domain == Domain::Ball && g.spec().kind != GroupKind::CyclicCoord {
            return Err(Error::Unsupported(format!(
                "ball relative invariants are provided for Z(m)@k^n groups only, not {}",
                g.spec()
            )));
        }
        let refl = g.reflections();
        let sgn = Character::builtin(g, CharacterName::Sgn)?;
        let poly = if *chi == sgn {
            BasicMap::new(g).jacobian()
        } else {
            product_of_forms(g.dim(), &refl, &chi.hyperplane_exponents(&refl))
        };
        let cnorm = match domain {
            Domain::Polydisc => torus_inner(&poly, &poly)?.re.sqrt(),
            Domain::Ball => sphere_inner(&poly, &poly)?.re.sqrt(),
        };
        Ok(EllPoly { character: chi.clone(), poly, cnorm, domain })
    }

    pub fn degree(&self) -> u32 {
        self.poly.total_degree().unwrap_or(0).max(0) as u32
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.poly.eval(z)
    }
}

/// `prod_i L_i^{c_i}` with the normalised hyperplane forms.
pub fn product_of_forms(dim: usize, refl: &[ReflectionDatum], exps: &[u32]) -> LaurentPoly {
    let mut out = LaurentPoly::one(dim);
    for (r, &c) in refl.iter().zip(exps) {
        if c == 0 {
            continue;
        }
        let coeffs = r.hyperplane.coefficients(dim);
        let form = LaurentPoly::from_terms(
            dim,
            coeffs.iter().enumerate().map(|(i, &a)| {
                let mut e = vec![0; dim];
                e[i] = 1;
                (e, a)
            }),
        );
        out = out.mul(&form.pow(c));
    }
    out
}

/// Lowest-degree nonzero projection of a monomial; proportional to `l_chi`.
pub fn ell_by_projection(chi: &Character, max_degree: u32) -> Option<LaurentPoly> {
    let n = chi.group().dim();
    for d in 0..=max_degree {
        for alpha in compositions(n, d) {
            if projection_nonzero(chi, &alpha) {
                return Some(project(chi, &LaurentPoly::monomial(alpha, c64(1.0))));
            }
        }
    }
    None
}

/// Non-negative integer vectors of length `n` summing to `d`.
fn compositions(n: usize, d: u32) -> Vec<Vec<i32>> {
    if n == 1 {
        return vec![vec![d as i32]];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in compositions(n - 1, d - first) {
            rest.insert(0, first as i32);
            out.push(rest);
        }
    }
    out
}

/// Canonical representative of the monomial orbit of `alpha`.
pub fn canonical(group: &Group, alpha: &[i32]) -> Vec<i32> {
    match group.spec().kind {
        GroupKind::Gmpn => {
            let mut a = alpha.to_vec();
            a.sort_unstable();
            a
        }
        GroupKind::CyclicCoord => alpha.to_vec(),
    }
}

/// Canonical orbit representatives with nonzero projection, sup-norm at most `D`.
#[derive(Clone, Debug)]
pub struct BasisIndexSet {
    pub character: Character,
    pub degree_bound: u32,
    pub holomorphic: bool,
    pub reps: Vec<Vec<i32>>,
}

impl BasisIndexSet {
    pub fn new(chi: &Character, d: u32, holomorphic: bool) -> BasisIndexSet {
        let g = chi.group();
        let n = g.dim();
        let lo = if holomorphic { 0 } else { -(d as i32) };
        let hi = d as i32;
        let mut reps = Vec::new();
        let mut alpha = vec![lo; n];
        loop {
            if canonical(g, &alpha) == alpha && projection_nonzero(chi, &alpha) {
                reps.push(alpha.clone());
            }
            // odometer increment
            let mut i = n;
            loop {
                if i == 0 {
                    reps.sort();
                    return BasisIndexSet { character: chi.clone(), degree_bound: d, holomorphic, reps };
                }
                i -= 1;
                if alpha[i] < hi {
                    alpha[i] += 1;
                    for a in alpha.iter_mut().skip(i + 1) {
                        *a = lo;
                    }
                    break;
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn contains(&self, m: &[i32]) -> bool {
        self.reps.binary_search_by(|r| r.as_slice().cmp(m)).is_ok()
    }

    pub fn position(&self, m: &[i32]) -> Option<usize> {
        self.reps.binary_search_by(|r| r.as_slice().cmp(m)).ok()
    }

    /// `gamma_m = P_chi z^m / ||P_chi z^m||`.
    pub fn basis_element(&self, m: &[i32]) -> Result<LaurentPoly> {
        if !self.contains(m) {
            return Err(Error::NotCanonical(m.to_vec()));
        }
        Ok(gamma(&self.character, m))
    }
}

/// Unit vector along `P_chi z^m`; on free orbits this is `sqrt(|G|) P_chi z^m`.
/// Returns zero when the projection vanishes.
pub fn gamma(chi: &Character, m: &[i32]) -> LaurentPoly {
    let p = project(chi, &LaurentPoly::monomial(m.to_vec(), c64(1.0)));
    let nrm = p.norm();
    if nrm == 0.0 {
        return p;
    }
    p.scale_real(1.0 / nrm)
}

/// The unitary `f -> l_chi (f o theta) / c_chi` together with its inverse.
#[derive(Clone, Debug)]
pub struct Lift {
    pub map: BasicMap,
    pub ell: EllPoly,
}

impl Lift {
    pub fn new(chi: &Character) -> Result<Lift> {
        Ok(Lift { map: BasicMap::new(chi.group()), ell: EllPoly::new(chi, Domain::Polydisc)? })
    }

    pub fn lift(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        let composed = self.map.compose(f)?;
        Ok(self.ell.poly.mul(&composed).scale_real(1.0 / self.ell.cnorm))
    }

    pub fn lower(&self, big_f: &LaurentPoly) -> Result<LaurentPoly> {
        let (quot, rem) = divide(big_f, &self.ell.poly)?;
        if rem.norm() >= 1e-9 * big_f.norm().max(f64::MIN_POSITIVE) {
            return Err(Error::NotIsotypic(format!(
                "division by the relative invariant leaves a remainder of norm {:e}",
                rem.norm()
            )));
        }
        self.map
            .rewrite(&quot.scale_real(self.ell.cnorm))
            .map_err(|_| Error::NotIsotypic("quotient is not invariant under the group".into()))
    }
}

/// Multivariate division by a single polynomial in grevlex order:
/// returns `(q, r)` with `f = q d + r` and no term of `r` divisible by `LT(d)`.
pub fn divide(f: &LaurentPoly, d: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly)> {
    if !f.is_analytic() || !d.is_analytic() {
        return Err(Error::NotAnalytic);
    }
    let (lt_e, lt_c) = d.leading_term().map(|(e, c)| (e.clone(), *c)).ok_or_else(|| {
        Error::Unsupported("division by the zero polynomial".into())
    })?;
    let scale = f.max_abs();
    let tol = 1e-13 * scale;
    let dim = f.dim();
    let mut p = f.clone();
    let mut q: Vec<(Exponent, Complex64)> = Vec::new();
    let mut r: Vec<(Exponent, Complex64)> = Vec::new();
    while let Some((e, c)) = p.leading_term().map(|(e, c)| (e.clone(), *c)) {
        let divisible = e.iter().zip(&lt_e).all(|(a, b)| a >= b);
        if divisible {
            let qe: Exponent = e.iter().zip(&lt_e).map(|(a, b)| a - b).collect();
            let qc = c / lt_c;
            p = p.sub(&d.shift(&qe).scale(qc));
            q.push((qe, qc));
        } else {
            r.push((e.clone(), c));
            p = LaurentPoly::from_terms(dim, p.iter().filter(|(x, _)| **x != e).map(|(x, c)| (x.clone(), *c)));
        }
        let debris: Vec<Exponent> = p
            .iter()
            .filter(|(x, c)| c.norm() <= tol && grevlex_cmp(x, &e).is_ge())
            .map(|(x, _)| x.clone())
            .collect();
        if !debris.is_empty() {
            p = LaurentPoly::from_terms(dim, p.iter().filter(|(x, _)| !debris.contains(x)).map(|(x, c)| (x.clone(), *c)));
        }
    }
    Ok((LaurentPoly::from_terms(dim, q), LaurentPoly::from_terms(dim, r)))
}
