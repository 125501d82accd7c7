//! Sparse Laurent polynomials on the torus and mixed polynomials in `z`, `conj(z)`.
//!
//! A [`LaurentPoly`] is a trigonometric polynomial on `T^n` (or, when all
//! exponents are non-negative, a holomorphic polynomial on the polydisc).
//! A [`MixedPoly`] holds terms `c z^b conj(z)^g` with independent non-negative
//! exponent vectors; it is used for harmonic extensions, Wirtinger calculus and
//! symbols written in the coordinates `t`, `conj(t)` of the quotient domain.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupElement;

/// Relative magnitude below which coefficients are discarded.
pub const CLEANUP_REL: f64 = 1e-12;

pub type Exponent = Vec<i32>;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn factorial(k: u32) -> f64 {
    (2..=k).map(f64::from).product()
}

/// Graded reverse lexicographic comparison of exponent vectors.
pub fn grevlex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&x| x as i64).sum();
    let db: i64 = b.iter().map(|&x| x as i64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Sparse Laurent polynomial `sum c_a z^a`, `a in Z^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Exponent, Complex64>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, c64(1.0, 0.0))
    }

    pub fn monomial(e: Exponent, c: Complex64) -> Self {
        let mut p = LaurentPoly::zero(e.len());
        if c != Complex64::new(0.0, 0.0) {
            p.terms.insert(e, c);
        }
        p
    }

    /// The coordinate function `z_i` (0-based).
    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(e, c64(1.0, 0.0))
    }

    /// Sums repeated exponents and cleans up.
    pub fn from_terms<I: IntoIterator<Item = (Exponent, Complex64)>>(dim: usize, terms: I) -> Self {
        let mut p = LaurentPoly::zero(dim);
        let mut scale: f64 = 0.0;
        for (e, c) in terms {
            assert_eq!(e.len(), dim, "exponent length must equal the dimension");
            scale = scale.max(c.norm());
            *p.terms.entry(e).or_insert(c64(0.0, 0.0)) += c;
        }
        p.cleanup(scale);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Complex64> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[i32]) -> Complex64 {
        self.terms.get(e).copied().unwrap_or(c64(0.0, 0.0))
    }

    /// Drops coefficients with `|c| <= CLEANUP_REL * max(scale, max |c|)`.
    pub fn cleanup(&mut self, scale: f64) {
        let s = scale.max(self.max_abs());
        let cut = CLEANUP_REL * s;
        self.terms.retain(|_, c| c.norm() > cut);
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Torus `L^2` norm: the Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_analytic(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Largest total degree among the terms (`None` for zero).
    pub fn total_degree(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Sup-norm radius `max |a_i|` of the exponent support.
    pub fn radius(&self) -> u32 {
        self.terms.keys().flat_map(|e| e.iter().map(|x| x.unsigned_abs())).max().unwrap_or(0)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(e.clone()).or_insert(c64(0.0, 0.0)) += c;
        }
        out.cleanup(self.max_abs().max(other.max_abs()));
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(c64(-1.0, 0.0)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = LaurentPoly::zero(self.dim);
        let mut e = vec![0; self.dim];
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                for k in 0..self.dim {
                    e[k] = a[k] + b[k];
                }
                match out.terms.get_mut(&e) {
                    Some(c) => *c += ca * cb,
                    None => {
                        out.terms.insert(e.clone(), ca * cb);
                    }
                }
            }
        }
        out.cleanup(self.max_abs() * other.max_abs());
        Ok(out)
    }

    /// `self + other`; panics on dimension mismatch (use [`try_add`](Self::try_add) otherwise).
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("dimension mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("dimension mismatch")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("dimension mismatch")
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        };
        out.cleanup(0.0);
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c64(s, 0.0))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = LaurentPoly::one(self.dim);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Pointwise conjugation on the torus: `sum conj(c) z^{-a}`.
    pub fn conj_torus(&self) -> Self {
        LaurentPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.conj()))
                .collect(),
        }
    }

    /// Multiplies every exponent by the monomial `z^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        LaurentPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), *c))
                .collect(),
        }
    }

    /// Keeps only the terms with every exponent non-negative (the Szegő
    /// projection of the polydisc).
    pub fn analytic_part(&self) -> Self {
        LaurentPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().all(|&x| x >= 0))
                .map(|(e, c)| (e.clone(), *c))
                .collect(),
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.dim);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(z).fold(*c, |acc, (&k, &x)| acc * x.powi(k))
            })
            .sum()
    }

    /// `f o rho(g)`.
    pub fn pullback(&self, g: &GroupElement) -> Self {
        LaurentPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let (ph, b) = g.pullback_monomial(e);
                    (b, c * ph.to_complex())
                })
                .collect(),
        }
    }

    /// Regular representation `R_g f = f o rho(g)^{-1}`.
    pub fn act(&self, g: &GroupElement) -> Self {
        self.pullback(&g.inverse())
    }

    /// `f(s_1, ..., s_k)` for an analytic `f` in `k` variables and polynomials
    /// `s_i` of a common dimension.
    pub fn compose(&self, subs: &[LaurentPoly]) -> Result<LaurentPoly> {
        if subs.len() != self.dim {
            return Err(Error::WrongDimension { expected: self.dim, got: subs.len() });
        }
        if !self.is_analytic() {
            return Err(Error::NotAnalytic);
        }
        let out_dim = subs.first().map(|s| s.dim).unwrap_or(0);
        let mut powers: Vec<Vec<LaurentPoly>> = subs.iter().map(|s| vec![LaurentPoly::one(s.dim)]).collect();
        let mut out = LaurentPoly::zero(out_dim);
        let mut scale: f64 = 0.0;
        for (e, c) in &self.terms {
            let mut term = LaurentPoly::constant(out_dim, *c);
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            scale = scale.max(term.max_abs());
            for (e, c) in term.terms {
                *out.terms.entry(e).or_insert(c64(0.0, 0.0)) += c;
            }
        }
        out.cleanup(scale);
        Ok(out)
    }

    /// Leading term in the graded reverse lexicographic order.
    pub fn leading_term(&self) -> Option<(&Exponent, &Complex64)> {
        self.terms.iter().max_by(|a, b| grevlex_cmp(a.0, b.0))
    }

    /// Maximum coefficientwise difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for (e, c) in &self.terms {
            m = m.max((c - other.coeff(e)).norm());
        }
        for (e, c) in &other.terms {
            if !self.terms.contains_key(e) {
                m = m.max(c.norm());
            }
        }
        m
    }

    /// Coefficientwise equality within `tol` relative to the larger max coefficient.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let s = self.max_abs().max(other.max_abs()).max(1e-300);
        self.dim == other.dim && self.max_diff(other) <= tol * s
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { c: [c.re, c.im], e: e.clone(), ebar: None })
                .collect(),
        }
    }

    pub fn from_json(json: &PolyJson) -> Result<Self> {
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            if t.e.len() != json.dim {
                return Err(Error::WrongDimension { expected: json.dim, got: t.e.len() });
            }
            if t.ebar.as_ref().is_some_and(|b| b.iter().any(|&x| x != 0)) {
                return Err(Error::Json("Laurent polynomial terms cannot carry `ebar`".into()));
            }
            terms.push((t.e.clone(), c64(t.c[0], t.c[1])));
        }
        Ok(LaurentPoly::from_terms(json.dim, terms))
    }
}

fn fmt_coeff(c: &Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(i, &k)| if k == 1 { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, k) })
                    .collect();
                if mono.is_empty() {
                    fmt_coeff(c)
                } else {
                    format!("{}*{}", fmt_coeff(c), mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `sum_a f_a conj(g_a)`: the exact `L^2(T^n)` pairing for normalized Haar measure.
pub fn torus_inner(f: &LaurentPoly, g: &LaurentPoly) -> Result<Complex64> {
    f.check_dim(g)?;
    let (small, large, flip) = if f.len() <= g.len() { (f, g, false) } else { (g, f, true) };
    let mut s = c64(0.0, 0.0);
    for (e, c) in &small.terms {
        if let Some(d) = large.terms.get(e) {
            s += if flip { d * c.conj() } else { c * d.conj() };
        }
    }
    Ok(s)
}

/// `||z^a||^2` on the unit sphere of `C^n` for normalized surface measure:
/// `a! (n-1)! / (n-1+|a|)!`.
pub fn sphere_monomial_norm_sq(a: &[i32]) -> f64 {
    let n = a.len() as u32;
    // 1 / (multinomial(|a|; a) * binomial(n-1+|a|, n-1)), accumulated stably
    let mut v = 1.0;
    let mut total = 0u32;
    for &k in a {
        for j in 1..=k as u32 {
            total += 1;
            v *= j as f64 / total as f64;
        }
    }
    for j in 1..n {
        v *= j as f64 / (total + j) as f64;
    }
    v
}

/// `int z^a conj(z)^b dsigma` over the unit sphere.
pub fn sphere_pair_integral(a: &[i32], b: &[i32], n: usize) -> f64 {
    assert!(a.len() == n && b.len() == n);
    if a != b {
        return 0.0;
    }
    sphere_monomial_norm_sq(a)
}

/// Sphere `L^2` pairing of holomorphic polynomials.
pub fn sphere_inner(f: &LaurentPoly, g: &LaurentPoly) -> Result<Complex64> {
    f.check_dim(g)?;
    if !f.is_analytic() || !g.is_analytic() {
        return Err(Error::NotAnalytic);
    }
    let mut s = c64(0.0, 0.0);
    for (e, c) in &f.terms {
        if let Some(d) = g.terms.get(e) {
            s += c * d.conj() * sphere_monomial_norm_sq(e);
        }
    }
    Ok(s)
}

/// `k_a = ||z^a||^{-1}` on the sphere.
pub fn ball_basis_constant(a: &[i32]) -> f64 {
    sphere_monomial_norm_sq(a).sqrt().recip()
}

/// `(n-1+|a|)! / (a! (n-1)!)` computed directly; used as an oracle in tests.
pub fn ball_basis_constant_sq_direct(a: &[i32]) -> f64 {
    let n = a.len() as u32;
    let s: i32 = a.iter().sum();
    let num = factorial(n - 1 + s as u32);
    let den: f64 = a.iter().map(|&k| factorial(k as u32)).product::<f64>() * factorial(n - 1);
    num / den
}

/// Key of a mixed term `z^b conj(z)^g`.
pub type MixedExponent = (Vec<u32>, Vec<u32>);

/// Polynomial in `z` and `conj(z)`: `sum c z^b conj(z)^g`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedPoly {
    dim: usize,
    terms: BTreeMap<MixedExponent, Complex64>,
}

impl MixedPoly {
    pub fn zero(dim: usize) -> Self {
        MixedPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::term(vec![0; dim], vec![0; dim], c)
    }

    pub fn term(b: Vec<u32>, g: Vec<u32>, c: Complex64) -> Self {
        assert_eq!(b.len(), g.len());
        let mut p = MixedPoly::zero(b.len());
        if c != c64(0.0, 0.0) {
            p.terms.insert((b, g), c);
        }
        p
    }

    /// `z_i` (0-based).
    pub fn var(dim: usize, i: usize) -> Self {
        let mut b = vec![0; dim];
        b[i] = 1;
        Self::term(b, vec![0; dim], c64(1.0, 0.0))
    }

    /// `conj(z_i)` (0-based).
    pub fn conj_var(dim: usize, i: usize) -> Self {
        let mut g = vec![0; dim];
        g[i] = 1;
        Self::term(vec![0; dim], g, c64(1.0, 0.0))
    }

    pub fn from_terms<I: IntoIterator<Item = (MixedExponent, Complex64)>>(dim: usize, terms: I) -> Self {
        let mut p = MixedPoly::zero(dim);
        let mut scale: f64 = 0.0;
        for (k, c) in terms {
            assert!(k.0.len() == dim && k.1.len() == dim);
            scale = scale.max(c.norm());
            *p.terms.entry(k).or_insert(c64(0.0, 0.0)) += c;
        }
        p.cleanup(scale);
        p
    }

    /// Embeds a holomorphic polynomial.
    pub fn from_analytic(f: &LaurentPoly) -> Result<Self> {
        if !f.is_analytic() {
            return Err(Error::NotAnalytic);
        }
        Ok(MixedPoly {
            dim: f.dim,
            terms: f
                .terms
                .iter()
                .map(|(e, c)| ((e.iter().map(|&x| x as u32).collect(), vec![0; f.dim]), *c))
                .collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<MixedExponent, Complex64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn cleanup(&mut self, scale: f64) {
        let cut = CLEANUP_REL * scale.max(self.max_abs());
        self.terms.retain(|_, c| c.norm() > cut);
    }

    /// Every term has `min(b_i, g_i) = 0`, i.e. the polynomial is a sum of
    /// holomorphic and antiholomorphic pieces in each variable separately.
    pub fn is_harmonic_form(&self) -> bool {
        self.terms.keys().all(|(b, g)| b.iter().zip(g).all(|(x, y)| *x == 0 || *y == 0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (k, c) in &other.terms {
            *out.terms.entry(k.clone()).or_insert(c64(0.0, 0.0)) += c;
        }
        out.cleanup(self.max_abs().max(other.max_abs()));
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = MixedPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect(),
        };
        out.cleanup(0.0);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = MixedPoly::zero(self.dim);
        for ((b1, g1), c1) in &self.terms {
            for ((b2, g2), c2) in &other.terms {
                let b: Vec<u32> = b1.iter().zip(b2).map(|(x, y)| x + y).collect();
                let g: Vec<u32> = g1.iter().zip(g2).map(|(x, y)| x + y).collect();
                *out.terms.entry((b, g)).or_insert(c64(0.0, 0.0)) += c1 * c2;
            }
        }
        out.cleanup(self.max_abs() * other.max_abs());
        out
    }

    /// Pointwise complex conjugate: swaps the roles of `z` and `conj(z)`.
    pub fn conj(&self) -> Self {
        MixedPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|((b, g), c)| ((g.clone(), b.clone()), c.conj())).collect(),
        }
    }

    /// `d/dz_i` (Wirtinger).
    pub fn d_z(&self, i: usize) -> Self {
        let mut out = MixedPoly::zero(self.dim);
        for ((b, g), c) in &self.terms {
            if b[i] > 0 {
                let mut b2 = b.clone();
                b2[i] -= 1;
                *out.terms.entry((b2, g.clone())).or_insert(c64(0.0, 0.0)) += c * b[i] as f64;
            }
        }
        out.cleanup(0.0);
        out
    }

    /// `d/dconj(z_i)` (Wirtinger).
    pub fn d_zbar(&self, i: usize) -> Self {
        let mut out = MixedPoly::zero(self.dim);
        for ((b, g), c) in &self.terms {
            if g[i] > 0 {
                let mut g2 = g.clone();
                g2[i] -= 1;
                *out.terms.entry((b.clone(), g2)).or_insert(c64(0.0, 0.0)) += c * g[i] as f64;
            }
        }
        out.cleanup(0.0);
        out
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.dim);
        self.terms
            .iter()
            .map(|((b, g), c)| {
                let mut v = *c;
                for i in 0..self.dim {
                    v *= z[i].powu(b[i]) * z[i].conj().powu(g[i]);
                }
                v
            })
            .sum()
    }

    /// Restriction to the torus, where `conj(z) = z^{-1}`.
    pub fn restrict_torus(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.dim,
            self.terms.iter().map(|((b, g), c)| {
                (b.iter().zip(g).map(|(x, y)| *x as i32 - *y as i32).collect(), *c)
            }),
        )
    }

    /// Evaluates the symbol `u(t, conj t)` along `t = s(z)` on the torus:
    /// `sum c s^b conj_torus(s)^g`.
    pub fn substitute_torus(&self, subs: &[LaurentPoly]) -> Result<LaurentPoly> {
        if subs.len() != self.dim {
            return Err(Error::WrongDimension { expected: self.dim, got: subs.len() });
        }
        let out_dim = subs.first().map(|s| s.dim).unwrap_or(0);
        let conj: Vec<LaurentPoly> = subs.iter().map(|s| s.conj_torus()).collect();
        let mut out = LaurentPoly::zero(out_dim);
        let mut scale: f64 = 0.0;
        for ((b, g), c) in &self.terms {
            let mut term = LaurentPoly::constant(out_dim, *c);
            for i in 0..self.dim {
                if b[i] > 0 {
                    term = term.mul(&subs[i].pow(b[i]));
                }
                if g[i] > 0 {
                    term = term.mul(&conj[i].pow(g[i]));
                }
            }
            scale = scale.max(term.max_abs());
            for (e, c) in term.terms {
                *out.terms.entry(e).or_insert(c64(0.0, 0.0)) += c;
            }
        }
        out.cleanup(scale);
        Ok(out)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|((b, g), c)| TermJson {
                    c: [c.re, c.im],
                    e: b.iter().map(|&x| x as i32).collect(),
                    ebar: Some(g.iter().map(|&x| x as i32).collect()),
                })
                .collect(),
        }
    }

    /// Reads the harmonic wire format. Terms without `ebar` may carry negative
    /// exponents in `e`; these are read as powers of `conj(z)`.
    pub fn from_json(json: &PolyJson) -> Result<Self> {
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            if t.e.len() != json.dim {
                return Err(Error::WrongDimension { expected: json.dim, got: t.e.len() });
            }
            let (b, g) = match &t.ebar {
                Some(bar) => {
                    if bar.len() != json.dim {
                        return Err(Error::WrongDimension { expected: json.dim, got: bar.len() });
                    }
                    if t.e.iter().chain(bar).any(|&x| x < 0) {
                        return Err(Error::Json("exponents with `ebar` must be non-negative".into()));
                    }
                    (t.e.iter().map(|&x| x as u32).collect(), bar.iter().map(|&x| x as u32).collect())
                }
                None => split_exponent(&t.e),
            };
            terms.push(((b, g), c64(t.c[0], t.c[1])));
        }
        Ok(MixedPoly::from_terms(json.dim, terms))
    }
}

fn split_exponent(a: &[i32]) -> (Vec<u32>, Vec<u32>) {
    (
        a.iter().map(|&x| x.max(0) as u32).collect(),
        a.iter().map(|&x| (-x).max(0) as u32).collect(),
    )
}

/// Pluriharmonic extension of a torus polynomial into the polydisc: each
/// `z^a` becomes `z^{a+} conj(z)^{a-}`.
pub fn harmonic_extension(f: &LaurentPoly) -> MixedPoly {
    MixedPoly {
        dim: f.dim,
        terms: f.terms.iter().map(|(e, c)| (split_exponent(e), *c)).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Wirtinger {
    D1,
    D2,
    D12,
}

/// `D_1(f,g) = f_{z_1} g_{conj z_1}`, `D_2` likewise, and
/// `D_{12}(f,g) = f_{z_1 z_2} g_{conj z_1 conj z_2}`, for `n = 2`.
pub fn wirtinger_d(f: &MixedPoly, g: &MixedPoly, which: Wirtinger) -> Result<MixedPoly> {
    for p in [f, g] {
        if p.dim != 2 {
            return Err(Error::WrongDimension { expected: 2, got: p.dim });
        }
    }
    Ok(match which {
        Wirtinger::D1 => f.d_z(0).mul(&g.d_zbar(0)),
        Wirtinger::D2 => f.d_z(1).mul(&g.d_zbar(1)),
        Wirtinger::D12 => f.d_z(0).d_z(1).mul(&g.d_zbar(0).d_zbar(1)),
    })
}

/// Whether `h(z, xi)` vanishes identically for `z` in the disc in coordinate
/// `free` and `xi` on the circle in the other coordinate (`n = 2`).
pub fn vanishes_on_disc_times_circle(h: &MixedPoly, free: usize, tol: f64) -> bool {
    let other = 1 - free;
    let mut acc: BTreeMap<(u32, u32, i64), Complex64> = BTreeMap::new();
    let mut scale: f64 = 0.0;
    for ((b, g), c) in &h.terms {
        scale = scale.max(c.norm());
        let key = (b[free], g[free], b[other] as i64 - g[other] as i64);
        *acc.entry(key).or_insert(c64(0.0, 0.0)) += c;
    }
    acc.values().all(|c| c.norm() <= tol * scale.max(1.0))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub c: [f64; 2],
    pub e: Vec<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ebar: Option<Vec<i32>>,
}

/// Wire format `{"dim": n, "terms": [{"c": [re, im], "e": [...], "ebar": [...]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub dim: usize,
    pub terms: Vec<TermJson>,
}
