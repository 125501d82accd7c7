//! Szegő kernels of the polydisc, the ball and the rank-two Cartan domain of
//! type III, and the kernels of the quotient Hardy spaces they induce.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Character, Group, GroupKind};
use crate::invariant::{BasisIndexSet, Domain, EllPoly, Lift};
use crate::poly::{sphere_monomial_norm_sq, torus_inner, LaurentPoly, MixedPoly};

/// Relative size of `|l(z)|` below which the closed form is refused.
pub const SINGULAR_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseDomain {
    Polydisc,
    Ball,
    /// Symmetric `2 x 2` matrices `[[z1, z3], [z3, z2]]` with `I - Z Z*` positive definite.
    Cartan3,
}

impl BaseDomain {
    pub fn parse(s: &str) -> Result<BaseDomain> {
        match s {
            "polydisc" => Ok(BaseDomain::Polydisc),
            "ball" => Ok(BaseDomain::Ball),
            "cartan3" | "cartan3rank2" => Ok(BaseDomain::Cartan3),
            _ => Err(Error::Unsupported(format!("unknown domain `{s}`"))),
        }
    }

    pub fn contains(self, z: &[Complex64]) -> bool {
        match self {
            BaseDomain::Polydisc => z.iter().all(|c| c.norm() < 1.0),
            BaseDomain::Ball => z.iter().map(|c| c.norm_sqr()).sum::<f64>() < 1.0,
            BaseDomain::Cartan3 => {
                if z.len() != 3 {
                    return false;
                }
                // H = I - Z Z^* is Hermitian 2x2; positive definite iff H11 > 0 and det H > 0
                let (a, b, c) = (z[0], z[1], z[2]);
                let h11 = 1.0 - a.norm_sqr() - c.norm_sqr();
                let h22 = 1.0 - c.norm_sqr() - b.norm_sqr();
                let h12 = -(a * c.conj() + c * b.conj());
                h11 > 0.0 && h11 * h22 - h12.norm_sqr() > 0.0
            }
        }
    }

    fn check(self, z: &[Complex64]) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::OutsideDomain(format!("{z:?} is not in the {self:?} domain")))
        }
    }

    /// `max |z_i|` for the polydisc, `|z|` otherwise; used for the
    /// singularity scale.
    fn boundary_distance(self, z: &[Complex64]) -> f64 {
        match self {
            BaseDomain::Polydisc => 1.0 - z.iter().map(|c| c.norm()).fold(0.0, f64::max),
            _ => 1.0 - z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        }
    }
}

/// Szegő kernel of the base domain.
pub fn base_kernel(domain: BaseDomain, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    if z.len() != w.len() {
        return Err(Error::DimensionMismatch { left: z.len(), right: w.len() });
    }
    domain.check(z)?;
    domain.check(w)?;
    base_kernel_unchecked(domain, z, w)
}

fn base_kernel_unchecked(domain: BaseDomain, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    match domain {
        BaseDomain::Polydisc => Ok(z.iter().zip(w).map(|(a, b)| one / (one - a * b.conj())).product()),
        BaseDomain::Ball => {
            let s: Complex64 = z.iter().zip(w).map(|(a, b)| a * b.conj()).sum();
            Ok((one - s).powi(-(z.len() as i32)))
        }
        BaseDomain::Cartan3 => {
            let d = cartan3_det(z, w);
            if d.re <= 0.0 {
                return Err(Error::BranchGuard(d.re));
            }
            Ok((-1.5 * d.ln()).exp())
        }
    }
}

/// `det(I - Z W^*)` for the symmetric matrices attached to `z`, `w`.
pub fn cartan3_det(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    let zm = [[z[0], z[2]], [z[2], z[1]]];
    let wm = [[w[0].conj(), w[2].conj()], [w[2].conj(), w[1].conj()]];
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let delta = if i == j { 1.0 } else { 0.0 };
            m[i][j] = Complex64::new(delta, 0.0) - (zm[i][0] * wm[0][j] + zm[i][1] * wm[1][j]);
        }
    }
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Tetrablock kernel in the coordinates of the Cartan domain:
/// `(S(z, w) - S((z1, z2, -z3), w)) / (4 z3 conj(w3))`.
pub fn tetrablock_kernel(z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    BaseDomain::Cartan3.check(z)?;
    BaseDomain::Cartan3.check(w)?;
    for v in [z[2], w[2]] {
        if v.norm() <= SINGULAR_TOL {
            return Err(Error::SingularPoint { value: v.norm() });
        }
    }
    let flipped = [z[0], z[1], -z[2]];
    let a = base_kernel_unchecked(BaseDomain::Cartan3, z, w)?;
    let b = base_kernel_unchecked(BaseDomain::Cartan3, &flipped, w)?;
    Ok((a - b) / (4.0 * z[2] * w[2].conj()))
}

/// Reproducing kernel of the quotient Hardy space attached to a character,
/// evaluated in the coordinates of the cover:
/// `(c^2/|G|) / (l(z) conj l(w)) * sum_g conj(chi(g)) S(rho(g) z, w)`.
#[derive(Clone, Debug)]
pub struct QuotientKernel {
    pub domain: BaseDomain,
    pub ell: EllPoly,
}

impl QuotientKernel {
    pub fn new(chi: &Character, domain: BaseDomain) -> Result<QuotientKernel> {
        let d = match domain {
            BaseDomain::Polydisc => Domain::Polydisc,
            BaseDomain::Ball => Domain::Ball,
            BaseDomain::Cartan3 => {
                return Err(Error::Unsupported(
                    "quotients of the Cartan domain are available through tetrablock_kernel".into(),
                ))
            }
        };
        Ok(QuotientKernel { domain, ell: EllPoly::new(chi, d)? })
    }

    pub fn character(&self) -> &Character {
        &self.ell.character
    }

    pub fn group(&self) -> &Arc<Group> {
        self.ell.character.group()
    }

    /// Isotypic kernel `(P_chi S(., w))(z)` without the relative-invariant factors.
    pub fn isotypic(&self, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        let g = self.group();
        if z.len() != g.dim() || w.len() != g.dim() {
            return Err(Error::WrongDimension { expected: g.dim(), got: z.len().min(w.len()) });
        }
        self.domain.check(z)?;
        self.domain.check(w)?;
        let chi = self.character();
        let mut s = Complex64::new(0.0, 0.0);
        for (i, el) in g.elements().iter().enumerate() {
            s += chi.value(i).inv().to_complex() * base_kernel_unchecked(self.domain, &el.apply(z), w)?;
        }
        Ok(s / g.order() as f64)
    }

    pub fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        let lz = self.ell.eval(z);
        let lw = self.ell.eval(w);
        let deg = self.ell.degree() as i32;
        for (p, l) in [(z, lz), (w, lw)] {
            if p.len() != self.group().dim() {
                return Err(Error::WrongDimension { expected: self.group().dim(), got: p.len() });
            }
            let scale = self.domain.boundary_distance(p).max(0.0).powi(deg);
            if l.norm() <= SINGULAR_TOL * scale {
                return Err(Error::SingularPoint { value: l.norm() });
            }
        }
        let c2 = self.ell.cnorm * self.ell.cnorm;
        Ok(self.isotypic(z, w)? * c2 / (lz * lw.conj()))
    }
}

/// Truncated orthonormal expansion `sum_m e_m(x) conj(e_m(y))` of the quotient
/// kernel in the coordinates `x = theta(z)`, with `e_m` the lowered `gamma_m`.
#[derive(Clone, Debug)]
pub struct SeriesKernel {
    pub lift: Lift,
    pub degree_bound: u32,
    pub basis: Vec<(Vec<i32>, LaurentPoly)>,
}

impl SeriesKernel {
    pub fn new(chi: &Character, degree_bound: u32) -> Result<SeriesKernel> {
        let lift = Lift::new(chi)?;
        let set = BasisIndexSet::new(chi, degree_bound, true);
        let mut basis = Vec::with_capacity(set.len());
        for m in &set.reps {
            let gm = set.basis_element(m)?;
            basis.push((m.clone(), lift.lower(&gm)?));
        }
        Ok(SeriesKernel { lift, degree_bound, basis })
    }

    pub fn eval_theta(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        self.basis.iter().map(|(_, e)| e.eval(x) * e.eval(y).conj()).sum()
    }

    /// Evaluates at `theta(z)`, `theta(w)`.
    pub fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Complex64 {
        self.eval_theta(&self.lift.map.eval(z), &self.lift.map.eval(w))
    }

    /// `|<f, K(., theta(w))> - f(theta(w))|` in the quotient Hardy space, for a
    /// holomorphic `f` in the coordinates `t`.
    pub fn reproducing_residual(&self, f: &LaurentPoly, w: &[Complex64]) -> Result<f64> {
        let lifted = self.lift.lift(f)?;
        let y = self.lift.map.eval(w);
        let mut s = Complex64::new(0.0, 0.0);
        for (_, e) in &self.basis {
            let gm = self.lift.lift(e)?;
            s += torus_inner(&lifted, &gm)? * e.eval(&y);
        }
        Ok((s - f.eval(&y)).norm())
    }
}

/// Kernel value at a pair, with the quotient closed form falling back to the
/// series at zeros of the relative invariant.
pub fn quotient_or_series(
    kernel: &QuotientKernel,
    series_degree: u32,
    z: &[Complex64],
    w: &[Complex64],
) -> Result<(Complex64, &'static str)> {
    match kernel.eval(z, w) {
        Ok(v) => Ok((v, "closed-form")),
        Err(Error::SingularPoint { .. }) if kernel.domain == BaseDomain::Polydisc => {
            let s = SeriesKernel::new(kernel.character(), series_degree)?;
            Ok((s.eval(z, w), "series"))
        }
        Err(e) => Err(e),
    }
}

/// `int f d Theta_chi = <(f o theta) l, l>` on the torus, for a symbol `f` in `t`, `conj(t)`.
pub fn pushforward_integral(chi: &Character, f: &MixedPoly) -> Result<Complex64> {
    let lift = Lift::new(chi)?;
    let pulled = lift.map.pull_symbol(f)?;
    torus_inner(&pulled.mul(&lift.ell.poly), &lift.ell.poly)
}

/// Squared norm of the relative invariant for the sign character of
/// `z -> (z_1^m, z_2, ..., z_n)` on the ball, next to the value printed in
/// the literature (`1` for `n = 2`, `2/(m+1)` for `n = 3`).
#[derive(Clone, Debug, Serialize)]
pub struct EllipsoidConstant {
    pub m: u32,
    pub n: usize,
    pub recomputed_sq: f64,
    pub stated: Option<f64>,
    pub agrees: Option<bool>,
}

pub fn ellipsoid_constant(m: u32, n: usize) -> EllipsoidConstant {
    // l_sgn = J = m z_1^{m-1}
    let mut e = vec![0; n];
    e[0] = m as i32 - 1;
    let recomputed_sq = (m as f64).powi(2) * sphere_monomial_norm_sq(&e);
    let stated = match n {
        2 => Some(1.0),
        3 => Some(2.0 / (m as f64 + 1.0)),
        _ => None,
    };
    let agrees = stated.map(|s| (s - recomputed_sq).abs() <= 1e-12 * s.max(1.0) || (s * s - recomputed_sq).abs() <= 1e-12);
    EllipsoidConstant { m, n, recomputed_sq, stated, agrees }
}

/// Gram matrix `K(x_i, x_j)` of a kernel on a point set.
pub fn gram<F>(points: &[Vec<Complex64>], mut k: F) -> Result<DMatrix<Complex64>>
where
    F: FnMut(&[Complex64], &[Complex64]) -> Result<Complex64>,
{
    let n = points.len();
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = k(&points[i], &points[j])?;
        }
    }
    Ok(m)
}

/// Smallest eigenvalue of the Hermitian part of a square matrix.
pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Whether the group supports closed-form quotient kernels on `domain`.
pub fn supports(group: &Group, domain: BaseDomain) -> bool {
    match domain {
        BaseDomain::Polydisc => true,
        BaseDomain::Ball => group.spec().kind == GroupKind::CyclicCoord,
        BaseDomain::Cartan3 => false,
    }
}

/// JSON description of a kernel:
/// `{"domain": "polydisc", "group": "G(1,1,2)", "character": "sgn"}`, or
/// `{"domain": "tetrablock"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelSpecJson {
    pub domain: String,
    #[serde(default)]
    pub group: Option<String>,
    #[serde(default)]
    pub character: Option<String>,
}

#[derive(Clone, Debug)]
pub enum KernelSpec {
    Base(BaseDomain),
    Quotient(Box<QuotientKernel>),
    Tetrablock,
}

impl KernelSpec {
    pub fn from_json(spec: &KernelSpecJson) -> Result<KernelSpec> {
        if spec.domain == "tetrablock" {
            return Ok(KernelSpec::Tetrablock);
        }
        let domain = BaseDomain::parse(&spec.domain)?;
        match (&spec.group, &spec.character) {
            (None, None) => Ok(KernelSpec::Base(domain)),
            (Some(g), c) => {
                let group = Group::parse(g)?;
                let chi = Character::parse(&group, c.as_deref().unwrap_or("sgn"))?;
                Ok(KernelSpec::Quotient(Box::new(QuotientKernel::new(&chi, domain)?)))
            }
            (None, Some(_)) => Err(Error::Unsupported("a character needs a group".into())),
        }
    }

    pub fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        match self {
            KernelSpec::Base(d) => base_kernel(*d, z, w),
            KernelSpec::Quotient(k) => k.eval(z, w),
            KernelSpec::Tetrablock => tetrablock_kernel(z, w),
        }
    }

    /// Value together with the evaluation method; quotient kernels on the
    /// polydisc fall back to the series of degree `series_degree` at zeros of
    /// the relative invariant.
    pub fn eval_with_method(&self, z: &[Complex64], w: &[Complex64], series_degree: u32) -> Result<(Complex64, &'static str)> {
        match self {
            KernelSpec::Quotient(k) => quotient_or_series(k, series_degree, z, w),
            _ => Ok((self.eval(z, w)?, "closed-form")),
        }
    }

    /// Dimension of the points the kernel accepts, when it is fixed.
    pub fn dim(&self) -> Option<usize> {
        match self {
            KernelSpec::Base(BaseDomain::Cartan3) | KernelSpec::Tetrablock => Some(3),
            KernelSpec::Base(_) => None,
            KernelSpec::Quotient(k) => Some(k.group().dim()),
        }
    }

    /// Seeded pairs of interior points, sampled in polar form with moduli at
    /// most `radius`.
    pub fn sample_pairs(&self, count: usize, seed: u64, radius: f64, dim: usize) -> Vec<(Vec<Complex64>, Vec<Complex64>)> {
        let domain = match self {
            KernelSpec::Base(d) => *d,
            KernelSpec::Quotient(k) => k.domain,
            KernelSpec::Tetrablock => BaseDomain::Cartan3,
        };
        let n = self.dim().unwrap_or(dim);
        let mut rng = crate::sampling::rng(seed);
        let mut point = || match domain {
            BaseDomain::Polydisc => crate::sampling::polydisc_point(&mut rng, n, radius),
            BaseDomain::Ball => crate::sampling::ball_point(&mut rng, n, radius),
            BaseDomain::Cartan3 => crate::sampling::cartan3_point(&mut rng, radius),
        };
        (0..count).map(|_| (point(), point())).collect()
    }
}

/// `prod_{i,j} (1 - z_i conj(w_j))^{-1}`.
pub fn symmetrized_product_kernel(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    z.iter().flat_map(|a| w.iter().map(move |b| one / (one - a * b.conj()))).product()
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelIdentityReport {
    pub group: String,
    pub pairs: usize,
    pub seed: u64,
    pub radius: f64,
    pub max_relative_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares the quotient kernel of `G(1,1,n)` with the product formula at
/// seeded random pairs of the polydisc.
pub fn kernel_identity_check(group: &Arc<Group>, pairs: usize, seed: u64, radius: f64) -> Result<KernelIdentityReport> {
    let spec = group.spec();
    if spec.kind != GroupKind::Gmpn || spec.m != 1 {
        return Err(Error::Unsupported(format!("the product formula holds for G(1,1,n), got {spec}")));
    }
    let chi = Character::builtin(group, crate::group::CharacterName::Sgn)?;
    let k = QuotientKernel::new(&chi, BaseDomain::Polydisc)?;
    let mut rng = crate::sampling::rng(seed);
    let n = group.dim();
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < pairs {
        let z = crate::sampling::polydisc_point(&mut rng, n, radius);
        let w = crate::sampling::polydisc_point(&mut rng, n, radius);
        let got = match k.eval(&z, &w) {
            Err(Error::SingularPoint { .. }) => continue,
            other => other?,
        };
        let want = symmetrized_product_kernel(&z, &w);
        worst = worst.max((got - want).norm() / want.norm());
        done += 1;
    }
    let tol = 1e-9;
    Ok(KernelIdentityReport {
        group: spec.to_string(),
        pairs,
        seed,
        radius,
        max_relative_error: worst,
        tolerance: tol,
        passed: worst <= tol,
    })
}
