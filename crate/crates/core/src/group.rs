//! The monomial reflection groups `G(m,p,n)` and coordinate cyclic groups.
//!
//! An element is stored as a permutation together with a vector of phase
//! exponents modulo `m`. It acts on points of `C^n` through the monomial matrix
//!
//! ```text
//! (rho(g) z)_i = zeta_m^{phase_i} * z_{perm^{-1}(i)}
//! ```
//!
//! and composition follows matrix multiplication, `rho(gh) = rho(g) rho(h)`.
//! Roots of unity are kept exact as [`Phase`] values (rationals modulo 1).

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Groups larger than this are rejected; every formula here sums over `G`.
pub const MAX_GROUP_ORDER: usize = 100_000;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact root of unity `exp(2 pi i num/den)`, reduced with `0 <= num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ONE: Phase = Phase { num: 0, den: 1 };

    /// `exp(2 pi i num/den)`. Panics if `den == 0`.
    pub fn new(num: i64, den: u64) -> Phase {
        assert!(den > 0, "phase denominator must be positive");
        let d = den as i64;
        let r = num.rem_euclid(d) as u64;
        let g = gcd(r, den);
        Phase { num: r / g, den: den / g }
    }

    /// `-1`.
    pub fn minus_one() -> Phase {
        Phase { num: 1, den: 2 }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_one(self) -> bool {
        self.num == 0
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Phase) -> Phase {
        let den = self.den / gcd(self.den, other.den) * other.den;
        let a = self.num * (den / self.den) + other.num * (den / other.den);
        Phase::new(a as i64, den)
    }

    pub fn inv(self) -> Phase {
        Phase::new(-(self.num as i64), self.den)
    }

    pub fn pow(self, k: i64) -> Phase {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Phase::new(n as i64, self.den)
    }

    /// Multiplicative order of the root of unity.
    pub fn order(self) -> u64 {
        self.den
    }

    pub fn to_complex(self) -> Complex64 {
        if self.num == 0 {
            return Complex64::new(1.0, 0.0);
        }
        // exact values on the axes keep integer arithmetic exact downstream
        match (self.num * 4).is_multiple_of(self.den) {
            true => match self.num * 4 / self.den {
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                3 => Complex64::new(0.0, -1.0),
                _ => Complex64::new(1.0, 0.0),
            },
            false => {
                let t = 2.0 * std::f64::consts::PI * self.num as f64 / self.den as f64;
                Complex64::new(t.cos(), t.sin())
            }
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "1")
        } else {
            write!(f, "e(2pi i {}/{})", self.num, self.den)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// The Shephard–Todd family `G(m,p,n)`.
    Gmpn,
    /// `Z_m` acting on a single coordinate of `C^n`.
    CyclicCoord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub m: u32,
    pub p: u32,
    pub n: usize,
    /// 1-based coordinate for [`GroupKind::CyclicCoord`]; 0 otherwise.
    pub coord: usize,
}

impl GroupSpec {
    pub fn gmpn(m: u32, p: u32, n: usize) -> Result<GroupSpec> {
        let spec = GroupSpec { kind: GroupKind::Gmpn, m, p, n, coord: 0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn cyclic(m: u32, coord: usize, n: usize) -> Result<GroupSpec> {
        let spec = GroupSpec { kind: GroupKind::CyclicCoord, m, p: 1, n, coord };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.p == 0 {
            return Err(Error::InvalidGroup(format!("{self}: m and p must be positive")));
        }
        match self.kind {
            GroupKind::Gmpn => {
                if !self.m.is_multiple_of(self.p) {
                    return Err(Error::InvalidGroup(format!(
                        "{self}: p = {} does not divide m = {}",
                        self.p, self.m
                    )));
                }
                if self.n < 2 {
                    return Err(Error::InvalidGroup(format!("{self}: need n >= 2")));
                }
            }
            GroupKind::CyclicCoord => {
                if self.n < 1 || self.coord < 1 || self.coord > self.n {
                    return Err(Error::InvalidGroup(format!(
                        "{self}: coordinate must satisfy 1 <= k <= n"
                    )));
                }
            }
        }
        let order = self.order_formula();
        if order > MAX_GROUP_ORDER as u128 {
            return Err(Error::InvalidGroup(format!(
                "{self}: order {order} exceeds the supported bound {MAX_GROUP_ORDER}"
            )));
        }
        Ok(())
    }

    /// `q = m/p`.
    pub fn q(&self) -> u32 {
        self.m / self.p
    }

    /// `m^n n!/p` for `G(m,p,n)`, `m` for the cyclic groups.
    pub fn order_formula(&self) -> u128 {
        match self.kind {
            GroupKind::Gmpn => {
                let mut o = (self.m as u128).pow(self.n as u32);
                for k in 2..=self.n as u128 {
                    o *= k;
                }
                o / self.p as u128
            }
            GroupKind::CyclicCoord => self.m as u128,
        }
    }

    /// Parses `G(m,p,n)` or `Z(m)@k^n`.
    pub fn parse(s: &str) -> Result<GroupSpec> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::GroupSyntax(s.to_string());
        if let Some(rest) = t.strip_prefix("G(") {
            let inner = rest.strip_suffix(')').ok_or_else(bad)?;
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let m = parts[0].parse().map_err(|_| bad())?;
            let p = parts[1].parse().map_err(|_| bad())?;
            let n = parts[2].parse().map_err(|_| bad())?;
            GroupSpec::gmpn(m, p, n)
        } else if let Some(rest) = t.strip_prefix("Z(") {
            let (m, rest) = rest.split_once(")@").ok_or_else(bad)?;
            let (k, n) = rest.split_once('^').ok_or_else(bad)?;
            GroupSpec::cyclic(
                m.parse().map_err(|_| bad())?,
                k.parse().map_err(|_| bad())?,
                n.parse().map_err(|_| bad())?,
            )
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Gmpn => write!(f, "G({},{},{})", self.m, self.p, self.n),
            GroupKind::CyclicCoord => write!(f, "Z({})@{}^{}", self.m, self.coord, self.n),
        }
    }
}

/// Monomial matrix: `perm[j]` is the image of `j`, `phase[i]` the exponent of
/// `zeta_m` in row `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    m: u32,
    perm: Vec<usize>,
    phase: Vec<u32>,
}

impl GroupElement {
    pub fn new(m: u32, perm: Vec<usize>, phase: Vec<u32>) -> GroupElement {
        assert_eq!(perm.len(), phase.len());
        let phase = phase.into_iter().map(|a| a % m.max(1)).collect();
        GroupElement { m, perm, phase }
    }

    pub fn identity(m: u32, n: usize) -> GroupElement {
        GroupElement { m, perm: (0..n).collect(), phase: vec![0; n] }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phase(&self) -> &[u32] {
        &self.phase
    }

    fn zeta(&self, k: u64) -> Phase {
        Phase::new(k as i64, self.m.max(1) as u64)
    }

    pub fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (j, &i) in self.perm.iter().enumerate() {
            inv[i] = j;
        }
        inv
    }

    /// `rho(self) rho(other)`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let n = self.dim();
        let m = self.m.max(1);
        let ginv = self.inverse_perm();
        let perm = (0..n).map(|j| self.perm[other.perm[j]]).collect();
        let phase = (0..n).map(|i| (self.phase[i] + other.phase[ginv[i]]) % m).collect();
        GroupElement { m: self.m, perm, phase }
    }

    pub fn inverse(&self) -> GroupElement {
        let n = self.dim();
        let m = self.m.max(1);
        let perm = self.inverse_perm();
        let phase = (0..n).map(|k| (m - self.phase[self.perm[k]] % m) % m).collect();
        GroupElement { m: self.m, perm, phase }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &i)| i == j) && self.phase.iter().all(|&a| a == 0)
    }

    fn perm_sign_is_odd(&self) -> bool {
        let n = self.dim();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut j = s;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j];
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 1
    }

    /// `det rho(g) = sign(perm) zeta_m^{sum phase}`.
    pub fn det(&self) -> Phase {
        let s: u64 = self.phase.iter().map(|&a| a as u64).sum();
        let d = self.zeta(s);
        if self.perm_sign_is_odd() {
            d.mul(Phase::minus_one())
        } else {
            d
        }
    }

    /// `rank(I - rho(g))`, from the cycle structure: a cycle of length `L`
    /// contributes `L - 1` when its phase product is trivial and `L` otherwise.
    pub fn rank_deficiency(&self) -> usize {
        let n = self.dim();
        let m = self.m.max(1);
        let mut seen = vec![false; n];
        let mut rank = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut tot = 0u32;
            let mut j = s;
            while !seen[j] {
                seen[j] = true;
                tot = (tot + self.phase[self.perm[j]]) % m;
                j = self.perm[j];
                len += 1;
            }
            rank += if tot == 0 { len - 1 } else { len };
        }
        rank
    }

    pub fn is_reflection(&self) -> bool {
        self.rank_deficiency() == 1
    }

    /// `rho(g) z`.
    pub fn apply(&self, z: &[Complex64]) -> Vec<Complex64> {
        let inv = self.inverse_perm();
        (0..self.dim())
            .map(|i| self.zeta(self.phase[i] as u64).to_complex() * z[inv[i]])
            .collect()
    }

    /// `z^alpha o rho(g) = phase * z^beta`; returns `(phase, beta)`.
    pub fn pullback_monomial(&self, alpha: &[i32]) -> (Phase, Vec<i32>) {
        let m = self.m.max(1) as i64;
        let mut s: i64 = 0;
        for (a, &e) in self.phase.iter().zip(alpha) {
            s = (s + *a as i64 * e as i64).rem_euclid(m);
        }
        let beta = (0..self.dim()).map(|j| alpha[self.perm[j]]).collect();
        (Phase::new(s, m as u64), beta)
    }

    /// `z^alpha o rho(g)^{-1}`, i.e. the regular representation `R_g`.
    pub fn act_monomial(&self, alpha: &[i32]) -> (Phase, Vec<i32>) {
        self.inverse().pullback_monomial(alpha)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.perm.iter().map(|i| (i + 1).to_string()).collect();
        let a: Vec<String> = self.phase.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}|{}]", p.join(" "), a.join(" "))
    }
}

/// Defining linear form of a reflecting hyperplane, first nonzero coefficient 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hyperplane {
    /// `z_i = 0` (0-based `i`).
    Coordinate(usize),
    /// `z_i - e(phase) z_j = 0` with `i < j`.
    Pair { i: usize, j: usize, phase: Phase },
}

impl Hyperplane {
    pub fn coefficients(&self, n: usize) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        match *self {
            Hyperplane::Coordinate(i) => c[i] = Complex64::new(1.0, 0.0),
            Hyperplane::Pair { i, j, phase } => {
                c[i] = Complex64::new(1.0, 0.0);
                c[j] = -phase.to_complex();
            }
        }
        c
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.coefficients(z.len()).iter().zip(z).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyperplane::Coordinate(i) => write!(f, "z{}", i + 1),
            Hyperplane::Pair { i, j, phase } if phase.is_one() => write!(f, "z{} - z{}", i + 1, j + 1),
            Hyperplane::Pair { i, j, phase } => write!(f, "z{} - {}*z{}", i + 1, phase, j + 1),
        }
    }
}

/// A reflecting hyperplane with its cyclic pointwise stabiliser.
#[derive(Clone, Debug)]
pub struct ReflectionDatum {
    pub hyperplane: Hyperplane,
    /// Order `m_i` of the cyclic stabiliser.
    pub cyclic_order: u32,
    /// Generator `a_i` with `det(a_i) = exp(2 pi i/m_i)`.
    pub generator: usize,
    /// Indices of all reflections fixing the hyperplane.
    pub reflections: Vec<usize>,
}

/// Eagerly enumerated group with element lookup.
#[derive(Debug)]
pub struct Group {
    spec: GroupSpec,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Arc<Group>> {
        spec.validate()?;
        let m = spec.m;
        let n = spec.n;
        let mut elements = Vec::new();
        match spec.kind {
            GroupKind::Gmpn => {
                let perms = permutations(n);
                let total = (m as usize).pow(n as u32);
                for perm in &perms {
                    for code in 0..total {
                        let mut c = code;
                        let mut phase = vec![0u32; n];
                        for a in phase.iter_mut() {
                            *a = (c % m as usize) as u32;
                            c /= m as usize;
                        }
                        let s: u32 = phase.iter().sum();
                        if s.is_multiple_of(spec.p) {
                            elements.push(GroupElement::new(m, perm.clone(), phase));
                        }
                    }
                }
            }
            GroupKind::CyclicCoord => {
                for a in 0..m {
                    let mut phase = vec![0; n];
                    phase[spec.coord - 1] = a;
                    elements.push(GroupElement::new(m, (0..n).collect(), phase));
                }
            }
        }
        // identity first
        let id = GroupElement::identity(m, n);
        let pos = elements.iter().position(|g| *g == id).expect("identity enumerated");
        elements.swap(0, pos);
        let index: HashMap<GroupElement, usize> =
            elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let inverse = elements.iter().map(|g| index[&g.inverse()]).collect();

        let mut gens = Vec::new();
        match spec.kind {
            GroupKind::Gmpn => {
                for i in 0..n - 1 {
                    let mut perm: Vec<usize> = (0..n).collect();
                    perm.swap(i, i + 1);
                    gens.push(GroupElement::new(m, perm, vec![0; n]));
                }
                if m > 1 {
                    let mut a = vec![0; n];
                    a[0] = 1;
                    a[1] = m - 1;
                    gens.push(GroupElement::new(m, (0..n).collect(), a));
                    if spec.p < m {
                        let mut b = vec![0; n];
                        b[0] = spec.p;
                        gens.push(GroupElement::new(m, (0..n).collect(), b));
                    }
                }
            }
            GroupKind::CyclicCoord => {
                if m > 1 {
                    let mut a = vec![0; n];
                    a[spec.coord - 1] = 1;
                    gens.push(GroupElement::new(m, (0..n).collect(), a));
                }
            }
        }
        let generators = gens.iter().map(|g| index[g]).collect();
        Ok(Arc::new(Group { spec, elements, index, inverse, generators }))
    }

    pub fn parse(s: &str) -> Result<Arc<Group>> {
        Group::new(GroupSpec::parse(s)?)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.spec.n
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn det(&self, a: usize) -> Phase {
        self.elements[a].det()
    }

    /// Reflections grouped by their fixed hyperplane, in hyperplane order.
    pub fn reflections(&self) -> Vec<ReflectionDatum> {
        let n = self.dim();
        let mut by_plane: HashMap<Hyperplane, Vec<usize>> = HashMap::new();
        for (idx, g) in self.elements.iter().enumerate() {
            if !g.is_reflection() {
                continue;
            }
            let h = if g.perm.iter().enumerate().all(|(j, &i)| i == j) {
                let i = g.phase.iter().position(|&a| a != 0).expect("diagonal reflection");
                Hyperplane::Coordinate(i)
            } else {
                let i = (0..n).find(|&i| g.perm[i] != i).expect("moved point");
                let j = g.perm[i];
                let (i, j) = (i.min(j), i.max(j));
                // fixed points satisfy z_i = zeta^{phase_i} z_j
                Hyperplane::Pair { i, j, phase: g.zeta(g.phase[i] as u64) }
            };
            by_plane.entry(h).or_default().push(idx);
        }
        let mut planes: Vec<_> = by_plane.into_iter().collect();
        planes.sort_by_key(|a| a.0);
        planes
            .into_iter()
            .map(|(hyperplane, reflections)| {
                let order = reflections.len() as u32 + 1;
                let primitive = Phase::new(1, order as u64);
                let generator = *reflections
                    .iter()
                    .find(|&&r| self.elements[r].det() == primitive)
                    .expect("stabiliser of a reflecting hyperplane is cyclic");
                ReflectionDatum { hyperplane, cyclic_order: order, generator, reflections }
            })
            .collect()
    }

    pub fn reflection_count(&self) -> usize {
        self.elements.iter().filter(|g| g.is_reflection()).count()
    }

    pub fn info(self: &Arc<Self>) -> GroupInfo {
        let hyperplanes = self
            .reflections()
            .into_iter()
            .map(|r| HyperplaneInfo { form: r.hyperplane.to_string(), cyclic_order: r.cyclic_order, generator: r.generator })
            .collect();
        GroupInfo {
            group: self.spec.to_string(),
            dim: self.dim(),
            order: self.order(),
            order_formula: self.spec.order_formula() as u64,
            reflections: self.reflection_count(),
            hyperplanes,
            characters: Character::all_builtin(self).iter().map(|c| c.name().as_str().to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HyperplaneInfo {
    pub form: String,
    pub cyclic_order: u32,
    pub generator: usize,
}

/// Summary of a group: order, reflections and reflecting hyperplanes.
#[derive(Clone, Debug, Serialize)]
pub struct GroupInfo {
    pub group: String,
    pub dim: usize,
    pub order: usize,
    pub order_formula: u64,
    pub reflections: usize,
    pub hyperplanes: Vec<HyperplaneInfo>,
    pub characters: Vec<String>,
}

/// Named built-in one-dimensional characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharacterName {
    Trivial,
    Det,
    Sgn,
    Rho1,
    Rho2,
    Custom,
}

impl CharacterName {
    pub fn parse(s: &str) -> Option<CharacterName> {
        Some(match s {
            "trivial" | "tr" => CharacterName::Trivial,
            "det" => CharacterName::Det,
            "sgn" | "sign" => CharacterName::Sgn,
            "rho1" => CharacterName::Rho1,
            "rho2" => CharacterName::Rho2,
            "custom" => CharacterName::Custom,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CharacterName::Trivial => "trivial",
            CharacterName::Det => "det",
            CharacterName::Sgn => "sgn",
            CharacterName::Rho1 => "rho1",
            CharacterName::Rho2 => "rho2",
            CharacterName::Custom => "custom",
        }
    }
}

/// A validated one-dimensional character of a [`Group`].
#[derive(Clone, Debug)]
pub struct Character {
    group: Arc<Group>,
    name: CharacterName,
    values: Vec<Phase>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.group.spec == other.group.spec && self.values == other.values
    }
}

impl Character {
    /// Builds one of the named characters. `rho1`/`rho2` exist only on
    /// `G(k,k,2)` with `k` even.
    pub fn builtin(group: &Arc<Group>, name: CharacterName) -> Result<Character> {
        let values = match name {
            CharacterName::Trivial => vec![Phase::ONE; group.order()],
            CharacterName::Det => group.elements.iter().map(|g| g.det()).collect(),
            CharacterName::Sgn => group.elements.iter().map(|g| g.det().inv()).collect(),
            CharacterName::Rho1 | CharacterName::Rho2 => {
                let s = group.spec;
                if !(s.kind == GroupKind::Gmpn && s.n == 2 && s.m == s.p && s.m.is_multiple_of(2)) {
                    return Err(Error::UnknownCharacter {
                        name: name.as_str().into(),
                        group: s.to_string(),
                    });
                }
                let k = s.m;
                let delta = GroupElement::new(k, vec![0, 1], vec![1, k - 1]);
                let sigma = GroupElement::new(k, vec![1, 0], vec![0, 0]);
                let d = group.index_of(&delta).expect("rotation");
                let sg = group.index_of(&sigma).expect("swap");
                // rho1 is trivial on <delta^2, sigma>, rho2 on <delta^2, delta sigma>
                let sigma_value = if name == CharacterName::Rho1 { Phase::ONE } else { Phase::minus_one() };
                let c = Character::from_generators(group, &[(d, Phase::minus_one()), (sg, sigma_value)])?;
                c.values
            }
            CharacterName::Custom => {
                return Err(Error::InvalidCharacter("custom characters need explicit values".into()))
            }
        };
        let c = Character { group: group.clone(), name, values };
        c.validate()?;
        Ok(c)
    }

    pub fn parse(group: &Arc<Group>, name: &str) -> Result<Character> {
        let n = CharacterName::parse(name).ok_or_else(|| Error::UnknownCharacter {
            name: name.into(),
            group: group.spec.to_string(),
        })?;
        Character::builtin(group, n)
    }

    /// Extends values given on a generating set along the Cayley graph, then
    /// validates multiplicativity.
    pub fn from_generators(group: &Arc<Group>, assignment: &[(usize, Phase)]) -> Result<Character> {
        let order = group.order();
        let mut values: Vec<Option<Phase>> = vec![None; order];
        values[0] = Some(Phase::ONE);
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            let vg = values[g].expect("visited");
            for &(s, vs) in assignment {
                let gs = group.mul(g, s);
                let v = vg.mul(vs);
                match values[gs] {
                    None => {
                        values[gs] = Some(v);
                        queue.push_back(gs);
                    }
                    Some(existing) if existing != v => {
                        return Err(Error::NotMultiplicative { left: g, right: s });
                    }
                    _ => {}
                }
            }
        }
        if values.iter().any(Option::is_none) {
            return Err(Error::InvalidCharacter("assigned elements do not generate the group".into()));
        }
        let c = Character {
            group: group.clone(),
            name: CharacterName::Custom,
            values: values.into_iter().map(Option::unwrap).collect(),
        };
        c.validate()?;
        Ok(c)
    }

    /// Full value table, validated.
    pub fn from_values(group: &Arc<Group>, name: CharacterName, values: Vec<Phase>) -> Result<Character> {
        if values.len() != group.order() {
            return Err(Error::InvalidCharacter(format!(
                "{} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        let c = Character { group: group.clone(), name, values };
        c.validate()?;
        Ok(c)
    }

    /// `chi(e) = 1` and `chi(g s) = chi(g) chi(s)` for every element `g` and
    /// generator `s`; this implies full multiplicativity. Small groups are
    /// additionally checked over all pairs.
    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        if !self.values[0].is_one() {
            return Err(Error::InvalidCharacter("chi(identity) != 1".into()));
        }
        for a in 0..g.order() {
            for &s in g.generators() {
                if self.values[g.mul(a, s)] != self.values[a].mul(self.values[s]) {
                    return Err(Error::NotMultiplicative { left: a, right: s });
                }
            }
        }
        if g.order() <= 200 {
            for a in 0..g.order() {
                for b in 0..g.order() {
                    if self.values[g.mul(a, b)] != self.values[a].mul(self.values[b]) {
                        return Err(Error::NotMultiplicative { left: a, right: b });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn name(&self) -> CharacterName {
        self.name
    }

    pub fn values(&self) -> &[Phase] {
        &self.values
    }

    pub fn value(&self, g: usize) -> Phase {
        self.values[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }

    /// Least non-negative `c_i` with `chi(a_i) = det(a_i)^{c_i}`, one per
    /// reflecting hyperplane.
    pub fn hyperplane_exponents(&self, reflections: &[ReflectionDatum]) -> Vec<u32> {
        reflections
            .iter()
            .map(|r| {
                let d = self.group.det(r.generator);
                let target = self.values[r.generator];
                (0..r.cyclic_order)
                    .find(|&c| d.pow(c as i64) == target)
                    .expect("character value is a power of the primitive determinant")
            })
            .collect()
    }

    /// All built-in characters available for the group, deduplicated by value.
    pub fn all_builtin(group: &Arc<Group>) -> Vec<Character> {
        let mut out: Vec<Character> = Vec::new();
        for name in [
            CharacterName::Trivial,
            CharacterName::Sgn,
            CharacterName::Det,
            CharacterName::Rho1,
            CharacterName::Rho2,
        ] {
            if let Ok(c) = Character::builtin(group, name) {
                if !out.iter().any(|o| o.values == c.values) {
                    out.push(c);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> CharacterJson {
        CharacterJson {
            group: self.group.spec.to_string(),
            name: self.name.as_str().to_string(),
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| [i as u64, v.num(), v.den()])
                .collect(),
        }
    }

    pub fn from_json(json: &CharacterJson) -> Result<Character> {
        let group = Group::parse(&json.group)?;
        let name = CharacterName::parse(&json.name).unwrap_or(CharacterName::Custom);
        if json.values.is_empty() {
            return Character::builtin(&group, name);
        }
        let mut values = vec![None; group.order()];
        for &[i, num, den] in &json.values {
            let i = i as usize;
            if i >= group.order() || den == 0 {
                return Err(Error::InvalidCharacter(format!("bad entry [{i}, {num}, {den}]")));
            }
            values[i] = Some(Phase::new(num as i64, den));
        }
        if values.iter().any(Option::is_none) {
            return Err(Error::InvalidCharacter("value table is incomplete".into()));
        }
        Character::from_values(&group, name, values.into_iter().map(Option::unwrap).collect())
    }
}

/// Wire format for characters:
/// `{"group": "G(2,1,2)", "name": "custom", "values": [[index, num, den], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterJson {
    pub group: String,
    pub name: String,
    #[serde(default)]
    pub values: Vec<[u64; 3]>,
}
