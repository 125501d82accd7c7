//! Acceptance suite: one line per criterion, exit status 1 if any asserted
//! criterion fails.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use quotient_hardy::group::{Character, CharacterName, Group, GroupSpec};
use quotient_hardy::invariant::{divide, gamma, project, BasicMap, BasisIndexSet};
use quotient_hardy::kernel::{ellipsoid_constant, BaseDomain, QuotientKernel};
use quotient_hardy::poly::LaurentPoly;
use quotient_hardy::sampling;
use quotient_hardy::toeplitz::{
    bh_check, compactness_probe, correspondence_check, semd2_check, symbol_recover, toeplitz_window,
    ProductMode, Symbol, ToeplitzWindow,
};
use quotient_hardy::Error;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn grid() -> Vec<(u32, u32, usize)> {
    let mut out = Vec::new();
    for m in 1..=4u32 {
        for p in (1..=m).filter(|p| m % p == 0) {
            for n in 2..=4usize {
                out.push((m, p, n));
            }
        }
    }
    out
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn gmpn(m: u32, p: u32, n: usize) -> Arc<Group> {
    Group::new(GroupSpec::gmpn(m, p, n).unwrap()).unwrap()
}

/// Coefficientwise comparison relative to the largest coefficient.
fn rel_diff(a: &LaurentPoly, b: &LaurentPoly) -> f64 {
    let scale = a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE);
    a.sub(b).max_abs() / scale
}

/// Plain coefficient pairing on the torus, independent of the library's.
fn dot(f: &LaurentPoly, g: &LaurentPoly) -> Complex64 {
    f.iter().map(|(e, a)| a * g.coeff(e).conj()).sum()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (m, p, n) in grid() {
        let g = gmpn(m, p, n);
        let want = (m as u64).pow(n as u32) * factorial(n) / p as u64;
        if g.order() as u64 != want {
            bad.push(format!("G({m},{p},{n}): {} != {want}", g.order()));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(bad.is_empty() && secs < 5.0, format!("{} groups, {secs:.2}s {}", grid().len(), bad.join("; ")))
}

fn closed_form_jacobian(m: u32, p: u32, n: usize) -> LaurentPoly {
    let q = (m / p) as i32;
    let mut out = LaurentPoly::monomial(vec![q - 1; n], c((m as f64).powi(n as i32) / p as f64));
    for i in 0..n {
        for j in i + 1..n {
            let mut a = vec![0; n];
            a[i] = m as i32;
            let mut b = vec![0; n];
            b[j] = m as i32;
            out = out.mul(&LaurentPoly::monomial(a, c(1.0)).sub(&LaurentPoly::monomial(b, c(1.0))));
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for (m, p, n) in grid() {
        let g = gmpn(m, p, n);
        let map = BasicMap::new(&g);
        let jac = map.jacobian();
        let d = rel_diff(&jac, &closed_form_jacobian(m, p, n));
        worst = worst.max(d);
        // divide by prod L_i^{m_i - 1}; the quotient must be a nonzero constant
        let mut hyper = LaurentPoly::one(n);
        for r in g.reflections() {
            let coeffs = r.hyperplane.coefficients(n);
            let lin = LaurentPoly::from_terms(
                n,
                coeffs.iter().enumerate().map(|(k, a)| {
                    let mut e = vec![0; n];
                    e[k] = 1;
                    (e, *a)
                }),
            );
            hyper = hyper.mul(&lin.pow(r.cyclic_order - 1));
        }
        let (quot, rem) = divide(&jac, &hyper).unwrap();
        let constant = quot.len() == 1 && quot.coeff(&vec![0; n]).norm() > 0.0;
        let rem_rel = rem.max_abs() / jac.max_abs();
        if d > 1e-10 || !constant || rem_rel > 1e-10 {
            bad.push(format!("G({m},{p},{n})"));
        }
    }
    outcome(bad.is_empty(), format!("max relative diff {worst:.1e} {}", bad.join(" ")))
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for (m, p, n) in grid() {
        let map = BasicMap::new(&gmpn(m, p, n));
        let norm = dot(&map.jacobian(), &map.jacobian()).re.sqrt();
        let want = (m as f64).powi(n as i32) * (factorial(n) as f64).sqrt() / p as f64;
        worst = worst.max((norm - want).abs() / want);
    }
    outcome(worst <= 1e-10, format!("max relative error {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (m, p, n) in grid() {
        let map = BasicMap::new(&gmpn(m, p, n));
        let tn_p = map.theta(n).pow(p);
        for i in 1..n {
            let lhs = map.theta(i).conj_torus().mul(&tn_p);
            checked += 1;
            if lhs.terms() != map.theta(n - i).terms() {
                bad.push(format!("G({m},{p},{n}) i={i}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} identities {}", bad.join(" ")))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in [2usize, 3] {
        let g = gmpn(1, 1, n);
        let k = QuotientKernel::new(&Character::builtin(&g, CharacterName::Sgn).unwrap(), BaseDomain::Polydisc).unwrap();
        let mut rng = sampling::rng(7 + n as u64);
        let mut done = 0;
        while done < 100 {
            let z = sampling::polydisc_point(&mut rng, n, 0.8);
            let w = sampling::polydisc_point(&mut rng, n, 0.8);
            let got = match k.eval(&z, &w) {
                Err(Error::SingularPoint { .. }) => continue,
                other => other.unwrap(),
            };
            let mut want = c(1.0);
            for a in &z {
                for b in &w {
                    want /= c(1.0) - a * b.conj();
                }
            }
            worst = worst.max((got - want).norm() / want.norm());
            done += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= 1e-9 && secs < 10.0, format!("max relative error {worst:.1e}, {secs:.2}s"))
}

fn monomial_corpus(n: usize) -> Vec<LaurentPoly> {
    let mut out = Vec::new();
    let mut e = vec![-3i32; n];
    loop {
        out.push(LaurentPoly::monomial(e.clone(), c(1.0)));
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if e[i] < 3 {
                e[i] += 1;
                e.iter_mut().skip(i + 1).for_each(|x| *x = -3);
                break;
            }
        }
    }
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    let groups = ["G(1,1,2)", "G(2,1,2)", "G(2,2,2)", "G(3,1,2)", "G(4,2,2)", "G(4,4,2)", "G(1,1,3)", "G(2,2,3)", "Z(3)@1^2"];
    for name in groups {
        let g = Group::parse(name).unwrap();
        let chars = Character::all_builtin(&g);
        let corpus = monomial_corpus(g.dim());
        let stride = if g.dim() == 2 { 1 } else { 7 };
        for f in &corpus {
            let projected: Vec<LaurentPoly> = chars.iter().map(|chi| project(chi, f)).collect();
            for (a, pa) in chars.iter().zip(&projected) {
                worst = worst.max(project(a, pa).sub(pa).max_abs());
                for (b, pb) in chars.iter().zip(&projected) {
                    if a.values() != b.values() {
                        worst = worst.max(project(b, pa).max_abs());
                        worst = worst.max(dot(pa, pb).norm());
                    }
                }
            }
        }
        for chi in &chars {
            for f in corpus.iter().step_by(stride) {
                let pf = project(chi, f);
                for h in corpus.iter().step_by(stride * 3) {
                    worst = worst.max((dot(&pf, h) - dot(f, &project(chi, h))).norm());
                }
            }
        }
    }
    outcome(worst <= 1e-12, format!("max defect {worst:.1e} over {} groups", groups.len()))
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    for name in ["G(1,1,2)", "G(1,1,3)", "G(2,2,2)", "G(2,1,2)"] {
        let g = Group::parse(name).unwrap();
        for chi in Character::all_builtin(&g) {
            let set = BasisIndexSet::new(&chi, 5, true);
            let basis: Vec<LaurentPoly> = set.reps.iter().map(|m| gamma(&chi, m)).collect();
            for (i, a) in basis.iter().enumerate() {
                for (j, b) in basis.iter().enumerate() {
                    let want = if i == j { c(1.0) } else { c(0.0) };
                    worst = worst.max((dot(a, b) - want).norm());
                }
            }
        }
    }
    outcome(worst <= 1e-10, format!("max Gram deviation {worst:.1e}"))
}

fn criterion_8_and_12() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut worst_shift: f64 = 0.0;
    let mut windows = 0;
    let mut failures = Vec::new();
    for name in ["G(1,1,2)", "G(2,2,2)", "G(2,1,2)", "G(1,1,3)"] {
        let g = Group::parse(name).unwrap();
        let map = BasicMap::new(&g);
        let sgn = Character::builtin(&g, CharacterName::Sgn).unwrap();
        let mut rng = sampling::rng(8);
        for k in 0..20 {
            let u = sampling::invariant_symbol(&mut rng, &g, 2, 4);
            let s = Symbol::from_pulled(&map, u).unwrap();
            let w = toeplitz_window(&s, &sgn, 8);
            let rep = bh_check(&w, &map).unwrap();
            worst = worst.max(rep.max_violation);
            if !rep.passed {
                failures.push(format!("{name}#{k}"));
            }
            let probe = compactness_probe(std::slice::from_ref(&w)).unwrap();
            worst_shift = worst_shift.max(probe.max_shift_spread);
            windows += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        outcome(
            failures.is_empty() && worst <= 1e-10 && secs < 60.0,
            format!("{windows} windows, max violation {worst:.1e}, {secs:.1}s {}", failures.join(" ")),
        ),
        outcome(worst_shift <= 1e-10, format!("{windows} windows, max shift spread {worst_shift:.1e}")),
    )
}

fn criterion_9() -> Outcome {
    let g = Group::parse("G(1,1,2)").unwrap();
    let map = BasicMap::new(&g);
    let sgn = Character::builtin(&g, CharacterName::Sgn).unwrap();
    let mut rng = sampling::rng(9);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let u = sampling::invariant_symbol(&mut rng, &g, 2, 4);
        let w = toeplitz_window(&Symbol::from_pulled(&map, u.clone()).unwrap(), &sgn, 6);
        let est = symbol_recover(&w, &map).unwrap();
        for (e, _) in u.iter().chain(est.symbol.iter()) {
            worst = worst.max((est.symbol.coeff(e) - u.coeff(e)).norm());
        }
    }
    let n = BasisIndexSet::new(&sgn, 5, true).len();
    let skew = nalgebra::DMatrix::from_fn(n, n, |i, j| if i == j { c(1.0 + i as f64) } else { c(0.0) });
    let bad = ToeplitzWindow::from_matrix(&sgn, 5, skew).unwrap();
    let rejected = matches!(symbol_recover(&bad, &map), Err(Error::NotStabilising { .. })) && !bh_check(&bad, &map).unwrap().passed;
    outcome(worst <= 1e-9 && rejected, format!("max coefficient error {worst:.1e}, violating matrix rejected: {rejected}"))
}

fn criterion_10() -> Outcome {
    let g = Group::parse("G(1,1,2)").unwrap();
    let map = BasicMap::new(&g);
    let chars = [
        Character::builtin(&g, CharacterName::Trivial).unwrap(),
        Character::builtin(&g, CharacterName::Sgn).unwrap(),
    ];
    let sym = |f: LaurentPoly| Symbol::from_pulled(&map, f).unwrap();
    let t1 = sym(map.theta(1).clone());
    let h = sym(map.theta(1).add(&map.theta(1).conj_torus()));
    let mut pairs = vec![(t1.conj(), t1.clone()), (h.clone(), h)];
    let mut rng = sampling::rng(10);
    while pairs.len() < 10 {
        let u = sampling::invariant_symbol(&mut rng, &g, 1, 3);
        let v = sampling::invariant_symbol(&mut rng, &g, 1, 3);
        if pairs.len() % 2 == 0 {
            // co-analytic on the left, analytic on the right
            let ua = u.analytic_part();
            let va = v.analytic_part();
            if ua.is_zero() || va.is_zero() {
                continue;
            }
            pairs.push((sym(ua).conj(), sym(va)));
        } else {
            pairs.push((sym(u), sym(v)));
        }
    }
    let mut disagreements = 0;
    let (mut passes, mut fails) = (0, 0);
    for (u, v) in &pairs {
        let d = u.radius() + v.radius() + 3;
        let rep = correspondence_check(&[u.clone(), v.clone()], ProductMode::Semi, &chars, d).unwrap();
        if !rep.agree {
            disagreements += 1;
        } else if rep.entries[0].passed {
            passes += 1;
        } else {
            fails += 1;
        }
    }
    outcome(
        disagreements == 0 && passes >= 1 && fails >= 1,
        format!("{} pairs: {passes} pass, {fails} fail, {disagreements} disagreements", pairs.len()),
    )
}

fn criterion_11() -> Outcome {
    let g = Group::parse("G(1,1,2)").unwrap();
    let map = BasicMap::new(&g);
    let sgn = Character::builtin(&g, CharacterName::Sgn).unwrap();
    let sym = |f: LaurentPoly| Symbol::from_pulled(&map, f).unwrap();
    let t1 = sym(map.theta(1).clone());
    let t2 = sym(map.theta(2).clone());
    let h = sym(map.theta(1).add(&map.theta(1).conj_torus()));
    let mono = |e: [i32; 2]| LaurentPoly::monomial(e.to_vec(), c(1.0));
    let mixed = sym(mono([1, -1]).add(&mono([-1, 1])));
    let corpus = [
        (t1.conj(), t2.clone()),
        (h.clone(), h),
        (t1.clone(), t1.conj()),
        (mixed.clone(), t1.clone()),
        (t2.conj(), mixed.clone()),
        (mixed.clone(), mixed),
    ];
    let mut disagreements = 0;
    let mut verdicts = Vec::new();
    for (u, v) in &corpus {
        let r = semd2_check(u, v, &sgn).unwrap();
        if !r.agree {
            disagreements += 1;
        }
        verdicts.push(if r.symbolic { 'P' } else { 'F' });
    }
    outcome(disagreements == 0, format!("6 pairs, verdicts {}, {disagreements} disagreements", verdicts.iter().collect::<String>()))
}

fn criterion_13() -> String {
    let mut parts = Vec::new();
    for m in 2..=5u32 {
        for n in [2usize, 3] {
            let e = ellipsoid_constant(m, n);
            let stated = e.stated.expect("stated for n = 2, 3");
            parts.push(format!(
                "m={m} n={n}: recomputed c^2 = {:.6} (c = {:.6}), stated c = {stated:.6}{}",
                e.recomputed_sq,
                e.recomputed_sq.sqrt(),
                if e.agrees == Some(true) { "" } else { " DIFFERS" }
            ));
        }
    }
    parts.join("; ")
}

fn main() {
    let start = Instant::now();
    let (c8, c12) = criterion_8_and_12();
    let results = vec![
        (1, "group orders", criterion_1()),
        (2, "Jacobian closed form and hyperplane factorisation", criterion_2()),
        (3, "norm of the Jacobian", criterion_3()),
        (4, "conj(theta_i) theta_n^p = theta_{n-i} on the torus", criterion_4()),
        (5, "symmetrized polydisc kernel product formula", criterion_5()),
        (6, "projection algebra", criterion_6()),
        (7, "orthonormality of gamma_m", criterion_7()),
        (8, "Brown-Halmos relations on Toeplitz windows", c8),
        (9, "symbol recovery round trip", criterion_9()),
        (10, "correspondence across characters and realizations", criterion_10()),
        (11, "Wirtinger criteria against exact products", criterion_11()),
        (12, "entry constancy along diagonal shifts", c12),
    ];
    let mut failed = 0;
    for (id, name, o) in &results {
        println!("criterion {id:>2} {} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    println!("criterion 13 REPORT ellipsoid constants: {}", criterion_13());
    println!(
        "criterion 13 REPORT not reproducible at finite scale: converse Brown-Halmos direction, necessity of the ball commuting cases"
    );
    println!("acceptance: {} of {} asserted criteria passed in {:.1}s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
