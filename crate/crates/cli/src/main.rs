//! `qhardy`: command-line front end for the quotient Hardy space library.

mod input;
mod output;

use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use quotient_hardy::group::{Character, CharacterJson, Group};
use quotient_hardy::invariant::{project, BasicMap, BasisIndexSet, Domain, EllPoly, Lift};
use quotient_hardy::kernel::{ellipsoid_constant, kernel_identity_check, KernelSpec, KernelSpecJson, SeriesKernel};
use quotient_hardy::sampling::DEFAULT_RADIUS;
use quotient_hardy::toeplitz::{
    bh_check, compactness_probe, correspondence_check, product_compare, semd2_check, symbol_recover, toeplitz_window,
    toeplitz_window_theta, ProductMode, Realization, Symbol, ToeplitzWindow,
};
use serde::Serialize;

use input::{read_json, read_laurent, read_pairs, read_symbol, Coords};
use output::{emit, point, Format, MatrixReport};

#[derive(Parser)]
#[command(name = "qhardy", version, about = "Hardy spaces and Toeplitz operators on quotients of the polydisc")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    output: Format,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reflection groups G(m,p,n) and Z(m)@k^n.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Basic invariants, relative invariants and isotypic projections.
    #[command(subcommand)]
    Invariant(InvariantCmd),
    /// Szegő kernels.
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Finite windows of Toeplitz operators.
    #[command(subcommand)]
    Toeplitz(ToeplitzCmd),
    /// Identity checks with a pass/fail exit status.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Order, reflections, reflecting hyperplanes and built-in characters.
    Info { group: String },
}

#[derive(Args)]
struct GroupChar {
    #[arg(long)]
    group: String,
    /// Built-in name (trivial, det, sgn, rho1, rho2) or character JSON.
    #[arg(long, default_value = "sgn")]
    character: String,
}

impl GroupChar {
    fn resolve(&self) -> Result<(Arc<Group>, Character)> {
        let group = Group::parse(&self.group)?;
        let chi = if self.character.trim_start().starts_with('{') || std::path::Path::new(&self.character).is_file() {
            let json: CharacterJson = read_json(&self.character)?;
            if json.group != group.spec().to_string() {
                bail!("character is defined on {}, not {}", json.group, group.spec());
            }
            Character::from_json(&json)?
        } else {
            Character::parse(&group, &self.character)?
        };
        Ok((group, chi))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Polydisc,
    Ball,
}

#[derive(Subcommand)]
enum InvariantCmd {
    /// Components of the basic map theta and its Jacobian.
    BasicMap { group: String },
    /// The relative invariant of a character and its norm.
    Ell {
        #[command(flatten)]
        gc: GroupChar,
        #[arg(long, value_enum, default_value = "polydisc")]
        domain: DomainArg,
    },
    /// Isotypic projection of a Laurent polynomial.
    Project {
        #[command(flatten)]
        gc: GroupChar,
        #[arg(long)]
        poly: String,
    },
    /// Canonical exponents of the orthonormal basis up to sup-norm D.
    Basis {
        #[command(flatten)]
        gc: GroupChar,
        #[arg(short = 'D', long = "degree")]
        degree: u32,
        /// Include negative exponents (the Laurent basis of L^2 of the torus).
        #[arg(long)]
        laurent: bool,
    },
    /// Lifts a polynomial in the coordinates t to the isotypic component.
    Lift {
        #[command(flatten)]
        gc: GroupChar,
        #[arg(long)]
        poly: String,
    },
    /// Inverse of `lift`.
    Lower {
        #[command(flatten)]
        gc: GroupChar,
        #[arg(long)]
        poly: String,
    },
    /// Writes an invariant polynomial in the coordinates t.
    Rewrite {
        #[arg(long)]
        group: String,
        #[arg(long)]
        poly: String,
    },
}

#[derive(Subcommand)]
enum KernelCmd {
    /// Evaluates a kernel at given or sampled point pairs.
    Eval {
        /// Kernel JSON, e.g. {"domain": "polydisc", "group": "G(1,1,2)", "character": "sgn"}.
        #[arg(long)]
        spec: String,
        /// Pairs as [{"z": [[re, im], ...], "w": [...]}, ...].
        #[arg(long, conflicts_with = "random")]
        points: Option<String>,
        /// Number of seeded random pairs instead of --points.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: f64,
        /// Dimension for random points when the kernel does not fix it.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Degree of the series used at zeros of the relative invariant.
        #[arg(long, default_value_t = 40)]
        series_degree: u32,
    },
    /// Residual of the reproducing property of the truncated kernel.
    Reproduce {
        #[command(flatten)]
        gc: GroupChar,
        /// Holomorphic polynomial in the coordinates t.
        #[arg(long)]
        poly: String,
        /// Point w as [[re, im], ...].
        #[arg(long)]
        point: String,
        #[arg(short = 'D', long = "degree")]
        degree: u32,
    },
}

#[derive(Args)]
struct ToeplitzArgs {
    #[command(flatten)]
    gc: GroupChar,
    /// Symbol JSON; repeat for products.
    #[arg(long, action = clap::ArgAction::Append)]
    symbol: Vec<String>,
    #[arg(long, value_enum, default_value = "theta")]
    coords: Coords,
    #[arg(short = 'D', long = "degree")]
    degree: u32,
}

impl ToeplitzArgs {
    fn symbols(&self, map: &BasicMap, want: Option<usize>) -> Result<Vec<Symbol>> {
        if let Some(k) = want {
            if self.symbol.len() != k {
                bail!("expected {k} --symbol argument(s), got {}", self.symbol.len());
            }
        } else if self.symbol.is_empty() {
            bail!("at least one --symbol is required");
        }
        self.symbol.iter().map(|s| read_symbol(s, self.coords, map)).collect()
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RealizationArg {
    Quotient,
    Ambient,
}

impl From<RealizationArg> for Realization {
    fn from(r: RealizationArg) -> Realization {
        match r {
            RealizationArg::Quotient => Realization::Quotient,
            RealizationArg::Ambient => Realization::Ambient,
        }
    }
}

#[derive(Subcommand)]
enum ToeplitzCmd {
    /// Window of T_u on the index set of sup-norm at most D.
    Window {
        #[command(flatten)]
        args: ToeplitzArgs,
        #[arg(long, value_enum, default_value = "ambient")]
        realization: RealizationArg,
    },
    /// Brown–Halmos shift relations on the window.
    Bh {
        #[command(flatten)]
        args: ToeplitzArgs,
    },
    /// Compares a product of Toeplitz operators with its expected form.
    Product {
        #[command(flatten)]
        args: ToeplitzArgs,
        /// semi, commute, zero-product or finite-product.
        #[arg(long, default_value = "semi")]
        mode: String,
        #[arg(long, value_enum, default_value = "quotient")]
        realization: RealizationArg,
    },
    /// Recovers the symbol from a window (given, or computed from --symbol).
    Recover {
        #[command(flatten)]
        gc: GroupChar,
        /// Window JSON as written by `toeplitz window`.
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long, value_enum, default_value = "theta")]
        coords: Coords,
        #[arg(short = 'D', long = "degree", default_value_t = 6)]
        degree: u32,
    },
    /// Semi-commuting criteria on the bidisc against the exact product.
    Semd2 {
        #[command(flatten)]
        gc: GroupChar,
        /// The symbols u and v, in that order.
        #[arg(long, action = clap::ArgAction::Append, num_args = 1)]
        symbol: Vec<String>,
        #[arg(long, value_enum, default_value = "theta")]
        coords: Coords,
    },
    /// Shift persistence of windows at several degree bounds.
    Compactness {
        #[command(flatten)]
        gc: GroupChar,
        #[arg(long)]
        symbol: String,
        #[arg(long, value_enum, default_value = "theta")]
        coords: Coords,
        #[arg(long, value_delimiter = ',', default_values_t = [4, 6, 8])]
        degrees: Vec<u32>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Quotient kernel of G(1,1,n) against the product formula.
    KernelIdentity {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: f64,
    },
    /// Recomputed constants of the ellipsoid quotients of the ball.
    EllipsoidConstants {
        #[arg(long, default_value_t = 5)]
        max_m: u32,
    },
    /// Product verdicts in the quotient and ambient realizations for every
    /// built-in character.
    Correspondence {
        #[arg(long)]
        group: String,
        #[arg(long, action = clap::ArgAction::Append)]
        symbol: Vec<String>,
        #[arg(long, value_enum, default_value = "theta")]
        coords: Coords,
        #[arg(long, default_value = "semi")]
        mode: String,
        #[arg(short = 'D', long = "degree")]
        degree: Option<u32>,
    },
}

/// Outcome of a command: a verification may fail after printing its report.
enum Outcome {
    Done,
    Failed,
}

fn verdict(passed: bool) -> Outcome {
    if passed {
        Outcome::Done
    } else {
        Outcome::Failed
    }
}

fn parse_mode(s: &str) -> Result<ProductMode> {
    ProductMode::parse(s).ok_or_else(|| anyhow!("unknown product mode `{s}` (semi, commute, zero-product, finite-product)"))
}

#[derive(Serialize)]
struct WindowMeta {
    group: String,
    character: String,
    degree_bound: u32,
    realization: Realization,
}

fn run(cli: Cli) -> Result<Outcome> {
    let fmt = cli.output;
    match cli.command {
        Command::Group(GroupCmd::Info { group }) => {
            emit(&Group::parse(&group)?.info(), fmt)?;
        }
        Command::Invariant(cmd) => run_invariant(cmd, fmt)?,
        Command::Kernel(cmd) => run_kernel(cmd, fmt, cli.seed)?,
        Command::Toeplitz(cmd) => return run_toeplitz(cmd, fmt),
        Command::Verify(cmd) => return run_verify(cmd, fmt, cli.seed),
    }
    Ok(Outcome::Done)
}

fn run_invariant(cmd: InvariantCmd, fmt: Format) -> Result<()> {
    match cmd {
        InvariantCmd::BasicMap { group } => {
            let map = BasicMap::new(&Group::parse(&group)?);
            #[derive(Serialize)]
            struct Out {
                group: String,
                components: Vec<quotient_hardy::poly::PolyJson>,
                jacobian: quotient_hardy::poly::PolyJson,
            }
            emit(
                &Out {
                    group: map.group().spec().to_string(),
                    components: map.components().iter().map(|c| c.to_json()).collect(),
                    jacobian: map.jacobian().to_json(),
                },
                fmt,
            )?;
        }
        InvariantCmd::Ell { gc, domain } => {
            let (_, chi) = gc.resolve()?;
            let domain = match domain {
                DomainArg::Polydisc => Domain::Polydisc,
                DomainArg::Ball => Domain::Ball,
            };
            let ell = EllPoly::new(&chi, domain)?;
            #[derive(Serialize)]
            struct Out {
                character: String,
                domain: Domain,
                degree: u32,
                norm: f64,
                poly: quotient_hardy::poly::PolyJson,
            }
            emit(
                &Out { character: chi.name().as_str().into(), domain, degree: ell.degree(), norm: ell.cnorm, poly: ell.poly.to_json() },
                fmt,
            )?;
        }
        InvariantCmd::Project { gc, poly } => {
            let (_, chi) = gc.resolve()?;
            emit(&project(&chi, &read_laurent(&poly)?).to_json(), fmt)?;
        }
        InvariantCmd::Basis { gc, degree, laurent } => {
            let (_, chi) = gc.resolve()?;
            emit(&BasisIndexSet::new(&chi, degree, !laurent).reps, fmt)?;
        }
        InvariantCmd::Lift { gc, poly } => {
            let (_, chi) = gc.resolve()?;
            emit(&Lift::new(&chi)?.lift(&read_laurent(&poly)?)?.to_json(), fmt)?;
        }
        InvariantCmd::Lower { gc, poly } => {
            let (_, chi) = gc.resolve()?;
            emit(&Lift::new(&chi)?.lower(&read_laurent(&poly)?)?.to_json(), fmt)?;
        }
        InvariantCmd::Rewrite { group, poly } => {
            let map = BasicMap::new(&Group::parse(&group)?);
            emit(&map.rewrite(&read_laurent(&poly)?)?.to_json(), fmt)?;
        }
    }
    Ok(())
}

fn run_kernel(cmd: KernelCmd, fmt: Format, seed: u64) -> Result<()> {
    match cmd {
        KernelCmd::Eval { spec, points, random, radius, dim, series_degree } => {
            let json: KernelSpecJson = read_json(&spec)?;
            let kernel = KernelSpec::from_json(&json)?;
            let pairs = match (points, random) {
                (Some(p), _) => read_pairs(&p)?,
                (None, Some(k)) => kernel.sample_pairs(k, seed, radius, dim),
                (None, None) => bail!("give --points or --random"),
            };
            #[derive(Serialize)]
            struct Record {
                z: Vec<[f64; 2]>,
                w: Vec<[f64; 2]>,
                value: [f64; 2],
                method: &'static str,
            }
            let mut records = Vec::with_capacity(pairs.len());
            for (z, w) in &pairs {
                let (value, method) = kernel.eval_with_method(z, w, series_degree)?;
                records.push(Record { z: point(z), w: point(w), value: output::pair(value), method });
            }
            emit(&records, fmt)?;
        }
        KernelCmd::Reproduce { gc, poly, point: w, degree } => {
            let (_, chi) = gc.resolve()?;
            let f = read_laurent(&poly)?;
            let w: Vec<[f64; 2]> = read_json(&w)?;
            let w: Vec<Complex64> = w.iter().map(|c| Complex64::new(c[0], c[1])).collect();
            let residual = SeriesKernel::new(&chi, degree)?.reproducing_residual(&f, &w)?;
            #[derive(Serialize)]
            struct Out {
                degree_bound: u32,
                residual: f64,
            }
            emit(&Out { degree_bound: degree, residual }, fmt)?;
        }
    }
    Ok(())
}

fn run_toeplitz(cmd: ToeplitzCmd, fmt: Format) -> Result<Outcome> {
    match cmd {
        ToeplitzCmd::Window { args, realization } => {
            let (group, chi) = args.gc.resolve()?;
            let map = BasicMap::new(&group);
            let u = args.symbols(&map, Some(1))?.remove(0);
            let w = match realization {
                RealizationArg::Ambient => toeplitz_window(&u, &chi, args.degree),
                RealizationArg::Quotient => toeplitz_window_theta(&u, &chi, args.degree)?,
            };
            let meta = WindowMeta {
                group: group.spec().to_string(),
                character: chi.name().as_str().into(),
                degree_bound: args.degree,
                realization: realization.into(),
            };
            emit(&MatrixReport::new(w.reps.clone(), w.reps.clone(), &w.entries, meta), fmt)?;
            Ok(Outcome::Done)
        }
        ToeplitzCmd::Bh { args } => {
            let (group, chi) = args.gc.resolve()?;
            let map = BasicMap::new(&group);
            let u = args.symbols(&map, Some(1))?.remove(0);
            let w = toeplitz_window(&u, &chi, args.degree);
            let report = bh_check(&w, &map)?;
            let passed = report.passed;
            emit(&MatrixReport::new(w.reps.clone(), w.reps.clone(), &w.entries, report), fmt)?;
            Ok(verdict(passed))
        }
        ToeplitzCmd::Product { args, mode, realization } => {
            let (group, chi) = args.gc.resolve()?;
            let map = BasicMap::new(&group);
            let symbols = args.symbols(&map, None)?;
            let report = product_compare(&symbols, parse_mode(&mode)?, &chi, args.degree, realization.into())?;
            let passed = report.passed;
            let (rows, cols, residual) = (report.rows.clone(), report.cols.clone(), report.residual.clone());
            emit(&MatrixReport::new(rows, cols, &residual, report), fmt)?;
            Ok(verdict(passed))
        }
        ToeplitzCmd::Recover { gc, window, symbol, coords, degree } => {
            let (group, chi) = gc.resolve()?;
            let map = BasicMap::new(&group);
            let w = match (window, symbol) {
                (Some(path), None) => ToeplitzWindow::from_json(&read_json(&path)?)?,
                (None, Some(s)) => toeplitz_window(&read_symbol(&s, coords, &map)?, &chi, degree),
                _ => bail!("give exactly one of --window and --symbol"),
            };
            let est = symbol_recover(&w, &map)?;
            emit(&MatrixReport::new(w.reps.clone(), w.reps.clone(), &w.entries, est.to_json()), fmt)?;
            Ok(Outcome::Done)
        }
        ToeplitzCmd::Semd2 { gc, symbol, coords } => {
            let (group, chi) = gc.resolve()?;
            let map = BasicMap::new(&group);
            if symbol.len() != 2 {
                bail!("expected 2 --symbol arguments, got {}", symbol.len());
            }
            let s = symbol.iter().map(|x| read_symbol(x, coords, &map)).collect::<Result<Vec<_>>>()?;
            let report = semd2_check(&s[0], &s[1], &chi)?;
            let product = product_compare(&s, ProductMode::Semi, &chi, report.degree_bound, Realization::Ambient)?;
            let agree = report.agree;
            emit(&MatrixReport::new(product.rows, product.cols, &product.residual, report), fmt)?;
            Ok(verdict(agree))
        }
        ToeplitzCmd::Compactness { gc, symbol, coords, degrees } => {
            let (group, chi) = gc.resolve()?;
            let map = BasicMap::new(&group);
            let u = read_symbol(&symbol, coords, &map)?;
            let windows: Vec<ToeplitzWindow> = degrees.iter().map(|&d| toeplitz_window(&u, &chi, d)).collect();
            emit(&compactness_probe(&windows)?, fmt)?;
            Ok(Outcome::Done)
        }
    }
}

fn run_verify(cmd: VerifyCmd, fmt: Format, seed: u64) -> Result<Outcome> {
    match cmd {
        VerifyCmd::KernelIdentity { group, pairs, radius } => {
            let report = kernel_identity_check(&Group::parse(&group)?, pairs, seed, radius)?;
            let passed = report.passed;
            emit(&report, fmt)?;
            Ok(verdict(passed))
        }
        VerifyCmd::EllipsoidConstants { max_m } => {
            let rows: Vec<_> = (2..=max_m).flat_map(|m| [2, 3].map(|n| ellipsoid_constant(m, n))).collect();
            emit(&rows, fmt)?;
            Ok(Outcome::Done)
        }
        VerifyCmd::Correspondence { group, symbol, coords, mode, degree } => {
            let group = Group::parse(&group)?;
            let map = BasicMap::new(&group);
            if symbol.is_empty() {
                bail!("at least one --symbol is required");
            }
            let symbols = symbol.iter().map(|s| read_symbol(s, coords, &map)).collect::<Result<Vec<_>>>()?;
            let d = degree.unwrap_or_else(|| symbols.iter().map(Symbol::radius).sum::<u32>() + 3);
            let report = correspondence_check(&symbols, parse_mode(&mode)?, &Character::all_builtin(&group), d)?;
            let agree = report.agree;
            emit(&report, fmt)?;
            Ok(verdict(agree))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
