//! Command-line front end. `dispatch` parses arguments, runs one experiment,
//! prints a table, and optionally writes CSV (`--out`) and SVG (`--svg`).
//!
//! Exit codes: 0 success, 1 a check failed or the run could not complete
//! (budget, divergence, no certificate), 2 usage or input error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bohr::PrimeSet;
use crate::compare::{
    bernstein_check, bloch_chain_check, ratio_table, shift_check, CompareConfig, CompareFamily,
};
use crate::dirichlet::{
    bloch_criterion, bloch_norm, bmoa_carleson_norm, fefferman_s, helson_check, hinf_norm, hq_norm,
    littlewood_paley_check, prime_bmoa_criterion, CarlesonConfig, DirichletPolynomial, Family, HinfConfig,
};
use crate::error::{Error, Result, DEFAULT_BUDGET};
use crate::io;
use crate::lift::{lift_from_polytope, verify_isometry};
use crate::plot::{Chart, Series};
use crate::polytope::LatticePolytope;
use crate::randomseries::{bmoa_random_experiment, kahane_experiment, prime_sum, XConfig};
use crate::torus::{
    kernel_scaling_experiment, projection_ratio_search, refor_experiment, refor_growth, Quadrature, SearchConfig,
    TorusPolynomial,
};
use crate::transference::{choose_q, verify_separation, CompletelyMultiplicative, DEFAULT_Q_CAP};

#[derive(Parser, Debug)]
#[command(name = "bohr-harmonic", version, about = "Harmonic analysis experiments on the polytorus and for Dirichlet polynomials")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Write the result table as CSV.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write an SVG chart where the experiment has one.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on evaluation points per operation.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Grid size or sample count, depending on the experiment.
    #[arg(long, global = true)]
    resolution: Option<u64>,
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// hilbert, log-reciprocal, prime-reciprocal, corollary35, double-exp or random.
    #[arg(long, default_value = "hilbert")]
    family: String,
    #[arg(long, default_value_t = 100)]
    n: u64,
    #[arg(long = "J", alias = "j", default_value_t = 3)]
    j: u32,
    #[arg(long, default_value_t = 1.0)]
    shift: f64,
    /// Load the polynomial from a JSON file instead of a generator.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// L1 norms of ball Dirichlet kernels and their log-log slope.
    KernelScaling {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
        radii: Vec<f64>,
    },
    /// Growth of the tensor kernel norm and the kernel ratio.
    Refor {
        #[arg(long, default_value_t = 1.5)]
        q: f64,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
        radii: Vec<f64>,
        /// Also compute the n-dimensional kernel ratio (expensive for large n).
        #[arg(long)]
        kernel: bool,
    },
    /// Lift through polytope facets and compare L^p norms.
    LiftVerify {
        #[arg(long)]
        torus: Option<PathBuf>,
        #[arg(long)]
        polytope: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        dims: usize,
        #[arg(long, default_value_t = 3)]
        degree: i64,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// grid, mc or exact.
        #[arg(long, default_value = "grid")]
        quadrature: String,
    },
    /// Search for polynomials with a large Riesz projection ratio.
    ProjectionSearch {
        #[arg(long, default_value_t = 4.0)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        degree: i64,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
        /// Save the best polynomial as a torus document.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// H^q, H^inf, Bloch and BMOA norms of one polynomial.
    DirichletNorms {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_delimiter = ',', default_value = "2,4")]
        q: Vec<f64>,
        #[arg(long)]
        no_bmoa: bool,
    },
    /// Coefficient criteria for nonnegative coefficients.
    Criteria {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Monte Carlo check of the Littlewood-Paley identity.
    LittlewoodPaley {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
    /// Helson's inequality by Monte Carlo on the lift.
    Helson {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Certified transference plan and separation scan.
    Transference {
        #[arg(long, default_value_t = 100.0)]
        x: f64,
        /// identity or power:<exponent>.
        #[arg(long, default_value = "identity")]
        g: String,
        #[arg(long, default_value_t = 100_000)]
        n_max: u64,
        /// Save the plan as JSON.
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Smooth partial-sum ratios against sqrt(pi_0(N) log log N).
    SmoothPartial {
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        p0: Vec<u64>,
        #[arg(long, default_value_t = 2000)]
        n: u64,
        #[arg(long, default_value_t = 10_000)]
        extent: u64,
    },
    /// Mean X over random signs for nested smooth truncations.
    RandomBmoa {
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        p0: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "32,64,128,256,512")]
        levels: Vec<u64>,
        /// Dyadic sigma levels in the X quadrature.
        #[arg(long, default_value_t = 12)]
        sigma_levels: u32,
    },
    /// Kahane ratios for prime sums with random signs.
    Kahane {
        #[arg(long, value_delimiter = ',', default_value = "50,200")]
        k: Vec<usize>,
    },
    /// Norm ratio table over N.
    CompareNorms {
        /// log-reciprocal, double-exp or random.
        #[arg(long, default_value = "log-reciprocal")]
        family: String,
        #[arg(long, value_delimiter = ',', default_value = "1000,100000,10000000")]
        n: Vec<u64>,
        /// Also run the Bernstein, shift and Bloch-chain checks on random polynomials.
        #[arg(long)]
        checks: bool,
    },
}

/// A result table with optional chart and failed checks.
#[derive(Debug, Default)]
pub struct Report {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
    pub chart: Option<Chart>,
}

impl Report {
    fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            ..Self::default()
        }
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        self.rows.push(cells.into_iter().collect());
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(&self.headers).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_table(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let mut out = line(&self.headers);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(n);
            out.push('\n');
        }
        out
    }
}

fn num(x: f64) -> String {
    x.to_string()
}

fn load_family(f: &FamilyArgs, seed: u64, budget: u64) -> Result<DirichletPolynomial> {
    match &f.file {
        Some(path) => match io::load(path, io::Kind::Dirichlet)? {
            io::Document::Dirichlet(p) => Ok(p),
            _ => unreachable!("loader returns the requested kind"),
        },
        None => Family::from_name(&f.family, f.n, f.j, f.shift, seed)?.build(budget),
    }
}

fn hinf_cfg(g: &Global) -> HinfConfig {
    let mut cfg = HinfConfig {
        budget: g.budget,
        ..HinfConfig::default()
    };
    if let Some(r) = g.resolution {
        cfg.samples = r as usize;
    }
    cfg
}

fn run(command: Command, g: &Global) -> Result<Report> {
    match command {
        Command::KernelScaling { n, radii } => {
            let res = kernel_scaling_experiment(n, &radii, g.resolution.map(|r| r as usize), g.budget)?;
            let mut rep = Report::new(&["radius", "terms", "l1", "grid"]);
            for r in &res.rows {
                rep.row([num(r.radius), r.terms.to_string(), num(r.l1), r.grid.to_string()]);
            }
            rep.row(["slope".into(), String::new(), num(res.slope), String::new()]);
            rep.chart = Some(Chart {
                title: format!("L1 norm of the ball kernel, n = {n}"),
                x_label: "R".into(),
                y_label: "||D||_1".into(),
                log_x: true,
                log_y: true,
                series: vec![Series::new("l1", res.rows.iter().map(|r| (r.radius, r.l1)).collect())],
            });
            Ok(rep)
        }
        Command::Refor { q, n, radii, kernel } => {
            let growth = refor_growth(q, n, &radii)?;
            let mut rep = Report::new(&["radius", "ftilde_q", "se_l1", "ratio"]);
            for &(r, v) in &growth.rows {
                let (se, ratio) = if kernel {
                    let rec = refor_experiment(q, n, r, g.resolution.map(|x| x as usize), g.budget)?;
                    (num(rec.se_l1), num(rec.ratio))
                } else {
                    (String::new(), String::new())
                };
                rep.row([num(r), num(v), se, ratio]);
            }
            rep.notes.push(format!("exponent {} (target {})", growth.exponent, growth.target));
            rep.chart = Some(Chart {
                title: format!("tensor kernel L^{q} norm, n = {n}"),
                x_label: "R".into(),
                y_label: "||f~||_q".into(),
                log_x: true,
                log_y: true,
                series: vec![Series::new("ftilde", growth.rows.clone())],
            });
            Ok(rep)
        }
        Command::LiftVerify {
            torus,
            polytope,
            dims,
            degree,
            p,
            quadrature,
        } => {
            let f = match torus {
                Some(path) => match io::load(path, io::Kind::Torus)? {
                    io::Document::Torus(f) => f,
                    _ => unreachable!("loader returns the requested kind"),
                },
                None => TorusPolynomial::random(dims, degree, 6, false, g.seed)?,
            };
            let e = match polytope {
                Some(path) => match io::load(path, io::Kind::Polytope)? {
                    io::Document::Polytope(e) => e,
                    _ => unreachable!("loader returns the requested kind"),
                },
                None => {
                    let pts: Vec<Vec<i64>> = f.dense_terms().into_iter().map(|t| t.0).collect();
                    LatticePolytope::hull(f.dims(), &pts)?
                }
            };
            let lift = lift_from_polytope(&f, &e)?;
            let res = g.resolution.unwrap_or(64);
            let quad = match quadrature.as_str() {
                "grid" => Quadrature::grid(res),
                "mc" => Quadrature::monte_carlo(g.resolution.unwrap_or(100_000), g.seed),
                "exact" => Quadrature::even_exact(),
                other => return Err(Error::invalid(format!("unknown quadrature {other:?}"))),
            }
            .with_budget(g.budget);
            let r = verify_isometry(&f, &lift.g, p, &quad)?;
            let mut rep = Report::new(&["p", "f_norm", "g_norm", "difference", "stderr", "lifted_dims"]);
            rep.row([
                num(p),
                num(r.f_norm.value),
                num(r.g_norm.value),
                num(r.difference),
                num(r.stderr),
                lift.dims.to_string(),
            ]);
            let tol = if r.stderr > 0.0 { 3.0 * r.stderr } else { 1e-9 * (1.0 + r.f_norm.value) };
            rep.check(r.difference <= tol, format!("norms differ by {} > {tol}", r.difference));
            Ok(rep)
        }
        Command::ProjectionSearch {
            p,
            n,
            degree,
            iterations,
            witness,
        } => {
            let mut cfg = SearchConfig::new(p, n, degree);
            cfg.iterations = iterations;
            cfg.seed = g.seed;
            cfg.budget = g.budget;
            cfg.grid = g.resolution.map(|r| r as usize);
            if let Some(t) = g.trials {
                cfg.starts = t as usize;
            }
            let r = projection_ratio_search(&cfg)?;
            if let Some(path) = witness {
                io::save(path, &io::Document::Torus(r.witness.clone()))?;
            }
            let mut rep = Report::new(&["p", "n", "degree", "ratio", "evaluations", "grid"]);
            rep.row([num(p), n.to_string(), degree.to_string(), num(r.ratio), r.evaluations.to_string(), r.grid.to_string()]);
            Ok(rep)
        }
        Command::DirichletNorms { family, q, no_bmoa } => {
            let f = load_family(&family, g.seed, g.budget)?;
            let mut rep = Report::new(&["norm", "lower", "upper", "note"]);
            for &qq in &q {
                let quad = Quadrature::even_exact().with_budget(g.budget);
                let e = hq_norm(&f, qq, &quad).or_else(|_| {
                    hq_norm(&f, qq, &Quadrature::monte_carlo(g.resolution.unwrap_or(100_000), g.seed).with_budget(g.budget))
                })?;
                let lo = e.value - 3.0 * e.stderr;
                rep.row([format!("H^{qq}"), num(lo), num(e.value + 3.0 * e.stderr), format!("{:?}", e.method)]);
            }
            let h = hinf_norm(&f, &hinf_cfg(g))?;
            rep.row(["H^inf".into(), num(h.best_lower()), num(h.certified_upper()), format!("argmax t = {}", h.argmax_t)]);
            let b = bloch_norm(&f, 256, 20.0)?;
            let b_up = if b.exact { b.value } else { crate::compare::bloch_upper_bound(&f)? };
            rep.row(["Bloch".into(), num(b.value), num(b_up), format!("sigma = {}", b.sigma)]);
            if !no_bmoa {
                let c = bmoa_carleson_norm(
                    &f,
                    &CarlesonConfig {
                        offsets: g.resolution.map(|r| r as usize).unwrap_or(100),
                        budget: g.budget.saturating_mul(100),
                        ..CarlesonConfig::default()
                    },
                )?;
                rep.row(["BMOA".into(), num(c.value), String::new(), format!("h = {}, t = {}", c.h, c.t)]);
            }
            Ok(rep)
        }
        Command::Criteria { family } => {
            let f = load_family(&family, g.seed, g.budget)?;
            let mut rep = Report::new(&["criterion", "value", "argmax_x", "critical_points"]);
            let s = fefferman_s(&f)?;
            rep.row(["fefferman_s".into(), num(s.value), num(s.argmax_x), s.critical_points.to_string()]);
            let b = bloch_criterion(&f)?;
            rep.row(["bloch_criterion".into(), num(b.value), num(b.argmax_x), b.critical_points.to_string()]);
            if f.terms().iter().all(|t| crate::bohr::is_prime_u64(t.0)) {
                let p = prime_bmoa_criterion(&f)?;
                rep.row(["prime_bmoa".into(), num(p.value), num(p.argmax_x), p.critical_points.to_string()]);
            }
            Ok(rep)
        }
        Command::LittlewoodPaley { family, tolerance } => {
            let f = load_family(&family, g.seed, g.budget)?;
            let samples = g.resolution.or(g.trials).unwrap_or(100_000);
            let r = littlewood_paley_check(&f, samples, g.seed)?;
            let mut rep = Report::new(&["lhs", "estimate", "stderr", "samples", "relative_error"]);
            rep.row([num(r.lhs), num(r.estimate), num(r.stderr), r.samples.to_string(), num(r.relative_error())]);
            rep.check(r.relative_error() <= tolerance, format!("relative error {} > {tolerance}", r.relative_error()));
            Ok(rep)
        }
        Command::Helson { family } => {
            let f = load_family(&family, g.seed, g.budget)?;
            let r = helson_check(&f, g.resolution.or(g.trials).unwrap_or(200_000), g.seed)?;
            let mut rep = Report::new(&["l1", "stderr", "rhs", "margin", "holds"]);
            rep.row([num(r.lhs.value), num(r.lhs.stderr), num(r.rhs), num(r.margin), r.holds.to_string()]);
            rep.check(r.holds, "mean of |f| is more than 3 stderr below the weighted l2 sum");
            Ok(rep)
        }
        Command::Transference { x, g: gname, n_max, plan } => {
            let gm = match gname.as_str() {
                "identity" => CompletelyMultiplicative::Identity,
                other => match other.strip_prefix("power:") {
                    Some(e) => CompletelyMultiplicative::power(
                        e.parse().map_err(|_| Error::invalid(format!("bad exponent in {other:?}")))?,
                    )?,
                    None => return Err(Error::invalid(format!("unknown g {other:?}"))),
                },
            };
            let pl = choose_q(&gm, x, DEFAULT_Q_CAP, g.budget)?;
            let sep = verify_separation(&pl, n_max)?;
            if let Some(path) = plan {
                io::save(path, &io::Document::Plan(pl.clone()))?;
            }
            let mut rep = Report::new(&[
                "q", "primes", "max_beta_below", "tail_lower_bound", "margin", "min_beta_above", "checked", "violations",
            ]);
            rep.row([
                pl.q.to_string(),
                pl.m.len().to_string(),
                pl.certificate.max_beta_below.to_string(),
                num(pl.certificate.tail_lower_bound),
                num(pl.certificate.margin),
                pl.certificate.min_beta_above.to_string(),
                sep.checked.to_string(),
                sep.violations.len().to_string(),
            ]);
            rep.check(sep.violations.is_empty(), format!("{} separation violations", sep.violations.len()));
            Ok(rep)
        }
        Command::SmoothPartial { p0, n, extent } => {
            let p0 = PrimeSet::explicit(p0)?;
            let r = crate::transference::smooth_partial_ratio(&p0, n, extent, g.trials.unwrap_or(10), g.seed)?;
            let mut rep = Report::new(&["trial", "terms", "partial_lower", "full_upper", "ratio"]);
            for row in &r.rows {
                rep.row([row.trial.to_string(), row.terms.to_string(), num(row.partial_lower), num(row.full_upper), num(row.ratio)]);
            }
            rep.notes.push(format!("scale {} max ratio {} observed c {}", r.scale, r.max_ratio, r.observed_c));
            Ok(rep)
        }
        Command::RandomBmoa { p0, levels, sigma_levels } => {
            let p0 = PrimeSet::explicit(p0)?;
            let a = |n: u64| {
                let x = n as f64;
                if n < 2 {
                    0.0
                } else {
                    1.0 / (x.sqrt() * x.ln().powi(2))
                }
            };
            let cfg = XConfig {
                levels: sigma_levels,
                budget: g.budget,
                ..XConfig::default()
            };
            let r = bmoa_random_experiment(&p0, a, &levels, g.trials.unwrap_or(50), g.seed, &cfg)?;
            let mut rep = Report::new(&["n", "terms", "mean_x_lower", "mean_x_upper", "stderr_upper", "durendir"]);
            for row in &r.rows {
                rep.row([
                    row.n.to_string(),
                    row.terms.to_string(),
                    num(row.mean_x_lower),
                    num(row.mean_x_upper),
                    num(row.stderr_upper),
                    num(row.durendir),
                ]);
            }
            rep.notes.push(format!("weighted sum up to {}: {} (converging: {})", r.durendir_far_n, r.durendir_far, r.in_hypothesis));
            rep.check(r.in_hypothesis, "weighted coefficient sum does not appear to converge");
            if let [.., a, b] = r.rows.as_slice() {
                rep.check(b.mean_x_upper <= 2.0 * a.mean_x_upper, "mean X doubled between the last two levels");
            }
            rep.chart = Some(Chart {
                title: "mean X over random signs".into(),
                x_label: "N".into(),
                y_label: "mean X".into(),
                log_x: true,
                log_y: false,
                series: vec![
                    Series::new("upper", r.rows.iter().map(|w| (w.n as f64, w.mean_x_upper)).collect()),
                    Series::new("lower", r.rows.iter().map(|w| (w.n as f64, w.mean_x_lower)).collect()),
                ],
            });
            Ok(rep)
        }
        Command::Kahane { k } => {
            let mut rep = Report::new(&["k", "n", "mean_sup_lower", "mean_sup_upper", "stderr", "scale", "ratio"]);
            let mut ratios = Vec::new();
            for &kk in &k {
                let f = prime_sum(kk)?;
                let rows = kahane_experiment(&PrimeSet::All, &f, &[f.length()], g.trials.unwrap_or(50), g.seed, g.budget)?;
                let r = &rows[0];
                ratios.push((kk as f64, r.ratio));
                rep.row([
                    kk.to_string(),
                    r.n.to_string(),
                    num(r.mean_sup_lower),
                    num(r.mean_sup_upper),
                    num(r.stderr),
                    num(r.scale),
                    num(r.ratio),
                ]);
                rep.check(r.ratio < 10.0, format!("ratio {} >= 10 at K = {kk}", r.ratio));
            }
            for w in ratios.windows(2) {
                rep.check(w[1].1 <= 2.0 * w[0].1, "ratio doubled between consecutive K");
            }
            rep.chart = Some(Chart {
                title: "Kahane ratio for prime sums".into(),
                x_label: "K".into(),
                y_label: "ratio".into(),
                log_x: true,
                log_y: false,
                series: vec![Series::new("ratio", ratios)],
            });
            Ok(rep)
        }
        Command::CompareNorms { family, n, checks } => {
            let fam = CompareFamily::from_name(&family, g.seed)?;
            let cfg = CompareConfig {
                hinf: hinf_cfg(g),
                ..CompareConfig::default()
            };
            let rows = ratio_table(fam, &n, &cfg)?;
            let mut rep = Report::new(&crate::compare::RATIO_CSV_HEADER.split(',').collect::<Vec<_>>());
            for r in &rows {
                rep.row(r.csv_row().split(',').map(String::from));
            }
            if checks {
                let trials = g.trials.unwrap_or(100);
                let quick = HinfConfig {
                    samples: 4097,
                    ..hinf_cfg(g)
                };
                let mut violations = 0;
                for t in 0..trials {
                    let f = crate::dirichlet::families::random(50, g.seed.wrapping_add(t))?;
                    violations += usize::from(!bernstein_check(&f, &quick)?.holds());
                    for c in [0.25, 0.5, 0.75] {
                        violations += usize::from(!shift_check(&f, c, &quick)?.holds);
                    }
                    violations += usize::from(!bloch_chain_check(&f, &quick)?.holds);
                }
                rep.notes.push(format!("inequality checks over {trials} random polynomials: {violations} violations"));
                rep.check(violations == 0, format!("{violations} inequality violations"));
            }
            rep.chart = Some(Chart {
                title: format!("norm ratios, {}", fam.name()),
                x_label: "N".into(),
                y_label: "ratio".into(),
                log_x: true,
                log_y: false,
                series: vec![
                    Series::new("sup/bloch", rows.iter().map(|r| (r.n as f64, r.sup_over_bloch)).collect()),
                    Series::new("log log N", rows.iter().map(|r| (r.n as f64, r.log_log_n)).collect()),
                ],
            });
            Ok(rep)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_)
        | Error::DimensionMismatch { .. }
        | Error::Precondition(_)
        | Error::UnsupportedPrime { .. }
        | Error::OutOfRange(_)
        | Error::Parse { .. }
        | Error::Io(_) => 2,
        Error::BudgetExceeded { .. } | Error::Degenerate(_) | Error::Divergent(_) | Error::NoCertificate(_) => 1,
    }
}

/// Runs the command line `args` (including the program name) and returns the exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run_to_strings(cli) {
        Ok((stdout, failures)) => {
            print!("{stdout}");
            for f in &failures {
                eprintln!("check failed: {f}");
            }
            i32::from(!failures.is_empty())
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn run_to_strings(cli: Cli) -> Result<(String, Vec<String>)> {
    let g = cli.global.clone();
    let rep = run(cli.command, &g)?;
    if let Some(path) = &g.out {
        std::fs::write(path, rep.to_csv()?)?;
    }
    if let (Some(path), Some(chart)) = (&g.svg, &rep.chart) {
        std::fs::write(path, chart.render()?)?;
    }
    Ok((rep.to_table(), rep.failures))
}

/// Parses and runs without printing; used by tests and examples.
pub fn run_args<I, T>(args: I) -> Result<Report>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::invalid(e.to_string()))?;
    let g = cli.global.clone();
    run(cli.command, &g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(dispatch(["bohr-harmonic"]), 2);
        assert_eq!(dispatch(["bohr-harmonic", "no-such-command"]), 2);
        assert_eq!(dispatch(["bohr-harmonic", "kahane", "--bogus"]), 2);
        assert_eq!(dispatch(["bohr-harmonic", "criteria", "--family", "nope"]), 2);
    }

    #[test]
    fn kernel_scaling_csv() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("k.csv");
        let svg = dir.path().join("k.svg");
        let code = dispatch([
            "bohr-harmonic",
            "kernel-scaling",
            "--n",
            "2",
            "--radii",
            "4,8",
            "--out",
            out.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(text.starts_with("radius,terms,l1,grid\n"));
        assert!(text.lines().last().unwrap().starts_with("slope,"));
        assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
    }

    #[test]
    fn criteria_big_j_is_a_budget_failure() {
        assert_eq!(dispatch(["bohr-harmonic", "criteria", "--family", "corollary35", "--J", "8"]), 1);
        let rep = run_args(["bohr-harmonic", "criteria", "--family", "corollary35", "--J", "3"]).unwrap();
        assert_eq!(rep.rows[0][0], "fefferman_s");
        assert_eq!(rep.rows.len(), 3);
    }

    #[test]
    fn outputs_are_reproducible() {
        let args = ["bohr-harmonic", "helson", "--family", "random", "--n", "12", "--resolution", "20000", "--seed", "5"];
        let a = run_args(args).unwrap().to_csv().unwrap();
        let b = run_args(args).unwrap().to_csv().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn transference_writes_a_valid_plan() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plan.json");
        let code = dispatch([
            "bohr-harmonic",
            "transference",
            "--x",
            "50",
            "--n-max",
            "10000",
            "--plan",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(matches!(io::load(&path, io::Kind::Plan).unwrap(), io::Document::Plan(_)));
    }
}
