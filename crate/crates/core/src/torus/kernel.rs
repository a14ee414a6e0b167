//! Dirichlet kernels on `T^n`, their L^1 scaling, and searches for projection witnesses.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::grid::{norm, sup_bound, Quadrature};
use super::{Ball, TorusPolynomial};
use crate::error::{check_budget, Error, Result, DEFAULT_BUDGET};
use crate::numeric::{log_log_slope, next_pow2};
use crate::rng::{derive_seed, domain, Stream};

/// `D_{R,n}`: coefficient one on every lattice point of Euclidean norm at most `R`.
pub fn dirichlet_kernel(radius: f64, n: usize, budget: u64) -> Result<TorusPolynomial> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::invalid("kernel radius must be positive"));
    }
    if n == 0 {
        return Err(Error::invalid("torus dimension must be at least 1"));
    }
    let ball = Ball { radius };
    let r2 = ball.radius_sq_floor();
    let r = (r2 as f64).sqrt().floor() as i64;
    let side = (2 * r + 1) as u128;
    check_budget(side.checked_pow(n as u32).unwrap_or(u128::MAX), budget)?;
    let mut terms = Vec::new();
    let mut alpha = vec![-r; n];
    loop {
        if alpha.iter().map(|a| a * a).sum::<i64>() <= r2 {
            terms.push((alpha.clone(), Complex64::new(1.0, 0.0)));
        }
        let mut j = 0;
        while j < n {
            alpha[j] += 1;
            if alpha[j] <= r {
                break;
            }
            alpha[j] = -r;
            j += 1;
        }
        if j == n {
            break;
        }
    }
    TorusPolynomial::from_terms(n, terms)
}

/// Per-coordinate grid size used for `||D_{R,n}||_1` when none is given.
pub fn default_kernel_grid(n: usize, radius: f64) -> usize {
    let span = 2 * radius.floor() as usize + 1;
    match n {
        1 => next_pow2(64 * span).max(4096),
        2 => next_pow2(8 * span).max(256),
        _ => next_pow2(4 * span).max(64),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelRow {
    pub radius: f64,
    pub terms: usize,
    pub l1: f64,
    pub grid: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelScaling {
    pub n: usize,
    pub rows: Vec<KernelRow>,
    /// Least-squares slope of `log ||D||_1` against `log R`.
    pub slope: f64,
}

pub fn kernel_scaling_experiment(
    n: usize,
    radii: &[f64],
    resolution: Option<usize>,
    budget: u64,
) -> Result<KernelScaling> {
    let mut radii = radii.to_vec();
    radii.sort_by(|a, b| a.total_cmp(b));
    let mut rows = Vec::with_capacity(radii.len());
    for &radius in &radii {
        let kernel = dirichlet_kernel(radius, n, budget)?;
        let grid = resolution.unwrap_or_else(|| default_kernel_grid(n, radius));
        let l1 = norm(&kernel, 1.0, &Quadrature::grid(grid as u64).with_budget(budget))?.value;
        rows.push(KernelRow {
            radius,
            terms: kernel.len(),
            l1,
            grid,
        });
    }
    let slope = if rows.len() >= 2 {
        let xs: Vec<f64> = rows.iter().map(|r| r.radius).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.l1).collect();
        log_log_slope(&xs, &ys)?
    } else {
        f64::NAN
    };
    Ok(KernelScaling { n, rows, slope })
}

fn check_refor_parameters(q: f64, n: usize) -> Result<()> {
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::invalid(format!("q must lie in (1, 2), got {q}")));
    }
    let threshold = q / (2.0 - q);
    if (n as f64) <= threshold {
        return Err(Error::precondition(format!(
            "the dimension must satisfy n > q/(2-q) = {threshold}; got n = {n}"
        )));
    }
    Ok(())
}

/// `||f~||_q` for the tensor product `f~ = prod_j sum_{|a| <= R} z_j^a`, via the 1-D norm.
pub fn ftilde_norm(q: f64, n: usize, radius: f64) -> Result<f64> {
    let d1 = dirichlet_kernel(radius, 1, DEFAULT_BUDGET)?;
    let m = next_pow2(64 * (2 * radius.floor() as usize + 1)).max(8192);
    let one = norm(&d1, q, &Quadrature::grid(m as u64))?.value;
    Ok(one.powi(n as i32))
}

#[derive(Clone, Debug, Serialize)]
pub struct ReforRecord {
    pub q: f64,
    pub n: usize,
    pub radius: f64,
    /// `||S_E f~||_1 = ||D_{R,n}||_1`.
    pub se_l1: f64,
    pub ftilde_q: f64,
    pub ratio: f64,
}

pub fn refor_experiment(q: f64, n: usize, radius: f64, resolution: Option<usize>, budget: u64) -> Result<ReforRecord> {
    check_refor_parameters(q, n)?;
    let kernel = dirichlet_kernel(radius, n, budget)?;
    let grid = resolution.unwrap_or_else(|| default_kernel_grid(n, radius));
    let se_l1 = norm(&kernel, 1.0, &Quadrature::grid(grid as u64).with_budget(budget))?.value;
    let ftilde_q = ftilde_norm(q, n, radius)?;
    Ok(ReforRecord {
        q,
        n,
        radius,
        se_l1,
        ftilde_q,
        ratio: se_l1 / ftilde_q,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReforGrowth {
    pub q: f64,
    pub n: usize,
    pub rows: Vec<(f64, f64)>,
    pub exponent: f64,
    pub target: f64,
}

/// Fitted growth exponent of `||f~||_q` in `R`, next to the target `n (1 - 1/q)`.
pub fn refor_growth(q: f64, n: usize, radii: &[f64]) -> Result<ReforGrowth> {
    check_refor_parameters(q, n)?;
    let rows: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| ftilde_norm(q, n, r).map(|v| (r, v)))
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
    Ok(ReforGrowth {
        q,
        n,
        exponent: log_log_slope(&xs, &ys)?,
        target: n as f64 * (1.0 - 1.0 / q),
        rows,
    })
}

/// `||P^+ f||_p / ||f||_inf` with the numerator on the grid and the
/// denominator certified from above, so the ratio never overstates.
pub fn projection_ratio(f: &TorusPolynomial, p: f64, m: usize, budget: u64) -> Result<f64> {
    let num = norm(&f.riesz_project(), p, &Quadrature::grid(m as u64).with_budget(budget))?.value;
    let den = sup_bound(f, m, budget)?.upper;
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(num / den)
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub p: f64,
    pub n: usize,
    pub degree: i64,
    pub iterations: usize,
    pub starts: usize,
    pub seed: u64,
    pub grid: Option<usize>,
    pub budget: u64,
}

impl SearchConfig {
    pub fn new(p: f64, n: usize, degree: i64) -> Self {
        Self {
            p,
            n,
            degree,
            iterations: 200,
            starts: 4,
            seed: 0,
            grid: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub ratio: f64,
    pub witness: TorusPolynomial,
    pub evaluations: usize,
    pub grid: usize,
}

/// Multistart ascent over real polynomials with frequencies in `[-d, d]^n`.
///
/// The best ratio is a lower bound for the operator norm up to the quadrature
/// error of the numerator.
pub fn projection_ratio_search(cfg: &SearchConfig) -> Result<SearchResult> {
    if !(cfg.p >= 2.0) {
        return Err(Error::invalid("the search needs p >= 2"));
    }
    if cfg.n == 0 || cfg.degree < 0 {
        return Err(Error::invalid("dimension and degree must be positive"));
    }
    let side = (2 * cfg.degree + 1) as usize;
    let m = cfg.grid.unwrap_or_else(|| next_pow2(8 * side).max(64));
    let mut freqs: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..cfg.n {
        freqs = freqs
            .into_iter()
            .flat_map(|a| {
                (-cfg.degree..=cfg.degree).map(move |e| {
                    let mut b = a.clone();
                    b.push(e);
                    b
                })
            })
            .collect();
    }
    let build = |coeffs: &[f64]| {
        TorusPolynomial::from_terms(
            cfg.n,
            freqs
                .iter()
                .zip(coeffs)
                .map(|(a, &c)| (a.clone(), Complex64::new(c, 0.0))),
        )
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut evaluations = 0;
    for start in 0..cfg.starts.max(1) {
        let mut rng = Stream::new(derive_seed(cfg.seed, domain::SEARCH), start as u64);
        let mut coeffs: Vec<f64> = (0..freqs.len()).map(|_| rng.normal()).collect();
        let mut current = projection_ratio(&build(&coeffs)?, cfg.p, m, cfg.budget)?;
        evaluations += 1;
        let mut step = 0.5;
        let mut failures = 0;
        for _ in 0..cfg.iterations {
            let k = rng.below(coeffs.len() as u64) as usize;
            let old = coeffs[k];
            if rng.uniform() < 0.25 {
                coeffs[k] = -old;
            } else {
                coeffs[k] = old + step * rng.normal();
            }
            let trial = projection_ratio(&build(&coeffs)?, cfg.p, m, cfg.budget)?;
            evaluations += 1;
            if trial > current {
                current = trial;
                failures = 0;
            } else {
                coeffs[k] = old;
                failures += 1;
                if failures >= 20 {
                    step *= 0.5;
                    failures = 0;
                }
            }
        }
        if best.as_ref().is_none_or(|b| current > b.0) {
            best = Some((current, coeffs));
        }
    }
    let (ratio, coeffs) = best.expect("at least one start");
    Ok(SearchResult {
        ratio,
        witness: build(&coeffs)?,
        evaluations,
        grid: m,
    })
}

/// `2 pi^(1 / log 2)`.
pub fn multivar_sup_constant() -> f64 {
    2.0 * PI.powf(1.0 / 2f64.ln())
}

#[derive(Clone, Debug, Serialize)]
pub struct MultivarSupReport {
    pub sup_lower: f64,
    pub sup_upper: f64,
    pub q: f64,
    pub q_norm: f64,
    /// `sup_upper / q_norm`.
    pub ratio: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Compares `||F||_inf` with `||F||_{n log d}` for an analytic `F` of total degree at most `d`.
pub fn multivar_sup_check(f: &TorusPolynomial, d: u32, m: usize, budget: u64) -> Result<MultivarSupReport> {
    if d < 2 {
        return Err(Error::invalid("the degree bound must be at least 2"));
    }
    if !f.is_analytic() {
        return Err(Error::precondition("the polynomial must have nonnegative exponents"));
    }
    if f.total_degree() > d as i64 {
        return Err(Error::precondition(format!(
            "total degree {} exceeds {d}",
            f.total_degree()
        )));
    }
    let q = f.dims() as f64 * (d as f64).ln();
    let sup = sup_bound(f, m, budget)?;
    let q_norm = norm(f, q, &Quadrature::grid(m as u64).with_budget(budget))?.value;
    let bound = multivar_sup_constant();
    let ratio = if q_norm > 0.0 { sup.upper / q_norm } else { 0.0 };
    Ok(MultivarSupReport {
        sup_lower: sup.lower,
        sup_upper: sup.upper,
        q,
        q_norm,
        ratio,
        bound,
        holds: sup.upper <= bound * q_norm * (1.0 + 1e-12),
    })
}
