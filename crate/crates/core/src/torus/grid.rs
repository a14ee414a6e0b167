//! Norm estimation on the torus: FFT tensor grids, Monte Carlo, and exact even norms.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::TorusPolynomial;
use crate::error::{check_budget, Error, Result, DEFAULT_BUDGET};
use crate::numeric::{ExactSum, Moments, Sum};
use crate::rng::{derive_seed, domain, Stream};

const MC_CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    Grid,
    MonteCarlo,
    EvenExact,
}

impl fmt::Display for NormMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormMethod::Grid => "grid",
            NormMethod::MonteCarlo => "monte-carlo",
            NormMethod::EvenExact => "even-exact",
        })
    }
}

impl std::str::FromStr for NormMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(NormMethod::Grid),
            "monte-carlo" | "mc" => Ok(NormMethod::MonteCarlo),
            "even-exact" | "exact" => Ok(NormMethod::EvenExact),
            other => Err(Error::invalid(format!("unknown norm method '{other}'"))),
        }
    }
}

/// How a norm is to be estimated.
///
/// `resolution` is the per-coordinate grid size for [`NormMethod::Grid`] and the
/// sample count for [`NormMethod::MonteCarlo`]; it is ignored by the exact method.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub method: NormMethod,
    pub resolution: u64,
    pub seed: u64,
    pub budget: u64,
}

impl Quadrature {
    pub fn grid(m: u64) -> Self {
        Self {
            method: NormMethod::Grid,
            resolution: m,
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn monte_carlo(samples: u64, seed: u64) -> Self {
        Self {
            method: NormMethod::MonteCarlo,
            resolution: samples,
            seed,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn even_exact() -> Self {
        Self {
            method: NormMethod::EvenExact,
            resolution: 0,
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub method: NormMethod,
    pub p: f64,
    pub value: f64,
    pub stderr: f64,
    pub resolution: u64,
}

impl NormEstimate {
    pub const CSV_HEADER: &'static str = "method,p,value,stderr,resolution";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.method,
            fmt_p(self.p),
            self.value,
            self.stderr,
            self.resolution
        )
    }
}

fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        p.to_string()
    }
}

/// Sampled maximum of `|f|` on a grid and the Lipschitz-certified upper bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupBound {
    pub lower: f64,
    pub upper: f64,
    pub argmax: Vec<f64>,
    pub resolution: u64,
}

/// `norm(f, p)` under `quad`.
pub fn norm(f: &TorusPolynomial, p: f64, quad: &Quadrature) -> Result<NormEstimate> {
    if !(p > 0.0) {
        return Err(Error::invalid(format!("norm exponent must be positive, got {p}")));
    }
    let value_of = |value: f64, stderr: f64| NormEstimate {
        method: quad.method,
        p,
        value,
        stderr,
        resolution: quad.resolution,
    };
    match quad.method {
        NormMethod::Grid => {
            let m = quad.resolution as usize;
            if m == 0 {
                return Err(Error::invalid("grid size must be positive"));
            }
            if p.is_infinite() {
                let maxima = grid_slices(f, m, quad.budget, |_, vals| {
                    vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
                })?;
                return Ok(value_of(maxima.into_iter().fold(0.0, f64::max), 0.0));
            }
            let sums = grid_slices(f, m, quad.budget, |_, vals| {
                vals.iter().map(|v| abs_pow(*v, p)).collect::<Sum>()
            })?;
            let mut total = Sum::default();
            for s in &sums {
                total.merge(s);
            }
            let points = (m as f64).powi(f.dims() as i32);
            Ok(value_of((total.value() / points).powf(1.0 / p), 0.0))
        }
        NormMethod::MonteCarlo => {
            let samples = quad.resolution;
            if samples == 0 {
                return Err(Error::invalid("Monte Carlo needs at least one sample"));
            }
            check_budget(samples as u128, quad.budget)?;
            let key = derive_seed(quad.seed, domain::TORUS_MC);
            let chunks = samples.div_ceil(MC_CHUNK);
            let dims = f.dims();
            let parts: Vec<(Moments, f64)> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut mom = Moments::default();
                    let mut max = 0.0f64;
                    let mut theta = vec![0.0; dims];
                    for i in c * MC_CHUNK..((c + 1) * MC_CHUNK).min(samples) {
                        let mut s = Stream::new(key, i);
                        for t in theta.iter_mut() {
                            *t = s.angle();
                        }
                        let v = f.eval_unchecked(&theta);
                        if p.is_infinite() {
                            max = max.max(v.norm());
                        } else {
                            mom.push(abs_pow(v, p));
                        }
                    }
                    (mom, max)
                })
                .collect();
            if p.is_infinite() {
                let max = parts.iter().map(|x| x.1).fold(0.0, f64::max);
                return Ok(value_of(max, 0.0));
            }
            let mut mom = Moments::default();
            for (m, _) in &parts {
                mom.merge(m);
            }
            let mean = mom.mean();
            let value = mean.powf(1.0 / p);
            // Delta method for the p-th root of the sample mean.
            let stderr = if mean > 0.0 {
                value / (p * mean) * mom.stderr()
            } else {
                0.0
            };
            Ok(value_of(value, stderr))
        }
        NormMethod::EvenExact => {
            let k = match p {
                x if x == 2.0 => 1,
                x if x == 4.0 => 2,
                x if x == 6.0 => 3,
                _ => {
                    return Err(Error::invalid(format!(
                        "even-exact norms need p in {{2, 4, 6}}, got {p}"
                    )))
                }
            };
            let pow = f.pow(k, quad.budget)?;
            let sum: ExactSum = pow.terms().map(|(_, c)| c.norm_sqr()).collect();
            Ok(value_of(sum.value().powf(1.0 / p), 0.0))
        }
    }
}

fn abs_pow(v: Complex64, p: f64) -> f64 {
    if p == 2.0 {
        v.norm_sqr()
    } else if p == 1.0 {
        v.norm()
    } else if p == 4.0 {
        let s = v.norm_sqr();
        s * s
    } else {
        v.norm_sqr().powf(0.5 * p)
    }
}

/// Grid maximum of `|f|` on the `m^n` grid plus the certified bound
/// `max + (pi / m) * sum |c| |alpha|_1`, capped by `sum |c|`.
pub fn sup_bound(f: &TorusPolynomial, m: usize, budget: u64) -> Result<SupBound> {
    if m == 0 {
        return Err(Error::invalid("grid size must be positive"));
    }
    let dims = f.dims();
    let per_slice = grid_slices(f, m, budget, |k1, vals| {
        let (idx, v) = vals
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        (k1, idx, v)
    })?;
    let (k1, idx, lower) = per_slice
        .into_iter()
        .fold((0, 0, -1.0), |acc, x| if x.2 > acc.2 { x } else { acc });
    let lower = lower.max(0.0);
    let step = TAU / m as f64;
    let mut argmax = vec![0.0; dims];
    if dims == 1 {
        argmax[0] = idx as f64 * step;
    } else {
        argmax[0] = k1 as f64 * step;
        let mut rest = idx;
        for j in (1..dims).rev() {
            argmax[j] = (rest % m) as f64 * step;
            rest /= m;
        }
    }
    let upper = (lower + PI / m as f64 * f.lipschitz()).min(f.coeff_l1()).max(lower);
    Ok(SupBound {
        lower,
        upper,
        argmax,
        resolution: m as u64,
    })
}

/// Evaluates `f` on the tensor grid `theta_k = 2 pi k / m` and hands each slice to `per_slice`.
///
/// For `n = 1` there is a single slice of `m` values. For `n >= 2`, slice `k1`
/// holds the `m^(n-1)` values with first angle `theta_{k1}`, row-major in the
/// remaining coordinates. Slices are produced in parallel and returned in order.
///
/// Exponents are folded modulo `m`, which is exact at grid points, so any `m` works.
pub fn grid_slices<T, F>(f: &TorusPolynomial, m: usize, budget: u64, per_slice: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &[Complex64]) -> T + Sync,
{
    let dims = f.dims();
    let points = (m as u128).checked_pow(dims as u32).unwrap_or(u128::MAX);
    check_budget(points, budget)?;
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_inverse(m);
    let terms = f.dense_terms();
    let fold = |e: i64| e.rem_euclid(m as i64) as usize;

    if dims == 1 {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (alpha, c) in &terms {
            buf[fold(alpha[0])] += c;
        }
        fft.process(&mut buf);
        return Ok(vec![per_slice(0, &buf)]);
    }

    let twiddle: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / m as f64))
        .collect();
    let sub = dims - 1;
    let slice_len = m.pow(sub as u32);
    let folded: Vec<(usize, usize, Complex64)> = terms
        .iter()
        .map(|(alpha, c)| {
            let mut pos = 0;
            for &e in &alpha[1..] {
                pos = pos * m + fold(e);
            }
            (fold(alpha[0]), pos, *c)
        })
        .collect();

    Ok((0..m)
        .into_par_iter()
        .map(|k1| {
            let mut buf = vec![Complex64::new(0.0, 0.0); slice_len];
            for &(a1, pos, c) in &folded {
                buf[pos] += c * twiddle[(a1 * k1) % m];
            }
            fft_axes(&mut buf, m, sub, fft.as_ref());
            per_slice(k1, &buf)
        })
        .collect())
}

/// In-place unnormalized inverse DFT along every axis of a row-major `[m; d]` array.
fn fft_axes(buf: &mut [Complex64], m: usize, d: usize, fft: &dyn Fft<f64>) {
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(buf, &mut scratch);
    let mut line = vec![Complex64::new(0.0, 0.0); m];
    for axis in 0..d.saturating_sub(1) {
        let stride = m.pow((d - 1 - axis) as u32);
        let block = stride * m;
        for base in (0..buf.len()).step_by(block) {
            for off in 0..stride {
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = buf[base + off + k * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    buf[base + off + k * stride] = *v;
                }
            }
        }
    }
}
