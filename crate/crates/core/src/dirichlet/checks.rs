use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::norms::line_values;
use super::DirichletPolynomial;
use crate::bohr::{divisor_count, sieve};
use crate::error::{check_budget, Result, DEFAULT_BUDGET};
use crate::numeric::Moments;
use crate::rng::{derive_seed, domain, Stream};
use crate::torus::{norm, NormEstimate, Quadrature};

#[derive(Clone, Debug, Serialize)]
pub struct LittlewoodPaleyReport {
    /// `sum_{n >= 2} |a_n|^2`.
    pub lhs: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl LittlewoodPaleyReport {
    pub fn relative_error(&self) -> f64 {
        if self.lhs == 0.0 {
            self.estimate.abs()
        } else {
            (self.estimate - self.lhs).abs() / self.lhs
        }
    }
}

const SIGMA_CUT: f64 = 4.0;

/// Monte Carlo estimate of
/// `(4/pi) int_{T^inf} int_R int_0^inf |f'_chi(sigma + it)|^2 sigma dsigma dt/(1+t^2) dm(chi)`.
///
/// `chi` is Steinhaus at each prime, `t` is Cauchy, and `sigma = 4 sqrt(U)` has
/// density `sigma/8` on `(0, 4]`. The part `sigma > 4` is integrated exactly for
/// each `(chi, t)`.
pub fn littlewood_paley_check(f: &DirichletPolynomial, samples: u64, seed: u64) -> Result<LittlewoodPaleyReport> {
    let d = f.derivative();
    let lhs = f.without_constant().coeff_l2_sq();
    if d.is_empty() || samples == 0 {
        return Ok(LittlewoodPaleyReport {
            lhs,
            estimate: 0.0,
            stderr: 0.0,
            samples,
        });
    }
    let m = d.len() as u128;
    check_budget(samples as u128 * (m * m + m * 4), DEFAULT_BUDGET * 10)?;
    let sv = sieve();
    let mut factors = Vec::with_capacity(d.len());
    for &(n, _) in d.terms() {
        factors.push(sv.prime_factors(n)?);
    }
    let logs: Vec<f64> = d.terms().iter().map(|t| (t.0 as f64).ln()).collect();
    let tail_weight: Vec<Vec<f64>> = logs
        .iter()
        .map(|lm| {
            logs.iter()
                .map(|ln| {
                    let lam = lm + ln;
                    (-SIGMA_CUT * lam).exp() * (SIGMA_CUT / lam + 1.0 / (lam * lam))
                })
                .collect()
        })
        .collect();
    let key = derive_seed(seed, domain::LITTLEWOOD_PALEY);
    const CHUNK: u64 = 4096;
    let parts: Vec<Moments> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut mom = Moments::default();
            let mut b = vec![Complex64::new(0.0, 0.0); logs.len()];
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let mut s = Stream::new(key, i);
                let t = s.cauchy();
                let sigma = SIGMA_CUT * s.uniform().sqrt();
                // chi(p) is drawn from the prime's own sub-stream so it does not depend on the support.
                let chi_seed = s.next_u64();
                for (k, (&(_, a), fac)) in d.terms().iter().zip(&factors).enumerate() {
                    let mut chi = Complex64::new(1.0, 0.0);
                    for &(p, e) in fac {
                        chi *= Stream::new(chi_seed, p).unimodular().powu(e);
                    }
                    b[k] = a * chi * Complex64::from_polar(1.0, -t * logs[k]);
                }
                let inner: Complex64 = b.iter().zip(&logs).map(|(bk, l)| bk * (-sigma * l).exp()).sum();
                let mut tail = 0.0;
                for (bm, row) in b.iter().zip(&tail_weight) {
                    for (bn, w) in b.iter().zip(row) {
                        tail += w * (bm * bn.conj()).re;
                    }
                }
                mom.push(32.0 * inner.norm_sqr() + 4.0 * tail);
            }
            mom
        })
        .collect();
    let mut mom = Moments::default();
    for p in &parts {
        mom.merge(p);
    }
    Ok(LittlewoodPaleyReport {
        lhs,
        estimate: mom.mean(),
        stderr: mom.stderr(),
        samples,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HelsonReport {
    /// Monte Carlo estimate of `||f||_1`.
    pub lhs: NormEstimate,
    /// `(sum |a_n|^2 / d(n))^(1/2)`.
    pub rhs: f64,
    pub margin: f64,
    /// `lhs + 3 stderr >= rhs`.
    pub holds: bool,
}

pub fn helson_check(f: &DirichletPolynomial, samples: u64, seed: u64) -> Result<HelsonReport> {
    let mut rhs = 0.0;
    for &(n, a) in f.terms() {
        rhs += a.norm_sqr() / divisor_count(n)? as f64;
    }
    let rhs = rhs.sqrt();
    let lhs = if f.is_empty() {
        NormEstimate {
            method: crate::torus::NormMethod::MonteCarlo,
            p: 1.0,
            value: 0.0,
            stderr: 0.0,
            resolution: samples,
        }
    } else {
        norm(&f.bohr_lift()?, 1.0, &Quadrature::monte_carlo(samples, seed))?
    };
    Ok(HelsonReport {
        margin: lhs.value - rhs,
        holds: lhs.value + 3.0 * lhs.stderr >= rhs,
        lhs,
        rhs,
    })
}

/// The constant `C` used in `|f(sigma+it) - a_1| <= (log+(1/sigma) + C 2^-sigma) ||f||_B`.
pub const POINTWISE_C: f64 = 3.0;

#[derive(Clone, Debug, Serialize)]
pub struct PointwiseReport {
    pub bloch: f64,
    /// `max_{n >= 2} |a_n| / (e ||f||_B)`.
    pub coeff_ratio: f64,
    pub coeff_violations: usize,
    pub point_checks: usize,
    pub point_violations: usize,
    /// Largest `|f(sigma+it) - a_1| / bound` seen.
    pub point_ratio: f64,
}

/// `{2^-j : 1 <= j <= levels} ∪ {1, 2, 4}`.
pub fn pointwise_sigma_grid(levels: u32) -> Vec<f64> {
    let mut grid: Vec<f64> = (1..=levels).map(|j| 0.5f64.powi(j as i32)).collect();
    grid.extend([1.0, 2.0, 4.0]);
    grid
}

/// Checks `|a_n| <= e ||f||_B` and the pointwise bound on `sigmas` times a `t`-grid over `[-window, window]`.
pub fn pointwise_bound_check(
    f: &DirichletPolynomial,
    bloch: f64,
    sigmas: &[f64],
    window: f64,
    t_samples: usize,
) -> Result<PointwiseReport> {
    let slack = |rhs: f64| 1e-12 * (1.0 + rhs);
    let e = std::f64::consts::E;
    let mut coeff_ratio = 0.0f64;
    let mut coeff_violations = 0;
    for &(_, a) in f.terms().iter().filter(|t| t.0 >= 2) {
        let rhs = e * bloch;
        if a.norm() > rhs + slack(rhs) {
            coeff_violations += 1;
        }
        coeff_ratio = coeff_ratio.max(if rhs > 0.0 { a.norm() / rhs } else { f64::INFINITY });
    }
    let g = f.without_constant();
    let t_samples = t_samples.max(2);
    let step = 2.0 * window / (t_samples - 1) as f64;
    check_budget(sigmas.len() as u128 * t_samples as u128 * g.len().max(1) as u128, DEFAULT_BUDGET)?;
    let mut point_violations = 0;
    let mut point_ratio = 0.0f64;
    for &s in sigmas {
        let bound = ((1.0 / s).ln().max(0.0) + POINTWISE_C * 2f64.powf(-s)) * bloch;
        for v in line_values(&g, s, -window, step, t_samples) {
            let x = v.norm();
            if x > bound + slack(bound) {
                point_violations += 1;
            }
            if bound > 0.0 {
                point_ratio = point_ratio.max(x / bound);
            } else if x > 0.0 {
                point_ratio = f64::INFINITY;
            }
        }
    }
    Ok(PointwiseReport {
        bloch,
        coeff_ratio: if f.terms().iter().any(|t| t.0 >= 2) { coeff_ratio } else { 0.0 },
        coeff_violations,
        point_checks: sigmas.len() * t_samples,
        point_violations,
        point_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::{bloch_norm, families};
    use std::f64::consts::PI;

    fn poly(terms: &[(u64, f64)]) -> DirichletPolynomial {
        DirichletPolynomial::from_real(terms.iter().copied()).unwrap()
    }

    #[test]
    fn lp_constant_and_single_term() {
        let c = littlewood_paley_check(&poly(&[(1, 2.0)]), 1000, 1).unwrap();
        assert_eq!((c.lhs, c.estimate), (0.0, 0.0));
        let r = littlewood_paley_check(&poly(&[(2, 1.0)]), 100_000, 7).unwrap();
        assert_eq!(r.lhs, 1.0);
        assert!((r.estimate - 1.0).abs() < 3.0 * r.stderr, "{r:?}");
    }

    #[test]
    fn lp_random() {
        for seed in 0..3 {
            let f = families::random(12, seed).unwrap();
            let r = littlewood_paley_check(&f, 100_000, seed).unwrap();
            assert!(r.relative_error() < 0.05, "{r:?}");
        }
    }

    #[test]
    fn helson_examples() {
        let f = poly(&[(2, 1.0), (3, 1.0)]);
        let r = helson_check(&f, 200_000, 3).unwrap();
        assert!((r.rhs - 1.0).abs() < 1e-15);
        assert!((r.lhs.value - 4.0 / PI).abs() < 4.0 * r.lhs.stderr);
        assert!(r.holds);
        let one = helson_check(&poly(&[(1, 2.0)]), 100, 3).unwrap();
        assert!((one.lhs.value - 2.0).abs() < 1e-12 && (one.rhs - 2.0).abs() < 1e-15);
        let single = helson_check(&poly(&[(6, 1.0)]), 100, 3).unwrap();
        assert!((single.margin - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pointwise_examples() {
        let grid = pointwise_sigma_grid(10);
        for n in [2u64, 7, 100] {
            let f = poly(&[(n, 1.0)]);
            let b = bloch_norm(&f, 256, 1.0).unwrap().value;
            let r = pointwise_bound_check(&f, b, &grid, 20.0, 200).unwrap();
            assert_eq!(r.coeff_violations, 0);
            assert!((r.coeff_ratio - 1.0).abs() < 1e-9);
            assert_eq!(r.point_violations, 0);
        }
        let h = families::hilbert(500, 1.0).unwrap();
        let b = bloch_norm(&h, 256, 1.0).unwrap().value;
        let r = pointwise_bound_check(&h, b, &grid, 20.0, 400).unwrap();
        assert_eq!((r.coeff_violations, r.point_violations), (0, 0));
        assert!(r.point_ratio < 1.0);
        let c = pointwise_bound_check(&poly(&[(1, 3.0)]), 0.0, &grid, 5.0, 10).unwrap();
        assert_eq!((c.coeff_violations, c.point_violations, c.point_ratio), (0, 0, 0.0));
    }
}
