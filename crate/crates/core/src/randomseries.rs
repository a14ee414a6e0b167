//! Randomized Dirichlet series: Rademacher and Steinhaus ensembles, sup-norm
//! experiments over smooth numbers, ultra-thin prime weights and the functional
//! `X(omega) = int_0^1 sigma ||T_sigma f'_omega||_inf^2 dsigma`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bohr::{smooth_numbers, PrimeSet};
use crate::dirichlet::{hinf_norm, DirichletPolynomial, HinfConfig};
use crate::error::{check_budget, Error, Result, DEFAULT_BUDGET};
use crate::numeric::{gauss_rule, Moments, Sum};
use crate::rng::{derive_seed, domain, rademacher, steinhaus};
use crate::torus::sup_bound;

/// `G(u) = int_u^inf log(v) / v^3 dv = log(u) / (2u^2) + 1 / (4u^2)`.
fn tail_primitive(u: f64) -> f64 {
    (2.0 * u.ln() + 1.0) / (4.0 * u * u)
}

/// The weight sequence `w_1 = w_2 = 1`, `w_n = int_n^inf pi_0(x) log log x / (x log^3 x) dx`.
///
/// In `u = log x` the integrand is `pi_0(e^u) log(u) / u^3`; `pi_0` is a step
/// function, so the integral is a finite sum of closed-form pieces.
#[derive(Clone, Debug)]
pub struct UltraThinWeights {
    primes: Vec<u64>,
}

impl UltraThinWeights {
    pub fn new(p0: &PrimeSet) -> Result<Self> {
        if !p0.is_finite() {
            return Err(Error::Divergent(
                "pi_0(x) ~ x / log x for the set of all primes; the weight integral diverges".into(),
            ));
        }
        Ok(Self { primes: p0.members()? })
    }

    pub fn weight(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::invalid("weights are indexed from 1"));
        }
        if n <= 2 {
            return Ok(1.0);
        }
        let mut count = self.primes.partition_point(|&p| p <= n);
        let mut lo = (n as f64).ln();
        let mut total = Sum::default();
        for &p in &self.primes[count..] {
            let hi = (p as f64).ln();
            total.add(count as f64 * (tail_primitive(lo) - tail_primitive(hi)));
            count += 1;
            lo = hi;
        }
        total.add(count as f64 * tail_primitive(lo));
        Ok(total.value())
    }
}

pub fn ultra_thin_weight(p0: &PrimeSet, n: u64) -> Result<f64> {
    UltraThinWeights::new(p0)?.weight(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Randomization {
    Rademacher,
    Steinhaus,
}

/// `f_omega = sum eps_n a_n n^-s` with `eps_n` keyed by `(seed, n)`.
pub fn rademacher_sample(f: &DirichletPolynomial, seed: u64) -> DirichletPolynomial {
    f.map_coeffs(|n, a| a * rademacher(seed, n))
}

pub fn steinhaus_sample(f: &DirichletPolynomial, seed: u64) -> DirichletPolynomial {
    f.map_coeffs(|n, a| a * steinhaus(seed, n))
}

pub fn randomize(f: &DirichletPolynomial, how: Randomization, seed: u64) -> DirichletPolynomial {
    match how {
        Randomization::Rademacher => rademacher_sample(f, seed),
        Randomization::Steinhaus => steinhaus_sample(f, seed),
    }
}

/// Lower and certified upper bounds for `||f||_inf`.
///
/// With at most three primes the lift is sampled on a torus grid, which
/// certifies both sides; otherwise the line grid and coordinate ascent give the
/// lower bound and `sum |a_n|` the upper bound.
pub fn sup_bounds(f: &DirichletPolynomial, budget: u64) -> Result<(f64, f64)> {
    if f.is_empty() {
        return Ok((0.0, 0.0));
    }
    let primes = f.primes()?;
    if primes.len() <= 3 {
        let dims = primes.len().max(1);
        let m = [4096usize, 128, 32][dims - 1];
        let b = sup_bound(&f.bohr_lift_on(&primes)?, m, budget)?;
        return Ok((b.lower, b.upper));
    }
    let e = hinf_norm(
        f,
        &HinfConfig {
            window: 100.0,
            samples: 4097,
            torus: false,
            budget,
            ..HinfConfig::default()
        },
    )?;
    Ok((e.best_lower(), e.certified_upper()))
}

#[derive(Clone, Debug, Serialize)]
pub struct KahaneRow {
    pub n: u64,
    pub terms: usize,
    pub mean_sup_lower: f64,
    pub mean_sup_upper: f64,
    pub stderr: f64,
    /// `(sum |a_k|^2)^(1/2) sqrt(pi_0(n)) sqrt(log log n)`.
    pub scale: f64,
    /// `mean_sup_upper / scale`.
    pub ratio: f64,
}

pub const KAHANE_CSV_HEADER: &str = "n,terms,mean_sup_lower,mean_sup_upper,stderr,scale,ratio";

impl KahaneRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n, self.terms, self.mean_sup_lower, self.mean_sup_upper, self.stderr, self.scale, self.ratio
        )
    }
}

/// `E ||P_omega||_inf` for the truncations `P = S_n f`, against `(sum |a|^2)^(1/2) sqrt(pi_0(n) log log n)`.
pub fn kahane_experiment(
    p0: &PrimeSet,
    f: &DirichletPolynomial,
    n_list: &[u64],
    trials: u64,
    seed: u64,
    budget: u64,
) -> Result<Vec<KahaneRow>> {
    if trials < 10 {
        return Err(Error::precondition("at least 10 trials are required"));
    }
    for &(n, _) in f.terms() {
        if !p0.is_smooth(n)? {
            return Err(Error::invalid(format!("{n} is not smooth over the prime set")));
        }
    }
    let key = derive_seed(seed, domain::TRIALS);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n < 16 {
            return Err(Error::precondition(format!("n = {n} < 16 makes log log n < 1")));
        }
        let p = f.truncate(n);
        let draws: Vec<(f64, f64)> = (0..trials)
            .into_par_iter()
            .map(|t| sup_bounds(&rademacher_sample(&p, derive_seed(key, t)), budget))
            .collect::<Result<_>>()?;
        let mut lower = Moments::default();
        let mut upper = Moments::default();
        for (l, u) in draws {
            lower.push(l);
            upper.push(u);
        }
        let scale = p.coeff_l2_sq().sqrt() * (p0.count_up_to(n as f64) as f64).sqrt() * (n as f64).ln().ln().sqrt();
        rows.push(KahaneRow {
            n,
            terms: p.len(),
            mean_sup_lower: lower.mean(),
            mean_sup_upper: upper.mean(),
            stderr: upper.stderr(),
            scale,
            ratio: if scale > 0.0 { upper.mean() / scale } else { 0.0 },
        });
    }
    Ok(rows)
}

/// `f = sum_{k <= K} p_k^-s`.
pub fn prime_sum(k: usize) -> Result<DirichletPolynomial> {
    let sv = crate::bohr::sieve();
    let primes = sv.primes();
    if k > primes.len() {
        return Err(Error::OutOfRange(format!("only {} primes are tabulated", primes.len())));
    }
    DirichletPolynomial::from_real(primes[..k].iter().map(|&p| (p, 1.0)))
}

#[derive(Clone, Copy, Debug)]
pub struct XConfig {
    /// Dyadic panels `[2^-(j+1), 2^-j]` for `j < levels`, plus `[0, 2^-levels]`.
    pub levels: u32,
    /// Gauss-Legendre nodes per panel.
    pub order: usize,
    pub randomization: Randomization,
    pub budget: u64,
}

impl Default for XConfig {
    fn default() -> Self {
        Self {
            levels: 12,
            order: 4,
            randomization: Randomization::Rademacher,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct XEstimate {
    /// Using lower bounds for the sup norms.
    pub lower: f64,
    /// Using certified upper bounds for the sup norms.
    pub upper: f64,
}

fn sigma_rule(cfg: &XConfig) -> Vec<(f64, f64)> {
    let mut rule = Vec::new();
    let mut hi = 1.0;
    for _ in 0..cfg.levels {
        rule.extend(gauss_rule(cfg.order, hi / 2.0, hi));
        hi /= 2.0;
    }
    rule.extend(gauss_rule(cfg.order, 0.0, hi));
    rule
}

/// `int_0^1 sigma ||T_sigma g'||_inf^2 dsigma` for a fixed (already randomized) `g`.
pub fn x_functional(g: &DirichletPolynomial, cfg: &XConfig) -> Result<XEstimate> {
    let d = g.derivative();
    if d.is_empty() {
        return Ok(XEstimate { lower: 0.0, upper: 0.0 });
    }
    let mut lower = Sum::default();
    let mut upper = Sum::default();
    for (s, w) in sigma_rule(cfg) {
        let (lo, hi) = sup_bounds(&d.shift(s), cfg.budget)?;
        lower.add(w * s * lo * lo);
        upper.add(w * s * hi * hi);
    }
    Ok(XEstimate {
        lower: lower.value(),
        upper: upper.value(),
    })
}

/// `X(omega)` for one draw of the signs (or Steinhaus multipliers) under `seed`.
pub fn estimate_x(f: &DirichletPolynomial, seed: u64, cfg: &XConfig) -> Result<XEstimate> {
    x_functional(&randomize(f, cfg.randomization, seed), cfg)
}

/// `sum_{n <= N, n smooth} |a_n|^2 w_n log^2 n`.
pub fn durendir_sum<A: Fn(u64) -> f64>(p0: &PrimeSet, coeff: A, n_max: u64) -> Result<f64> {
    let weights = UltraThinWeights::new(p0)?;
    let mut total = Sum::default();
    for n in smooth_numbers(p0, n_max) {
        let a = coeff(n);
        let l = (n as f64).ln();
        total.add(a * a * weights.weight(n)? * l * l);
    }
    Ok(total.value())
}

#[derive(Clone, Debug, Serialize)]
pub struct BmoaRandomRow {
    pub n: u64,
    pub terms: usize,
    pub mean_x_lower: f64,
    pub mean_x_upper: f64,
    pub stderr_upper: f64,
    pub min_x_upper: f64,
    pub max_x_upper: f64,
    /// The weighted coefficient sum up to `n`.
    pub durendir: f64,
}

pub const BMOA_RANDOM_CSV_HEADER: &str = "n,terms,mean_x_lower,mean_x_upper,stderr_upper,min_x_upper,max_x_upper,durendir";

impl BmoaRandomRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.terms,
            self.mean_x_lower,
            self.mean_x_upper,
            self.stderr_upper,
            self.min_x_upper,
            self.max_x_upper,
            self.durendir
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BmoaRandomReport {
    pub rows: Vec<BmoaRandomRow>,
    /// The weighted coefficient sum over a much longer range, as evidence of convergence.
    pub durendir_far: f64,
    pub durendir_far_n: u64,
    /// False when the weighted sum is still growing noticeably at `durendir_far_n`.
    pub in_hypothesis: bool,
}

/// Mean `X` over `trials` draws for nested truncations `n_list` of `sum_{n smooth} a(n) n^-s`.
/// The same draw is used at every truncation level.
pub fn bmoa_random_experiment<A>(
    p0: &PrimeSet,
    coeff: A,
    n_list: &[u64],
    trials: u64,
    seed: u64,
    cfg: &XConfig,
) -> Result<BmoaRandomReport>
where
    A: Fn(u64) -> f64 + Sync,
{
    let max_n = n_list.iter().copied().max().unwrap_or(0);
    let support = smooth_numbers(p0, max_n);
    check_budget(support.len() as u128 * trials as u128 * n_list.len() as u128, cfg.budget)?;
    let full = DirichletPolynomial::from_real(support.iter().map(|&n| (n, coeff(n))))?;
    let key = derive_seed(seed, domain::TRIALS);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let p = full.truncate(n);
        let xs: Vec<XEstimate> = (0..trials)
            .into_par_iter()
            .map(|t| estimate_x(&p, derive_seed(key, t), cfg))
            .collect::<Result<_>>()?;
        let mut lo = Moments::default();
        let mut hi = Moments::default();
        for x in &xs {
            lo.push(x.lower);
            hi.push(x.upper);
        }
        rows.push(BmoaRandomRow {
            n,
            terms: p.len(),
            mean_x_lower: lo.mean(),
            mean_x_upper: hi.mean(),
            stderr_upper: hi.stderr(),
            min_x_upper: xs.iter().map(|x| x.upper).fold(f64::INFINITY, f64::min),
            max_x_upper: xs.iter().map(|x| x.upper).fold(0.0, f64::max),
            durendir: durendir_sum(p0, &coeff, n)?,
        });
    }
    // Compare the weighted sum at N^2 and N^4 (capped) to judge convergence.
    let far = max_n.saturating_mul(max_n).min(1 << 50).max(max_n);
    let farther = far.saturating_mul(far).min(1 << 62).max(far);
    let s_far = durendir_sum(p0, &coeff, far)?;
    let s_farther = durendir_sum(p0, &coeff, farther)?;
    Ok(BmoaRandomReport {
        rows,
        durendir_far: s_farther,
        durendir_far_n: farther,
        in_hypothesis: s_farther.is_finite() && s_farther - s_far <= 0.25 * s_far.max(f64::MIN_POSITIVE),
    })
}

/// Sign-invariance harness: `||f_omega||_2^2` for each of `trials` draws.
pub fn randomized_l2_squares(f: &DirichletPolynomial, trials: u64, seed: u64) -> Vec<f64> {
    (0..trials)
        .map(|t| rademacher_sample(f, derive_seed(seed, t)).coeff_l2_sq())
        .collect()
}

/// Helper for callers providing coefficients as a slice of complex values.
pub fn from_smooth<A: Fn(u64) -> Complex64>(p0: &PrimeSet, n_max: u64, coeff: A) -> Result<DirichletPolynomial> {
    DirichletPolynomial::new(smooth_numbers(p0, n_max).into_iter().map(|n| (n, coeff(n))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::integrate;

    fn oracle_weight(primes: &[u64], n: u64) -> f64 {
        // with t = 1/log x the integral becomes int_0^{1/log n} pi_0(e^{1/t}) (-ln t) t dt
        let top = 1.0 / (n as f64).ln();
        let mut breaks: Vec<f64> = primes.iter().filter(|&&p| p > n).map(|&p| 1.0 / (p as f64).ln()).collect();
        breaks.push(0.0);
        let mut total = 0.0;
        let mut hi = top;
        let mut count = primes.iter().filter(|&&p| p <= n).count() as f64;
        for lo in breaks {
            let c = count;
            // geometric sub-panels near t = 0 handle the t ln t endpoint
            let mut b = hi;
            while b > lo.max(1e-12) {
                let a = (b / 2.0).max(lo);
                total += integrate(|t| c * (-t.ln()) * t, a, b, 20);
                b = a;
            }
            count += 1.0;
            hi = lo;
        }
        total
    }

    #[test]
    fn weights_match_quadrature() {
        let p0 = PrimeSet::explicit(vec![2, 3, 7, 101]).unwrap();
        let w = UltraThinWeights::new(&p0).unwrap();
        for n in [3u64, 10, 100, 1000, 100_000] {
            let got = w.weight(n).unwrap();
            let want = oracle_weight(&[2, 3, 7, 101], n);
            assert!((got - want).abs() < 1e-8, "{n}: {got} vs {want}");
        }
        assert_eq!(w.weight(1).unwrap(), 1.0);
        assert_eq!(w.weight(2).unwrap(), 1.0);
    }

    #[test]
    fn weights_asymptotics_and_edge_cases() {
        let p0 = PrimeSet::explicit(vec![2, 3]).unwrap();
        let w = UltraThinWeights::new(&p0).unwrap();
        let mut last = f64::INFINITY;
        for n in [1_000u64, 10_000, 100_000] {
            let l = (n as f64).ln();
            let r = w.weight(n).unwrap() / (l.ln() / (l * l));
            assert!(r > 0.5 && r < 2.0, "{r}");
            let v = w.weight(n).unwrap();
            assert!(v < last);
            last = v;
        }
        let empty = UltraThinWeights::new(&PrimeSet::empty()).unwrap();
        assert_eq!(empty.weight(50).unwrap(), 0.0);
        assert!(matches!(UltraThinWeights::new(&PrimeSet::All), Err(Error::Divergent(_))));
    }

    #[test]
    fn rademacher_golden() {
        let ones = DirichletPolynomial::from_real((1..=8).map(|n| (n, 1.0))).unwrap();
        let signs: Vec<f64> = rademacher_sample(&ones, 0).terms().iter().map(|t| t.1.re).collect();
        assert_eq!(signs, vec![-1.0, -1.0, 1.0, -1.0, 1.0, 1.0, 1.0, 1.0]);
        let f = crate::dirichlet::families::random(20, 1).unwrap();
        let g = rademacher_sample(&f, 9);
        for (a, b) in f.terms().iter().zip(g.terms()) {
            assert_eq!(a.1.norm(), b.1.norm());
        }
        assert!(randomized_l2_squares(&f, 100, 2).iter().all(|&v| (v - f.coeff_l2_sq()).abs() < 1e-12));
    }

    #[test]
    fn x_single_term_closed_form() {
        for n in [2u64, 3, 10] {
            let f = DirichletPolynomial::from_real([(n, 1.0)]).unwrap();
            let l = (n as f64).ln();
            let want = (1.0 - (1.0 + 2.0 * l) * (-2.0 * l).exp()) / 4.0;
            let x = estimate_x(&f, 7, &XConfig::default()).unwrap();
            assert!((x.lower - want).abs() < 1e-6 && (x.upper - want).abs() < 1e-6, "{n}: {x:?} vs {want}");
        }
        let c = DirichletPolynomial::from_real([(1, 5.0)]).unwrap();
        assert_eq!(estimate_x(&c, 1, &XConfig::default()).unwrap().upper, 0.0);
    }

    #[test]
    fn x_is_quadratic() {
        let p0 = PrimeSet::explicit(vec![2, 3]).unwrap();
        let f = from_smooth(&p0, 64, |n| Complex64::new(1.0 / n as f64, 0.0)).unwrap();
        let cfg = XConfig::default();
        let x1 = estimate_x(&f, 3, &cfg).unwrap();
        let x3 = estimate_x(&f.scale(Complex64::new(3.0, 0.0)), 3, &cfg).unwrap();
        assert!((x3.upper - 9.0 * x1.upper).abs() < 1e-9 * x3.upper);
        assert!(x1.lower <= x1.upper);
    }

    #[test]
    fn kahane_single_term_and_prime_sum() {
        let all = PrimeSet::All;
        let single = DirichletPolynomial::from_real([(17, 2.0)]).unwrap();
        let rows = kahane_experiment(&all, &single, &[20], 10, 1, DEFAULT_BUDGET).unwrap();
        assert!((rows[0].mean_sup_upper - 2.0).abs() < 1e-12);
        let f = prime_sum(50).unwrap();
        let rows = kahane_experiment(&all, &f, &[f.length()], 10, 1, DEFAULT_BUDGET).unwrap();
        assert!(rows[0].ratio < 10.0);
        assert!(kahane_experiment(&all, &f, &[10], 10, 1, DEFAULT_BUDGET).is_err());
        assert!(kahane_experiment(&all, &f, &[100], 5, 1, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn durendir_converges_for_two_primes() {
        let p0 = PrimeSet::explicit(vec![2, 3]).unwrap();
        let a = |n: u64| {
            let x = n as f64;
            if n < 2 {
                0.0
            } else {
                1.0 / (x.sqrt() * x.ln().powi(2))
            }
        };
        let s1 = durendir_sum(&p0, a, 1 << 20).unwrap();
        let s2 = durendir_sum(&p0, a, 1 << 40).unwrap();
        let s3 = durendir_sum(&p0, a, 1 << 60).unwrap();
        assert!(s1 < s2 && s2 < s3);
        assert!(s3 - s2 < s2 - s1);
    }
}
