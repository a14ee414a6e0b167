//! Norm ratios between `H^inf`, Bloch and BMOA on `D_N`, plus the Bernstein,
//! shift and Bloch-to-sup inequalities as checks.

use rayon::prelude::*;
use serde::Serialize;

use crate::dirichlet::families::{double_exp, log_reciprocal, random};
use crate::dirichlet::{
    bloch_norm, bloch_norm_nonneg_streamed, bmoa_carleson_norm, hinf_norm, CarlesonConfig, DirichletPolynomial,
    HinfConfig, POINTWISE_C,
};
use crate::error::{Error, Result};
use crate::numeric::Sum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareFamily {
    LogReciprocal,
    DoubleExp,
    Random { seed: u64 },
}

impl CompareFamily {
    pub fn from_name(name: &str, seed: u64) -> Result<Self> {
        match name {
            "log-reciprocal" => Ok(Self::LogReciprocal),
            "double-exp" => Ok(Self::DoubleExp),
            "random" => Ok(Self::Random { seed }),
            other => Err(Error::invalid(format!(
                "unknown family {other:?}; expected log-reciprocal, double-exp or random"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::LogReciprocal => "log-reciprocal",
            Self::DoubleExp => "double-exp",
            Self::Random { .. } => "random",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CompareConfig {
    pub hinf: HinfConfig,
    pub carleson: CarlesonConfig,
    /// BMOA is skipped when the polynomial has more terms than this.
    pub bmoa_max_terms: usize,
    pub bloch_points: usize,
    pub bloch_window: f64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self {
            hinf: HinfConfig::default(),
            carleson: CarlesonConfig {
                offsets: 100,
                window: 50.0,
                ..CarlesonConfig::default()
            },
            bmoa_max_terms: 1000,
            bloch_points: 256,
            bloch_window: 20.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioRow {
    pub n: u64,
    pub terms: u64,
    pub sup_lower: f64,
    pub sup_upper: f64,
    pub bloch_lower: f64,
    pub bloch_upper: f64,
    pub bmoa: Option<f64>,
    /// `sup_lower / bloch_upper`, a lower bound for `||f||_inf / ||f||_B`.
    pub sup_over_bloch: f64,
    /// `bmoa / bloch_upper`.
    pub bmoa_over_bloch: Option<f64>,
    /// `sup_lower / bmoa`.
    pub sup_over_bmoa: Option<f64>,
    pub log_log_n: f64,
    pub sqrt_log_log_n: f64,
}

pub const RATIO_CSV_HEADER: &str =
    "n,terms,sup_lower,sup_upper,bloch_lower,bloch_upper,bmoa,sup_over_bloch,bmoa_over_bloch,sup_over_bmoa,log_log_n,sqrt_log_log_n";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RatioRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.terms,
            self.sup_lower,
            self.sup_upper,
            self.bloch_lower,
            self.bloch_upper,
            opt(self.bmoa),
            self.sup_over_bloch,
            opt(self.bmoa_over_bloch),
            opt(self.sup_over_bmoa),
            self.log_log_n,
            self.sqrt_log_log_n
        )
    }
}

/// `sup_sigma sigma sum |a_n| log(n) n^-sigma`, an upper bound for the Bloch norm.
pub fn bloch_upper_bound(f: &DirichletPolynomial) -> Result<f64> {
    let abs = f.map_coeffs(|_, a| num_complex::Complex64::new(a.norm(), 0.0));
    Ok(bloch_norm(&abs, 256, 1.0)?.value)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

fn finish_row(n: u64, terms: u64, s: (f64, f64), b: (f64, f64), bmoa: Option<f64>) -> RatioRow {
    let ll = (n.max(3) as f64).ln().ln();
    RatioRow {
        n,
        terms,
        sup_lower: s.0,
        sup_upper: s.1,
        bloch_lower: b.0,
        bloch_upper: b.1,
        bmoa,
        sup_over_bloch: ratio(s.0, b.1),
        bmoa_over_bloch: bmoa.map(|m| ratio(m, b.1)),
        sup_over_bmoa: bmoa.map(|m| ratio(s.0, m)),
        log_log_n: ll,
        sqrt_log_log_n: ll.max(0.0).sqrt(),
    }
}

fn log_reciprocal_row(n: u64, cfg: &CompareConfig) -> Result<RatioRow> {
    let a = |k: u64| 1.0 / (k as f64 * (k as f64).ln());
    // nonnegative coefficients: ||f||_inf = f(0) = sum a_n
    const BLOCK: u64 = 1 << 16;
    let sup = if n < 2 {
        0.0
    } else {
        let parts: Vec<Sum> = (0..(n - 1).div_ceil(BLOCK))
            .into_par_iter()
            .map(|b| {
                let mut s = Sum::default();
                for k in (2 + b * BLOCK)..(2 + (b + 1) * BLOCK).min(n + 1) {
                    s.add(a(k));
                }
                s
            })
            .collect();
        let mut total = Sum::default();
        for p in &parts {
            total.merge(p);
        }
        total.value()
    };
    let bloch = bloch_norm_nonneg_streamed(n, a)?.value;
    let terms = n.saturating_sub(1);
    let bmoa = if terms as usize <= cfg.bmoa_max_terms {
        Some(bmoa_carleson_norm(&log_reciprocal(n)?, &cfg.carleson)?.value)
    } else {
        None
    };
    Ok(finish_row(n, terms, (sup, sup), (bloch, bloch), bmoa))
}

fn polynomial_row(n: u64, f: &DirichletPolynomial, cfg: &CompareConfig) -> Result<RatioRow> {
    let h = hinf_norm(f, &cfg.hinf)?;
    let b = bloch_norm(f, cfg.bloch_points, cfg.bloch_window)?;
    let b_up = if b.exact { b.value } else { bloch_upper_bound(f)? };
    let bmoa = if f.len() <= cfg.bmoa_max_terms {
        Some(bmoa_carleson_norm(f, &cfg.carleson)?.value)
    } else {
        None
    };
    Ok(finish_row(n, f.len() as u64, (h.best_lower(), h.certified_upper()), (b.value, b_up), bmoa))
}

/// One row per `N`, computed in parallel.
pub fn ratio_table(family: CompareFamily, n_list: &[u64], cfg: &CompareConfig) -> Result<Vec<RatioRow>> {
    n_list
        .par_iter()
        .map(|&n| match family {
            CompareFamily::LogReciprocal => log_reciprocal_row(n, cfg),
            CompareFamily::DoubleExp => polynomial_row(n, &double_exp(n)?, cfg),
            CompareFamily::Random { seed } => polynomial_row(n, &random(n, seed)?, cfg),
        })
        .collect()
}

fn d_n(f: &DirichletPolynomial) -> f64 {
    (f.length().max(2) as f64).ln()
}

#[derive(Clone, Debug, Serialize)]
pub struct BernsteinReport {
    pub log_n: f64,
    /// Lower bound for `||f'||_inf`.
    pub derivative_lower: f64,
    pub sup_upper: f64,
    pub bloch_upper: f64,
    pub first_holds: bool,
    pub second_holds: bool,
}

impl BernsteinReport {
    pub fn holds(&self) -> bool {
        self.first_holds && self.second_holds
    }
}

/// `||f'||_inf <= log N ||f||_inf` and `||f'||_inf <= 4 log N ||f||_B`.
pub fn bernstein_check(f: &DirichletPolynomial, cfg: &HinfConfig) -> Result<BernsteinReport> {
    let log_n = d_n(f);
    let d = f.derivative();
    let derivative_lower = hinf_norm(&d, cfg)?.best_lower();
    let sup_upper = hinf_norm(f, cfg)?.certified_upper();
    let bloch_upper = bloch_upper_bound(f)?;
    Ok(BernsteinReport {
        log_n,
        derivative_lower,
        sup_upper,
        bloch_upper,
        first_holds: derivative_lower <= log_n * sup_upper + 1e-9,
        second_holds: derivative_lower <= 4.0 * log_n * bloch_upper + 1e-9,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    pub c: f64,
    pub sigma: f64,
    pub sup_lower: f64,
    pub shifted_upper: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `||f||_inf <= (1/(1-c)) ||T_{c/log N} f||_inf`.
pub fn shift_check(f: &DirichletPolynomial, c: f64, cfg: &HinfConfig) -> Result<ShiftReport> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::invalid(format!("c must lie in (0, 1), got {c}")));
    }
    let sigma = c / d_n(f);
    let sup_lower = hinf_norm(f, cfg)?.best_lower();
    let shifted_upper = hinf_norm(&f.shift(sigma), cfg)?.certified_upper();
    let rhs = shifted_upper / (1.0 - c);
    Ok(ShiftReport {
        c,
        sigma,
        sup_lower,
        shifted_upper,
        rhs,
        holds: sup_lower <= rhs + 1e-9,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BlochChainReport {
    pub c: f64,
    pub sup_lower: f64,
    pub bloch_upper: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `||f||_inf <= (|a_1| + (log(log N / c) + C 2^-sigma) ||f||_B) / (1 - c)` with
/// `c = 1/log log N` and `sigma = c / log N`; requires `N > e^e`.
pub fn bloch_chain_check(f: &DirichletPolynomial, cfg: &HinfConfig) -> Result<BlochChainReport> {
    let log_n = d_n(f);
    let ll = log_n.ln();
    if ll <= 1.0 {
        return Err(Error::precondition("the chain needs log log N > 1"));
    }
    let c = 1.0 / ll;
    let sigma = c / log_n;
    let sup_lower = hinf_norm(f, cfg)?.best_lower();
    let bloch_upper = bloch_upper_bound(f)?;
    let rhs = (f.constant_term().norm() + ((log_n / c).ln() + POINTWISE_C * 2f64.powf(-sigma)) * bloch_upper) / (1.0 - c);
    Ok(BlochChainReport {
        c,
        sup_lower,
        bloch_upper,
        rhs,
        holds: sup_lower <= rhs + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn quick() -> HinfConfig {
        HinfConfig {
            samples: 4097,
            ..HinfConfig::default()
        }
    }

    #[test]
    fn bernstein_equality_case() {
        for n in [2u64, 50, 997] {
            let f = DirichletPolynomial::from_real([(n, 1.0)]).unwrap();
            let r = bernstein_check(&f, &quick()).unwrap();
            assert!((r.derivative_lower - (n as f64).ln()).abs() < 1e-12);
            assert!((r.sup_upper - 1.0).abs() < 1e-12);
            assert!(r.holds());
        }
        let c = DirichletPolynomial::from_real([(1, 3.0)]).unwrap();
        let r = bernstein_check(&c, &quick()).unwrap();
        assert_eq!(r.derivative_lower, 0.0);
        assert!(r.holds());
    }

    #[test]
    fn shift_examples() {
        let n = 50u64;
        let f = DirichletPolynomial::from_real([(n, 1.0)]).unwrap();
        let r = shift_check(&f, 0.5, &quick()).unwrap();
        assert!((r.rhs - 2.0 * (-0.5f64).exp()).abs() < 1e-12);
        assert!(r.holds);
        let one = DirichletPolynomial::from_real([(1, 2.0)]).unwrap();
        let r = shift_check(&one, 0.3, &quick()).unwrap();
        assert!((r.sup_lower - r.shifted_upper).abs() < 1e-12);
        assert!(shift_check(&f, 1.0, &quick()).is_err());
        assert!(shift_check(&f, 0.0, &quick()).is_err());
    }

    #[test]
    fn random_suites_hold() {
        for seed in 0..5 {
            let f = random(50, seed).unwrap();
            assert!(bernstein_check(&f, &quick()).unwrap().holds());
            for c in [0.25, 0.5, 0.75] {
                assert!(shift_check(&f, c, &quick()).unwrap().holds);
            }
            assert!(bloch_chain_check(&f, &quick()).unwrap().holds);
        }
    }

    #[test]
    fn small_tables_are_well_formed() {
        let cfg = CompareConfig {
            hinf: quick(),
            carleson: CarlesonConfig {
                offsets: 10,
                ..CarlesonConfig::default()
            },
            ..CompareConfig::default()
        };
        for fam in [CompareFamily::LogReciprocal, CompareFamily::DoubleExp, CompareFamily::Random { seed: 1 }] {
            let rows = ratio_table(fam, &[10, 100], &cfg).unwrap();
            assert_eq!(rows.len(), 2);
            for r in &rows {
                assert!(r.sup_over_bloch.is_finite() && r.bmoa.unwrap().is_finite(), "{fam:?} {r:?}");
                assert!(r.sup_lower <= r.sup_upper + 1e-12 && r.bloch_lower <= r.bloch_upper + 1e-12);
            }
        }
    }

    #[test]
    fn log_reciprocal_stream_matches_stored() {
        let cfg = CompareConfig {
            bmoa_max_terms: 0,
            ..CompareConfig::default()
        };
        let row = &ratio_table(CompareFamily::LogReciprocal, &[1000], &cfg).unwrap()[0];
        let f = log_reciprocal(1000).unwrap();
        let direct: f64 = f.terms().iter().map(|&(_, a)| a.re).sum();
        assert!((row.sup_lower - direct).abs() < 1e-12);
        assert!(row.bloch_upper <= 1.0);
        assert!((f.d_eval(Complex64::new(0.0, 0.0)).re - direct).abs() < 1e-9);
    }
}
