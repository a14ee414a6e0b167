//! Dirichlet polynomials `f(s) = sum a_n n^-s`: evaluation, the Bohr lift,
//! Hardy, Bloch and BMOA norms, and the coefficient criteria.

mod checks;
mod criteria;
pub mod families;
mod norms;

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::bohr::sieve;
use crate::error::{check_budget, Error, Result};
use crate::numeric::{ExactComplexSum, ExactSum};
use crate::torus::TorusPolynomial;

pub use checks::{
    helson_check, littlewood_paley_check, pointwise_bound_check, HelsonReport, LittlewoodPaleyReport,
    pointwise_sigma_grid, PointwiseReport, POINTWISE_C,
};
pub use criteria::{bloch_criterion, fefferman_s, fefferman_s_squared_at, prime_bmoa_criterion, CriterionResult};
pub use families::Family;
pub use norms::{
    bloch_norm, bloch_norm_nonneg_streamed, bmoa_carleson_norm, hinf_norm, hq_norm, BlochEstimate, CarlesonConfig,
    CarlesonEstimate, HinfConfig, HinfEstimate,
};

/// Finitely many nonzero coefficients `a_n`, `n >= 1`, sorted by `n`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DirichletPolynomial {
    coeffs: Vec<(u64, Complex64)>,
}

impl DirichletPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Repeated indices are summed and zero coefficients dropped.
    pub fn new<I: IntoIterator<Item = (u64, Complex64)>>(terms: I) -> Result<Self> {
        let mut map: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (n, c) in terms {
            if n == 0 {
                return Err(Error::invalid("Dirichlet indices start at 1"));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::invalid(format!("coefficient a_{n} is not finite")));
            }
            *map.entry(n).or_default() += c;
        }
        Ok(Self {
            coeffs: map.into_iter().filter(|(_, c)| *c != Complex64::new(0.0, 0.0)).collect(),
        })
    }

    pub fn from_real<I: IntoIterator<Item = (u64, f64)>>(terms: I) -> Result<Self> {
        Self::new(terms.into_iter().map(|(n, a)| (n, Complex64::new(a, 0.0))))
    }

    /// Builds from an already sorted, duplicate-free list (used by generators).
    pub(crate) fn from_sorted(coeffs: Vec<(u64, Complex64)>) -> Self {
        debug_assert!(coeffs.windows(2).all(|w| w[0].0 < w[1].0));
        Self {
            coeffs: coeffs.into_iter().filter(|(_, c)| c.norm_sqr() > 0.0).collect(),
        }
    }

    pub fn monomial(n: u64, c: Complex64) -> Result<Self> {
        Self::new([(n, c)])
    }

    pub fn terms(&self) -> &[(u64, Complex64)] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The length `N`, i.e. the largest stored index (0 for the zero polynomial).
    pub fn length(&self) -> u64 {
        self.coeffs.last().map_or(0, |t| t.0)
    }

    pub fn coeff(&self, n: u64) -> Complex64 {
        self.coeffs
            .binary_search_by_key(&n, |t| t.0)
            .map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i].1)
    }

    /// `f(+inf) = a_1`.
    pub fn constant_term(&self) -> Complex64 {
        self.coeff(1)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|(_, c)| c.im == 0.0 && c.re >= 0.0)
    }

    /// The unit `w` with `a_n / w > 0` for every `n >= 2`, if one exists.
    /// Then `|f(sigma + it) - a_1|` peaks at `t = 0` for every `sigma`.
    pub fn common_phase(&self) -> Option<Complex64> {
        let mut it = self.coeffs.iter().filter(|t| t.0 >= 2);
        let w = it.next().map_or(Complex64::new(1.0, 0.0), |t| t.1 / t.1.norm());
        it.all(|t| {
            let r = t.1 * w.conj();
            r.re > 0.0 && r.im.abs() <= 1e-15 * r.re
        })
        .then_some(w)
    }

    pub fn d_eval(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|&(n, a)| a * (-(n as f64).ln() * s).exp())
            .sum()
    }

    /// `f'(s) = -sum a_n log(n) n^-s`.
    pub fn derivative(&self) -> Self {
        Self::from_sorted(
            self.coeffs
                .iter()
                .filter(|t| t.0 > 1)
                .map(|&(n, a)| (n, -a * (n as f64).ln()))
                .collect(),
        )
    }

    /// `(T_c f)(s) = f(s + c)`.
    pub fn shift(&self, c: f64) -> Self {
        Self::from_sorted(
            self.coeffs
                .iter()
                .map(|&(n, a)| (n, a * (n as f64).powf(-c)))
                .collect(),
        )
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::from_sorted(self.coeffs.iter().map(|&(n, a)| (n, a * k)).collect())
    }

    /// Drops the constant term `a_1`.
    pub fn without_constant(&self) -> Self {
        Self::from_sorted(self.coeffs.iter().copied().filter(|t| t.0 > 1).collect())
    }

    /// The partial sum `S_N f`.
    pub fn truncate(&self, n_max: u64) -> Self {
        Self::from_sorted(self.coeffs.iter().copied().filter(|t| t.0 <= n_max).collect())
    }

    pub fn map_coeffs<F: Fn(u64, Complex64) -> Complex64>(&self, f: F) -> Self {
        Self::from_sorted(self.coeffs.iter().map(|&(n, a)| (n, f(n, a))).collect())
    }

    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.iter().map(|t| t.1.norm()).sum()
    }

    pub fn coeff_l2_sq(&self) -> f64 {
        self.coeffs.iter().map(|t| t.1.norm_sqr()).collect::<ExactSum>().value()
    }

    /// `sum |a_n| log n`, the Lipschitz constant of `t -> f(sigma + it)` for `sigma >= 0`.
    pub fn lipschitz(&self) -> f64 {
        self.coeffs.iter().map(|&(n, a)| a.norm() * (n as f64).ln()).sum()
    }

    /// Dirichlet convolution `(f g)(s) = f(s) g(s)`.
    pub fn mul(&self, other: &Self, budget: u64) -> Result<Self> {
        check_budget(self.len() as u128 * other.len() as u128, budget)?;
        let mut map: BTreeMap<u64, ExactComplexSum> = BTreeMap::new();
        for &(m, a) in &self.coeffs {
            for &(n, b) in &other.coeffs {
                let k = m
                    .checked_mul(n)
                    .ok_or_else(|| Error::OutOfRange(format!("index {m} * {n} overflows u64")))?;
                map.entry(k).or_default().add(a * b);
            }
        }
        Self::new(map.into_iter().map(|(k, s)| (k, s.value())))
    }

    pub fn pow(&self, k: u32, budget: u64) -> Result<Self> {
        let mut out = Self::monomial(1, Complex64::new(1.0, 0.0))?;
        for _ in 0..k {
            out = out.mul(self, budget)?;
        }
        Ok(out)
    }

    /// The Bohr lift `Bf(z) = sum a_n z^kappa(n)` on `T^d`, `d` the index of
    /// the largest prime dividing a stored `n` (at least 1).
    pub fn bohr_lift(&self) -> Result<TorusPolynomial> {
        let sv = sieve();
        let mut terms = Vec::with_capacity(self.len());
        let mut dims = 1;
        for &(n, a) in &self.coeffs {
            let kappa = sv.factorize(n)?;
            dims = dims.max(kappa.max_position() as usize);
            terms.push((kappa, a));
        }
        TorusPolynomial::from_sparse(dims, terms)
    }

    /// The Bohr lift with coordinate `j` attached to `primes[j]` instead of the `j`-th prime.
    pub fn bohr_lift_on(&self, primes: &[u64]) -> Result<TorusPolynomial> {
        let sv = sieve();
        let mut terms = Vec::with_capacity(self.len());
        for &(n, a) in &self.coeffs {
            let mut alpha = vec![0i64; primes.len()];
            for (p, e) in sv.prime_factors(n)? {
                let j = primes
                    .iter()
                    .position(|&q| q == p)
                    .ok_or(Error::UnsupportedPrime { n, prime: p })?;
                alpha[j] = e as i64;
            }
            terms.push((alpha, a));
        }
        TorusPolynomial::from_terms(primes.len().max(1), terms.into_iter().map(|(mut a, c)| {
            a.resize(primes.len().max(1), 0);
            (a, c)
        }))
    }

    /// Distinct primes dividing the stored indices, ascending.
    pub fn primes(&self) -> Result<Vec<u64>> {
        Ok(crate::bohr::prime_support(self.coeffs.iter().map(|t| t.0))?.into_iter().collect())
    }

    /// Number of distinct primes dividing the stored indices.
    pub fn prime_count(&self) -> Result<usize> {
        Ok(crate::bohr::prime_support(self.coeffs.iter().map(|t| t.0))?.len())
    }
}
